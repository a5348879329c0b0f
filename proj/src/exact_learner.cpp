#include "udag/exact_learner.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "udag/separation.hpp"

namespace udag {

IndependenceOracle::IndependenceOracle(int n) : n_(n) {
  if (n < 0 || n > 28) throw Error(Errc::too_large, "oracle node count limited to 28");
}

std::uint64_t IndependenceOracle::key(NodeId a, NodeId b, NodeSet z) const {
  if (a > b) std::swap(a, b);
  std::uint64_t pair = static_cast<std::uint64_t>(a) * 32 + static_cast<std::uint64_t>(b);
  return (pair << 28) | z.bits();
}

bool IndependenceOracle::contains(NodeId a, NodeId b, NodeSet z) const {
  return triplets_.count(key(a, b, z)) > 0;
}

void IndependenceOracle::insert(NodeId a, NodeId b, NodeSet z) {
  if (a == b || z.contains(a) || z.contains(b))
    throw Error(Errc::invalid_query, "oracle triplet must have distinct endpoints outside z");
  if (a < 0 || a >= n_ || b < 0 || b >= n_ || !z.subset_of(NodeSet::full(n_)))
    throw Error(Errc::invalid_query, "oracle triplet mentions nodes out of range");
  triplets_.insert(key(a, b, z));
}

void IndependenceOracle::for_each(const std::function<void(NodeId, NodeId, NodeSet)>& f) const {
  std::vector<std::uint64_t> keys(triplets_.begin(), triplets_.end());
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t k : keys) {
    auto pair = k >> 28;
    f(static_cast<NodeId>(pair / 32), static_cast<NodeId>(pair % 32),
      NodeSet(k & ((std::uint64_t{1} << 28) - 1)));
  }
}

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

struct PairList {
  std::vector<Edge> pairs;  // (a, b) with a < b
  explicit PairList(int n) {
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
};

bool acyclic(int n, const std::vector<NodeSet>& parents) {
  NodeSet alive = NodeSet::full(n);
  bool changed = true;
  while (changed && !alive.empty()) {
    changed = false;
    for (NodeId v : alive) {
      if ((parents[static_cast<std::size_t>(v)] & alive).empty()) {
        alive.erase(v);
        changed = true;
      }
    }
  }
  return alive.empty();
}

void check_guard(int n, GraphClass cls, bool unguarded) {
  if (n > 7) throw Error(Errc::too_large, "graph enumeration supports at most 7 nodes");
  int guard = cls == GraphClass::dag ? 6 : 5;
  if (!unguarded && n > guard)
    throw Error(Errc::too_large, "enumeration guarded to " + std::to_string(guard) +
                                     " nodes for this class; pass the override to lift it");
}

/// Walks every orientation of the node pairs (none, a->b, b->a), keeping only
/// acyclic ones, and hands the directed structure to sink.
void for_each_orientation(int n, const PairList& pl,
                          const std::function<void(const std::vector<NodeSet>&, const std::vector<NodeSet>&)>& sink) {
  std::vector<int> state(pl.pairs.size(), 0);
  std::vector<NodeSet> parents(static_cast<std::size_t>(n)), children(static_cast<std::size_t>(n));
  for (;;) {
    if (acyclic(n, parents)) sink(parents, children);
    std::size_t k = 0;
    for (; k < state.size(); ++k) {
      auto [a, b] = pl.pairs[k];
      // Retire the current state of this pair.
      if (state[k] == 1) {
        children[static_cast<std::size_t>(a)].erase(b);
        parents[static_cast<std::size_t>(b)].erase(a);
      } else if (state[k] == 2) {
        children[static_cast<std::size_t>(b)].erase(a);
        parents[static_cast<std::size_t>(a)].erase(b);
      }
      if (++state[k] <= 2) {
        if (state[k] == 1) {
          children[static_cast<std::size_t>(a)].insert(b);
          parents[static_cast<std::size_t>(b)].insert(a);
        } else {
          children[static_cast<std::size_t>(b)].insert(a);
          parents[static_cast<std::size_t>(a)].insert(b);
        }
        break;
      }
      state[k] = 0;
    }
    if (k == state.size()) return;
  }
}

}  // namespace

bool is_lwf_cg(const Udag& g) {
  for (auto [a, b] : g.arrows()) {
    if (g.has_line(a, b)) return false;
    if (g.descendants(NodeSet::of({b})).contains(a)) return false;  // semi-directed cycle
  }
  return true;
}

void enumerate_graphs(int n, GraphClass cls, const std::function<bool(const Udag&)>& visit,
                      bool unguarded) {
  check_guard(n, cls, unguarded);
  PairList pl(n);
  auto names = default_names(n);
  bool halted = false;

  if (cls == GraphClass::dag || cls == GraphClass::udag) {
    std::uint64_t line_total = cls == GraphClass::udag ? (std::uint64_t{1} << pair_count(n)) : 1;
    for_each_orientation(n, pl, [&](const std::vector<NodeSet>& parents, const std::vector<NodeSet>& children) {
      if (halted) return;
      for (std::uint64_t lines = 0; lines < line_total && !halted; ++lines) {
        std::vector<NodeSet> neighbors(static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < pl.pairs.size(); ++k) {
          if ((lines >> k) & 1u) {
            auto [a, b] = pl.pairs[k];
            neighbors[static_cast<std::size_t>(a)].insert(b);
            neighbors[static_cast<std::size_t>(b)].insert(a);
          }
        }
        Udag g(Udag::unchecked_t{}, n, NodeSet::full(n), parents, children, std::move(neighbors), names);
        if (!visit(g)) halted = true;
      }
    });
    return;
  }

  // Chain graphs: one of {none, ->, <-, --} per pair, no semi-directed cycles.
  std::vector<int> state(pl.pairs.size(), 0);
  for (;;) {
    std::vector<NodeSet> parents(static_cast<std::size_t>(n)), children(static_cast<std::size_t>(n)),
        neighbors(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < state.size(); ++k) {
      auto [a, b] = pl.pairs[k];
      switch (state[k]) {
        case 1:
          children[static_cast<std::size_t>(a)].insert(b);
          parents[static_cast<std::size_t>(b)].insert(a);
          break;
        case 2:
          children[static_cast<std::size_t>(b)].insert(a);
          parents[static_cast<std::size_t>(a)].insert(b);
          break;
        case 3:
          neighbors[static_cast<std::size_t>(a)].insert(b);
          neighbors[static_cast<std::size_t>(b)].insert(a);
          break;
        default:
          break;
      }
    }
    if (acyclic(n, parents)) {
      Udag g(Udag::unchecked_t{}, n, NodeSet::full(n), std::move(parents), std::move(children),
             std::move(neighbors), names);
      if (is_lwf_cg(g) && !visit(g)) return;
    }
    std::size_t k = 0;
    for (; k < state.size(); ++k) {
      if (++state[k] <= 3) break;
      state[k] = 0;
    }
    if (k == state.size()) return;
  }
}

std::uint64_t count_graphs(int n, GraphClass cls, bool unguarded) {
  std::uint64_t total = 0;
  enumerate_graphs(n, cls, [&](const Udag&) { ++total; return true; }, unguarded);
  return total;
}

Udag sample_graph(int n, GraphClass cls, SplitMix64& rng) {
  if (n > kMaxNodes) throw Error(Errc::too_large, "too many nodes");
  PairList pl(n);
  auto names = default_names(n);
  for (;;) {
    std::vector<NodeSet> parents(static_cast<std::size_t>(n)), children(static_cast<std::size_t>(n)),
        neighbors(static_cast<std::size_t>(n));
    for (auto [a, b] : pl.pairs) {
      int arrow = 0, line = 0;
      switch (cls) {
        case GraphClass::udag: {
          std::uint64_t s = rng.below(6);
          arrow = static_cast<int>(s % 3);
          line = static_cast<int>(s / 3);
          break;
        }
        case GraphClass::dag:
          arrow = static_cast<int>(rng.below(3));
          break;
        case GraphClass::lwf_cg: {
          std::uint64_t s = rng.below(4);
          if (s == 3) line = 1;
          else arrow = static_cast<int>(s);
          break;
        }
      }
      if (arrow == 1) {
        children[static_cast<std::size_t>(a)].insert(b);
        parents[static_cast<std::size_t>(b)].insert(a);
      } else if (arrow == 2) {
        children[static_cast<std::size_t>(b)].insert(a);
        parents[static_cast<std::size_t>(a)].insert(b);
      }
      if (line) {
        neighbors[static_cast<std::size_t>(a)].insert(b);
        neighbors[static_cast<std::size_t>(b)].insert(a);
      }
    }
    if (!acyclic(n, parents)) continue;
    Udag g(Udag::unchecked_t{}, n, NodeSet::full(n), std::move(parents), std::move(children),
           std::move(neighbors), names);
    if (cls == GraphClass::lwf_cg && !is_lwf_cg(g)) continue;
    return g;
  }
}

IndependenceOracle oracle_from_graph(const Udag& g) {
  IndependenceOracle oracle(g.size());
  for_each_elementary_triplet(g.nodes(), [&](NodeId a, NodeId b, NodeSet z) {
    if (separated_moral(g, {NodeSet::of({a}), NodeSet::of({b}), z})) oracle.insert(a, b, z);
    return true;
  });
  return oracle;
}

IndependenceOracle oracle_from_distribution(const DiscreteDistribution& p, double tol) {
  IndependenceOracle oracle(p.var_count());
  for_each_elementary_triplet(NodeSet::full(p.var_count()), [&](NodeId a, NodeId b, NodeSet z) {
    if (ci_test_exact(p, NodeSet::of({a}), NodeSet::of({b}), z, tol)) oracle.insert(a, b, z);
    return true;
  });
  return oracle;
}

bool consistent(const Udag& g, const IndependenceOracle& oracle) {
  if (g.size() != oracle.node_count())
    throw Error(Errc::size_mismatch, "graph and oracle disagree on the node count");
  bool ok = true;
  for_each_elementary_triplet(g.nodes(), [&](NodeId a, NodeId b, NodeSet z) {
    if (oracle.contains(a, b, z)) return true;  // declared independent, nothing to demand
    if (separated_moral(g, {NodeSet::of({a}), NodeSet::of({b}), z})) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

namespace {

/// (lines, arrows) tuples order candidate graphs deterministically.
bool edge_lex_less(const Udag& a, const Udag& b) {
  auto la = a.lines(), lb = b.lines();
  if (la != lb) return la < lb;
  return a.arrows() < b.arrows();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("UDAG_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0 && cap < hw) hw = cap;
  }
  return std::min(hw, 16);
}

struct SearchSlice {
  std::vector<Udag> best;
  double objective = 0.0;
  std::uint64_t searched = 0;
};

}  // namespace

LearnResult learn(const IndependenceOracle& oracle, const LearnerConfig& config) {
  if (config.line_weight < 0 || config.arrow_weight < 0)
    throw Error(Errc::invalid_query, "penalty weights must be non-negative");
  int n = oracle.node_count();
  int threads = resolve_threads(config.threads);

  auto scan = [&](int worker, SearchSlice& slice) {
    std::uint64_t index = 0;
    enumerate_graphs(n, config.graph_class, [&](const Udag& g) {
      bool mine = static_cast<int>(index % static_cast<std::uint64_t>(threads)) == worker;
      ++index;
      if (!mine) return true;
      ++slice.searched;
      double objective = config.line_weight * g.line_count() + config.arrow_weight * g.arrow_count();
      if (!slice.best.empty() && objective > slice.objective) return true;
      if (!consistent(g, oracle)) return true;
      if (slice.best.empty() || objective < slice.objective) {
        slice.best.assign(1, g);
        slice.objective = objective;
      } else {
        slice.best.push_back(g);
      }
      return true;
    }, config.unguarded);
  };

  std::vector<SearchSlice> slices(static_cast<std::size_t>(threads));
  if (threads == 1) {
    scan(0, slices[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] { scan(w, slices[static_cast<std::size_t>(w)]); });
    for (auto& t : pool) t.join();
  }

  LearnResult result;
  for (const SearchSlice& slice : slices) {
    result.graphs_searched += slice.searched;
    if (slice.best.empty()) continue;
    if (result.best.empty() || slice.objective < result.objective) {
      result.best = slice.best;
      result.objective = slice.objective;
    } else if (slice.objective == result.objective) {
      result.best.insert(result.best.end(), slice.best.begin(), slice.best.end());
    }
  }
  if (result.best.empty())
    throw Error(Errc::no_consistent_graph, "no graph of the class is consistent with the oracle");

  std::sort(result.best.begin(), result.best.end(), edge_lex_less);
  if (!config.return_all_optima)
    result.best.erase(result.best.begin() + 1, result.best.end());
  return result;
}

IndependenceOracle parse_oracle(std::istream& in, std::vector<std::string>& names,
                                int node_count_hint) {
  struct Triplet {
    std::string a, b;
    std::vector<std::string> z;
  };
  std::vector<Triplet> raw;
  std::vector<std::string> order = names;

  auto intern = [&](const std::string& name) {
    if (std::find(order.begin(), order.end(), name) == order.end()) {
      if (!names.empty())
        throw Error(Errc::bad_format, "oracle mentions unknown node '" + name + "'");
      order.push_back(name);
    }
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, sep, b;
    if (!(ls >> a)) continue;  // blank
    if (!(ls >> sep >> b) || sep != "_||_")
      throw Error(Errc::bad_format, "oracle line " + std::to_string(lineno) +
                                        ": expected 'A _||_ B | c,d'");
    Triplet t{a, b, {}};
    std::string bar;
    if (ls >> bar) {
      if (bar != "|")
        throw Error(Errc::bad_format, "oracle line " + std::to_string(lineno) + ": expected '|'");
      std::string rest;
      std::getline(ls, rest);
      std::string token;
      for (char c : rest) {
        if (c == ',' || c == ' ' || c == '\t') {
          if (!token.empty()) t.z.push_back(token);
          token.clear();
        } else {
          token += c;
        }
      }
      if (!token.empty()) t.z.push_back(token);
    }
    intern(t.a);
    intern(t.b);
    for (const auto& zn : t.z) intern(zn);
    raw.push_back(std::move(t));
  }

  while (static_cast<int>(order.size()) < node_count_hint)
    order.push_back("V" + std::to_string(order.size()));
  names = order;

  auto id_of = [&](const std::string& name) {
    return static_cast<NodeId>(std::find(order.begin(), order.end(), name) - order.begin());
  };
  IndependenceOracle oracle(static_cast<int>(order.size()));
  for (const Triplet& t : raw) {
    NodeSet z;
    for (const auto& zn : t.z) z.insert(id_of(zn));
    oracle.insert(id_of(t.a), id_of(t.b), z);
  }
  return oracle;
}

void format_oracle(std::ostream& out, const IndependenceOracle& oracle,
                   const std::vector<std::string>& names) {
  oracle.for_each([&](NodeId a, NodeId b, NodeSet z) {
    out << names[static_cast<std::size_t>(a)] << " _||_ " << names[static_cast<std::size_t>(b)] << " |";
    bool first = true;
    for (NodeId v : z) {
      out << (first ? " " : ",") << names[static_cast<std::size_t>(v)];
      first = false;
    }
    out << "\n";
  });
}

}  // namespace udag
