#include "udag/separation.hpp"

#include <algorithm>

namespace udag {

namespace {

void check_query(const Udag& g, const SeparationQuery& q) {
  if (q.x.empty() || q.y.empty())
    throw Error(Errc::invalid_query, "separation query needs nonempty sides");
  if (q.x.intersects(q.y) || q.x.intersects(q.z) || q.y.intersects(q.z))
    throw Error(Errc::invalid_query, "separation query sets must be disjoint");
  if (!(q.x | q.y | q.z).subset_of(g.nodes()))
    throw Error(Errc::invalid_query, "separation query mentions nodes outside the graph");
}

}  // namespace

bool separated_moral(const Udag& g, const SeparationQuery& q) {
  check_query(g, q);
  NodeSet scope = g.ancestors(q.x | q.y | q.z);
  Ug moral = moral_graph(g.induced(scope));

  NodeSet reached = q.x;
  for (;;) {
    NodeSet grown = reached | (moral.adjacent(reached) - q.z);
    if (grown == reached) break;
    reached = grown;
  }
  return !reached.intersects(q.y);
}

std::pair<bool, ReachState> separated_reach(const Udag& g, const SeparationQuery& q) {
  check_query(g, q);
  ReachState s;
  s.u2 = q.x;
  NodeSet z = q.z;
  bool changed = true;
  while (changed) {
    changed = false;
    NodeSet u1 = s.u1, u2 = s.u2, u3 = s.u3;
    // 1: C in U2, D -> C or D -- C, D notin Z  =>  D in U2
    u2 |= (g.parents(s.u2) | g.neighbors(s.u2)) - z;
    // 2: C in U1|U2, C -> D, D notin Z  =>  D in U1
    u1 |= g.children(s.u1 | s.u2) - z;
    // 3: C in U1, C -- D, D notin Z  =>  D in U1
    u1 |= g.neighbors(s.u1) - z;
    // 4: C in U1|U2, C -> D, D in Z  =>  D in U3
    u3 |= g.children(s.u1 | s.u2) & z;
    // 5: C in U1, C -- D, D in Z  =>  D in U3
    u3 |= g.neighbors(s.u1) & z;
    // 6: C in U3, C -- D  =>  D in U3
    u3 |= g.neighbors(s.u3);
    // 7: C in U3, D -> C, D notin Z  =>  D in U2
    u2 |= g.parents(s.u3) - z;
    if (u1 != s.u1 || u2 != s.u2 || u3 != s.u3) {
      s.u1 = u1;
      s.u2 = u2;
      s.u3 = u3;
      changed = true;
    }
  }
  return {!s.reached().intersects(q.y), s};
}

std::vector<Edge> non_separable_pairs(const Udag& g) {
  // Undirected components of the skeleton.
  std::vector<NodeSet> comps;
  NodeSet remaining = g.nodes();
  while (!remaining.empty()) {
    NodeSet comp = NodeSet::of({remaining.first()});
    for (;;) {
      NodeSet grown = comp | (g.neighbors(comp) & g.nodes());
      if (grown == comp) break;
      comp = grown;
    }
    comps.push_back(comp);
    remaining -= comp;
  }

  std::vector<Edge> out;
  auto nodes = g.nodes().members();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      NodeId u = nodes[i], v = nodes[j];
      if (g.adjacent(u, v)) continue;
      NodeSet an = g.ancestors(NodeSet::of({u, v}));
      for (const NodeSet& comp : comps) {
        if (!comp.intersects(an)) continue;
        if (g.children_of(u).intersects(comp) && g.children_of(v).intersects(comp)) {
          out.emplace_back(u, v);
          break;
        }
      }
    }
  }
  return out;
}

Udag undirect_ancestral_set(const Udag& g, NodeSet w) {
  if (w.count() < 2)
    throw Error(Errc::precondition_violated, "the set must contain at least two nodes");
  if (!g.is_ancestral(w))
    throw Error(Errc::precondition_violated, "the set is not ancestral");
  // Minimality: no ancestral proper subset of size > 1 may exist. Every
  // ancestral subset is a union of single-node closures, so it is enough to
  // look at those.
  int singletons = 0;
  for (NodeId v : w) {
    NodeSet cv = g.ancestors(NodeSet::of({v}));
    if (cv != w && cv.count() > 1)
      throw Error(Errc::precondition_violated, "the set is not a minimal ancestral set");
    if (cv.count() == 1) ++singletons;
  }
  if (singletons >= 2 && w.count() > 2)
    throw Error(Errc::precondition_violated, "the set is not a minimal ancestral set");

  Ug inner = moral_graph(g.induced(w));
  std::vector<Edge> directed, undirected;
  for (auto [a, b] : g.arrows())
    if (!(w.contains(a) && w.contains(b))) directed.emplace_back(a, b);
  for (auto [a, b] : g.lines())
    if (!(w.contains(a) && w.contains(b))) undirected.emplace_back(a, b);
  for (auto [a, b] : inner.edges()) undirected.emplace_back(a, b);
  // The validating constructor doubles as the no-new-cycle check.
  Udag h(g.size(), directed, undirected, g.names());
  return g.nodes() == NodeSet::full(g.size()) ? h : h.induced(g.nodes());
}

void for_each_elementary_triplet(NodeSet nodes, const std::function<bool(NodeId, NodeId, NodeSet)>& f) {
  auto ids = nodes.members();
  std::vector<std::vector<NodeSet>> by_size;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      NodeSet rest = nodes - NodeSet::of({ids[i], ids[j]});
      auto rs = rest.members();
      by_size.assign(rs.size() + 1, {});
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << rs.size()); ++m) {
        NodeSet z;
        for (std::size_t k = 0; k < rs.size(); ++k)
          if ((m >> k) & 1u) z.insert(rs[k]);
        by_size[static_cast<std::size_t>(z.count())].push_back(z);
      }
      for (const auto& bucket : by_size)
        for (NodeSet z : bucket)
          if (!f(ids[i], ids[j], z)) return;
    }
  }
}

bool markov_equivalent(const Udag& g1, const Udag& g2) {
  if (g1.size() != g2.size() || g1.nodes() != g2.nodes())
    throw Error(Errc::node_mismatch, "graphs must share one node set");
  bool equal = true;
  for_each_elementary_triplet(g1.nodes(), [&](NodeId a, NodeId b, NodeSet z) {
    SeparationQuery q{NodeSet::of({a}), NodeSet::of({b}), z};
    if (separated_moral(g1, q) != separated_moral(g2, q)) {
      equal = false;
      return false;
    }
    return true;
  });
  return equal;
}

}  // namespace udag
