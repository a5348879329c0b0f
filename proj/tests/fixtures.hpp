#pragma once

#include <vector>

#include "udag/graph.hpp"
#include "udag/rng.hpp"
#include "udag/separation.hpp"

namespace fixtures {

using udag::Edge;
using udag::NodeId;
using udag::NodeSet;
using udag::Udag;

// Seven-node running example: two arrow chains meeting an undirected fork,
// with F feeding back into C. C and D are non-adjacent yet inseparable.
// Nodes: A=0 B=1 C=2 D=3 E=4 F=5 H=6.
inline Udag inseparable_pair_graph() {
  return Udag(7,
              {{0, 2}, {1, 3}, {2, 4}, {3, 6}, {5, 2}},
              {{4, 5}, {6, 5}},
              {"A", "B", "C", "D", "E", "F", "H"});
}

// Twelve-node example whose separation model no chain graph can express.
// Nodes: A=0 B=1 C=2 D=3 E=4 F=5 I=6 J=7 K=8 L=9 M=10 N=11.
inline Udag no_chain_graph_peer() {
  return Udag(12,
              {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {4, 6}, {7, 5}, {8, 6}, {9, 6}, {10, 7}, {11, 7}},
              {{4, 5}, {6, 7}},
              {"A", "B", "C", "D", "E", "F", "I", "J", "K", "L", "M", "N"});
}

// The chain-graph variant of the twelve-node example built when arguing no
// equivalent chain graph exists: E->I and J->F become lines.
inline Udag no_chain_graph_peer_relaxed() {
  return Udag(12,
              {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {8, 6}, {9, 6}, {10, 7}, {11, 7}},
              {{4, 5}, {6, 7}, {4, 6}, {7, 5}},
              {"A", "B", "C", "D", "E", "F", "I", "J", "K", "L", "M", "N"});
}

// Ten-node example with several ancestral sets around node B, used for the
// local-property reduction. Nodes: A=0 B=1 C=2 D=3 E=4 F=5 H=6 I=7 J=8 K=9.
inline Udag local_reduction_graph() {
  return Udag(10,
              {{1, 0}, {1, 2}, {1, 6}, {3, 4}, {3, 9}, {2, 7}},
              {{7, 8}, {8, 9}, {5, 6}},
              {"A", "B", "C", "D", "E", "F", "H", "I", "J", "K"});
}

// Eight-node example with two parallel undirected bridges, used for the
// factorization reduction. Nodes: A=0 B=1 C=2 D=3 E=4 F=5 H=6 I=7.
inline Udag fact_reduction_graph() {
  return Udag(8,
              {{0, 2}, {1, 4}, {0, 5}, {1, 7}},
              {{2, 3}, {4, 3}, {5, 6}, {7, 6}},
              {"A", "B", "C", "D", "E", "F", "H", "I"});
}

/// Random mixed graph: arrows respect a random node order (hence acyclic),
/// lines flip independently. Covers every valid graph, not uniformly.
inline Udag random_udag(int n, udag::SplitMix64& rng, double arrow_p = 0.3, double line_p = 0.3) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = order.size(); i-- > 1;)
    std::swap(order[i], order[rng.below(i + 1)]);

  std::vector<Edge> arrows, lines;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < arrow_p) arrows.emplace_back(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
      if (rng.uniform() < line_p) lines.emplace_back(i, j);
    }
  return Udag(n, arrows, lines);
}

/// Moralization straight from the defining route pattern: an edge when the
/// pair is adjacent or when both send arrows into line-connected targets.
inline udag::Ug moral_oracle(const Udag& g) {
  auto line_reachable = [&](NodeId from, NodeId to) {
    NodeSet seen = NodeSet::of({from});
    for (;;) {
      NodeSet grown = seen | (g.neighbors(seen) & g.nodes());
      if (grown == seen) break;
      seen = grown;
    }
    return seen.contains(to);
  };
  std::vector<Edge> edges;
  auto ids = g.nodes().members();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      NodeId a = ids[i], b = ids[j];
      bool married = g.adjacent(a, b);
      for (NodeId c : g.children_of(a)) {
        if (married) break;
        for (NodeId d : g.children_of(b))
          if (line_reachable(c, d)) { married = true; break; }
      }
      if (married) edges.emplace_back(a, b);
    }
  return udag::Ug(g.size(), g.nodes(), edges, g.names());
}

/// Maximal complete sets by scanning every subset; n <= 20.
inline std::vector<NodeSet> clique_oracle(const udag::Ug& h) {
  auto ids = h.nodes().members();
  std::vector<NodeSet> complete;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << ids.size()); ++m) {
    NodeSet s;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if ((m >> i) & 1u) s.insert(ids[i]);
    if (h.complete(s)) complete.push_back(s);
  }
  std::vector<NodeSet> out;
  for (NodeSet s : complete) {
    bool maximal = true;
    for (NodeSet t : complete)
      if (s.proper_subset_of(t)) { maximal = false; break; }
    if (maximal) out.push_back(s);
  }
  return out;
}

/// True when some conditioning set separates the pair; tries every subset.
inline bool separable_by_some_z(const Udag& g, NodeId a, NodeId b) {
  auto rest = (g.nodes() - NodeSet::of({a, b})).members();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << rest.size()); ++m) {
    NodeSet z;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if ((m >> i) & 1u) z.insert(rest[i]);
    if (udag::separated_moral(g, {NodeSet::of({a}), NodeSet::of({b}), z})) return true;
  }
  return false;
}

}  // namespace fixtures
