#pragma once

#include <string>
#include <utility>
#include <vector>

#include "udag/types.hpp"

namespace udag {

using Edge = std::pair<NodeId, NodeId>;

/// Undirected graph over a fixed id range. `nodes()` is the active subset;
/// marginal and induced graphs keep the parent id range so masks stay
/// comparable across derived graphs.
class Ug {
 public:
  Ug(int n, const std::vector<Edge>& edges, std::vector<std::string> names = {});
  Ug(int n, NodeSet active, const std::vector<Edge>& edges, std::vector<std::string> names = {});

  int size() const { return n_; }
  NodeSet nodes() const { return nodes_; }
  const std::string& name(NodeId v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<std::string>& names() const { return names_; }

  bool has_edge(NodeId a, NodeId b) const { return adj_[static_cast<std::size_t>(a)].contains(b); }
  NodeSet adjacent(NodeId v) const { return adj_[static_cast<std::size_t>(v)]; }
  NodeSet adjacent(NodeSet x) const;
  bool complete(NodeSet x) const;

  std::vector<Edge> edges() const;  // a < b, sorted
  int edge_count() const;

  /// True when both graphs cover the same active nodes with identical edges.
  bool operator==(const Ug& o) const { return nodes_ == o.nodes_ && adj_ == o.adj_; }
  /// Edge set strictly contained in o's (same active nodes).
  bool proper_subgraph_of(const Ug& o) const;

 private:
  int n_ = 0;
  NodeSet nodes_;
  std::vector<NodeSet> adj_;
  std::vector<std::string> names_;
};

/// Mixed graph with directed and undirected edges, no directed cycles, and at
/// most one edge of each kind per pair. Immutable after construction.
class Udag {
 public:
  Udag(int n, const std::vector<Edge>& directed, const std::vector<Edge>& undirected,
       std::vector<std::string> names = {});

  int size() const { return n_; }
  NodeSet nodes() const { return nodes_; }
  const std::string& name(NodeId v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<std::string>& names() const { return names_; }

  bool has_arrow(NodeId a, NodeId b) const { return children_[static_cast<std::size_t>(a)].contains(b); }
  bool has_line(NodeId a, NodeId b) const { return neighbors_[static_cast<std::size_t>(a)].contains(b); }
  bool adjacent(NodeId a, NodeId b) const { return has_arrow(a, b) || has_arrow(b, a) || has_line(a, b); }

  NodeSet parents_of(NodeId v) const { return parents_[static_cast<std::size_t>(v)]; }
  NodeSet children_of(NodeId v) const { return children_[static_cast<std::size_t>(v)]; }
  NodeSet neighbors_of(NodeId v) const { return neighbors_[static_cast<std::size_t>(v)]; }

  NodeSet parents(NodeSet x) const;
  NodeSet children(NodeSet x) const;
  NodeSet neighbors(NodeSet x) const;

  /// Reflexive closure over routes of arrows and lines leading into x.
  NodeSet ancestors(NodeSet x) const;
  /// Reflexive closure over routes of arrows and lines leading out of x.
  NodeSet descendants(NodeSet x) const;
  bool is_ancestral(NodeSet x) const { return ancestors(x) == x; }

  /// All ancestral subsets of the active nodes, sorted by (size, member order).
  std::vector<NodeSet> ancestral_sets() const;

  /// Subgraph keeping exactly the edges with both endpoints in w. Same id
  /// range; active nodes become w.
  Udag induced(NodeSet w) const;

  std::vector<Edge> arrows() const;  // sorted ordered pairs
  std::vector<Edge> lines() const;   // a < b, sorted
  int arrow_count() const;
  int line_count() const;
  bool is_dag() const { return line_count() == 0; }
  bool is_ug() const { return arrow_count() == 0; }

  bool operator==(const Udag& o) const {
    return nodes_ == o.nodes_ && children_ == o.children_ && neighbors_ == o.neighbors_;
  }

  struct unchecked_t {};
  /// Trusted fast path for enumerators that validate acyclicity themselves.
  Udag(unchecked_t, int n, NodeSet active, std::vector<NodeSet> parents,
       std::vector<NodeSet> children, std::vector<NodeSet> neighbors,
       std::vector<std::string> names);

 private:
  int n_ = 0;
  NodeSet nodes_;
  std::vector<NodeSet> parents_, children_, neighbors_;
  std::vector<std::string> names_;
};

/// "A", "B", ..., "Z", "V26", ... for graphs built without explicit labels.
std::vector<std::string> default_names(int n);

/// Moral graph: connects pairs adjacent by any edge, plus all parents of each
/// connected component of the undirected skeleton among each other.
Ug moral_graph(const Udag& g);

/// Marginal subgraph over w: keeps edges inside w and connects nodes joined by
/// a path whose interior avoids w.
Ug marginal_ug(const Ug& h, NodeSet w);

/// Maximal complete sets of the active nodes, in (size, member order).
std::vector<NodeSet> cliques(const Ug& h);

struct Decomposition {
  std::vector<NodeSet> minimal_ancestral_sets;  // W_i, sorted so subsets come first
  std::vector<NodeSet> components;              // C_i = W_i minus earlier W_j
  std::vector<NodeSet> boundaries;              // bd(C_i) = pa(C_i) \ C_i
  std::vector<Ug> star_graphs;                  // moral of C_i + bd with bd completed

  int count() const { return static_cast<int>(components.size()); }
};

/// Splits the graph into component sets along its minimal ancestral sets (the
/// distinct single-node ancestor closures).
Decomposition decompose(const Udag& g);

}  // namespace udag
