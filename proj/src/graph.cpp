#include "udag/graph.hpp"

#include <algorithm>
#include <string>

namespace udag {

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i < 26)
      names.emplace_back(1, static_cast<char>('A' + i));
    else
      names.push_back("V" + std::to_string(i));
  }
  return names;
}

namespace {

void check_node_range(int n, NodeId v) {
  if (v < 0 || v >= n)
    throw Error(Errc::invalid_query, "node id " + std::to_string(v) + " out of range [0," +
                                         std::to_string(n) + ")");
}

std::vector<std::string> resolve_names(int n, std::vector<std::string> names) {
  if (names.empty()) return default_names(n);
  if (static_cast<int>(names.size()) != n)
    throw Error(Errc::size_mismatch, "name list does not match node count");
  return names;
}

}  // namespace

Ug::Ug(int n, const std::vector<Edge>& edges, std::vector<std::string> names)
    : Ug(n, NodeSet::full(n), edges, std::move(names)) {}

Ug::Ug(int n, NodeSet active, const std::vector<Edge>& edges, std::vector<std::string> names)
    : n_(n), nodes_(active), adj_(static_cast<std::size_t>(n)), names_(resolve_names(n, std::move(names))) {
  if (n < 0 || n > kMaxNodes) throw Error(Errc::too_large, "node count must be in [0,64]");
  for (auto [a, b] : edges) {
    check_node_range(n, a);
    check_node_range(n, b);
    if (a == b) throw Error(Errc::self_loop, "self loop at " + names_[static_cast<std::size_t>(a)]);
    if (!nodes_.contains(a) || !nodes_.contains(b))
      throw Error(Errc::invalid_query, "edge endpoint outside the active node set");
    adj_[static_cast<std::size_t>(a)].insert(b);
    adj_[static_cast<std::size_t>(b)].insert(a);
  }
}

NodeSet Ug::adjacent(NodeSet x) const {
  NodeSet out;
  for (NodeId v : x) out |= adj_[static_cast<std::size_t>(v)];
  return out;
}

bool Ug::complete(NodeSet x) const {
  for (NodeId v : x)
    if (!(x - NodeSet::of({v})).subset_of(adj_[static_cast<std::size_t>(v)])) return false;
  return true;
}

std::vector<Edge> Ug::edges() const {
  std::vector<Edge> out;
  for (NodeId a : nodes_)
    for (NodeId b : adj_[static_cast<std::size_t>(a)])
      if (a < b) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

int Ug::edge_count() const {
  int total = 0;
  for (NodeId a : nodes_) total += adj_[static_cast<std::size_t>(a)].count();
  return total / 2;
}

bool Ug::proper_subgraph_of(const Ug& o) const {
  if (nodes_ != o.nodes_) return false;
  bool strict = false;
  for (NodeId v : nodes_) {
    auto i = static_cast<std::size_t>(v);
    if (!adj_[i].subset_of(o.adj_[i])) return false;
    if (adj_[i] != o.adj_[i]) strict = true;
  }
  return strict;
}

Udag::Udag(int n, const std::vector<Edge>& directed, const std::vector<Edge>& undirected,
           std::vector<std::string> names)
    : n_(n),
      nodes_(NodeSet::full(n)),
      parents_(static_cast<std::size_t>(n)),
      children_(static_cast<std::size_t>(n)),
      neighbors_(static_cast<std::size_t>(n)),
      names_(resolve_names(n, std::move(names))) {
  if (n < 0 || n > kMaxNodes) throw Error(Errc::too_large, "node count must be in [0,64]");

  for (auto [a, b] : directed) {
    check_node_range(n, a);
    check_node_range(n, b);
    if (a == b) throw Error(Errc::self_loop, "self loop at " + names_[static_cast<std::size_t>(a)]);
    if (has_arrow(a, b))
      throw Error(Errc::duplicate_edge,
                  "duplicate arrow " + names_[static_cast<std::size_t>(a)] + " -> " + names_[static_cast<std::size_t>(b)]);
    if (has_arrow(b, a))
      throw Error(Errc::directed_cycle, "directed cycle " + names_[static_cast<std::size_t>(a)] + " -> " +
                                            names_[static_cast<std::size_t>(b)] + " -> " + names_[static_cast<std::size_t>(a)]);
    children_[static_cast<std::size_t>(a)].insert(b);
    parents_[static_cast<std::size_t>(b)].insert(a);
  }
  for (auto [a, b] : undirected) {
    check_node_range(n, a);
    check_node_range(n, b);
    if (a == b) throw Error(Errc::self_loop, "self loop at " + names_[static_cast<std::size_t>(a)]);
    if (has_line(a, b))
      throw Error(Errc::duplicate_edge,
                  "duplicate line " + names_[static_cast<std::size_t>(a)] + " -- " + names_[static_cast<std::size_t>(b)]);
    neighbors_[static_cast<std::size_t>(a)].insert(b);
    neighbors_[static_cast<std::size_t>(b)].insert(a);
  }

  // Kahn's algorithm over the arrows; leftovers form a cycle, reported with a
  // concrete witness walk.
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) indeg[static_cast<std::size_t>(v)] = parents_[static_cast<std::size_t>(v)].count();
  std::vector<NodeId> queue;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
  int removed = 0;
  while (!queue.empty()) {
    NodeId v = queue.back();
    queue.pop_back();
    ++removed;
    for (NodeId c : children_[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(c)] == 0) queue.push_back(c);
  }
  if (removed != n) {
    NodeId start = -1;
    for (NodeId v = 0; v < n; ++v)
      if (indeg[static_cast<std::size_t>(v)] > 0) { start = v; break; }
    std::string witness = names_[static_cast<std::size_t>(start)];
    NodeSet seen = NodeSet::of({start});
    NodeId cur = start;
    for (;;) {
      NodeId next = -1;
      for (NodeId c : children_[static_cast<std::size_t>(cur)])
        if (indeg[static_cast<std::size_t>(c)] > 0) { next = c; break; }
      witness += " -> " + names_[static_cast<std::size_t>(next)];
      if (seen.contains(next)) break;
      seen.insert(next);
      cur = next;
    }
    throw Error(Errc::directed_cycle, "directed cycle: " + witness);
  }
}

Udag::Udag(unchecked_t, int n, NodeSet active, std::vector<NodeSet> parents,
           std::vector<NodeSet> children, std::vector<NodeSet> neighbors,
           std::vector<std::string> names)
    : n_(n),
      nodes_(active),
      parents_(std::move(parents)),
      children_(std::move(children)),
      neighbors_(std::move(neighbors)),
      names_(resolve_names(n, std::move(names))) {}

NodeSet Udag::parents(NodeSet x) const {
  NodeSet out;
  for (NodeId v : x) out |= parents_[static_cast<std::size_t>(v)];
  return out;
}

NodeSet Udag::children(NodeSet x) const {
  NodeSet out;
  for (NodeId v : x) out |= children_[static_cast<std::size_t>(v)];
  return out;
}

NodeSet Udag::neighbors(NodeSet x) const {
  NodeSet out;
  for (NodeId v : x) out |= neighbors_[static_cast<std::size_t>(v)];
  return out;
}

NodeSet Udag::ancestors(NodeSet x) const {
  NodeSet closure = x & nodes_;
  for (;;) {
    NodeSet grown = closure | parents(closure) | neighbors(closure);
    if (grown == closure) return closure;
    closure = grown;
  }
}

NodeSet Udag::descendants(NodeSet x) const {
  NodeSet closure = x & nodes_;
  for (;;) {
    NodeSet grown = closure | children(closure) | neighbors(closure);
    if (grown == closure) return closure;
    closure = grown;
  }
}

std::vector<NodeSet> Udag::ancestral_sets() const {
  // An ancestral set is exactly a union of single-node closures, so a subset
  // qualifies iff the closures of its members stay inside it.
  std::vector<NodeSet> unit(static_cast<std::size_t>(n_));
  for (NodeId v : nodes_) unit[static_cast<std::size_t>(v)] = ancestors(NodeSet::of({v}));

  std::vector<NodeId> active = nodes_.members();
  std::vector<NodeSet> out;
  if (active.size() > 12)
    throw Error(Errc::too_large, "ancestral-set enumeration limited to 12 active nodes");
  std::uint64_t total = std::uint64_t{1} << active.size();
  for (std::uint64_t m = 0; m < total; ++m) {
    NodeSet s;
    for (std::size_t i = 0; i < active.size(); ++i)
      if ((m >> i) & 1u) s.insert(active[i]);
    bool closed = true;
    for (NodeId v : s)
      if (!unit[static_cast<std::size_t>(v)].subset_of(s)) { closed = false; break; }
    if (closed) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](NodeSet a, NodeSet b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return NodeSet::lex_less(a, b);
  });
  return out;
}

Udag Udag::induced(NodeSet w) const {
  w &= nodes_;
  std::vector<NodeSet> pa(static_cast<std::size_t>(n_)), ch(static_cast<std::size_t>(n_)), ne(static_cast<std::size_t>(n_));
  for (NodeId v : w) {
    auto i = static_cast<std::size_t>(v);
    pa[i] = parents_[i] & w;
    ch[i] = children_[i] & w;
    ne[i] = neighbors_[i] & w;
  }
  return Udag(unchecked_t{}, n_, w, std::move(pa), std::move(ch), std::move(ne), names_);
}

std::vector<Edge> Udag::arrows() const {
  std::vector<Edge> out;
  for (NodeId a : nodes_)
    for (NodeId b : children_[static_cast<std::size_t>(a)]) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> Udag::lines() const {
  std::vector<Edge> out;
  for (NodeId a : nodes_)
    for (NodeId b : neighbors_[static_cast<std::size_t>(a)])
      if (a < b) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

int Udag::arrow_count() const {
  int total = 0;
  for (NodeId v : nodes_) total += children_[static_cast<std::size_t>(v)].count();
  return total;
}

int Udag::line_count() const {
  int total = 0;
  for (NodeId v : nodes_) total += neighbors_[static_cast<std::size_t>(v)].count();
  return total / 2;
}

namespace {

/// Connected components of the undirected skeleton, singletons included.
std::vector<NodeSet> line_components(const Udag& g) {
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
  return comps;
}

}  // namespace

Ug moral_graph(const Udag& g) {
  std::vector<Edge> edges;
  for (NodeId a : g.nodes())
    for (NodeId b : g.nodes())
      if (a < b && g.adjacent(a, b)) edges.emplace_back(a, b);
  // Parents pointing into a common section marry; a singleton section is the
  // plain collider case.
  for (const NodeSet& comp : line_components(g)) {
    NodeSet pa = g.parents(comp);
    auto ms = pa.members();
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (std::size_t j = i + 1; j < ms.size(); ++j) edges.emplace_back(ms[i], ms[j]);
  }
  return Ug(g.size(), g.nodes(), edges, g.names());
}

Ug marginal_ug(const Ug& h, NodeSet w) {
  w &= h.nodes();
  NodeSet outside = h.nodes() - w;
  std::vector<Edge> edges;
  for (NodeId a : w) {
    // Everything reachable from a through nodes outside w.
    NodeSet frontier = h.adjacent(a);
    NodeSet interior = frontier & outside;
    for (;;) {
      NodeSet grown = interior | (h.adjacent(interior) & outside);
      if (grown == interior) break;
      interior = grown;
    }
    NodeSet reached = (frontier | h.adjacent(interior)) & w;
    for (NodeId b : reached)
      if (a < b) edges.emplace_back(a, b);
  }
  return Ug(h.size(), w, edges, h.names());
}

namespace {

void bron_kerbosch(const Ug& h, NodeSet r, NodeSet p, NodeSet x, std::vector<NodeSet>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  // Pivot on the candidate covering the most of p.
  NodeId pivot = -1;
  int best = -1;
  for (NodeId v : p | x) {
    int covered = (p & h.adjacent(v)).count();
    if (covered > best) { best = covered; pivot = v; }
  }
  for (NodeId v : p - h.adjacent(pivot)) {
    NodeSet nv = h.adjacent(v);
    bron_kerbosch(h, r | NodeSet::of({v}), p & nv, x & nv, out);
    p.erase(v);
    x.insert(v);
  }
}

}  // namespace

std::vector<NodeSet> cliques(const Ug& h) {
  std::vector<NodeSet> out;
  bron_kerbosch(h, NodeSet{}, h.nodes(), NodeSet{}, out);
  std::sort(out.begin(), out.end(), [](NodeSet a, NodeSet b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return NodeSet::lex_less(a, b);
  });
  return out;
}

Decomposition decompose(const Udag& g) {
  std::vector<NodeSet> sets;
  for (NodeId v : g.nodes()) {
    NodeSet w = g.ancestors(NodeSet::of({v}));
    if (std::find(sets.begin(), sets.end(), w) == sets.end()) sets.push_back(w);
  }
  // Size-then-member order implies subsets come before supersets.
  std::sort(sets.begin(), sets.end(), [](NodeSet a, NodeSet b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return NodeSet::lex_less(a, b);
  });

  Decomposition d;
  d.minimal_ancestral_sets = sets;
  NodeSet covered;
  for (const NodeSet& w : sets) {
    NodeSet c = w - covered;
    covered |= w;
    NodeSet bd = g.parents(c) - c;
    d.components.push_back(c);
    d.boundaries.push_back(bd);

    NodeSet scope = c | bd;
    Ug moral = moral_graph(g.induced(scope));
    std::vector<Edge> edges = moral.edges();
    auto bs = bd.members();
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i + 1; j < bs.size(); ++j)
        if (!moral.has_edge(bs[i], bs[j])) edges.emplace_back(bs[i], bs[j]);
    d.star_graphs.emplace_back(g.size(), scope, edges, g.names());
  }
  return d;
}

}  // namespace udag
