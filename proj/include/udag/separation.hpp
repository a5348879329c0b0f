#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "udag/graph.hpp"

namespace udag {

struct SeparationQuery {
  NodeSet x, y, z;
};

/// Fixed point of the reachability rules: u1/u2 hold the nodes reachable from
/// x by an active route (u1 when the route ends with an arrow into a trailing
/// undirected stretch), u3 the conditioning-set sections crossed on the way.
struct ReachState {
  NodeSet u1, u2, u3;
  NodeSet reached() const { return u1 | u2; }
};

/// Separation via the ancestral closure: moralize the subgraph induced by
/// an(x|y|z) and look for a path from x to y that avoids z.
bool separated_moral(const Udag& g, const SeparationQuery& q);

/// Separation via route reachability; returns the final rule state as the
/// diagnostic. Agrees with separated_moral on every query.
std::pair<bool, ReachState> separated_reach(const Udag& g, const SeparationQuery& q);

/// Non-adjacent pairs that no conditioning set separates. A pair {u,v}
/// qualifies exactly when u and v both send arrows into one undirected
/// component that meets an({u,v}).
std::vector<Edge> non_separable_pairs(const Udag& g);

/// Replaces the subgraph induced by w with its moral graph. Requires w to be
/// a minimal ancestral set of size > 1; the result represents the same
/// separations as g.
Udag undirect_ancestral_set(const Udag& g, NodeSet w);

/// True when both graphs separate exactly the same elementary triplets.
bool markov_equivalent(const Udag& g1, const Udag& g2);

/// Calls f(a, b, z) for every a < b and z avoiding both, z enumerated in
/// increasing size. Stops early when f returns false.
void for_each_elementary_triplet(NodeSet nodes, const std::function<bool(NodeId, NodeId, NodeSet)>& f);

}  // namespace udag
