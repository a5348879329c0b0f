#pragma once

#include <string>
#include <vector>

#include "udag/distribution.hpp"
#include "udag/graph.hpp"

namespace udag {

enum class MarkovProperty { global, local, pairwise };

struct CiStatement {
  NodeSet x, y, z;
  bool operator==(const CiStatement&) const = default;
};

/// Statement rendered as "A _||_ B,C | D" using the graph's node names.
std::string format_statement(const Udag& g, const CiStatement& s);

struct Violation {
  CiStatement statement;
  double deviation = 0.0;
};

struct MarkovReport {
  MarkovProperty property = MarkovProperty::global;
  bool holds = true;
  std::vector<Violation> violations;
};

/// Elementary separated triplets of g.
std::vector<CiStatement> global_statements(const Udag& g);
/// Per ancestral set w and node a in w: a independent of the rest of w given
/// a's moral neighbors inside w. Vacuous statements are dropped.
std::vector<CiStatement> local_statements(const Udag& g);
/// Per ancestral set w: each non-adjacent (in the moral of the induced
/// subgraph) pair given the rest of w.
std::vector<CiStatement> pairwise_statements(const Udag& g);

MarkovReport satisfies_global(const DiscreteDistribution& p, const Udag& g, double tol = 1e-9);
MarkovReport satisfies_local(const DiscreteDistribution& p, const Udag& g, double tol = 1e-9);
MarkovReport satisfies_pairwise(const DiscreteDistribution& p, const Udag& g, double tol = 1e-9);

/// Ancestral sets containing a whose moral neighborhood of a grows under
/// every ancestral extension; computed from the children/descendants
/// fixpoint characterization.
std::vector<NodeSet> maximal_ancestral_sets_for_node(const Udag& g, NodeId a);
/// Same notion straight from the definition, by enumerating extensions.
std::vector<NodeSet> maximal_ancestral_sets_for_node_by_definition(const Udag& g, NodeId a);

/// Ancestral sets whose moral graph picks up edges under every ancestral
/// extension (marginal comparison); computed from the boundary-completeness
/// characterization.
std::vector<NodeSet> maximal_ancestral_sets_fact(const Udag& g);
/// Same notion straight from the definition.
std::vector<NodeSet> maximal_ancestral_sets_fact_by_definition(const Udag& g);

struct FactorizationReport {
  bool holds = true;
  std::vector<std::string> failures;  // human-readable witnesses
};

/// For each ancestral set w (or only the maximal ones), verifies that the
/// marginal over w factorizes over the cliques of the moralized induced
/// subgraph. For strictly positive tables this is checked through the
/// equivalent pairwise Markov property of the marginal.
FactorizationReport factorizes_ancestral_marginals(const DiscreteDistribution& p, const Udag& g,
                                                   double tol = 1e-9, bool maximal_only = false);

/// Verifies p(V) = prod_i p(C_i | bd(C_i)) pointwise and that each component
/// marginal factorizes over its star graph.
FactorizationReport factorizes_component_chain(const DiscreteDistribution& p, const Udag& g,
                                               double tol = 1e-9);

struct CausalIdentityEntry {
  int component = 0;
  NodeId node = 0;
  /// Largest gap between p(A | bd, C_i \ A) and p(A | bd, pa(A), ne(A)) over
  /// all configurations. A measurement, not a pass/fail verdict.
  double max_deviation = 0.0;
};

std::vector<CausalIdentityEntry> causal_update_deviations(const DiscreteDistribution& p,
                                                          const Udag& g);

}  // namespace udag
