#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "udag/graph.hpp"
#include "udag/rng.hpp"
#include "udag/types.hpp"

namespace udag {

struct Variable {
  std::string name;
  int card = 2;
};

/// Explicit joint probability table over finitely-valued variables. The table
/// is row-major in variable order with the last variable fastest.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Variable> variables, std::vector<double> table);

  static DiscreteDistribution uniform(std::vector<Variable> variables);

  int var_count() const { return static_cast<int>(vars_.size()); }
  const Variable& variable(int i) const { return vars_[static_cast<std::size_t>(i)]; }
  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t table_size() const { return table_.size(); }
  const std::vector<double>& table() const { return table_; }

  double prob(const std::vector<int>& config) const { return table_[flat_index(config)]; }
  std::size_t flat_index(const std::vector<int>& config) const;
  std::vector<int> config_of(std::size_t flat) const;

  bool strictly_positive() const;

  /// Exact marginal over the variables in keep (indices into this
  /// distribution); variable order is preserved.
  DiscreteDistribution marginalize(NodeSet keep) const;

  /// Exact renormalized slice; the evidence variables are dropped from the
  /// result. Evidence of probability zero is an error.
  DiscreteDistribution condition(const std::vector<std::pair<int, int>>& evidence) const;

  /// One exact draw by inverse cdf on the flat table.
  std::vector<int> sample(SplitMix64& rng) const;

 private:
  std::vector<Variable> vars_;
  std::vector<std::size_t> strides_;
  std::vector<double> table_;
};

/// Exact conditional-independence test: on every z-slice with mass above
/// z_floor, the joint over x and y must factor within tol.
bool ci_test_exact(const DiscreteDistribution& p, NodeSet x, NodeSet y, NodeSet z,
                   double tol = 1e-9);

/// Largest factorization defect over all slices; the quantity ci_test_exact
/// compares against tol.
double ci_max_deviation(const DiscreteDistribution& p, NodeSet x, NodeSet y, NodeSet z);

enum class FixtureStrictness {
  exact_for_dag_or_ug,  // input must be fully directed or fully undirected
  chain_form,           // any input; built as a product of component conditionals
};

struct MarkovFixture {
  DiscreteDistribution p;
  /// Set when the construction provably satisfies the global Markov property
  /// (fully directed or fully undirected inputs).
  bool markov_guaranteed = false;
};

/// Strictly positive distribution assembled from random exponentiated
/// potentials on the star-graph cliques of each component, chained as
/// p(C_i | bd(C_i)).
MarkovFixture sample_markov_fixture(const Udag& g, std::uint64_t seed, FixtureStrictness strictness,
                                    int cardinality = 2);

/// JSON round trip: {"variables":[{"name":..,"card":..}],"table":[...]}.
std::string distribution_to_json(const DiscreteDistribution& p);
DiscreteDistribution distribution_from_json(std::istream& in);

/// Header row of variable names, then one sampled configuration per row.
void write_samples_csv(std::ostream& out, const DiscreteDistribution& p, int rows, SplitMix64& rng);

}  // namespace udag
