#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "udag/distribution.hpp"
#include "udag/graph.hpp"

namespace udag {

enum class GraphClass { udag, dag, lwf_cg };

/// Elementary independence statements (a, b | z), stored symmetrically in
/// (a, b).
class IndependenceOracle {
 public:
  explicit IndependenceOracle(int n);

  int node_count() const { return n_; }
  std::size_t size() const { return triplets_.size(); }
  bool contains(NodeId a, NodeId b, NodeSet z) const;
  void insert(NodeId a, NodeId b, NodeSet z);

  /// Visits each stored triplet once with a < b.
  void for_each(const std::function<void(NodeId, NodeId, NodeSet)>& f) const;

 private:
  std::uint64_t key(NodeId a, NodeId b, NodeSet z) const;
  int n_;
  std::unordered_set<std::uint64_t> triplets_;
};

/// Number of graphs of the class over n labeled nodes.
std::uint64_t count_graphs(int n, GraphClass cls, bool unguarded = false);

/// Produces every valid graph of the class exactly once. Stops early when the
/// visitor returns false. Guarded to n <= 5 for the mixed class (n <= 7
/// otherwise) unless unguarded is set.
void enumerate_graphs(int n, GraphClass cls, const std::function<bool(const Udag&)>& visit,
                      bool unguarded = false);

/// One uniform draw from the class, by rejection over per-pair edge states.
Udag sample_graph(int n, GraphClass cls, SplitMix64& rng);

bool is_lwf_cg(const Udag& g);

/// All elementary separations of g.
IndependenceOracle oracle_from_graph(const Udag& g);

/// All elementary triplets passing the exact ci test on p.
IndependenceOracle oracle_from_distribution(const DiscreteDistribution& p, double tol = 1e-9);

/// True when every elementary separation of g appears in the oracle, i.e. g
/// is an independence map of it.
bool consistent(const Udag& g, const IndependenceOracle& oracle);

struct LearnerConfig {
  GraphClass graph_class = GraphClass::udag;
  double line_weight = 1.0;
  double arrow_weight = 1.0;
  bool return_all_optima = false;
  int threads = 0;        // 0 = decide from hardware and UDAG_THREADS
  bool unguarded = false; // lift the search-space guard
};

struct LearnResult {
  std::vector<Udag> best;     // one graph unless return_all_optima
  double objective = 0.0;
  std::uint64_t graphs_searched = 0;
};

/// Exhaustive search for the sparsest independence maps of the oracle within
/// the class. Ties resolve to the lexicographically least edge sets, so the
/// result does not depend on how the search was partitioned.
LearnResult learn(const IndependenceOracle& oracle, const LearnerConfig& config);

/// Text format: one `A _||_ B | c,d` per line, `#` comments. Names are
/// resolved against `names`; an empty list infers them in order of first
/// mention (use node_count_hint when isolated nodes never appear).
IndependenceOracle parse_oracle(std::istream& in, std::vector<std::string>& names,
                                int node_count_hint = 0);
void format_oracle(std::ostream& out, const IndependenceOracle& oracle,
                   const std::vector<std::string>& names);

}  // namespace udag
