#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "udag/graph.hpp"
#include "udag/rng.hpp"

namespace udag {

struct Dataset {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  bool standardized = false;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  int var_count() const { return static_cast<int>(columns.size()); }
};

/// Header row of names, comma separator, decimal point.
Dataset read_csv(std::istream& in);

/// Rescales every column to zero mean and unit variance in place.
void standardize(Dataset& d);

/// Nonlinear regressors are pluggable; the library ships kernel ridge.
class Regressor {
 public:
  virtual ~Regressor() = default;
  /// Residuals of target regressed on the predictor columns; with no
  /// predictors the residual is the centered target.
  virtual std::vector<double> residuals(const std::vector<double>& target,
                                        const std::vector<const std::vector<double>*>& predictors) const = 0;
};

/// Gaussian-kernel ridge regression with the median-heuristic bandwidth and
/// ridge lambda = ridge_scale * m.
class KernelRidge : public Regressor {
 public:
  explicit KernelRidge(double ridge_scale = 1e-3) : ridge_scale_(ridge_scale) {}
  std::vector<double> residuals(const std::vector<double>& target,
                                const std::vector<const std::vector<double>*>& predictors) const override;

 private:
  double ridge_scale_;
};

enum class HsicMethod { gamma, permutation };

/// P-value of the joint independence test across all residual columns.
/// Gamma approximation by default; the permutation variant redraws each
/// column's alignment at least `permutations` times.
double hsic_joint_pvalue(const std::vector<std::vector<double>>& columns,
                         HsicMethod method = HsicMethod::gamma, int permutations = 500,
                         std::uint64_t seed = 1);

struct AnmConfig {
  HsicMethod test = HsicMethod::gamma;
  int permutations = 500;
  double ridge_scale = 1e-3;
  std::shared_ptr<const Regressor> regressor;  // defaults to KernelRidge
};

struct ScoredGraph {
  Udag graph;
  double p_value = 0.0;
  std::vector<std::vector<double>> residuals;  // one column per node
};

/// Residual of each node regressed on its parents and neighbors, scored by
/// the joint residual-independence p-value.
ScoredGraph score_udag(const Udag& g, const Dataset& d, const AnmConfig& config = {});

/// Scores L uniformly sampled mixed graphs and returns the top scorer;
/// near-ties (relative 1e-9) resolve to fewest edges, then lexicographically.
Udag learn_causal(const Dataset& d, int samples, std::uint64_t seed, const AnmConfig& config = {});

}  // namespace udag
