#pragma once

#include <cstdint>
#include <vector>

#include "udag/distribution.hpp"
#include "udag/graph.hpp"

namespace udag {

struct GibbsBoundaryStats {
  std::vector<int> boundary_config;   // values of bd(C_i), empty when bd is empty
  std::vector<double> empirical;      // post-burn-in frequencies over C_i configs
  std::vector<double> exact;          // p(C_i | bd = boundary_config)
  double tv = 0.0;                    // total variation distance between the two
};

struct GibbsTrace {
  int component = 0;
  int sweeps = 0;
  std::vector<GibbsBoundaryStats> per_boundary;
  /// Sampled configurations over bd + C_i variables, in draw order, when
  /// recording was requested.
  std::vector<std::vector<int>> samples;
  std::vector<std::string> sample_columns;

  double max_tv() const;
};

/// Runs the component sampler: with bd(C_i) clamped to each of its
/// configurations, repeatedly redraws a uniformly chosen variable A of C_i
/// from p(A | bd(C_i), C_i \ A). The first 20% of sweeps are burn-in.
GibbsTrace gibbs_run(const DiscreteDistribution& p, const Udag& g, int component, int sweeps,
                     std::uint64_t seed, bool record_samples = false);

}  // namespace udag
