#include "udag/gibbs.hpp"

#include <algorithm>
#include <cmath>

namespace udag {

double GibbsTrace::max_tv() const {
  double worst = 0.0;
  for (const auto& b : per_boundary) worst = std::max(worst, b.tv);
  return worst;
}

GibbsTrace gibbs_run(const DiscreteDistribution& p, const Udag& g, int component, int sweeps,
                     std::uint64_t seed, bool record_samples) {
  if (p.var_count() != g.size())
    throw Error(Errc::variable_mismatch, "distribution and graph disagree on the variables");
  for (NodeId v : g.nodes())
    if (p.variable(v).name != g.name(v))
      throw Error(Errc::variable_mismatch,
                  "variable '" + p.variable(v).name + "' does not match node '" + g.name(v) + "'");
  if (!p.strictly_positive())
    throw Error(Errc::non_positive_distribution, "the sampler needs a strictly positive table");
  Decomposition dec = decompose(g);
  if (component < 0 || component >= dec.count())
    throw Error(Errc::invalid_query, "component index out of range");
  if (sweeps < 1) throw Error(Errc::invalid_query, "sweep count must be positive");

  NodeSet comp = dec.components[static_cast<std::size_t>(component)];
  NodeSet bd = dec.boundaries[static_cast<std::size_t>(component)];
  auto comp_ids = comp.members();
  auto bd_ids = bd.members();

  // Everything happens inside the marginal over C_i and bd(C_i); the update
  // distribution p(A | bd, C_i \ A) only depends on it.
  DiscreteDistribution q = p.marginalize(comp | bd);
  std::vector<int> slot(static_cast<std::size_t>(g.size()), -1);
  {
    int s = 0;
    for (NodeId v : comp | bd) slot[static_cast<std::size_t>(v)] = s++;
  }

  std::size_t comp_span = 1;
  for (NodeId v : comp_ids) comp_span *= static_cast<std::size_t>(p.variable(v).card);
  std::size_t bd_span = 1;
  for (NodeId v : bd_ids) bd_span *= static_cast<std::size_t>(p.variable(v).card);

  GibbsTrace trace;
  trace.component = component;
  trace.sweeps = sweeps;
  if (record_samples) {
    for (NodeId v : bd_ids) trace.sample_columns.push_back(g.name(v));
    for (NodeId v : comp_ids) trace.sample_columns.push_back(g.name(v));
  }

  int burn_in = sweeps / 5;
  SplitMix64 rng(seed);

  for (std::size_t b = 0; b < bd_span; ++b) {
    std::vector<int> state(static_cast<std::size_t>(q.var_count()), 0);
    std::vector<int> bd_config;
    {
      std::size_t rem = b;
      for (std::size_t k = bd_ids.size(); k-- > 0;) {
        int card = p.variable(bd_ids[k]).card;
        state[static_cast<std::size_t>(slot[static_cast<std::size_t>(bd_ids[k])])] =
            static_cast<int>(rem % static_cast<std::size_t>(card));
        rem /= static_cast<std::size_t>(card);
      }
      for (NodeId v : bd_ids)
        bd_config.push_back(state[static_cast<std::size_t>(slot[static_cast<std::size_t>(v)])]);
    }

    std::vector<double> counts(comp_span, 0.0);
    double total = 0.0;
    std::vector<double> weights;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (std::size_t step = 0; step < comp_ids.size(); ++step) {
        NodeId v = comp_ids[rng.below(comp_ids.size())];
        int vs = slot[static_cast<std::size_t>(v)];
        int card = p.variable(v).card;
        weights.assign(static_cast<std::size_t>(card), 0.0);
        double mass = 0.0;
        for (int val = 0; val < card; ++val) {
          state[static_cast<std::size_t>(vs)] = val;
          double w = q.prob(state);
          weights[static_cast<std::size_t>(val)] = w;
          mass += w;
        }
        double u = rng.uniform() * mass;
        int chosen = card - 1;
        double acc = 0.0;
        for (int val = 0; val < card; ++val) {
          acc += weights[static_cast<std::size_t>(val)];
          if (u < acc) { chosen = val; break; }
        }
        state[static_cast<std::size_t>(vs)] = chosen;
      }
      if (sweep >= burn_in) {
        std::size_t idx = 0;
        for (NodeId v : comp_ids)
          idx = idx * static_cast<std::size_t>(p.variable(v).card) +
                static_cast<std::size_t>(state[static_cast<std::size_t>(slot[static_cast<std::size_t>(v)])]);
        counts[idx] += 1.0;
        total += 1.0;
        if (record_samples) {
          std::vector<int> row = bd_config;
          for (NodeId v : comp_ids)
            row.push_back(state[static_cast<std::size_t>(slot[static_cast<std::size_t>(v)])]);
          trace.samples.push_back(std::move(row));
        }
      }
    }

    GibbsBoundaryStats stats;
    stats.boundary_config = bd_config;
    stats.empirical.resize(comp_span);
    for (std::size_t i = 0; i < comp_span; ++i) stats.empirical[i] = counts[i] / total;

    // Exact p(C_i | bd = config) from the same marginal.
    std::vector<std::pair<int, int>> evidence;
    for (std::size_t k = 0; k < bd_ids.size(); ++k)
      evidence.emplace_back(slot[static_cast<std::size_t>(bd_ids[k])], bd_config[k]);
    DiscreteDistribution exact = q.condition(evidence);
    stats.exact = exact.table();
    double tv = 0.0;
    for (std::size_t i = 0; i < comp_span; ++i) tv += std::abs(stats.empirical[i] - stats.exact[i]);
    stats.tv = 0.5 * tv;
    trace.per_boundary.push_back(std::move(stats));
  }
  return trace;
}

}  // namespace udag
