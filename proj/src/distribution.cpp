#include "udag/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace udag {

namespace {

constexpr double kNormalizationSlack = 1e-12;

std::vector<std::size_t> make_strides(const std::vector<Variable>& vars) {
  std::vector<std::size_t> strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;)
    strides[i - 1] = strides[i] * static_cast<std::size_t>(vars[i].card);
  return strides;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Variable> variables, std::vector<double> table)
    : vars_(std::move(variables)), strides_(make_strides(vars_)), table_(std::move(table)) {
  if (static_cast<int>(vars_.size()) > kMaxNodes)
    throw Error(Errc::too_large, "at most 64 variables");
  std::size_t expect = 1;
  for (const Variable& v : vars_) {
    if (v.card < 1) throw Error(Errc::bad_format, "variable cardinality must be positive");
    expect *= static_cast<std::size_t>(v.card);
  }
  if (table_.size() != expect)
    throw Error(Errc::size_mismatch, "table length does not match the variable cardinalities");
  double sum = 0.0;
  for (double p : table_) {
    if (!(p >= 0.0)) throw Error(Errc::bad_format, "probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationSlack)
    throw Error(Errc::bad_format, "table must sum to one");
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<Variable> variables) {
  std::size_t total = 1;
  for (const Variable& v : variables) total *= static_cast<std::size_t>(v.card);
  return DiscreteDistribution(std::move(variables), std::vector<double>(total, 1.0 / static_cast<double>(total)));
}

std::size_t DiscreteDistribution::flat_index(const std::vector<int>& config) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    idx += static_cast<std::size_t>(config[i]) * strides_[i];
  return idx;
}

std::vector<int> DiscreteDistribution::config_of(std::size_t flat) const {
  std::vector<int> config(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    config[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return config;
}

bool DiscreteDistribution::strictly_positive() const {
  return std::all_of(table_.begin(), table_.end(), [](double p) { return p > 0.0; });
}

DiscreteDistribution DiscreteDistribution::marginalize(NodeSet keep) const {
  std::vector<Variable> kept;
  std::vector<std::size_t> kept_idx;
  for (int i = 0; i < var_count(); ++i) {
    if (keep.contains(i)) {
      kept.push_back(vars_[static_cast<std::size_t>(i)]);
      kept_idx.push_back(static_cast<std::size_t>(i));
    }
  }
  auto kept_strides = make_strides(kept);
  std::size_t total = 1;
  for (const Variable& v : kept) total *= static_cast<std::size_t>(v.card);
  std::vector<double> out(total, 0.0);

  std::vector<int> config(vars_.size(), 0);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < kept_idx.size(); ++k)
      idx += static_cast<std::size_t>(config[kept_idx[k]]) * kept_strides[k];
    out[idx] += table_[flat];
    for (std::size_t i = vars_.size(); i-- > 0;) {
      if (++config[i] < vars_[i].card) break;
      config[i] = 0;
    }
  }
  double sum = 0.0;
  for (double p : out) sum += p;
  if (sum > 0.0)
    for (double& p : out) p /= sum;
  return DiscreteDistribution(std::move(kept), std::move(out));
}

DiscreteDistribution DiscreteDistribution::condition(const std::vector<std::pair<int, int>>& evidence) const {
  std::vector<int> fixed(vars_.size(), -1);
  for (auto [var, value] : evidence) {
    if (var < 0 || var >= var_count())
      throw Error(Errc::variable_mismatch, "evidence variable out of range");
    if (value < 0 || value >= vars_[static_cast<std::size_t>(var)].card)
      throw Error(Errc::bad_format, "evidence value out of range");
    fixed[static_cast<std::size_t>(var)] = value;
  }

  std::vector<Variable> kept;
  std::vector<std::size_t> kept_idx;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (fixed[i] < 0) {
      kept.push_back(vars_[i]);
      kept_idx.push_back(i);
    }
  }
  auto kept_strides = make_strides(kept);
  std::size_t total = 1;
  for (const Variable& v : kept) total *= static_cast<std::size_t>(v.card);
  std::vector<double> out(total, 0.0);

  std::vector<int> config(vars_.size(), 0);
  double mass = 0.0;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    bool match = true;
    for (std::size_t i = 0; i < vars_.size() && match; ++i)
      if (fixed[i] >= 0 && config[i] != fixed[i]) match = false;
    if (match) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < kept_idx.size(); ++k)
        idx += static_cast<std::size_t>(config[kept_idx[k]]) * kept_strides[k];
      out[idx] += table_[flat];
      mass += table_[flat];
    }
    for (std::size_t i = vars_.size(); i-- > 0;) {
      if (++config[i] < vars_[i].card) break;
      config[i] = 0;
    }
  }
  if (mass <= 0.0)
    throw Error(Errc::zero_probability_evidence, "conditioning event has probability zero");
  for (double& p : out) p /= mass;
  return DiscreteDistribution(std::move(kept), std::move(out));
}

std::vector<int> DiscreteDistribution::sample(SplitMix64& rng) const {
  double u = rng.uniform();
  double acc = 0.0;
  std::size_t flat = 0;
  for (; flat + 1 < table_.size(); ++flat) {
    acc += table_[flat];
    if (u < acc) break;
  }
  return config_of(flat);
}

double ci_max_deviation(const DiscreteDistribution& p, NodeSet x, NodeSet y, NodeSet z) {
  if (x.intersects(y) || x.intersects(z) || y.intersects(z))
    throw Error(Errc::invalid_query, "ci test requires disjoint sets");
  DiscreteDistribution joint = p.marginalize(x | y | z);

  // Role of each marginal variable, in marginal order.
  std::vector<int> role;  // 0 = x, 1 = y, 2 = z
  for (int i = 0; i < p.var_count(); ++i) {
    if (x.contains(i)) role.push_back(0);
    else if (y.contains(i)) role.push_back(1);
    else if (z.contains(i)) role.push_back(2);
  }

  std::size_t nx = 1, ny = 1, nz = 1;
  for (int i = 0; i < joint.var_count(); ++i) {
    auto c = static_cast<std::size_t>(joint.variable(i).card);
    if (role[static_cast<std::size_t>(i)] == 0) nx *= c;
    else if (role[static_cast<std::size_t>(i)] == 1) ny *= c;
    else nz *= c;
  }

  // Accumulate p(x,y,z) into a dense (z, x, y) cube.
  std::vector<double> cube(nx * ny * nz, 0.0);
  for (std::size_t flat = 0; flat < joint.table_size(); ++flat) {
    auto config = joint.config_of(flat);
    std::size_t ix = 0, iy = 0, iz = 0;
    for (int i = 0; i < joint.var_count(); ++i) {
      auto c = static_cast<std::size_t>(joint.variable(i).card);
      auto v = static_cast<std::size_t>(config[static_cast<std::size_t>(i)]);
      if (role[static_cast<std::size_t>(i)] == 0) ix = ix * c + v;
      else if (role[static_cast<std::size_t>(i)] == 1) iy = iy * c + v;
      else iz = iz * c + v;
    }
    cube[(iz * nx + ix) * ny + iy] += joint.table()[flat];
  }

  constexpr double z_floor = 1e-12;
  double worst = 0.0;
  std::vector<double> px(nx), py(ny);
  for (std::size_t iz = 0; iz < nz; ++iz) {
    const double* slice = &cube[iz * nx * ny];
    double pz = 0.0;
    for (std::size_t i = 0; i < nx * ny; ++i) pz += slice[i];
    if (pz <= z_floor) continue;
    std::fill(px.begin(), px.end(), 0.0);
    std::fill(py.begin(), py.end(), 0.0);
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy) {
        px[ix] += slice[ix * ny + iy];
        py[iy] += slice[ix * ny + iy];
      }
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy) {
        double dev = std::abs(slice[ix * ny + iy] / pz - (px[ix] / pz) * (py[iy] / pz));
        worst = std::max(worst, dev);
      }
  }
  return worst;
}

bool ci_test_exact(const DiscreteDistribution& p, NodeSet x, NodeSet y, NodeSet z, double tol) {
  return ci_max_deviation(p, x, y, z) <= tol;
}

MarkovFixture sample_markov_fixture(const Udag& g, std::uint64_t seed, FixtureStrictness strictness,
                                    int cardinality) {
  bool exact = g.is_dag() || g.is_ug();
  if (strictness == FixtureStrictness::exact_for_dag_or_ug && !exact)
    throw Error(Errc::unsupported_strictness,
                "exact fixtures need a fully directed or fully undirected graph");
  if (cardinality < 2) throw Error(Errc::bad_format, "fixture cardinality must be at least 2");

  auto ids = g.nodes().members();
  std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t i = 0; i < ids.size(); ++i) pos[static_cast<std::size_t>(ids[i])] = static_cast<int>(i);

  std::vector<Variable> vars;
  for (NodeId v : ids) vars.push_back({g.name(v), cardinality});

  Decomposition dec = decompose(g);
  SplitMix64 rng(seed);

  std::size_t total = 1;
  for (std::size_t i = 0; i < ids.size(); ++i) total *= static_cast<std::size_t>(cardinality);
  std::vector<double> table(total, 1.0);

  std::vector<int> config(ids.size(), 0);
  for (int ci = 0; ci < dec.count(); ++ci) {
    NodeSet comp = dec.components[static_cast<std::size_t>(ci)];
    NodeSet bd = dec.boundaries[static_cast<std::size_t>(ci)];
    auto comp_ids = comp.members();
    auto bd_ids = bd.members();
    auto factors = cliques(dec.star_graphs[static_cast<std::size_t>(ci)]);

    // Random exponentiated potential per clique configuration.
    std::vector<std::vector<double>> theta(factors.size());
    for (std::size_t k = 0; k < factors.size(); ++k) {
      std::size_t span = 1;
      for (int c = 0; c < factors[k].count(); ++c) span *= static_cast<std::size_t>(cardinality);
      theta[k].resize(span);
      for (double& t : theta[k]) t = rng.uniform(-1.0, 1.0);
    }

    auto clique_log_score = [&](const std::vector<int>& full_config) {
      double s = 0.0;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        std::size_t idx = 0;
        for (NodeId v : factors[k])
          idx = idx * static_cast<std::size_t>(cardinality) +
                static_cast<std::size_t>(full_config[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])]);
        s += theta[k][idx];
      }
      return s;
    };

    // Normalizer per boundary configuration.
    std::size_t comp_span = 1;
    for (std::size_t k = 0; k < comp_ids.size(); ++k) comp_span *= static_cast<std::size_t>(cardinality);
    std::size_t bd_span = 1;
    for (std::size_t k = 0; k < bd_ids.size(); ++k) bd_span *= static_cast<std::size_t>(cardinality);

    std::vector<double> normalizer(bd_span, 0.0);
    std::vector<int> scope_config(ids.size(), 0);
    for (std::size_t b = 0; b < bd_span; ++b) {
      std::size_t rem = b;
      for (std::size_t k = bd_ids.size(); k-- > 0;) {
        scope_config[static_cast<std::size_t>(pos[static_cast<std::size_t>(bd_ids[k])])] =
            static_cast<int>(rem % static_cast<std::size_t>(cardinality));
        rem /= static_cast<std::size_t>(cardinality);
      }
      for (std::size_t c = 0; c < comp_span; ++c) {
        std::size_t crem = c;
        for (std::size_t k = comp_ids.size(); k-- > 0;) {
          scope_config[static_cast<std::size_t>(pos[static_cast<std::size_t>(comp_ids[k])])] =
              static_cast<int>(crem % static_cast<std::size_t>(cardinality));
          crem /= static_cast<std::size_t>(cardinality);
        }
        normalizer[b] += std::exp(clique_log_score(scope_config));
      }
    }

    // Multiply the conditional into the joint table.
    std::fill(config.begin(), config.end(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t b = 0;
      for (NodeId v : bd_ids)
        b = b * static_cast<std::size_t>(cardinality) +
            static_cast<std::size_t>(config[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])]);
      table[flat] *= std::exp(clique_log_score(config)) / normalizer[b];
      for (std::size_t i = ids.size(); i-- > 0;) {
        if (++config[i] < cardinality) break;
        config[i] = 0;
      }
    }
  }

  double sum = 0.0;
  for (double p : table) sum += p;
  for (double& p : table) p /= sum;
  return {DiscreteDistribution(std::move(vars), std::move(table)), exact};
}

std::string distribution_to_json(const DiscreteDistribution& p) {
  nlohmann::json j;
  j["variables"] = nlohmann::json::array();
  for (int i = 0; i < p.var_count(); ++i)
    j["variables"].push_back({{"name", p.variable(i).name}, {"card", p.variable(i).card}});
  j["table"] = p.table();
  return j.dump();
}

DiscreteDistribution distribution_from_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_format, std::string("invalid distribution json: ") + e.what());
  }
  if (!j.contains("variables") || !j.contains("table"))
    throw Error(Errc::bad_format, "distribution json needs 'variables' and 'table'");
  std::vector<Variable> vars;
  for (const auto& v : j["variables"])
    vars.push_back({v.at("name").get<std::string>(), v.at("card").get<int>()});
  return DiscreteDistribution(std::move(vars), j["table"].get<std::vector<double>>());
}

void write_samples_csv(std::ostream& out, const DiscreteDistribution& p, int rows, SplitMix64& rng) {
  for (int i = 0; i < p.var_count(); ++i) out << (i ? "," : "") << p.variable(i).name;
  out << "\n";
  for (int r = 0; r < rows; ++r) {
    auto config = p.sample(rng);
    for (std::size_t i = 0; i < config.size(); ++i) out << (i ? "," : "") << config[i];
    out << "\n";
  }
}

}  // namespace udag
