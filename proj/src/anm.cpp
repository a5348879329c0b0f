#include "udag/anm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/gamma.hpp>

#include "udag/exact_learner.hpp"

namespace udag {

Dataset read_csv(std::istream& in) {
  Dataset d;
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::bad_format, "empty csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) {
    if (cell.empty()) throw Error(Errc::bad_format, "empty column name in csv header");
    d.names.push_back(cell);
  }
  d.columns.resize(d.names.size());

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= d.columns.size())
        throw Error(Errc::bad_format, "csv line " + std::to_string(lineno) + ": too many cells");
      try {
        std::size_t used = 0;
        double value = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        d.columns[col].push_back(value);
      } catch (const std::exception&) {
        throw Error(Errc::bad_format,
                    "csv line " + std::to_string(lineno) + ": cannot parse '" + cell + "'");
      }
      ++col;
    }
    if (col != d.columns.size())
      throw Error(Errc::bad_format, "csv line " + std::to_string(lineno) + ": missing cells");
  }
  return d;
}

void standardize(Dataset& d) {
  for (auto& col : d.columns) {
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(col.size());
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= static_cast<double>(col.size());
    double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (double& v : col) v = (v - mean) * scale;
  }
  d.standardized = true;
}

namespace {

double column_variance(const std::vector<double>& col) {
  double mean = 0.0;
  for (double v : col) mean += v;
  mean /= static_cast<double>(col.size());
  double var = 0.0;
  for (double v : col) var += (v - mean) * (v - mean);
  return var / static_cast<double>(col.size());
}

/// Median of the nonzero pairwise squared distances; 1.0 when degenerate.
double median_squared_distance(const Eigen::MatrixXd& points) {
  std::vector<double> dists;
  auto m = points.rows();
  dists.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double d2 = (points.row(i) - points.row(j)).squaredNorm();
      if (d2 > 0.0) dists.push_back(d2);
    }
  if (dists.empty()) return 1.0;
  auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  return *mid;
}

/// Gaussian Gram matrix with the median heuristic: k(a,b) = exp(-|a-b|^2 / s)
/// where s is the median squared distance.
Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& points) {
  double s = median_squared_distance(points);
  auto m = points.rows();
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double v = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / s);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd column_matrix(const std::vector<double>& col) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(col.size()), 1);
  for (std::size_t i = 0; i < col.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = col[i];
  return m;
}

}  // namespace

std::vector<double> KernelRidge::residuals(const std::vector<double>& target,
                                           const std::vector<const std::vector<double>*>& predictors) const {
  std::size_t m = target.size();
  if (column_variance(target) == 0.0)
    throw Error(Errc::degenerate_column, "regression target has zero variance");

  // Zero-variance predictors carry no signal; drop them.
  std::vector<const std::vector<double>*> usable;
  for (const auto* col : predictors)
    if (column_variance(*col) > 0.0) usable.push_back(col);

  double mean = 0.0;
  for (double v : target) mean += v;
  mean /= static_cast<double>(m);

  if (usable.empty()) {
    std::vector<double> out(target);
    for (double& v : out) v -= mean;
    return out;
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(usable.size()));
  for (std::size_t j = 0; j < usable.size(); ++j)
    for (std::size_t i = 0; i < m; ++i)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*usable[j])[i];

  Eigen::MatrixXd gram = gaussian_gram(x);
  Eigen::VectorXd y(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) y(static_cast<Eigen::Index>(i)) = target[i] - mean;

  double lambda = ridge_scale_ * static_cast<double>(m);
  Eigen::MatrixXd reg = gram;
  reg.diagonal().array() += lambda;
  Eigen::VectorXd alpha = reg.ldlt().solve(y);
  Eigen::VectorXd fit = gram * alpha;

  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = target[i] - mean - fit(static_cast<Eigen::Index>(i));
  return out;
}

namespace {

struct HsicParts {
  double statistic = 0.0;  // m * dHSIC
  double alpha = 0.0;      // gamma shape
  double beta = 0.0;       // gamma scale
};

/// Joint (d-variable) HSIC V-statistic over precomputed Gram matrices, plus
/// the moment-matched gamma null. The d = 2 case reduces to the classic
/// pairwise formulas.
HsicParts hsic_statistic(const std::vector<Eigen::MatrixXd>& grams) {
  auto m = grams.front().rows();
  double dm = static_cast<double>(m);

  Eigen::MatrixXd prod = Eigen::MatrixXd::Ones(m, m);
  double mean_prod = 1.0;
  Eigen::VectorXd row_prod = Eigen::VectorXd::Ones(m);
  for (const auto& k : grams) {
    prod = prod.cwiseProduct(k);
    mean_prod *= k.sum() / (dm * dm);
    row_prod = row_prod.cwiseProduct(k.rowwise().sum() / dm);
  }
  double term1 = prod.sum() / (dm * dm);
  double term3 = 2.0 * row_prod.sum() / dm;
  double dhsic = term1 + mean_prod - term3;

  HsicParts parts;
  parts.statistic = dm * dhsic;

  // Null mean of m * dHSIC to leading order: with e_d the mean off-diagonal
  // kernel value, E = 1 - prod e_d - sum_d (1 - e_d) prod_{k != d} e_k.
  // Collapses to (1 - e_1)(1 - e_2) for two variables.
  std::vector<double> off(grams.size());
  for (std::size_t v = 0; v < grams.size(); ++v)
    off[v] = (grams[v].sum() - grams[v].diagonal().sum()) / (dm * (dm - 1.0));
  double prod_all = 1.0;
  for (double e : off) prod_all *= e;
  double mean_null = 1.0 - prod_all;
  for (std::size_t v = 0; v < off.size(); ++v) {
    double others = 1.0;
    for (std::size_t w = 0; w < off.size(); ++w)
      if (w != v) others *= off[w];
    mean_null -= (1.0 - off[v]) * others;
  }

  // Null variance: every subset S of two or more variables contributes an
  // uncorrelated degenerate quadratic form with weight prod_{d not in S} e_d^2
  // and magnitude E[(prod_{d in S} centered-k_d)^2]. The two-variable case is
  // the classic single-term formula.
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / dm);
  std::vector<Eigen::MatrixXd> centered;
  centered.reserve(grams.size());
  for (const auto& k : grams) centered.push_back(h * k * h);

  double var_sum = 0.0;
  std::uint32_t subsets = std::uint32_t{1} << grams.size();
  for (std::uint32_t s = 0; s < subsets; ++s) {
    if (std::popcount(s) < 2) continue;
    Eigen::MatrixXd prod_c = Eigen::MatrixXd::Ones(m, m);
    double weight = 1.0;
    for (std::size_t v = 0; v < grams.size(); ++v) {
      if ((s >> v) & 1u)
        prod_c = prod_c.cwiseProduct(centered[v]);
      else
        weight *= off[v] * off[v];
    }
    double frob = prod_c.array().square().sum() - prod_c.diagonal().array().square().sum();
    var_sum += weight * frob / (dm * (dm - 1.0));
  }
  double var_null = 2.0 * dm * (dm - 4.0) * (dm - 5.0) / ((dm - 1.0) * (dm - 2.0) * (dm - 3.0)) *
                    var_sum;

  if (mean_null <= 0.0 || var_null <= 0.0) {
    parts.alpha = 1.0;
    parts.beta = std::numeric_limits<double>::min();
  } else {
    parts.alpha = mean_null * mean_null / var_null;
    parts.beta = var_null / mean_null;
  }
  return parts;
}

double hsic_of_permutation(const std::vector<Eigen::MatrixXd>& grams,
                           const std::vector<std::vector<int>>& perms) {
  auto m = grams.front().rows();
  double dm = static_cast<double>(m);
  Eigen::MatrixXd prod = Eigen::MatrixXd::Ones(m, m);
  double mean_prod = 1.0;
  Eigen::VectorXd row_prod = Eigen::VectorXd::Ones(m);
  for (std::size_t v = 0; v < grams.size(); ++v) {
    const auto& k = grams[v];
    const auto& perm = perms[v];
    Eigen::MatrixXd kp(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        kp(i, j) = k(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    prod = prod.cwiseProduct(kp);
    mean_prod *= kp.sum() / (dm * dm);
    row_prod = row_prod.cwiseProduct(kp.rowwise().sum() / dm);
  }
  return dm * (prod.sum() / (dm * dm) + mean_prod - 2.0 * row_prod.sum() / dm);
}

}  // namespace

double hsic_joint_pvalue(const std::vector<std::vector<double>>& columns, HsicMethod method,
                         int permutations, std::uint64_t seed) {
  if (columns.size() < 2)
    throw Error(Errc::invalid_query, "joint independence needs at least two columns");
  std::size_t m = columns.front().size();
  if (m < 20) throw Error(Errc::too_few_samples, "joint independence test needs at least 20 rows");
  for (const auto& col : columns)
    if (col.size() != m) throw Error(Errc::size_mismatch, "residual columns differ in length");

  std::vector<Eigen::MatrixXd> grams;
  grams.reserve(columns.size());
  for (const auto& col : columns) grams.push_back(gaussian_gram(column_matrix(col)));

  HsicParts parts = hsic_statistic(grams);
  if (method == HsicMethod::gamma) {
    boost::math::gamma_distribution<double> null_dist(parts.alpha, parts.beta);
    double p = boost::math::cdf(boost::math::complement(null_dist, parts.statistic));
    return std::clamp(p, 0.0, 1.0);
  }

  if (permutations < 1) throw Error(Errc::invalid_query, "permutation count must be positive");
  SplitMix64 rng(seed);
  std::vector<std::vector<int>> perms(columns.size());
  std::vector<int> identity(m);
  for (std::size_t i = 0; i < m; ++i) identity[i] = static_cast<int>(i);
  perms.assign(columns.size(), identity);

  int exceed = 0;
  for (int b = 0; b < permutations; ++b) {
    // Keep the first column fixed, shuffle the alignment of the others.
    for (std::size_t v = 1; v < perms.size(); ++v) {
      auto& perm = perms[v];
      for (std::size_t i = m; i-- > 1;)
        std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    if (hsic_of_permutation(grams, perms) >= parts.statistic) ++exceed;
  }
  return (1.0 + exceed) / (1.0 + permutations);
}

namespace {

std::shared_ptr<const Regressor> resolve_regressor(const AnmConfig& config) {
  if (config.regressor) return config.regressor;
  return std::make_shared<KernelRidge>(config.ridge_scale);
}

}  // namespace

ScoredGraph score_udag(const Udag& g, const Dataset& d, const AnmConfig& config) {
  if (g.size() != d.var_count())
    throw Error(Errc::variable_mismatch, "graph and dataset disagree on the variables");
  const Dataset* data = &d;
  Dataset scaled;
  if (!d.standardized) {
    scaled = d;
    standardize(scaled);
    data = &scaled;
  }
  auto regressor = resolve_regressor(config);
  ScoredGraph scored{g, 0.0, {}};
  for (NodeId v : g.nodes()) {
    NodeSet predictors = (g.parents_of(v) | g.neighbors_of(v)) - NodeSet::of({v});
    std::vector<const std::vector<double>*> cols;
    for (NodeId u : predictors) cols.push_back(&data->columns[static_cast<std::size_t>(u)]);
    scored.residuals.push_back(regressor->residuals(data->columns[static_cast<std::size_t>(v)], cols));
  }
  scored.p_value = hsic_joint_pvalue(scored.residuals, config.test, config.permutations, 17);
  return scored;
}

Udag learn_causal(const Dataset& d, int samples, std::uint64_t seed, const AnmConfig& config) {
  int n = d.var_count();
  if (n > 5) throw Error(Errc::too_large, "random-sampling search supports at most 5 variables");
  if (n < 2) throw Error(Errc::invalid_query, "need at least two variables");
  if (samples < 1) throw Error(Errc::invalid_query, "sample count must be positive");

  Dataset data = d;
  if (!data.standardized) standardize(data);
  auto regressor = resolve_regressor(config);

  // Residuals and Gram matrices depend only on (node, predictor set): cache
  // them so supergraph scoring stays cheap and scoring is order-independent.
  std::map<std::pair<NodeId, std::uint64_t>, Eigen::MatrixXd> gram_cache;
  auto gram_for = [&](NodeId v, NodeSet predictors) -> const Eigen::MatrixXd& {
    auto key = std::make_pair(v, predictors.bits());
    auto it = gram_cache.find(key);
    if (it != gram_cache.end()) return it->second;
    std::vector<const std::vector<double>*> cols;
    for (NodeId u : predictors) cols.push_back(&data.columns[static_cast<std::size_t>(u)]);
    auto residual = regressor->residuals(data.columns[static_cast<std::size_t>(v)], cols);
    return gram_cache.emplace(key, gaussian_gram(column_matrix(residual))).first->second;
  };

  SplitMix64 rng(seed);
  std::vector<Udag> pool;
  std::vector<std::uint64_t> seen;
  for (int i = 0; i < samples; ++i) {
    Udag g = sample_graph(n, GraphClass::udag, rng);
    std::uint64_t sig = 0;
    for (NodeId v = 0; v < n; ++v)
      sig = sig * 0x100000001b3ULL + (g.children_of(v).bits() * 131 + g.neighbors_of(v).bits());
    if (std::find(seen.begin(), seen.end(), sig) == seen.end()) {
      seen.push_back(sig);
      pool.push_back(std::move(g));
    }
  }

  std::vector<double> scores;
  scores.reserve(pool.size());
  for (const Udag& g : pool) {
    std::vector<Eigen::MatrixXd> grams;
    for (NodeId v : g.nodes())
      grams.push_back(gram_for(v, (g.parents_of(v) | g.neighbors_of(v)) - NodeSet::of({v})));
    if (config.test == HsicMethod::gamma) {
      HsicParts parts = hsic_statistic(grams);
      boost::math::gamma_distribution<double> null_dist(parts.alpha, parts.beta);
      scores.push_back(
          std::clamp(boost::math::cdf(boost::math::complement(null_dist, parts.statistic)), 0.0, 1.0));
    } else {
      std::vector<std::vector<double>> residual_cols;
      for (NodeId v : g.nodes()) {
        std::vector<const std::vector<double>*> cols;
        NodeSet predictors = (g.parents_of(v) | g.neighbors_of(v)) - NodeSet::of({v});
        for (NodeId u : predictors) cols.push_back(&data.columns[static_cast<std::size_t>(u)]);
        residual_cols.push_back(regressor->residuals(data.columns[static_cast<std::size_t>(v)], cols));
      }
      scores.push_back(hsic_joint_pvalue(residual_cols, HsicMethod::permutation, config.permutations, 17));
    }
  }

  double top = *std::max_element(scores.begin(), scores.end());
  auto better = [](const Udag& a, const Udag& b) {
    int ea = a.line_count() + a.arrow_count(), eb = b.line_count() + b.arrow_count();
    if (ea != eb) return ea < eb;
    auto la = a.lines(), lb = b.lines();
    if (la != lb) return la < lb;
    return a.arrows() < b.arrows();
  };
  const Udag* best = nullptr;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (scores[i] < top - 1e-9 * top) continue;  // only exact-max scorers modulo float noise
    if (best == nullptr || better(pool[i], *best)) best = &pool[i];
  }
  return *best;
}

}  // namespace udag
