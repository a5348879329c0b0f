#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "udag/distribution.hpp"
#include "udag/markov.hpp"

using namespace udag;

namespace {

DiscreteDistribution product_of_bernoullis(const std::vector<double>& qs) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < qs.size(); ++i) vars.push_back({"X" + std::to_string(i), 2});
  std::size_t total = std::size_t{1} << qs.size();
  std::vector<double> table(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double p = 1.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      bool one = (flat >> (qs.size() - 1 - i)) & 1u;
      p *= one ? qs[i] : 1.0 - qs[i];
    }
    table[flat] = p;
  }
  return DiscreteDistribution(vars, table);
}

// Z = X xor Y over uniform X, Y.
DiscreteDistribution xor_triple() {
  std::vector<Variable> vars{{"X", 2}, {"Y", 2}, {"Z", 2}};
  std::vector<double> table(8, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) table[static_cast<std::size_t>(x * 4 + y * 2 + (x ^ y))] = 0.25;
  return DiscreteDistribution(vars, table);
}

DiscreteDistribution random_table(int n, SplitMix64& rng, bool positive) {
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({"X" + std::to_string(i), 2});
  std::vector<double> table(std::size_t{1} << n);
  double sum = 0.0;
  for (double& p : table) {
    p = positive ? 0.05 + rng.uniform() : (rng.uniform() < 0.2 ? 0.0 : rng.uniform());
    sum += p;
  }
  if (sum == 0.0) { table[0] = 1.0; sum = 1.0; }
  for (double& p : table) p /= sum;
  return DiscreteDistribution(vars, table);
}

}  // namespace

TEST_CASE("table validation") {
  CHECK_THROWS_AS(DiscreteDistribution({{"A", 2}}, {0.5, 0.4}), Error);        // not normalized
  CHECK_THROWS_AS(DiscreteDistribution({{"A", 2}}, {1.5, -0.5}), Error);       // negative
  CHECK_THROWS_AS(DiscreteDistribution({{"A", 2}}, {0.5, 0.25, 0.25}), Error); // wrong length
}

TEST_CASE("marginalization basics") {
  DiscreteDistribution u = DiscreteDistribution::uniform({{"A", 2}, {"B", 2}});
  DiscreteDistribution m = u.marginalize(NodeSet::of({0}));
  CHECK(m.var_count() == 1);
  CHECK(m.table()[0] == doctest::Approx(0.5).epsilon(1e-12));

  DiscreteDistribution all = u.marginalize(NodeSet::of({0, 1}));
  CHECK(all.table() == u.table());

  DiscreteDistribution prod = product_of_bernoullis({0.3, 0.6, 0.8});
  DiscreteDistribution pair = prod.marginalize(NodeSet::of({0, 2}));
  CHECK(pair.prob({1, 1}) == doctest::Approx(0.3 * 0.8).epsilon(1e-12));
}

TEST_CASE("marginalization composes through intersections") {
  SplitMix64 rng(1);
  DiscreteDistribution p = random_table(4, rng, true);
  auto a = p.marginalize(NodeSet::of({0, 1, 3})).marginalize(NodeSet::of({0, 2}));  // keeps X0, X3
  auto b = p.marginalize(NodeSet::of({0, 3}));
  for (std::size_t i = 0; i < a.table_size(); ++i)
    CHECK(a.table()[i] == doctest::Approx(b.table()[i]).epsilon(1e-12));
}

TEST_CASE("conditioning slices and renormalizes") {
  DiscreteDistribution u = DiscreteDistribution::uniform({{"A", 2}, {"B", 3}});
  DiscreteDistribution c = u.condition({{0, 1}});
  CHECK(c.var_count() == 1);
  CHECK(c.table()[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  DiscreteDistribution same = u.condition({});
  for (std::size_t i = 0; i < u.table_size(); ++i)
    CHECK(same.table()[i] == doctest::Approx(u.table()[i]).epsilon(1e-12));

  DiscreteDistribution point({{"A", 2}, {"B", 2}}, {1.0, 0.0, 0.0, 0.0});
  DiscreteDistribution sliced = point.condition({{0, 0}});
  CHECK(sliced.prob({0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(point.condition({{0, 1}}), Error);  // zero-probability evidence
}

TEST_CASE("exact ci on products and the parity triple") {
  DiscreteDistribution prod = product_of_bernoullis({0.2, 0.5, 0.9});
  CHECK(ci_test_exact(prod, NodeSet::of({0}), NodeSet::of({1}), NodeSet::of({2})));
  CHECK(ci_test_exact(prod, NodeSet::of({0}), NodeSet::of({1, 2}), NodeSet{}));

  DiscreteDistribution parity = xor_triple();
  CHECK(ci_test_exact(parity, NodeSet::of({0}), NodeSet::of({1}), NodeSet{}));
  CHECK_FALSE(ci_test_exact(parity, NodeSet::of({0}), NodeSet::of({1}), NodeSet::of({2})));
}

TEST_CASE("ci pattern of a collider fixture matches its separations") {
  Udag g(3, {{0, 2}, {1, 2}}, {});
  MarkovFixture f = sample_markov_fixture(g, 42, FixtureStrictness::exact_for_dag_or_ug);
  CHECK(f.markov_guaranteed);
  CHECK(ci_test_exact(f.p, NodeSet::of({0}), NodeSet::of({1}), NodeSet{}));
  // Conditioning on the collider couples the parents in a generic fixture.
  CHECK_FALSE(ci_test_exact(f.p, NodeSet::of({0}), NodeSet::of({1}), NodeSet::of({2})));
}

TEST_CASE("semi-graphoid axioms hold for the exact ci test") {
  SplitMix64 rng(9);
  int premise_hits = 0;
  for (int trial = 0; trial < 60; ++trial) {
    DiscreteDistribution p = trial % 2 == 0
        ? random_table(4, rng, trial % 4 == 0)
        : sample_markov_fixture(fixtures::random_udag(4, rng), rng.next(), FixtureStrictness::chain_form).p;
    bool positive = p.strictly_positive();
    auto ci = [&](NodeSet x, NodeSet y, NodeSet z) {
      if (x.empty() || y.empty()) return true;
      return ci_test_exact(p, x, y, z);
    };
    for (int round = 0; round < 30; ++round) {
      NodeSet x, y, z, w;
      for (NodeId v = 0; v < 4; ++v) {
        switch (rng.below(6)) {
          case 0: x.insert(v); break;
          case 1: y.insert(v); break;
          case 2: z.insert(v); break;
          case 3: w.insert(v); break;
          default: break;
        }
      }
      if (x.empty() || y.empty() || w.empty()) continue;
      CHECK(ci(x, y, z) == ci(y, x, z));  // symmetry
      if (ci(x, y | w, z)) {
        ++premise_hits;
        CHECK(ci(x, y, z));      // decomposition
        CHECK(ci(x, y, z | w));  // weak union
      }
      if (ci(x, y, z | w) && ci(x, w, z)) CHECK(ci(x, y | w, z));  // contraction
      if (positive && ci(x, y, z | w) && ci(x, w, z | y)) CHECK(ci(x, y | w, z));  // intersection
    }
  }
  CHECK(premise_hits > 0);  // the axioms were exercised, not vacuous
}

TEST_CASE("fixtures are strictly positive and normalized") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Udag g = fixtures::random_udag(2 + static_cast<int>(rng.below(4)), rng);
    MarkovFixture f = sample_markov_fixture(g, rng.next(), FixtureStrictness::chain_form);
    CHECK(f.p.strictly_positive());
    double sum = 0.0;
    for (double v : f.p.table()) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fixture strictness is enforced") {
  Udag mixed(3, {{0, 1}}, {{1, 2}});
  CHECK_THROWS_AS(sample_markov_fixture(mixed, 1, FixtureStrictness::exact_for_dag_or_ug), Error);
  MarkovFixture f = sample_markov_fixture(mixed, 1, FixtureStrictness::chain_form);
  CHECK_FALSE(f.markov_guaranteed);
}

TEST_CASE("dag and ug fixtures satisfy the global markov property") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    Udag dag = fixtures::random_udag(4, rng, 0.5, 0.0);
    MarkovFixture f = sample_markov_fixture(dag, rng.next(), FixtureStrictness::exact_for_dag_or_ug);
    CHECK(satisfies_global(f.p, dag).holds);

    Udag ug = fixtures::random_udag(4, rng, 0.0, 0.5);
    MarkovFixture f2 = sample_markov_fixture(ug, rng.next(), FixtureStrictness::exact_for_dag_or_ug);
    CHECK(satisfies_global(f2.p, ug).holds);
  }
}

TEST_CASE("distribution json round trip") {
  SplitMix64 rng(5);
  DiscreteDistribution p = random_table(3, rng, true);
  std::string text = distribution_to_json(p);
  std::istringstream in(text);
  DiscreteDistribution q = distribution_from_json(in);
  CHECK(q.var_count() == p.var_count());
  for (std::size_t i = 0; i < p.table_size(); ++i)
    CHECK(q.table()[i] == doctest::Approx(p.table()[i]).epsilon(1e-15));

  std::istringstream bad("{\"variables\":[]}");
  CHECK_THROWS_AS(distribution_from_json(bad), Error);
}

TEST_CASE("csv sample export emits one configuration per row") {
  DiscreteDistribution u = DiscreteDistribution::uniform({{"A", 2}, {"B", 2}});
  SplitMix64 rng(3);
  std::ostringstream out;
  write_samples_csv(out, u, 5, rng);
  std::istringstream lines(out.str());
  std::string line;
  int rows = 0;
  CHECK(std::getline(lines, line));
  CHECK(line == "A,B");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("exact sampling tracks the table") {
  DiscreteDistribution p({{"A", 2}}, {0.25, 0.75});
  SplitMix64 rng(8);
  int ones = 0;
  for (int i = 0; i < 4000; ++i) ones += p.sample(rng)[0];
  CHECK(std::abs(ones / 4000.0 - 0.75) < 0.03);
}
