#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fundnet/errors.hpp"
#include "fundnet/valuation.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace fundnet;

namespace {

CrossHoldings random_cross(testutil::Rng& rng, int n, double density,
                           double max_col_sum) {
  std::vector<CrossHoldingEntry> entries;
  std::vector<double> col(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && testutil::uniform(rng, 0, 1) < density) {
        const double f = testutil::uniform(rng, 0.01, 0.4);
        entries.push_back({i, j, f});
        col[j] += f;
      }
  for (CrossHoldingEntry& e : entries)
    if (col[e.investee] > max_col_sum)
      e.fraction *= max_col_sum / col[e.investee];
  return build_cross_holdings(n, std::move(entries));
}

}  // namespace

TEST_CASE("cross-holdings construction") {
  const CrossHoldings empty = build_cross_holdings(3, {});
  CHECK(empty.fractions().nonZeros() == 0);
  for (int j = 0; j < 3; ++j) CHECK(empty.outside_share()[j] == 1.0);

  const CrossHoldings ch = build_cross_holdings(2, {{0, 1, 0.5}});
  CHECK(ch.fraction(0, 1) == 0.5);
  CHECK(ch.outside_share()[0] == 1.0);
  CHECK(ch.outside_share()[1] == 0.5);
  // outside share plus inside column sum is exactly one
  for (int j = 0; j < 2; ++j) {
    double col = 0.0;
    for (int i = 0; i < 2; ++i) col += ch.fraction(i, j);
    CHECK(ch.outside_share()[j] + col == 1.0);
  }
}

TEST_CASE("cross-holdings rejections") {
  // mutual 0.6 stakes are fine: column sums stay below 1
  CHECK_NOTHROW(build_cross_holdings(2, {{0, 1, 0.6}, {1, 0, 0.6}}));
  CHECK_THROWS_AS(build_cross_holdings(3, {{0, 1, 0.7}, {2, 1, 0.4}}),
                  FullyInternalized);
  CHECK_THROWS_AS(build_cross_holdings(2, {{0, 0, 0.1}}), SelfHolding);
  CHECK_THROWS_AS(build_cross_holdings(2, {{0, 1, 1.5}}), FractionOutOfRange);
  CHECK_THROWS_AS(build_cross_holdings(2, {{0, 1, -0.1}}), FractionOutOfRange);
  CHECK_THROWS_AS(build_cross_holdings(2, {{0, 1, 0.2}, {0, 1, 0.3}}),
                  DuplicateEdge);
  // a 0.999999+ column crosses the epsilon guard
  CHECK_THROWS_AS(build_cross_holdings(2, {{0, 1, 0.9999999}}),
                  FullyInternalized);
}

TEST_CASE("dependency matrix identity and hand-solved 2x2") {
  const DependencyMatrix identity =
      dependency_matrix(build_cross_holdings(2, {}));
  const Mat a0 = identity.dense();
  CHECK(a0.isApprox(Mat::Identity(2, 2), 1e-14));

  const DependencyMatrix dep =
      dependency_matrix(build_cross_holdings(2, {{0, 1, 0.5}}));
  const Mat a = dep.dense();
  CHECK(a(0, 0) == doctest::Approx(1.0));
  CHECK(a(0, 1) == doctest::Approx(0.5));
  CHECK(a(1, 0) == doctest::Approx(0.0));
  CHECK(a(1, 1) == doctest::Approx(0.5));
  const Vec sums = dep.column_sums();
  CHECK(sums[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sums[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dependency matrix matches the Neumann series") {
  testutil::Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const CrossHoldings ch = random_cross(rng, 6, 0.4, 0.8);
    const DependencyMatrix dep = dependency_matrix(ch);
    const Mat expected = oracles::neumann_dependency(ch);
    const Mat actual = dep.dense();
    CHECK((actual - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("A(I - C) equals C_hat and column sums equal one") {
  testutil::Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testutil::uniform_int(rng, 1, 20);
    const CrossHoldings ch = random_cross(rng, n, 0.3, 0.85);
    const DependencyMatrix dep = dependency_matrix(ch);
    const Mat a = dep.dense();
    const Mat residual =
        a * dep.system() - Mat(Vec(ch.outside_share()).asDiagonal());
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
    const Vec sums = dep.column_sums();
    for (int j = 0; j < n; ++j) CHECK(std::abs(sums[j] - 1.0) < 1e-9);
  }
}

TEST_CASE("factorized and fixed-point solvers agree") {
  testutil::Rng rng(44);
  const CrossHoldings ch = random_cross(rng, 40, 0.1, 0.9);
  const DependencyMatrix lu = dependency_matrix(ch, SolveMethod::SparseFactor);
  const DependencyMatrix fp = dependency_matrix(ch, SolveMethod::FixedPoint);
  Vec b(40);
  for (int i = 0; i < 40; ++i) b[i] = testutil::uniform(rng, 0.0, 100.0);
  const Vec x_lu = lu.apply(b);
  const Vec x_fp = fp.apply(b);
  CHECK((x_lu - x_fp).lpNorm<Eigen::Infinity>() <
        1e-9 * std::max(1.0, x_lu.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("bipartite holdings: shares and the two value forms") {
  const BipartiteHoldings bh = build_bipartite_holdings(
      2, 2, {{0, 0, 30.0}, {1, 0, 10.0}, {1, 1, 5.0}}, Vec::Ones(2) * 2.0);
  CHECK(bh.shares().coeff(0, 0) == doctest::Approx(0.75));
  CHECK(bh.shares().coeff(1, 0) == doctest::Approx(0.25));
  CHECK(bh.shares().coeff(1, 1) == doctest::Approx(1.0));
  // D columns sum to 1 over holders and D * totals reproduces W * 1
  const Vec via_shares = bh.shares() * bh.asset_totals();
  const Vec direct = bh.fund_asset_values();
  CHECK((via_shares - direct).lpNorm<Eigen::Infinity>() < 1e-12);

  CHECK_THROWS_AS(
      build_bipartite_holdings(2, 2, {{0, 0, 1.0}}, Vec::Ones(2)),
      AssetUnheld);
  CHECK_THROWS_AS(
      build_bipartite_holdings(1, 1, {{0, 0, 1.0}}, Vec::Zero(1)),
      NegativePrice);
  CHECK_THROWS_AS(build_bipartite_holdings(1, 1, {{0, 0, 1.0}}, Vec::Ones(2)),
                  DimensionMismatch);
}

TEST_CASE("market values: identity case and the 2-fund chain") {
  {
    const DependencyMatrix dep = dependency_matrix(build_cross_holdings(2, {}));
    const BipartiteHoldings bh = build_bipartite_holdings(
        2, 2, {{0, 0, 10.0}, {1, 1, 20.0}}, Vec::Ones(2));
    const ValueVector v = market_values(dep, bh);
    CHECK(v.outside[0] == doctest::Approx(10.0));
    CHECK(v.outside[1] == doctest::Approx(20.0));
  }
  {
    const DependencyMatrix dep =
        dependency_matrix(build_cross_holdings(2, {{0, 1, 0.5}}));
    const BipartiteHoldings bh = build_bipartite_holdings(
        2, 2, {{0, 0, 10.0}, {1, 1, 10.0}}, Vec::Ones(2));
    const ValueVector v = market_values(dep, bh);
    CHECK(v.outside[0] == doctest::Approx(15.0));
    CHECK(v.outside[1] == doctest::Approx(5.0));
    CHECK(v.outside.sum() == doctest::Approx(20.0));
    CHECK(v.book[0] == doctest::Approx(15.0));
    CHECK(v.book[1] == doctest::Approx(10.0));
  }
}

TEST_CASE("conservation holds on random snapshots") {
  testutil::Rng rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const MarketSnapshot s = testutil::random_market(rng);
    const DependencyMatrix dep = dependency_matrix(s.cross);
    const ValueVector v = market_values(dep, s.holdings);
    const double total = s.holdings.fund_asset_values().sum();
    CHECK(std::abs(v.outside.sum() - total) <= 1e-6 * std::max(1.0, total));
  }
}

TEST_CASE("repricing") {
  const BipartiteHoldings bh = build_bipartite_holdings(
      2, 2, {{0, 0, 10.0}, {0, 1, 4.0}, {1, 1, 6.0}}, Vec::Ones(2) * 2.0);

  const BipartiteHoldings same = repriced_holdings(bh, bh.prices());
  CHECK((Mat(same.values()) - Mat(bh.values())).cwiseAbs().maxCoeff() == 0.0);

  Vec halved = bh.prices();
  halved[1] *= 0.5;
  const BipartiteHoldings half = repriced_holdings(bh, halved);
  CHECK(half.values().coeff(0, 1) == doctest::Approx(2.0));
  CHECK(half.values().coeff(1, 1) == doctest::Approx(3.0));
  CHECK(half.values().coeff(0, 0) == 10.0);  // untouched column
  // shares are price-invariant
  CHECK((Mat(half.shares()) - Mat(bh.shares())).cwiseAbs().maxCoeff() == 0.0);

  // a zero price wipes the asset out
  Vec wiped = bh.prices();
  wiped[0] = 0.0;
  CHECK(repriced_holdings(bh, wiped).values().coeff(0, 0) == 0.0);

  Vec negative = bh.prices();
  negative[0] = -1.0;
  CHECK_THROWS_AS(repriced_holdings(bh, negative), NegativePrice);
  CHECK_THROWS_AS(repriced_holdings(bh, Vec::Ones(3)), DimensionMismatch);
}

TEST_CASE("reprice-then-value equals value-of-repriced (two routes)") {
  testutil::Rng rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const MarketSnapshot s = testutil::random_market(rng);
    const DependencyMatrix dep = dependency_matrix(s.cross);
    Vec new_prices = s.holdings.prices();
    for (int k = 0; k < new_prices.size(); ++k)
      new_prices[k] *= testutil::uniform(rng, 0.2, 1.5);
    const BipartiteHoldings repriced = repriced_holdings(s.holdings, new_prices);
    const Vec route_a = market_values(dep, repriced).outside;
    const Vec route_b = dep.apply(repriced.fund_asset_values());
    CHECK((route_a - route_b).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("homogeneity: power-of-two price scaling is exact") {
  testutil::Rng rng(47);
  const MarketSnapshot s = testutil::random_market(rng);
  const DependencyMatrix dep = dependency_matrix(s.cross);
  const Vec base = market_values(dep, s.holdings).outside;

  const BipartiteHoldings scaled =
      repriced_holdings(s.holdings, Vec(4.0 * s.holdings.prices()));
  const Vec quadrupled = market_values(dep, scaled).outside;
  for (int i = 0; i < base.size(); ++i) CHECK(quadrupled[i] == 4.0 * base[i]);

  const BipartiteHoldings scaled_odd =
      repriced_holdings(s.holdings, Vec(1.7 * s.holdings.prices()));
  const Vec v = market_values(dep, scaled_odd).outside;
  for (int i = 0; i < base.size(); ++i)
    CHECK(v[i] == doctest::Approx(1.7 * base[i]).epsilon(1e-12));
}

TEST_CASE("monotonicity: raising one price never lowers any value") {
  testutil::Rng rng(48);
  for (int trial = 0; trial < 20; ++trial) {
    const MarketSnapshot s = testutil::random_market(rng);
    const DependencyMatrix dep = dependency_matrix(s.cross);
    const Vec base = market_values(dep, s.holdings).outside;
    Vec raised = s.holdings.prices();
    const int k = testutil::uniform_int(rng, 0, static_cast<int>(raised.size()) - 1);
    raised[k] *= 1.5;
    const Vec after =
        market_values(dep, repriced_holdings(s.holdings, raised)).outside;
    for (int i = 0; i < base.size(); ++i) CHECK(after[i] >= base[i] - 1e-12);
  }
}
