#include "fundnet/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fundnet/errors.hpp"

namespace fundnet {

std::vector<CrossHoldingEntry> CrossHoldings::entries() const {
  std::vector<CrossHoldingEntry> out;
  out.reserve(static_cast<size_t>(c_.nonZeros()));
  for (int k = 0; k < c_.outerSize(); ++k)
    for (SpMat::InnerIterator it(c_, k); it; ++it)
      out.push_back({static_cast<std::int32_t>(it.row()),
                     static_cast<std::int32_t>(it.col()), it.value()});
  std::sort(out.begin(), out.end(),
            [](const CrossHoldingEntry& a, const CrossHoldingEntry& b) {
              return std::tie(a.investor, a.investee) <
                     std::tie(b.investor, b.investee);
            });
  return out;
}

CrossHoldings build_cross_holdings(int fund_count,
                                   std::vector<CrossHoldingEntry> entries,
                                   Scalar outside_epsilon) {
  if (fund_count < 0) throw ValidationError("negative fund count");
  std::sort(entries.begin(), entries.end(),
            [](const CrossHoldingEntry& a, const CrossHoldingEntry& b) {
              return std::tie(a.investor, a.investee) <
                     std::tie(b.investor, b.investee);
            });
  for (size_t i = 0; i < entries.size(); ++i) {
    const CrossHoldingEntry& e = entries[i];
    if (e.investor < 0 || e.investor >= fund_count || e.investee < 0 ||
        e.investee >= fund_count)
      throw ValidationError("cross-holding references fund out of range: (" +
                            std::to_string(e.investor) + ", " +
                            std::to_string(e.investee) + ")");
    if (e.investor == e.investee)
      throw SelfHolding("fund " + std::to_string(e.investor) +
                        " holds its own quotas");
    if (e.fraction < 0.0 || e.fraction > 1.0)
      throw FractionOutOfRange("fraction " + std::to_string(e.fraction) +
                               " for pair (" + std::to_string(e.investor) +
                               ", " + std::to_string(e.investee) + ")");
    if (i > 0 && entries[i - 1].investor == e.investor &&
        entries[i - 1].investee == e.investee)
      throw DuplicateEdge("duplicate cross-holding (" +
                          std::to_string(e.investor) + ", " +
                          std::to_string(e.investee) + ")");
  }

  CrossHoldings ch;
  ch.n_ = fund_count;
  ch.c_ = SpMat(fund_count, fund_count);
  std::vector<Triplet> trips;
  trips.reserve(entries.size());
  for (const CrossHoldingEntry& e : entries)
    trips.emplace_back(e.investor, e.investee, e.fraction);
  ch.c_.setFromTriplets(trips.begin(), trips.end());
  ch.c_.makeCompressed();

  ch.outside_ = Vec::Ones(fund_count);
  for (int j = 0; j < fund_count; ++j) {
    Scalar col_sum = 0.0;
    for (SpMat::InnerIterator it(ch.c_, j); it; ++it) col_sum += it.value();
    if (col_sum > 1.0 - outside_epsilon)
      throw FullyInternalized(
          "fund " + std::to_string(j) + " is held " +
          std::to_string(col_sum * 100.0) +
          "% inside the system; outside investors must hold more than " +
          std::to_string(outside_epsilon * 100.0) + "%");
    ch.outside_[j] = 1.0 - col_sum;
  }
  return ch;
}

Vec BipartiteHoldings::fund_asset_values() const {
  return w_ * Vec::Ones(w_.cols());
}

std::vector<BipartiteEdge> BipartiteHoldings::entries() const {
  std::vector<BipartiteEdge> out;
  out.reserve(static_cast<size_t>(w_.nonZeros()));
  for (int k = 0; k < w_.outerSize(); ++k)
    for (SpMat::InnerIterator it(w_, k); it; ++it)
      out.push_back({static_cast<std::int32_t>(it.row()),
                     static_cast<std::int32_t>(it.col()), it.value()});
  std::sort(out.begin(), out.end(),
            [](const BipartiteEdge& a, const BipartiteEdge& b) {
              return std::tie(a.fund, a.asset) < std::tie(b.fund, b.asset);
            });
  return out;
}

BipartiteHoldings build_bipartite_holdings(int fund_count, int asset_count,
                                           std::vector<BipartiteEdge> positions,
                                           Vec prices) {
  if (prices.size() != asset_count)
    throw DimensionMismatch("price vector has " +
                            std::to_string(prices.size()) + " entries for " +
                            std::to_string(asset_count) + " assets");
  for (int k = 0; k < asset_count; ++k) {
    if (!(prices[k] > 0.0))
      throw NegativePrice("asset " + std::to_string(k) +
                          " has non-positive price " +
                          std::to_string(prices[k]));
  }
  std::sort(positions.begin(), positions.end(),
            [](const BipartiteEdge& a, const BipartiteEdge& b) {
              return std::tie(a.fund, a.asset) < std::tie(b.fund, b.asset);
            });
  for (size_t i = 0; i < positions.size(); ++i) {
    const BipartiteEdge& e = positions[i];
    if (e.fund < 0 || e.fund >= fund_count)
      throw ValidationError("position references fund out of range: " +
                            std::to_string(e.fund));
    if (e.asset < 0 || e.asset >= asset_count)
      throw ValidationError("position references asset out of range: " +
                            std::to_string(e.asset));
    if (e.value < 0.0)
      throw NegativeWeight("negative position value for (" +
                           std::to_string(e.fund) + ", " +
                           std::to_string(e.asset) + ")");
    if (i > 0 && positions[i - 1].fund == e.fund &&
        positions[i - 1].asset == e.asset)
      throw DuplicateEdge("duplicate position (" + std::to_string(e.fund) +
                          ", " + std::to_string(e.asset) + ")");
  }

  BipartiteHoldings bh;
  bh.prices_ = std::move(prices);
  bh.w_ = SpMat(fund_count, asset_count);
  {
    std::vector<Triplet> trips;
    trips.reserve(positions.size());
    for (const BipartiteEdge& e : positions)
      trips.emplace_back(e.fund, e.asset, e.value);
    bh.w_.setFromTriplets(trips.begin(), trips.end());
    bh.w_.makeCompressed();
  }

  bh.totals_ = Vec::Zero(asset_count);
  for (int k = 0; k < asset_count; ++k)
    for (SpMat::InnerIterator it(bh.w_, k); it; ++it)
      bh.totals_[k] += it.value();
  for (int k = 0; k < asset_count; ++k) {
    if (!(bh.totals_[k] > 0.0))
      throw AssetUnheld("asset " + std::to_string(k) +
                        " has no holdings; drop unheld assets at ingestion");
  }

  bh.d_ = bh.w_;
  for (int k = 0; k < asset_count; ++k)
    for (SpMat::InnerIterator it(bh.d_, k); it; ++it)
      it.valueRef() /= bh.totals_[k];
  return bh;
}

BipartiteHoldings repriced_holdings(const BipartiteHoldings& bh,
                                    const Vec& new_prices) {
  if (new_prices.size() != bh.asset_count())
    throw DimensionMismatch("new price vector has " +
                            std::to_string(new_prices.size()) +
                            " entries for " + std::to_string(bh.asset_count()) +
                            " assets");
  for (int k = 0; k < new_prices.size(); ++k) {
    if (new_prices[k] < 0.0)
      throw NegativePrice("asset " + std::to_string(k) +
                          " repriced to negative " +
                          std::to_string(new_prices[k]));
  }

  BipartiteHoldings out;
  out.d_ = bh.d_;
  out.prices_ = new_prices;
  out.w_ = bh.w_;
  out.totals_ = Vec::Zero(bh.asset_count());
  for (int k = 0; k < bh.asset_count(); ++k) {
    const Scalar ratio =
        bh.prices_[k] > 0.0 ? new_prices[k] / bh.prices_[k] : 0.0;
    for (SpMat::InnerIterator it(out.w_, k); it; ++it) {
      it.valueRef() *= ratio;
      out.totals_[k] += it.value();
    }
  }
  return out;
}

DependencyMatrix dependency_matrix(const CrossHoldings& ch,
                                   SolveMethod method) {
  DependencyMatrix dep;
  dep.c_ = ch.fractions();
  dep.outside_ = ch.outside_share();
  const int n = ch.fund_count();

  SpMat identity(n, n);
  identity.setIdentity();
  dep.i_minus_c_ = identity - dep.c_;
  dep.i_minus_c_.makeCompressed();

  const bool factorize =
      method == SolveMethod::SparseFactor ||
      (method == SolveMethod::Auto && n <= DependencyMatrix::kFactorLimit);
  if (factorize && n > 0) {
    auto lu = std::make_shared<Eigen::SparseLU<SpMat>>();
    lu->compute(dep.i_minus_c_);
    if (lu->info() != Eigen::Success)
      throw SingularSystem("I - C factorization failed");
    dep.lu_ = std::move(lu);
  }

  // Column sums of A equal 1 exactly for any valid C; 1e-9 catches solver
  // trouble early.
  if (n > 0) {
    const Vec sums = dep.column_sums();
    for (int j = 0; j < n; ++j) {
      if (std::abs(sums[j] - 1.0) > 1e-9)
        throw SingularSystem("dependency column sum " + std::to_string(sums[j]) +
                             " for fund " + std::to_string(j));
    }
  }
  return dep;
}

Vec DependencyMatrix::fixed_point_solve(const Vec& b, bool transposed) const {
  // x <- b + Cx converges because every column of C sums below 1.
  Vec x = b;
  const Scalar scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < 100000; ++it) {
    Vec next = transposed ? Vec(b + c_.transpose() * x) : Vec(b + c_ * x);
    const Scalar residual = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (residual < 1e-12 * scale) return x;
  }
  throw SingularSystem("fixed-point solve did not reach residual 1e-12");
}

Vec DependencyMatrix::leontief_solve(const Vec& b) const {
  if (b.size() != size())
    throw DimensionMismatch("vector size " + std::to_string(b.size()) +
                            " against system of " + std::to_string(size()));
  if (size() == 0) return Vec();
  if (lu_) return lu_->solve(b);
  return fixed_point_solve(b, false);
}

Vec DependencyMatrix::apply(const Vec& b) const {
  return outside_.cwiseProduct(leontief_solve(b));
}

Vec DependencyMatrix::column_sums() const {
  if (size() == 0) return Vec();
  // A^T 1 = (I - C)^{-T} C_hat 1
  if (lu_) return lu_->transpose().solve(outside_);
  return fixed_point_solve(outside_, true);
}

Mat DependencyMatrix::dense() const {
  const int n = size();
  Mat inv(n, n);
  if (lu_) {
    inv = lu_->solve(Mat::Identity(n, n));
  } else {
    for (int j = 0; j < n; ++j)
      inv.col(j) = fixed_point_solve(Vec::Unit(n, j), false);
  }
  return outside_.asDiagonal() * inv;
}

ValueVector market_values(const DependencyMatrix& dep,
                          const BipartiteHoldings& bh) {
  if (bh.fund_count() != dep.size())
    throw DimensionMismatch("holdings cover " +
                            std::to_string(bh.fund_count()) +
                            " funds, dependency matrix " +
                            std::to_string(dep.size()));
  ValueVector v;
  const Vec primitive = bh.fund_asset_values();
  v.book = dep.leontief_solve(primitive);
  v.outside = dep.outside_share().cwiseProduct(v.book);

  const Scalar total_primitive = primitive.sum();
  const Scalar total_outside = v.outside.sum();
  if (std::abs(total_outside - total_primitive) >
      1e-6 * std::max(1.0, std::abs(total_primitive)))
    throw SingularSystem("value conservation violated: outside total " +
                         std::to_string(total_outside) + " vs primitive " +
                         std::to_string(total_primitive));
  return v;
}

}  // namespace fundnet
