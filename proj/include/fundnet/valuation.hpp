#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseLU>

#include "fundnet/graph.hpp"
#include "fundnet/types.hpp"

namespace fundnet {

struct CrossHoldingEntry {
  std::int32_t investor = 0;
  std::int32_t investee = 0;
  Scalar fraction = 0.0;

  friend bool operator==(const CrossHoldingEntry&,
                         const CrossHoldingEntry&) = default;
};

/// Inter-fund ownership: C(i, j) is the fraction of fund j's equity held by
/// fund i (row = investor, column = investee; the orientation that makes
/// v = W1 + Cv the book-value recursion). The outside share of fund j is
/// 1 - sum_i C(i, j), kept strictly positive so I - C stays invertible.
class CrossHoldings {
 public:
  CrossHoldings() = default;

  int fund_count() const { return n_; }
  const SpMat& fractions() const { return c_; }
  const Vec& outside_share() const { return outside_; }
  Scalar fraction(int investor, int investee) const {
    return c_.coeff(investor, investee);
  }
  /// Entries sorted by (investor, investee) — canonical serialization order.
  std::vector<CrossHoldingEntry> entries() const;

 private:
  friend CrossHoldings build_cross_holdings(int, std::vector<CrossHoldingEntry>,
                                            Scalar);
  int n_ = 0;
  SpMat c_;
  Vec outside_;
};

CrossHoldings build_cross_holdings(int fund_count,
                                   std::vector<CrossHoldingEntry> entries,
                                   Scalar outside_epsilon = 1e-6);

/// Fund x asset position values W plus unit prices, with the derived share
/// matrix D (D(i, k) = w_ik / sum_i' w_i'k, columns summing to 1 over
/// holders). D is fixed at construction: shares of an asset are invariant
/// under repricing, which scales whole columns of W.
class BipartiteHoldings {
 public:
  BipartiteHoldings() = default;

  int fund_count() const { return static_cast<int>(w_.rows()); }
  int asset_count() const { return static_cast<int>(w_.cols()); }
  const SpMat& values() const { return w_; }
  const Vec& prices() const { return prices_; }
  const SpMat& shares() const { return d_; }
  const Vec& asset_totals() const { return totals_; }
  /// W * 1: each fund's gross primitive-asset value.
  Vec fund_asset_values() const;
  std::vector<BipartiteEdge> entries() const;  // sorted by (fund, asset)

 private:
  friend BipartiteHoldings build_bipartite_holdings(int, int,
                                                    std::vector<BipartiteEdge>,
                                                    Vec);
  friend BipartiteHoldings repriced_holdings(const BipartiteHoldings&,
                                             const Vec&);
  SpMat w_;
  SpMat d_;
  Vec prices_;
  Vec totals_;
};

/// Validates positions and prices; every asset must have at least one
/// holder (drop empty assets during ingestion first).
BipartiteHoldings build_bipartite_holdings(int fund_count, int asset_count,
                                           std::vector<BipartiteEdge> positions,
                                           Vec prices);

/// Scales each W column by new_price / old_price; D is unchanged. A zero
/// new price wipes the asset out; negative prices are rejected.
BipartiteHoldings repriced_holdings(const BipartiteHoldings& bh,
                                    const Vec& new_prices);

enum class SolveMethod {
  Auto,          // sparse LU up to the factor limit, fixed point beyond
  SparseFactor,  // LU factorization of I - C
  FixedPoint     // iterate x <- b + Cx to residual 1e-12
};

/// A = C_hat (I - C)^{-1}, held as a factorization (or iterative solver)
/// rather than a materialized matrix. Column sums of A are exactly 1 by
/// construction; this is validated to 1e-9 at build time.
class DependencyMatrix {
 public:
  DependencyMatrix() = default;

  static constexpr int kFactorLimit = 20000;

  int size() const { return static_cast<int>(outside_.size()); }
  const Vec& outside_share() const { return outside_; }

  /// (I - C)^{-1} b: book values from primitive values.
  Vec leontief_solve(const Vec& b) const;
  /// A b = C_hat (I - C)^{-1} b: outside values from primitive values.
  Vec apply(const Vec& b) const;
  /// A^T 1, i.e. the column sums of A (all 1 for a valid system).
  Vec column_sums() const;
  /// Materialized A; intended for small systems and tests.
  Mat dense() const;
  const SpMat& system() const { return i_minus_c_; }

 private:
  friend DependencyMatrix dependency_matrix(const CrossHoldings&, SolveMethod);

  Vec fixed_point_solve(const Vec& b, bool transposed) const;

  // Shared so DependencyMatrix keeps value semantics; solve paths only read
  // the factors. Non-const because Eigen's transpose() view is non-const.
  std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;  // null => fixed point
  SpMat c_;
  SpMat i_minus_c_;
  Vec outside_;
};

DependencyMatrix dependency_matrix(const CrossHoldings& ch,
                                   SolveMethod method = SolveMethod::Auto);

struct ValueVector {
  Vec book;     // v = (I - C)^{-1} W 1
  Vec outside;  // v_dot = C_hat v = A W 1
};

/// Book and outside fund values for the given holdings; checks the
/// conservation identity sum(outside) == sum(W).
ValueVector market_values(const DependencyMatrix& dep,
                          const BipartiteHoldings& bh);

}  // namespace fundnet
