#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fundnet {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<Scalar>;
using Triplet = Eigen::Triplet<Scalar>;

enum class NodeKind { Fund, Asset };

/// Dense node index within one kind. External string identifiers live in
/// the ingestion symbol tables; all numeric code works on these indices.
struct NodeId {
  std::int32_t index = 0;
  NodeKind kind = NodeKind::Fund;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

}  // namespace fundnet
