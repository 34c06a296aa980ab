#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rcgp {

/// Planar node positions, one column per node. Column index is the node id.
template <typename Scalar>
using Configuration = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;

using Configurationd = Configuration<double>;
using Point2d = Point<double>;
using Polygon = std::vector<Point2d>;

/// Index of a node in a PlanningGraph.
using NodeId = std::int32_t;

enum class NoiseKind { Additive, Multiplicative };

/// Range-measurement noise shared by every edge of a network.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Additive;
  double sigma = 0.1;

  /// Exponent applied to the edge length in a Fisher information row.
  int alpha() const { return kind == NoiseKind::Additive ? 1 : 2; }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

}  // namespace rcgp
