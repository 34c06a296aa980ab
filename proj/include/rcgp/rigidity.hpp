#pragma once

// Fisher information of planar range-measurement networks and the rigidity
// eigenvalue derived from it.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rcgp/errors.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

/// Unordered node pair carrying one range measurement.
struct Edge {
  Eigen::Index i = 0;
  Eigen::Index j = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct MeasurementGraph {
  std::vector<Edge> edges;
  NoiseModel noise;
};

struct RigidityVerdict {
  double rigidity_eigenvalue = 0.0;
  bool is_rigid = false;
  double threshold = 0.0;

  friend bool operator==(const RigidityVerdict&, const RigidityVerdict&) = default;
};

/// Number of rigid-body degrees of freedom of a planar network.
inline constexpr Eigen::Index kTrivialEigenvalues = 3;

/// Relative tolerance under which an eigenvalue is treated as zero.
inline constexpr double kZeroEigenvalueTolerance = 1e-9;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Scalar>
void check_edge(const Configuration<Scalar>& config, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index n = config.cols();
  if (i == j) throw std::invalid_argument("measurement edge joins node " + std::to_string(i) + " to itself");
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::out_of_range("measurement edge (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside a configuration of " + std::to_string(n) + " nodes");
}

/// Scaled direction u = (p_i - p_j) / (sigma * L^alpha). Throws on coincident nodes.
template <typename Scalar>
Point<Scalar> measurement_gradient(const Configuration<Scalar>& config, Eigen::Index i, Eigen::Index j,
                                   const NoiseModel& noise) {
  check_edge(config, i, j);
  const Point<Scalar> delta = config.col(i) - config.col(j);
  const Scalar length = delta.norm();
  if (!(length > Scalar(0)))
    throw CoincidentNodes("nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  Scalar denom = Scalar(noise.sigma) * length;
  if (noise.alpha() == 2) denom *= length;
  return delta / denom;
}

}  // namespace detail

/// One row of the measurement Jacobian A for the range between nodes i and j.
template <typename Scalar>
RowVector<Scalar> fim_row(const Configuration<Scalar>& config, Eigen::Index i, Eigen::Index j,
                          const NoiseModel& noise) {
  const Point<Scalar> u = detail::measurement_gradient(config, i, j, noise);
  RowVector<Scalar> row = RowVector<Scalar>::Zero(2 * config.cols());
  row.template segment<2>(2 * i) = u.transpose();
  row.template segment<2>(2 * j) = -u.transpose();
  return row;
}

/// Stacked measurement Jacobian, one row per edge in edge order.
template <typename Scalar>
Matrix<Scalar> measurement_jacobian(const Configuration<Scalar>& config, const MeasurementGraph& graph) {
  Matrix<Scalar> a(static_cast<Eigen::Index>(graph.edges.size()), 2 * config.cols());
  for (std::size_t k = 0; k < graph.edges.size(); ++k)
    a.row(static_cast<Eigen::Index>(k)) = fim_row(config, graph.edges[k].i, graph.edges[k].j, graph.noise);
  return a;
}

/// F = A^T A, accumulated edge by edge as 2x2 blocks of the rank-one row outer products.
template <typename Scalar>
Matrix<Scalar> build_fim(const Configuration<Scalar>& config, const MeasurementGraph& graph) {
  const Eigen::Index dim = 2 * config.cols();
  Matrix<Scalar> fim = Matrix<Scalar>::Zero(dim, dim);
  for (const Edge& e : graph.edges) {
    const Point<Scalar> u = detail::measurement_gradient(config, e.i, e.j, graph.noise);
    const Eigen::Matrix<Scalar, 2, 2> block = u * u.transpose();
    fim.template block<2, 2>(2 * e.i, 2 * e.i) += block;
    fim.template block<2, 2>(2 * e.j, 2 * e.j) += block;
    fim.template block<2, 2>(2 * e.i, 2 * e.j) -= block;
    fim.template block<2, 2>(2 * e.j, 2 * e.i) -= block;
  }
  return fim;
}

/// Full real spectrum of a symmetric matrix, ascending.
template <typename Derived>
std::vector<typename Derived::Scalar> eigenvalues_symmetric(const Eigen::MatrixBase<Derived>& matrix) {
  using Scalar = typename Derived::Scalar;
  if (matrix.rows() != matrix.cols()) throw NotSymmetric("matrix is not square");
  if (matrix.size() == 0) return {};
  const Scalar scale = std::max(Scalar(1), matrix.cwiseAbs().maxCoeff());
  const Scalar asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= Scalar(1e-9) * scale)) throw NotSymmetric("matrix asymmetry exceeds tolerance");

  const Matrix<Scalar> dense = matrix;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  std::vector<Scalar> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end());
  return out;
}

/// Zero threshold for a spectrum: kZeroEigenvalueTolerance * max(1, lambda_max).
template <typename Scalar>
Scalar zero_tolerance(const std::vector<Scalar>& ascending) {
  const Scalar top = ascending.empty() ? Scalar(0) : ascending.back();
  return Scalar(kZeroEigenvalueTolerance) * std::max(Scalar(1), top);
}

/// First non-trivial (4th smallest) eigenvalue of the network's FIM.
template <typename Scalar>
Scalar rigidity_eigenvalue(const Configuration<Scalar>& config, const MeasurementGraph& graph) {
  if (config.cols() < 3)
    throw TooFewNodes("rigidity needs at least 3 nodes, got " + std::to_string(config.cols()));
  const std::vector<Scalar> spectrum = eigenvalues_symmetric(build_fim(config, graph));
  const Scalar value = spectrum[kTrivialEigenvalues];
  return std::abs(value) <= zero_tolerance(spectrum) ? Scalar(0) : std::max(Scalar(0), value);
}

/// Edges between every node pair no farther apart than sensing_radius.
template <typename Scalar>
std::vector<Edge> sensing_edges(const Configuration<Scalar>& config, double sensing_radius) {
  if (!(sensing_radius > 0)) throw std::invalid_argument("sensing radius must be positive");
  std::vector<Edge> edges;
  const Scalar r2 = Scalar(sensing_radius) * Scalar(sensing_radius);
  for (Eigen::Index i = 0; i < config.cols(); ++i)
    for (Eigen::Index j = i + 1; j < config.cols(); ++j)
      if ((config.col(i) - config.col(j)).squaredNorm() <= r2) edges.push_back({i, j});
  return edges;
}

/// Threshold test. Coincident nodes give a non-rigid verdict with eigenvalue 0.
template <typename Scalar>
RigidityVerdict check_rigidity(const Configuration<Scalar>& config, const MeasurementGraph& graph,
                               double threshold) {
  if (threshold < 0) throw std::invalid_argument("rigidity threshold must be non-negative");
  RigidityVerdict verdict;
  verdict.threshold = threshold;
  try {
    verdict.rigidity_eigenvalue = static_cast<double>(rigidity_eigenvalue(config, graph));
  } catch (const CoincidentNodes&) {
    verdict.rigidity_eigenvalue = 0.0;
  }
  verdict.is_rigid = verdict.rigidity_eigenvalue >= threshold;
  return verdict;
}

/// Rigidity of a configuration measured over its sensing-radius graph.
template <typename Scalar>
RigidityVerdict check_network_rigidity(const Configuration<Scalar>& config, double sensing_radius,
                                       const NoiseModel& noise, double threshold) {
  MeasurementGraph graph{sensing_edges(config, sensing_radius), noise};
  return check_rigidity(config, graph, threshold);
}

}  // namespace rcgp
