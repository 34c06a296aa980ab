#pragma once

// Range-only sensor network localization used to score trajectories.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rcgp/motion.hpp"
#include "rcgp/rigidity.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

struct RangeSample {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double measured = 0.0;
  double truth = 0.0;
};

/// Noisy ranges over the graph's edges. Negative draws clamp to zero.
std::vector<RangeSample> simulate_ranges(const Configurationd& config, const MeasurementGraph& graph,
                                         std::mt19937_64& rng);
std::vector<RangeSample> simulate_ranges(const Configurationd& config, const MeasurementGraph& graph,
                                         std::uint64_t seed);

struct LmOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;
  double initial_damping = 1e-3;
  double min_damping = 1e-12;
  double max_damping = 1e6;
  double divergence_cost = 1e6;
};

struct LocalizationResult {
  Configurationd estimated;
  std::vector<Eigen::Index> anchors;   // sorted
  std::vector<double> per_node_error;  // empty without ground truth; zero at anchors
  double mean_error = 0.0;             // over non-anchor nodes
  double max_error = 0.0;
  double residual = 0.0;  // sum of squared range residuals at the estimate
  int iterations = 0;
  bool converged = false;
};

/// Anchored nonlinear least squares: minimizes sum (|p_i - p_j| - measured)^2 over the
/// non-anchor positions with Levenberg-Marquardt, starting from `initial`.
/// Throws InsufficientAnchors (fewer than 3) and DivergedEstimate.
LocalizationResult localize(std::span<const RangeSample> samples, const std::map<Eigen::Index, Point2d>& anchors,
                            const Configurationd& initial, const Configurationd* truth = nullptr,
                            const LmOptions& options = {});

struct EvaluationSummary {
  double avg_error = 0.0;  // mean over non-anchor nodes, timesteps and seeds
  double max_error = 0.0;  // max over the same
  std::vector<double> seed_max_errors;  // per seed, in seed order
  std::size_t localizations = 0;
  std::size_t failed = 0;              // timesteps whose localization raised
  std::vector<int> flagged_timesteps;  // sorted, unique
};

/// Per timestep and seed: sensing-radius ranges, three random anchors, a truth-perturbed
/// start (scale sigma) and one localization.
EvaluationSummary evaluate_trajectories(const Motion& motion, double sensing_radius, const NoiseModel& noise,
                                        std::span<const std::uint64_t> seeds);

/// Share of timesteps whose full network meets min_rigidity, in percent.
double percent_rigid(const Motion& motion, double sensing_radius, const NoiseModel& noise, double min_rigidity);

/// Full-network rigidity eigenvalue per timestep (0 below three agents).
std::vector<double> rigidity_series(const Motion& motion, double sensing_radius, const NoiseModel& noise);

}  // namespace rcgp
