#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcgp/environment.hpp"
#include "rcgp/motion.hpp"
#include "rcgp/planner.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

struct RrtParams {
  double step_size = 1.0;
  double goal_bias = 0.1;
  int max_iterations = 20000;
  std::uint64_t seed = 0;

  /// Throws ValidationError.
  void validate() const;

  friend bool operator==(const RrtParams&, const RrtParams&) = default;
};

/// Time-indexed positions; entry t is the position at timestep t.
using ContinuousPath = std::vector<Point2d>;

/// Single-agent RRT in continuous space against the prior agents' padded paths.
/// Tree depth is time; extensions that come within step_size/2 of a prior agent at
/// that time are rejected. Throws IterationBudgetExceeded.
ContinuousPath plan_rrt_single(std::span<const ContinuousPath> prior, const Workspace& workspace,
                               const Point2d& start, const Point2d& goal, const RrtParams& params);

/// Plans every agent in priority order; the only constraint between agents is the
/// vertex-collision proxy. Frames are indexed by agent id.
Motion plan_rrt_all(const PlanningProblem& problem, const Workspace& workspace, const RrtParams& params);

}  // namespace rcgp
