#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rcgp/planner.hpp"

namespace rcgp {

struct StepReport {
  int time = 0;
  double rigidity_eigenvalue = 0.0;
  bool rigid = false;
  std::vector<std::pair<int, int>> collisions;  // agent id pairs sharing a node
  std::vector<int> invalid_moves;               // agents that jumped along a non-edge into this step
};

struct ValidationReport {
  std::vector<StepReport> steps;
  std::size_t collisions = 0;
  std::size_t invalid_moves = 0;
  std::size_t nonrigid_steps = 0;
  bool endpoints_ok = true;  // every path starts at its start and ends at its goal
  bool well_formed = true;   // one equal-length path per agent over valid node ids

  bool pass() const {
    return well_formed && endpoints_ok && collisions == 0 && invalid_moves == 0 && nonrigid_steps == 0;
  }
  double percent_rigid() const;
};

/// Checks vertex collisions, moves and full-network rigidity at every timestep.
ValidationReport validate_solution(const TrajectorySet& trajectories, const PlanningProblem& problem);

}  // namespace rcgp
