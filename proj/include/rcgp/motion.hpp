#pragma once

#include <cstddef>
#include <vector>

#include "rcgp/types.hpp"

namespace rcgp {

class PlanningGraph;
struct TrajectorySet;

/// Continuous agent positions over a common horizon; frames[t].col(agent).
struct Motion {
  std::vector<Configurationd> frames;

  int horizon() const { return static_cast<int>(frames.size()); }
  std::size_t agents() const { return frames.empty() ? 0 : static_cast<std::size_t>(frames.front().cols()); }
  /// Timesteps until the last agent stops moving.
  int makespan() const { return horizon() - 1; }
};

Motion to_motion(const TrajectorySet& trajectories, const PlanningGraph& graph);

/// Builds frames from per-agent position lists, padding each agent with its last position.
Motion motion_from_paths(const std::vector<std::vector<Point2d>>& paths);

}  // namespace rcgp
