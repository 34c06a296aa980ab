#include "rcgp/validation.hpp"

#include "rcgp/motion.hpp"
#include "rcgp/rigidity.hpp"

namespace rcgp {

double ValidationReport::percent_rigid() const {
  if (steps.empty()) return 0.0;
  return 100.0 * static_cast<double>(steps.size() - nonrigid_steps) / static_cast<double>(steps.size());
}

ValidationReport validate_solution(const TrajectorySet& trajectories, const PlanningProblem& problem) {
  ValidationReport report;
  const PlanningGraph& graph = *problem.graph;
  const std::size_t n = problem.agent_count();
  const int horizon = trajectories.horizon();

  if (trajectories.agents() != n || horizon == 0) {
    report.well_formed = false;
    return report;
  }
  for (const Path& path : trajectories.paths) {
    if (static_cast<int>(path.size()) != horizon) report.well_formed = false;
    for (NodeId v : path)
      if (v < 0 || static_cast<std::size_t>(v) >= graph.size()) report.well_formed = false;
  }
  if (!report.well_formed) return report;

  for (std::size_t a = 0; a < n; ++a) {
    const Path& path = trajectories.paths[a];
    if (path.front() != problem.starts[a] || path.back() != problem.goals[a]) report.endpoints_ok = false;
  }

  std::vector<NodeId> frame(n);
  for (int t = 0; t < horizon; ++t) {
    StepReport step;
    step.time = t;
    for (std::size_t a = 0; a < n; ++a) frame[a] = trajectories.paths[a][static_cast<std::size_t>(t)];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (frame[a] == frame[b]) step.collisions.emplace_back(static_cast<int>(a), static_cast<int>(b));
    if (t > 0) {
      for (std::size_t a = 0; a < n; ++a) {
        const NodeId from = trajectories.paths[a][static_cast<std::size_t>(t - 1)];
        if (from != frame[a] && !graph.adjacent(from, frame[a])) step.invalid_moves.push_back(static_cast<int>(a));
      }
    }
    if (n >= 3) {
      const auto verdict =
          check_network_rigidity(graph.positions(frame), problem.sensing_radius, problem.noise, problem.min_rigidity);
      step.rigidity_eigenvalue = verdict.rigidity_eigenvalue;
      step.rigid = verdict.is_rigid;
    } else {
      step.rigid = true;  // no rigidity constraint below three agents
    }
    report.collisions += step.collisions.size();
    report.invalid_moves += step.invalid_moves.size();
    if (!step.rigid) ++report.nonrigid_steps;
    report.steps.push_back(std::move(step));
  }
  return report;
}

Motion to_motion(const TrajectorySet& trajectories, const PlanningGraph& graph) {
  Motion motion;
  const int horizon = trajectories.horizon();
  for (int t = 0; t < horizon; ++t) {
    std::vector<NodeId> frame;
    for (const Path& path : trajectories.paths) frame.push_back(path[static_cast<std::size_t>(t)]);
    motion.frames.push_back(graph.positions(frame));
  }
  return motion;
}

Motion motion_from_paths(const std::vector<std::vector<Point2d>>& paths) {
  Motion motion;
  std::size_t horizon = 0;
  for (const auto& p : paths) horizon = std::max(horizon, p.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    Configurationd frame(2, static_cast<Eigen::Index>(paths.size()));
    for (std::size_t a = 0; a < paths.size(); ++a)
      frame.col(static_cast<Eigen::Index>(a)) = paths[a][std::min(t, paths[a].size() - 1)];
    motion.frames.push_back(std::move(frame));
  }
  return motion;
}

}  // namespace rcgp
