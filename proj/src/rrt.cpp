#include "rcgp/rrt.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>
#include <string>

#include "rcgp/errors.hpp"

namespace rcgp {

namespace {

struct TreeNode {
  Point2d position;
  int parent;
  int depth;
};

Point2d prior_at(const ContinuousPath& path, int t) {
  return path[static_cast<std::size_t>(std::min<int>(t, static_cast<int>(path.size()) - 1))];
}

bool collides(std::span<const ContinuousPath> prior, const Point2d& p, int t, double clearance) {
  const double c2 = clearance * clearance;
  return std::any_of(prior.begin(), prior.end(),
                     [&](const ContinuousPath& other) { return (prior_at(other, t) - p).squaredNorm() <= c2; });
}

/// Parking at p from time t onwards never meets a prior agent.
bool can_park(std::span<const ContinuousPath> prior, const Point2d& p, int t, double clearance) {
  int last = t;
  for (const auto& other : prior) last = std::max(last, static_cast<int>(other.size()) - 1);
  for (int s = t; s <= last; ++s)
    if (collides(prior, p, s, clearance)) return false;
  return true;
}

ContinuousPath unwind(const std::vector<TreeNode>& tree, int leaf) {
  ContinuousPath path;
  for (int k = leaf; k >= 0; k = tree[static_cast<std::size_t>(k)].parent)
    path.push_back(tree[static_cast<std::size_t>(k)].position);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

void RrtParams::validate() const {
  if (!(step_size > 0)) throw ValidationError("rrt step_size must be positive");
  if (!(goal_bias >= 0 && goal_bias <= 1)) throw ValidationError("rrt goal_bias must lie in [0, 1]");
  if (max_iterations < 1) throw ValidationError("rrt max_iterations must be at least 1");
}

ContinuousPath plan_rrt_single(std::span<const ContinuousPath> prior, const Workspace& workspace,
                               const Point2d& start, const Point2d& goal, const RrtParams& params) {
  params.validate();
  const double step = params.step_size;
  const double clearance = 0.5 * step;
  if (start == goal && can_park(prior, goal, 0, clearance)) return {start};

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> xs(workspace.bounds.x_min, workspace.bounds.x_max);
  std::uniform_real_distribution<double> ys(workspace.bounds.y_min, workspace.bounds.y_max);

  std::vector<TreeNode> tree{{start, -1, 0}};
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    Point2d sample = goal;
    if (unit(rng) >= params.goal_bias) {
      const double x = xs(rng);
      sample = Point2d(x, ys(rng));
    }

    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tree.size(); ++k) {
      const double d = (tree[k].position - sample).squaredNorm();
      if (d < best) {
        best = d;
        nearest = static_cast<int>(k);
      }
    }
    const TreeNode& from = tree[static_cast<std::size_t>(nearest)];
    const Point2d delta = sample - from.position;
    const double dist = delta.norm();
    if (dist == 0.0) continue;
    const Point2d next = dist <= step ? sample : Point2d(from.position + delta * (step / dist));
    const int depth = from.depth + 1;
    if (!workspace.segment_free(from.position, next)) continue;
    if (collides(prior, next, depth, clearance)) continue;
    tree.push_back({next, nearest, depth});
    const int leaf = static_cast<int>(tree.size()) - 1;

    if (next == goal) {
      if (can_park(prior, goal, depth, clearance)) return unwind(tree, leaf);
      continue;
    }
    if ((goal - next).norm() <= step && workspace.segment_free(next, goal) &&
        can_park(prior, goal, depth + 1, clearance)) {
      ContinuousPath path = unwind(tree, leaf);
      path.push_back(goal);
      return path;
    }
  }
  throw IterationBudgetExceeded("rrt exhausted " + std::to_string(params.max_iterations) + " iterations");
}

Motion plan_rrt_all(const PlanningProblem& problem, const Workspace& workspace, const RrtParams& params) {
  const std::size_t n = problem.agent_count();
  const PlanningGraph& graph = *problem.graph;
  std::vector<ContinuousPath> planned;
  std::vector<ContinuousPath> by_agent(n);
  for (std::size_t k = 0; k < n; ++k) {
    RrtParams agent_params = params;
    std::seed_seq seq{static_cast<std::uint32_t>(params.seed), static_cast<std::uint32_t>(params.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    agent_params.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];

    const int index = static_cast<int>(k);
    ContinuousPath path = plan_rrt_single(planned, workspace, graph.position(problem.start_of(index)),
                                          graph.position(problem.goal_of(index)), agent_params);
    by_agent[static_cast<std::size_t>(problem.priority_order[k])] = path;
    planned.push_back(std::move(path));
  }
  return motion_from_paths(by_agent);
}

}  // namespace rcgp
