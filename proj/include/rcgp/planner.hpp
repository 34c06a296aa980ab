#pragma once

// Rigidity-constrained prioritized planning over a shared planning graph.
//
// Agents are addressed by priority index (0 plans first). Each agent i owns a
// table of node sets per timestep: reachable P, connected C, rigid R and
// valid V, with V = P for i = 0, P ∩ C for i = 1 and P ∩ R otherwise.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "rcgp/environment.hpp"
#include "rcgp/rigidity_cache.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

using Path = std::vector<NodeId>;

/// Nodes within sensing range of each graph node (inclusive, self excluded).
class SensingIndex {
 public:
  SensingIndex(const PlanningGraph& graph, double sensing_radius);
  std::span<const NodeId> in_range(NodeId id) const { return discs_[static_cast<std::size_t>(id)]; }
  double radius() const { return radius_; }

 private:
  double radius_;
  std::vector<std::vector<NodeId>> discs_;
};

struct PlanningProblem {
  std::shared_ptr<const PlanningGraph> graph;
  std::vector<NodeId> starts;  // by agent id
  std::vector<NodeId> goals;   // by agent id
  double sensing_radius = 0.0;
  NoiseModel noise;
  double min_rigidity = 0.1;
  std::vector<int> priority_order;  // priority index -> agent id
  int horizon_cap = 0;
  std::shared_ptr<const SensingIndex> sensing;

  std::size_t agent_count() const { return starts.size(); }
  NodeId start_of(int index) const { return starts[static_cast<std::size_t>(priority_order[static_cast<std::size_t>(index)])]; }
  NodeId goal_of(int index) const { return goals[static_cast<std::size_t>(priority_order[static_cast<std::size_t>(index)])]; }
};

/// Assembles a problem, filling defaults (listed priority, 10 x graph diameter horizon)
/// and checking its invariants. Throws ValidationError.
PlanningProblem make_planning_problem(std::shared_ptr<const PlanningGraph> graph, std::vector<NodeId> starts,
                                      std::vector<NodeId> goals, double sensing_radius, NoiseModel noise,
                                      double min_rigidity, std::vector<int> priority_order = {},
                                      int horizon_cap = 0);

struct Conflict {
  int agent = 0;  // priority index whose path must change
  NodeId node = 0;
  int time = 1;

  friend auto operator<=>(const Conflict&, const Conflict&) = default;
};

/// (time, node) states an agent may not occupy during the current backtracking episode.
using ConflictSet = std::set<std::pair<int, NodeId>>;

struct ValidSetTable {
  int agent = 0;  // priority index
  NodeId start = 0;
  NodeId goal = 0;
  std::vector<std::vector<NodeId>> reachable;  // sorted sets, one per timestep
  std::vector<std::vector<NodeId>> connected;
  std::vector<std::vector<NodeId>> rigid;
  std::vector<std::vector<NodeId>> valid;
  int final_time = -1;  // first t with goal in P

  /// Last constructed timestep.
  int horizon() const { return static_cast<int>(valid.size()) - 1; }
  bool is_valid(NodeId node, int t) const;
};

struct PlannerOptions {
  bool use_cache = true;
  int max_replans_per_agent = 50;
};

struct PlannerStats {
  std::size_t rigidity_checks = 0;
  std::size_t conflicts = 0;
  std::size_t replans = 0;
  std::size_t backtracks = 0;
  std::vector<Conflict> conflict_log;
};

/// Shared mutable state of one planning run: the rigidity cache and counters.
struct PlanningContext {
  PlannerOptions options;
  RigidityCache cache;
  PlannerStats stats;
};

/// Node of prior agent `index` at time t; agents park at their last node.
NodeId node_at(std::span<const Path> prior, std::size_t index, int t);

/// Nodes within sensing range of at least min(2, i) prior agents, minus occupied nodes.
std::vector<NodeId> connected_states(int i, std::span<const NodeId> prior_positions, const PlanningProblem& problem);

/// Candidates at which agents 0..i-1 plus the candidate meet the minimum rigidity.
std::vector<NodeId> rigid_states(std::span<const NodeId> candidates, std::span<const NodeId> prior_positions,
                                 const PlanningProblem& problem, PlanningContext* context = nullptr);

/// Builds the valid-set table of agent i against the (parked) trajectories of agents 0..i-1.
/// Returns a Conflict against agent i-1 if some valid set empties. Throws HorizonExceeded
/// when the goal cannot be reached within the problem's horizon cap, and NoPath if the first
/// agent's valid set empties.
std::variant<ValidSetTable, Conflict> construct_valid_sets(int i, std::span<const Path> prior,
                                                           const ConflictSet& conflicts,
                                                           const PlanningProblem& problem,
                                                           PlanningContext* context = nullptr);

/// Time-expanded A* restricted to the valid sets. Returns the unpadded path start..goal;
/// the goal stays valid from arrival to the end of the table. Throws NoPath.
Path plan_single(const ValidSetTable& table, const PlanningProblem& problem);

/// Per-agent paths (indexed by agent id) padded to a common horizon.
struct TrajectorySet {
  std::vector<Path> paths;

  int horizon() const { return paths.empty() ? 0 : static_cast<int>(paths.front().size()); }
  std::size_t agents() const { return paths.size(); }
};

/// Pads every path with its final node up to the longest length.
TrajectorySet pad_paths(std::vector<Path> paths);

/// Runs the full priority loop with conflicts and backtracking. Throws PlanningFailed.
TrajectorySet plan_all(const PlanningProblem& problem, PlanningContext& context);
TrajectorySet plan_all(const PlanningProblem& problem);

}  // namespace rcgp
