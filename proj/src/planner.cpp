#include "rcgp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <queue>
#include <string>

#include "rcgp/errors.hpp"
#include "rcgp/rigidity.hpp"
#include "rcgp/validation.hpp"

namespace rcgp {

namespace {

bool contains(const std::vector<NodeId>& sorted, NodeId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

std::vector<NodeId> intersect(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<NodeId> positions_at(std::span<const Path> prior, int t) {
  std::vector<NodeId> out;
  out.reserve(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) out.push_back(node_at(prior, k, t));
  return out;
}

void check_node(const PlanningGraph& graph, NodeId id, const char* what) {
  if (id < 0 || static_cast<std::size_t>(id) >= graph.size())
    throw ValidationError(std::string(what) + " node id " + std::to_string(id) + " is not a graph node");
}

}  // namespace

SensingIndex::SensingIndex(const PlanningGraph& graph, double sensing_radius) : radius_(sensing_radius) {
  if (!(sensing_radius > 0)) throw std::invalid_argument("sensing radius must be positive");
  const double r2 = sensing_radius * sensing_radius;
  discs_.resize(graph.size());
  const auto& nodes = graph.nodes();
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if ((nodes[a] - nodes[b]).squaredNorm() <= r2) {
        discs_[a].push_back(static_cast<NodeId>(b));
        discs_[b].push_back(static_cast<NodeId>(a));
      }
    }
  }
  for (auto& disc : discs_) std::sort(disc.begin(), disc.end());
}

PlanningProblem make_planning_problem(std::shared_ptr<const PlanningGraph> graph, std::vector<NodeId> starts,
                                      std::vector<NodeId> goals, double sensing_radius, NoiseModel noise,
                                      double min_rigidity, std::vector<int> priority_order, int horizon_cap) {
  if (!graph) throw ValidationError("planning problem needs a planning graph");
  if (starts.empty()) throw ValidationError("planning problem needs at least one agent");
  if (starts.size() != goals.size()) throw ValidationError("starts and goals differ in length");
  if (!(sensing_radius > 0)) throw ValidationError("sensing_radius must be positive");
  if (!(noise.sigma > 0)) throw ValidationError("noise sigma must be positive");
  if (!(min_rigidity >= 0)) throw ValidationError("min_rigidity must be non-negative");

  const std::size_t n = starts.size();
  for (std::size_t a = 0; a < n; ++a) {
    check_node(*graph, starts[a], "start");
    check_node(*graph, goals[a], "goal");
  }
  for (const auto* ids : {&starts, &goals}) {
    std::vector<NodeId> sorted = *ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError(ids == &starts ? "two agents share a start node" : "two agents share a goal node");
  }

  if (priority_order.empty()) {
    priority_order.resize(n);
    for (std::size_t a = 0; a < n; ++a) priority_order[a] = static_cast<int>(a);
  }
  {
    std::vector<int> sorted = priority_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t a = 0; a < n; ++a)
      if (sorted.size() != n || sorted[a] != static_cast<int>(a))
        throw ValidationError("priority_order is not a permutation of the agent ids");
  }

  if (n >= 3) {
    const auto verdict = check_network_rigidity(graph->positions(starts), sensing_radius, noise, min_rigidity);
    if (!verdict.is_rigid)
      throw ValidationError("start configuration has rigidity " + std::to_string(verdict.rigidity_eigenvalue) +
                            " below the minimum " + std::to_string(min_rigidity));
  }
  if (horizon_cap <= 0) horizon_cap = std::max(1, 10 * graph->diameter_steps());

  PlanningProblem problem;
  problem.sensing = std::make_shared<SensingIndex>(*graph, sensing_radius);
  problem.graph = std::move(graph);
  problem.starts = std::move(starts);
  problem.goals = std::move(goals);
  problem.sensing_radius = sensing_radius;
  problem.noise = noise;
  problem.min_rigidity = min_rigidity;
  problem.priority_order = std::move(priority_order);
  problem.horizon_cap = horizon_cap;
  return problem;
}

bool ValidSetTable::is_valid(NodeId node, int t) const {
  if (t < 0 || t > horizon()) return false;
  return contains(valid[static_cast<std::size_t>(t)], node);
}

NodeId node_at(std::span<const Path> prior, std::size_t index, int t) {
  const Path& path = prior[index];
  const auto last = static_cast<int>(path.size()) - 1;
  return path[static_cast<std::size_t>(std::min(t, last))];
}

std::vector<NodeId> connected_states(int i, std::span<const NodeId> prior_positions, const PlanningProblem& problem) {
  if (prior_positions.empty()) return {};
  const int required = std::min(2, i);
  std::vector<NodeId> seen;
  for (NodeId p : prior_positions) {
    const auto disc = problem.sensing->in_range(p);
    seen.insert(seen.end(), disc.begin(), disc.end());
  }
  std::sort(seen.begin(), seen.end());
  std::vector<NodeId> occupied(prior_positions.begin(), prior_positions.end());
  std::sort(occupied.begin(), occupied.end());

  std::vector<NodeId> out;
  for (std::size_t k = 0; k < seen.size();) {
    std::size_t run = k;
    while (run < seen.size() && seen[run] == seen[k]) ++run;
    if (static_cast<int>(run - k) >= required && !contains(occupied, seen[k])) out.push_back(seen[k]);
    k = run;
  }
  return out;
}

std::vector<NodeId> rigid_states(std::span<const NodeId> candidates, std::span<const NodeId> prior_positions,
                                 const PlanningProblem& problem, PlanningContext* context) {
  std::vector<NodeId> out;
  std::vector<NodeId> ids(prior_positions.begin(), prior_positions.end());
  ids.push_back(0);
  for (NodeId c : candidates) {
    ids.back() = c;
    const RigidityKey key(ids, problem.min_rigidity, problem.sensing_radius, problem.noise);
    // evaluate in key order so cached and uncached answers agree bit for bit
    auto compute = [&] {
      return check_network_rigidity(problem.graph->positions(key.nodes), problem.sensing_radius, problem.noise,
                                    problem.min_rigidity);
    };
    RigidityVerdict verdict;
    if (context != nullptr) {
      ++context->stats.rigidity_checks;
      verdict = context->options.use_cache ? context->cache.cached_check(key, compute) : compute();
    } else {
      verdict = compute();
    }
    if (verdict.is_rigid) out.push_back(c);
  }
  return out;
}

std::variant<ValidSetTable, Conflict> construct_valid_sets(int i, std::span<const Path> prior,
                                                           const ConflictSet& conflicts,
                                                           const PlanningProblem& problem,
                                                           PlanningContext* context) {
  if (i < 0 || static_cast<std::size_t>(i) >= problem.agent_count())
    throw std::out_of_range("agent index out of range");
  if (static_cast<int>(prior.size()) != i) throw std::invalid_argument("prior trajectories must cover agents 0..i-1");
  const PlanningGraph& graph = *problem.graph;

  ValidSetTable table;
  table.agent = i;
  table.start = problem.start_of(i);
  table.goal = problem.goal_of(i);
  table.reachable.push_back({table.start});
  table.connected.emplace_back();
  table.rigid.emplace_back();
  table.valid.push_back({table.start});

  // Past this time every prior agent is parked and no conflict applies, so V only grows.
  int settled = 0;
  for (const Path& path : prior) settled = std::max(settled, static_cast<int>(path.size()) - 1);
  for (const auto& [time, node] : conflicts) settled = std::max(settled, time);

  for (int t = 0;; ++t) {
    const auto& valid_now = table.valid.back();
    if (table.final_time < 0 && contains(table.reachable.back(), table.goal)) table.final_time = t;
    if (table.final_time >= 0 && t >= settled && contains(valid_now, table.goal)) break;
    if (t >= problem.horizon_cap)
      throw HorizonExceeded("agent " + std::to_string(i) + " cannot reach its goal within " +
                            std::to_string(problem.horizon_cap) + " steps");

    const int next = t + 1;
    std::vector<NodeId> occupied = positions_at(prior, next);
    std::sort(occupied.begin(), occupied.end());

    std::vector<NodeId> reach = valid_now;
    for (NodeId v : valid_now) {
      const auto adj = graph.neighbors(v);
      reach.insert(reach.end(), adj.begin(), adj.end());
    }
    std::sort(reach.begin(), reach.end());
    reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
    std::erase_if(reach, [&](NodeId v) { return contains(occupied, v) || conflicts.contains({next, v}); });

    std::vector<NodeId> connected;
    std::vector<NodeId> rigid;
    std::vector<NodeId> valid;
    if (i == 0) {
      valid = reach;
    } else {
      const std::vector<NodeId> prior_now = positions_at(prior, next);
      connected = connected_states(i, prior_now, problem);
      const std::vector<NodeId> candidates = intersect(reach, connected);
      if (i == 1) {
        valid = candidates;
      } else {
        rigid = rigid_states(candidates, prior_now, problem, context);
        valid = rigid;  // already a subset of P
      }
    }

    if (valid.empty()) {
      if (i == 0) throw NoPath("first agent has no valid state at t=" + std::to_string(next));
      return Conflict{i - 1, node_at(prior, static_cast<std::size_t>(i - 1), next), next};
    }
    table.reachable.push_back(std::move(reach));
    table.connected.push_back(std::move(connected));
    table.rigid.push_back(std::move(rigid));
    table.valid.push_back(std::move(valid));
  }
  return table;
}

Path plan_single(const ValidSetTable& table, const PlanningProblem& problem) {
  const PlanningGraph& graph = *problem.graph;
  const auto n = graph.size();
  const int last = table.horizon();
  if (last < 0 || !table.is_valid(table.start, 0)) throw NoPath("start state is not valid");

  const auto state = [n](NodeId node, int t) { return static_cast<std::size_t>(t) * n + static_cast<std::size_t>(node); };
  std::vector<char> member(static_cast<std::size_t>(last + 1) * n, 0);
  for (int t = 0; t <= last; ++t)
    for (NodeId v : table.valid[static_cast<std::size_t>(t)]) member[state(v, t)] = 1;

  // goal_ok[t]: parking at the goal from t through the end of the table stays valid
  std::vector<char> goal_ok(static_cast<std::size_t>(last + 2), 0);
  goal_ok[static_cast<std::size_t>(last + 1)] = 1;
  for (int t = last; t >= 0; --t)
    goal_ok[static_cast<std::size_t>(t)] = goal_ok[static_cast<std::size_t>(t + 1)] && member[state(table.goal, t)];

  const Point2d& goal_pos = graph.position(table.goal);
  const double radius = graph.connect_radius();
  const auto heuristic = [&](NodeId v) { return (graph.position(v) - goal_pos).norm() / radius; };

  struct Entry {
    double f;
    double h;
    NodeId node;
    int t;
    std::uint64_t seq;
  };
  const auto worse = [](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.node != b.node) return a.node > b.node;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);
  std::vector<std::int64_t> parent(member.size(), -2);  // -2 unseen, -1 root
  std::vector<char> closed(member.size(), 0);
  std::uint64_t seq = 0;

  parent[state(table.start, 0)] = -1;
  const double h0 = heuristic(table.start);
  open.push({h0, h0, table.start, 0, seq++});

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const std::size_t s = state(top.node, top.t);
    if (closed[s]) continue;
    closed[s] = 1;
    if (top.node == table.goal && goal_ok[static_cast<std::size_t>(top.t)]) {
      Path path(static_cast<std::size_t>(top.t + 1));
      std::int64_t cur = static_cast<std::int64_t>(s);
      for (int t = top.t; t >= 0; --t) {
        path[static_cast<std::size_t>(t)] = static_cast<NodeId>(static_cast<std::size_t>(cur) % n);
        cur = parent[static_cast<std::size_t>(cur)];
      }
      return path;
    }
    if (top.t == last) continue;
    const int next = top.t + 1;
    auto relax = [&](NodeId v) {
      const std::size_t ns = state(v, next);
      if (!member[ns] || closed[ns] || parent[ns] != -2) return;
      parent[ns] = static_cast<std::int64_t>(s);
      const double h = heuristic(v);
      open.push({next + h, h, v, next, seq++});
    };
    relax(top.node);
    for (NodeId v : graph.neighbors(top.node)) relax(v);
  }
  throw NoPath("agent " + std::to_string(table.agent) + " has no path to its goal within the valid sets");
}

TrajectorySet pad_paths(std::vector<Path> paths) {
  std::size_t horizon = 0;
  for (const Path& p : paths) horizon = std::max(horizon, p.size());
  for (Path& p : paths) {
    if (p.empty()) throw std::invalid_argument("cannot pad an empty path");
    p.resize(horizon, p.back());
  }
  return TrajectorySet{std::move(paths)};
}

TrajectorySet plan_all(const PlanningProblem& problem) {
  PlanningContext context;
  return plan_all(problem, context);
}

TrajectorySet plan_all(const PlanningProblem& problem, PlanningContext& context) {
  const int n = static_cast<int>(problem.agent_count());
  PlannerStats& stats = context.stats;
  std::vector<Path> paths(static_cast<std::size_t>(n));
  std::vector<ConflictSet> conflicts(static_cast<std::size_t>(n));
  std::vector<std::optional<ValidSetTable>> tables(static_cast<std::size_t>(n));
  std::vector<int> attempts(static_cast<std::size_t>(n), 0);

  const auto record = [&](const Conflict& c) {
    conflicts[static_cast<std::size_t>(c.agent)].insert({c.time, c.node});
    ++stats.conflicts;
    stats.conflict_log.push_back(c);
  };
  const auto give_up = [&](int agent, const std::string& why) {
    throw PlanningFailed("planning failed at agent " + std::to_string(agent) + " after " +
                             std::to_string(stats.conflicts) + " conflicts: " + why,
                         agent, static_cast<int>(stats.conflicts));
  };
  const auto prefix = [&](int count) { return std::span<const Path>(paths.data(), static_cast<std::size_t>(count)); };

  int i = 0;
  while (i < n) {
    const auto slot = static_cast<std::size_t>(i);
    if (attempts[slot] > context.options.max_replans_per_agent) give_up(i, "replan budget exhausted");
    if (attempts[slot] > 0) ++stats.replans;
    ++attempts[slot];

    std::optional<Path> path;
    if (!tables[slot]) {
      try {
        auto built = construct_valid_sets(i, prefix(i), conflicts[slot], problem, &context);
        if (auto* conflict = std::get_if<Conflict>(&built))
          record(*conflict);
        else
          tables[slot] = std::move(std::get<ValidSetTable>(built));
      } catch (const HorizonExceeded&) {
      } catch (const NoPath&) {
      }
    }
    if (tables[slot]) {
      try {
        path = plan_single(*tables[slot], problem);
      } catch (const NoPath&) {
      }
    }
    if (!path) {
      tables[slot].reset();
      ++stats.backtracks;
      if (--i < 0) give_up(0, "backtracked past the first agent");
      tables[static_cast<std::size_t>(i)].reset();
      continue;
    }

    paths[slot] = std::move(*path);
    for (int k = i + 1; k < n; ++k) {
      conflicts[static_cast<std::size_t>(k)].clear();
      tables[static_cast<std::size_t>(k)].reset();
    }
    if (i + 1 < n) {
      try {
        auto probe = construct_valid_sets(i + 1, prefix(i + 1), {}, problem, &context);
        if (auto* conflict = std::get_if<Conflict>(&probe)) {
          record(*conflict);
          tables[slot].reset();
          continue;
        }
        tables[slot + 1] = std::move(std::get<ValidSetTable>(probe));
      } catch (const HorizonExceeded&) {
      } catch (const NoPath&) {
      }
    }
    ++i;
  }

  std::vector<Path> by_agent(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    by_agent[static_cast<std::size_t>(problem.priority_order[static_cast<std::size_t>(k)])] =
        std::move(paths[static_cast<std::size_t>(k)]);
  TrajectorySet result = pad_paths(std::move(by_agent));

  const ValidationReport report = validate_solution(result, problem);
  if (!report.pass()) give_up(n - 1, "full-network validation rejected the plan");
  return result;
}

}  // namespace rcgp
