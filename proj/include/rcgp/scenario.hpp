#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rcgp/environment.hpp"
#include "rcgp/planner.hpp"
#include "rcgp/rrt.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

struct AgentSpec {
  Point2d start = Point2d::Zero();
  Point2d goal = Point2d::Zero();

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

/// A planning experiment as stored in scenario JSON files.
struct Scenario {
  std::string name;
  Workspace workspace;
  double spacing = 1.0;
  double connect_radius = 2.0;
  double sensing_radius = 3.0;
  NoiseModel noise;
  double min_rigidity = 0.1;
  std::vector<AgentSpec> agents;
  std::vector<int> priority_order;  // empty: listed order
  std::optional<int> horizon_cap;
  RrtParams rrt;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses scenario JSON. Throws ParseError (with line or field) and ValidationError.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Checks ranges, obstacles and that every start and goal is a sampled grid node.
void validate_scenario(const Scenario& scenario);

/// Builds the planning problem for an already constructed graph of the scenario.
PlanningProblem make_problem(const Scenario& scenario, std::shared_ptr<const PlanningGraph> graph);

}  // namespace rcgp
