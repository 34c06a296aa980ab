#pragma once

// Experiment orchestration: plan a scenario with RCGP or the RRT baseline, score the
// result and tabulate comparisons.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rcgp/motion.hpp"
#include "rcgp/planner.hpp"
#include "rcgp/scenario.hpp"

namespace rcgp {

enum class Algorithm { Rcgp, Rrt };

const char* algorithm_name(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& text);

struct RunOptions {
  std::vector<std::uint64_t> localization_seeds = default_localization_seeds(20);
  bool use_cache = true;
  int max_replans_per_agent = 50;
  std::optional<double> min_rigidity;  // overrides the scenario value
  std::size_t jobs = 1;                // scenarios compared concurrently

  static std::vector<std::uint64_t> default_localization_seeds(std::size_t count);
};

struct MetricsReport {
  std::string scenario;
  Algorithm algorithm = Algorithm::Rcgp;
  std::size_t agents = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> localization_seeds;
  bool success = false;
  std::string failure;
  double planning_time_seconds = 0.0;
  int makespan = 0;
  double avg_localization_error = 0.0;
  double max_localization_error = 0.0;
  double percent_rigid = 0.0;
  std::size_t localization_failures = 0;
  // RCGP only
  std::size_t conflicts = 0;
  std::size_t replans = 0;
  std::size_t rigidity_checks = 0;
  double cache_hit_rate = 0.0;
};

struct RunResult {
  Scenario scenario;  // after overrides
  Motion motion;      // empty on failure
  std::optional<TrajectorySet> trajectories;  // RCGP only
  MetricsReport report;
};

/// Plans, evaluates localization and rigidity. Planning failures are reported, not thrown.
RunResult run_plan(const Scenario& scenario, Algorithm algorithm, std::uint64_t seed, const RunOptions& options = {});

/// Writes trajectories.csv, trajectories.json, report.json and plot/ under `directory`.
void write_run(const RunResult& run, const std::filesystem::path& directory, bool include_timing = true);

std::string report_json(const MetricsReport& report, bool include_timing = true);

struct Stat {
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};
Stat summarize(std::vector<double> values);

struct ComparisonRow {
  std::string scenario;
  Algorithm algorithm = Algorithm::Rcgp;
  std::size_t agents = 0;
  std::size_t runs = 0;
  std::size_t successes = 0;
  Stat planning_time;
  Stat makespan;
  Stat avg_error;
  Stat max_error;
  Stat percent_rigid;
  std::vector<MetricsReport> reports;  // one per run
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // by scenario name, then RCGP before RRT
};

/// One RCGP run and one RRT run per seed for every scenario.
ComparisonTable run_compare(const std::vector<Scenario>& scenarios, const std::vector<std::uint64_t>& seeds,
                            const RunOptions& options = {});

std::string comparison_json(const ComparisonTable& table, bool include_timing = true);
std::string comparison_text(const ComparisonTable& table);

}  // namespace rcgp
