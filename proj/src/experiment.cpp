#include "rcgp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rcgp/errors.hpp"
#include "rcgp/localization.hpp"
#include "rcgp/rrt.hpp"
#include "rcgp/trajectory_io.hpp"

namespace rcgp {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ordered_json stat_json(const Stat& s) { return {{"median", s.median}, {"min", s.min}, {"max", s.max}}; }

ordered_json report_object(const MetricsReport& r, bool include_timing) {
  ordered_json j;
  j["scenario"] = r.scenario;
  j["algorithm"] = algorithm_name(r.algorithm);
  j["agents"] = r.agents;
  j["seed"] = r.seed;
  j["localization_seeds"] = r.localization_seeds;
  j["success"] = r.success;
  if (!r.success) j["failure"] = r.failure;
  if (include_timing) j["planning_time_seconds"] = r.planning_time_seconds;
  j["makespan"] = r.makespan;
  j["avg_localization_error"] = r.avg_localization_error;
  j["max_localization_error"] = r.max_localization_error;
  j["percent_rigid"] = r.percent_rigid;
  j["localization_failures"] = r.localization_failures;
  if (r.algorithm == Algorithm::Rcgp) {
    j["conflicts"] = r.conflicts;
    j["replans"] = r.replans;
    j["rigidity_checks"] = r.rigidity_checks;
    j["cache_hit_rate"] = r.cache_hit_rate;
  }
  return j;
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

const char* algorithm_name(Algorithm algorithm) { return algorithm == Algorithm::Rcgp ? "rcgp" : "rrt"; }

Algorithm parse_algorithm(const std::string& text) {
  if (text == "rcgp") return Algorithm::Rcgp;
  if (text == "rrt") return Algorithm::Rrt;
  throw ValidationError("unknown algorithm '" + text + "' (expected rcgp or rrt)");
}

std::vector<std::uint64_t> RunOptions::default_localization_seeds(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t k = 0; k < count; ++k) seeds[k] = k;
  return seeds;
}

RunResult run_plan(const Scenario& input, Algorithm algorithm, std::uint64_t seed, const RunOptions& options) {
  RunResult run;
  run.scenario = input;
  if (options.min_rigidity) run.scenario.min_rigidity = *options.min_rigidity;
  validate_scenario(run.scenario);
  const Scenario& scenario = run.scenario;

  MetricsReport& report = run.report;
  report.scenario = scenario.name;
  report.algorithm = algorithm;
  report.agents = scenario.agents.size();
  report.seed = seed;
  report.localization_seeds = options.localization_seeds;

  const auto start = Clock::now();
  try {
    if (algorithm == Algorithm::Rcgp) {
      auto graph = std::make_shared<const PlanningGraph>(
          build_planning_graph(scenario.workspace, scenario.spacing, scenario.connect_radius));
      const PlanningProblem problem = make_problem(scenario, graph);
      PlanningContext context;
      context.options.use_cache = options.use_cache;
      context.options.max_replans_per_agent = options.max_replans_per_agent;
      try {
        run.trajectories = plan_all(problem, context);
      } catch (const PlanningFailed&) {
        report.conflicts = context.stats.conflicts;
        report.replans = context.stats.replans;
        report.rigidity_checks = context.stats.rigidity_checks;
        report.cache_hit_rate = context.cache.hit_rate();
        throw;
      }
      report.conflicts = context.stats.conflicts;
      report.replans = context.stats.replans;
      report.rigidity_checks = context.stats.rigidity_checks;
      report.cache_hit_rate = context.cache.hit_rate();
      run.motion = to_motion(*run.trajectories, *graph);
    } else {
      // the baseline ignores graph edges; grid nodes only resolve starts and goals
      std::vector<Point2d> nodes = sample_grid(scenario.workspace, scenario.spacing);
      const std::size_t count = nodes.size();
      auto graph = std::make_shared<const PlanningGraph>(std::move(nodes), std::vector<std::vector<NodeId>>(count),
                                                         scenario.spacing, scenario.connect_radius,
                                                         scenario.workspace.bounds);
      const PlanningProblem problem = make_problem(scenario, graph);
      RrtParams params = scenario.rrt;
      params.seed = seed;
      run.motion = plan_rrt_all(problem, scenario.workspace, params);
    }
    report.planning_time_seconds = seconds_since(start);
    report.success = true;
  } catch (const PlanningFailed& e) {
    report.planning_time_seconds = seconds_since(start);
    report.failure = e.what();
    return run;
  } catch (const IterationBudgetExceeded& e) {
    report.planning_time_seconds = seconds_since(start);
    report.failure = e.what();
    return run;
  }

  report.makespan = run.motion.makespan();
  report.percent_rigid =
      percent_rigid(run.motion, scenario.sensing_radius, scenario.noise, scenario.min_rigidity);
  const EvaluationSummary eval =
      evaluate_trajectories(run.motion, scenario.sensing_radius, scenario.noise, options.localization_seeds);
  report.avg_localization_error = eval.avg_error;
  report.max_localization_error = eval.max_error;
  report.localization_failures = eval.failed;
  return run;
}

std::string report_json(const MetricsReport& report, bool include_timing) {
  return report_object(report, include_timing).dump(2) + "\n";
}

void write_run(const RunResult& run, const std::filesystem::path& directory, bool include_timing) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
  {
    std::ofstream out(directory / "report.json");
    if (!out) throw IoError("cannot write " + (directory / "report.json").string());
    out << report_json(run.report, include_timing);
  }
  if (!run.report.success) return;
  export_trajectories(run.motion, directory / "trajectories.csv", TrajectoryFormat::Csv);
  export_trajectories(run.motion, directory / "trajectories.json", TrajectoryFormat::Json);
  emit_plot_data(run.motion, run.scenario.sensing_radius, run.scenario.noise, directory / "plot");
}

Stat summarize(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  const double median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return {median, values.front(), values.back()};
}

namespace {

std::vector<ComparisonRow> compare_one(const Scenario& scenario, const std::vector<std::uint64_t>& seeds,
                                       const RunOptions& options) {
  std::vector<ComparisonRow> rows;
  for (Algorithm algorithm : {Algorithm::Rcgp, Algorithm::Rrt}) {
    ComparisonRow row;
    row.scenario = scenario.name;
    row.algorithm = algorithm;
    row.agents = scenario.agents.size();
    // the graph planner is deterministic, so a single run stands for every seed
    const std::vector<std::uint64_t> run_seeds =
        algorithm == Algorithm::Rcgp ? std::vector<std::uint64_t>{seeds.front()} : seeds;
    std::vector<double> time, makespan, avg, max, rigid;
    for (std::uint64_t seed : run_seeds) {
      RunResult run = run_plan(scenario, algorithm, seed, options);
      ++row.runs;
      if (run.report.success) {
        ++row.successes;
        time.push_back(run.report.planning_time_seconds);
        makespan.push_back(run.report.makespan);
        avg.push_back(run.report.avg_localization_error);
        max.push_back(run.report.max_localization_error);
        rigid.push_back(run.report.percent_rigid);
      }
      row.reports.push_back(std::move(run.report));
    }
    row.planning_time = summarize(time);
    row.makespan = summarize(makespan);
    row.avg_error = summarize(avg);
    row.max_error = summarize(max);
    row.percent_rigid = summarize(rigid);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ComparisonTable run_compare(const std::vector<Scenario>& scenarios, const std::vector<std::uint64_t>& seeds,
                            const RunOptions& options) {
  if (seeds.empty()) throw ValidationError("compare needs at least one seed");
  std::vector<const Scenario*> ordered;
  for (const Scenario& s : scenarios) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Scenario* a, const Scenario* b) { return a->name < b->name; });

  std::vector<std::vector<ComparisonRow>> results(ordered.size());
  std::vector<std::exception_ptr> errors(ordered.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < ordered.size(); k = next++) {
      try {
        results[k] = compare_one(*ordered[k], seeds, options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, ordered.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  ComparisonTable table;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    for (ComparisonRow& row : results[k]) table.rows.push_back(std::move(row));
  }
  return table;
}

std::string comparison_json(const ComparisonTable& table, bool include_timing) {
  ordered_json rows = ordered_json::array();
  for (const ComparisonRow& row : table.rows) {
    ordered_json j;
    j["test_case"] = row.scenario;
    j["algorithm"] = algorithm_name(row.algorithm);
    j["agents"] = row.agents;
    j["runs"] = row.runs;
    j["successes"] = row.successes;
    if (include_timing) j["planning_time_seconds"] = stat_json(row.planning_time);
    j["makespan"] = stat_json(row.makespan);
    j["avg_localization_error"] = stat_json(row.avg_error);
    j["max_localization_error"] = stat_json(row.max_error);
    j["percent_rigid"] = stat_json(row.percent_rigid);
    ordered_json runs = ordered_json::array();
    for (const MetricsReport& r : row.reports) runs.push_back(report_object(r, include_timing));
    j["reports"] = std::move(runs);
    rows.push_back(std::move(j));
  }
  return ordered_json{{"rows", std::move(rows)}}.dump(2) + "\n";
}

std::string comparison_text(const ComparisonTable& table) {
  const std::vector<std::string> headers = {"Test Case", "Algorithm", "# of AUVs", "Planning Time (s)", "Makespan",
                                            "Avg. Localization Error", "Max. Localization Error", "% Rigid"};
  std::vector<std::vector<std::string>> cells;
  const auto stat_text = [](const Stat& s, int digits, bool spread) {
    std::string text = fixed(s.median, digits);
    if (spread) text += " [" + fixed(s.min, digits) + ", " + fixed(s.max, digits) + "]";
    return text;
  };
  for (const ComparisonRow& row : table.rows) {
    const bool spread = row.runs > 1;
    std::string algo = row.algorithm == Algorithm::Rcgp ? "RCGP" : "RRT";
    if (row.successes < row.runs) algo += " (" + std::to_string(row.successes) + "/" + std::to_string(row.runs) + " ok)";
    if (row.successes == 0) {
      cells.push_back({row.scenario, algo, std::to_string(row.agents), "failed", "-", "-", "-", "-"});
      continue;
    }
    cells.push_back({row.scenario, algo, std::to_string(row.agents), stat_text(row.planning_time, 3, spread),
                     stat_text(row.makespan, 0, spread), stat_text(row.avg_error, 3, spread),
                     stat_text(row.max_error, 3, spread), stat_text(row.percent_rigid, 0, spread)});
  }
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  const auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << (c == 0 ? "| " : " | ") << line[c] << std::string(width[c] - line[c].size(), ' ');
    }
    out << " |\n";
  };
  emit(headers);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.push_back(std::string(w, '-'));
  emit(rule);
  for (const auto& line : cells) emit(line);
  return out.str();
}

}  // namespace rcgp
