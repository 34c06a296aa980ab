// Command-line front end: plan, compare, validate and one-shot rigidity queries.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcgp/errors.hpp"
#include "rcgp/experiment.hpp"
#include "rcgp/localization.hpp"
#include "rcgp/rigidity.hpp"
#include "rcgp/scenario.hpp"
#include "rcgp/trajectory_io.hpp"
#include "rcgp/validation.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPlanningFailed = 3;
constexpr int kExitIo = 4;

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const auto value = std::stoull(item, &used);
    if (used != item.size()) throw rcgp::ValidationError("bad seed '" + item + "'");
    seeds.push_back(value);
  }
  if (seeds.empty()) throw rcgp::ValidationError("seed list is empty");
  return seeds;
}

rcgp::Configurationd read_positions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw rcgp::IoError("cannot open positions file " + path.string());
  std::vector<rcgp::Point2d> points;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream fields(line);
    double x = 0;
    double y = 0;
    std::string extra;
    if (!(fields >> x >> y) || (fields >> extra))
      throw rcgp::ParseError(path.string() + ": line " + std::to_string(number) + ": expected 'x y'");
    points.emplace_back(x, y);
  }
  if (points.empty()) throw rcgp::ValidationError("positions file has no nodes");
  rcgp::Configurationd config(2, static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) config.col(static_cast<Eigen::Index>(k)) = points[k];
  return config;
}

int cmd_plan(const std::string& scenario_path, const std::string& algorithm, std::uint64_t seed,
             const std::string& out_dir, const rcgp::RunOptions& options, bool timing) {
  const rcgp::Scenario scenario = rcgp::load_scenario(scenario_path);
  const rcgp::RunResult run = rcgp::run_plan(scenario, rcgp::parse_algorithm(algorithm), seed, options);
  rcgp::write_run(run, out_dir, timing);
  std::cout << rcgp::report_json(run.report, timing);
  if (!run.report.success) {
    std::cerr << "planning failed: " << run.report.failure << "\n";
    return kExitPlanningFailed;
  }
  return 0;
}

int cmd_compare(const std::vector<std::string>& scenario_paths, const std::string& seeds,
                const std::string& json_out, const rcgp::RunOptions& options, bool timing) {
  std::vector<rcgp::Scenario> scenarios;
  for (const auto& path : scenario_paths) scenarios.push_back(rcgp::load_scenario(path));
  const rcgp::ComparisonTable table = rcgp::run_compare(scenarios, parse_seed_list(seeds), options);
  std::cout << rcgp::comparison_text(table);
  const std::string json = rcgp::comparison_json(table, timing);
  if (json_out.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(json_out);
    if (!out) throw rcgp::IoError("cannot write " + json_out);
    out << json;
  }
  return 0;
}

int cmd_validate(const std::string& trajectories_path, const std::string& scenario_path,
                 std::optional<double> min_rigidity) {
  rcgp::Scenario scenario = rcgp::load_scenario(scenario_path);
  if (min_rigidity) scenario.min_rigidity = *min_rigidity;
  const rcgp::Motion motion = rcgp::import_trajectories(trajectories_path);
  if (motion.agents() != scenario.agents.size())
    throw rcgp::ValidationError("trajectory file has " + std::to_string(motion.agents()) + " agents, scenario has " +
                                std::to_string(scenario.agents.size()));

  auto graph = std::make_shared<const rcgp::PlanningGraph>(
      rcgp::build_planning_graph(scenario.workspace, scenario.spacing, scenario.connect_radius));
  const rcgp::PlanningProblem problem = rcgp::make_problem(scenario, graph);

  rcgp::TrajectorySet set;
  set.paths.resize(motion.agents());
  std::size_t off_graph = 0;
  for (const rcgp::Configurationd& frame : motion.frames) {
    for (std::size_t a = 0; a < motion.agents(); ++a) {
      const auto node = graph->find_node(frame.col(static_cast<Eigen::Index>(a)));
      if (!node) ++off_graph;
      set.paths[a].push_back(node.value_or(-1));
    }
  }
  const double rigid =
      rcgp::percent_rigid(motion, scenario.sensing_radius, scenario.noise, scenario.min_rigidity);
  if (off_graph > 0) {
    std::cout << "off-graph states: " << off_graph << "\n"
              << "percent rigid: " << rigid << "\n"
              << "result: FAIL\n";
    return kExitValidation;
  }
  const rcgp::ValidationReport report = rcgp::validate_solution(set, problem);
  for (const rcgp::StepReport& step : report.steps) {
    if (step.collisions.empty() && step.invalid_moves.empty() && step.rigid) continue;
    std::cout << "t=" << step.time << " rigidity=" << step.rigidity_eigenvalue << (step.rigid ? "" : " NONRIGID");
    for (const auto& [a, b] : step.collisions) std::cout << " collision(" << a << "," << b << ")";
    for (int a : step.invalid_moves) std::cout << " invalid_move(" << a << ")";
    std::cout << "\n";
  }
  std::cout << "horizon: " << set.paths.front().size() << "\n"
            << "collisions: " << report.collisions << "\n"
            << "invalid moves: " << report.invalid_moves << "\n"
            << "endpoints ok: " << (report.endpoints_ok ? "yes" : "no") << "\n"
            << "percent rigid: " << report.percent_rigid() << "\n"
            << "result: " << (report.pass() ? "PASS" : "FAIL") << "\n";
  return report.pass() ? 0 : kExitValidation;
}

int cmd_rigidity(const std::string& positions_path, double sensing_radius, double sigma, const std::string& noise,
                 double min_rigidity) {
  rcgp::NoiseModel model;
  model.sigma = sigma;
  if (noise == "additive")
    model.kind = rcgp::NoiseKind::Additive;
  else if (noise == "multiplicative")
    model.kind = rcgp::NoiseKind::Multiplicative;
  else
    throw rcgp::ValidationError("noise must be additive or multiplicative");
  if (!(sigma > 0)) throw rcgp::ValidationError("sigma must be positive");
  if (!(sensing_radius > 0)) throw rcgp::ValidationError("sensing radius must be positive");

  const rcgp::Configurationd config = read_positions(positions_path);
  const rcgp::MeasurementGraph graph{rcgp::sensing_edges(config, sensing_radius), model};
  const auto spectrum = rcgp::eigenvalues_symmetric(rcgp::build_fim(config, graph));
  const rcgp::RigidityVerdict verdict = rcgp::check_rigidity(config, graph, min_rigidity);
  std::cout << "nodes: " << config.cols() << "\n"
            << "edges: " << graph.edges.size() << "\n"
            << "rigidity_eigenvalue: " << rcgp::format_double(verdict.rigidity_eigenvalue) << "\n"
            << "threshold: " << rcgp::format_double(min_rigidity) << "\n"
            << "rigid: " << (verdict.is_rigid ? "true" : "false") << "\n"
            << "spectrum:";
  for (double v : spectrum) std::cout << ' ' << rcgp::format_double(v);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigidity-constrained multi-agent graph planning"};
  app.require_subcommand(1);

  std::optional<double> min_rigidity;
  app.add_option("--min-rigidity", min_rigidity, "Override the minimum rigidity eigenvalue")->check(CLI::NonNegativeNumber);

  std::size_t loc_seeds = 20;
  bool no_cache = false;
  bool no_timing = false;
  std::size_t jobs = 1;

  auto* plan = app.add_subcommand("plan", "Plan one scenario and write trajectories and metrics");
  std::string scenario_path, algorithm = "rcgp", out_dir = "out";
  std::uint64_t seed = 0;
  plan->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  plan->add_option("--algorithm", algorithm, "rcgp or rrt")->check(CLI::IsMember({"rcgp", "rrt"}));
  plan->add_option("--seed", seed, "RRT seed");
  plan->add_option("--out", out_dir, "Output directory");
  plan->add_option("--loc-seeds", loc_seeds, "Number of localization seeds");
  plan->add_flag("--no-cache", no_cache, "Disable the rigidity cache");
  plan->add_flag("--no-timing", no_timing, "Leave wall-clock fields out of the report");

  auto* compare = app.add_subcommand("compare", "Compare RCGP against the RRT baseline");
  std::vector<std::string> compare_scenarios;
  std::string seeds = "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19";
  std::string json_out;
  compare->add_option("--scenario", compare_scenarios, "Scenario JSON file (repeatable)")->required();
  compare->add_option("--seeds", seeds, "Comma-separated RRT seeds");
  compare->add_option("--json", json_out, "Write the machine-readable table here instead of stdout");
  compare->add_option("--loc-seeds", loc_seeds, "Number of localization seeds");
  compare->add_option("--jobs", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);
  compare->add_flag("--no-timing", no_timing, "Leave wall-clock fields out of the JSON");

  auto* validate = app.add_subcommand("validate", "Check a trajectory file against a scenario");
  std::string trajectories_path, validate_scenario;
  validate->add_option("--trajectories", trajectories_path, "Trajectory CSV or JSON")->required();
  validate->add_option("--scenario", validate_scenario, "Scenario JSON file")->required();

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity eigenvalue of a set of positions");
  std::string positions_path, noise = "additive";
  double sensing_radius = 0;
  double sigma = 0;
  rigidity->add_option("--positions", positions_path, "Text file with one 'x y' per line")->required();
  rigidity->add_option("--sensing-radius", sensing_radius, "Sensing radius")->required();
  rigidity->add_option("--sigma", sigma, "Range noise standard deviation")->required();
  rigidity->add_option("--noise", noise, "additive or multiplicative");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  rcgp::RunOptions options;
  options.localization_seeds = rcgp::RunOptions::default_localization_seeds(loc_seeds);
  options.use_cache = !no_cache;
  options.min_rigidity = min_rigidity;
  options.jobs = jobs;

  try {
    if (*plan) return cmd_plan(scenario_path, algorithm, seed, out_dir, options, !no_timing);
    if (*compare) return cmd_compare(compare_scenarios, seeds, json_out, options, !no_timing);
    if (*validate) return cmd_validate(trajectories_path, validate_scenario, min_rigidity);
    if (*rigidity) return cmd_rigidity(positions_path, sensing_radius, sigma, noise, min_rigidity.value_or(0.1));
  } catch (const rcgp::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rcgp::PlanningFailed& e) {
    std::cerr << "planning failed: " << e.what() << "\n";
    return kExitPlanningFailed;
  } catch (const rcgp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
