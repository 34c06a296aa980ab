// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "jacobi_oracle.hpp"
#include "rcgp/errors.hpp"
#include "rcgp/experiment.hpp"
#include "rcgp/localization.hpp"
#include "rcgp/planner.hpp"
#include "rcgp/rigidity.hpp"
#include "rcgp/scenario.hpp"
#include "rcgp/validation.hpp"
#include "time_bfs_oracle.hpp"

using namespace rcgp;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kSymmetryRel = 1e-12;
constexpr double kPsdRel = 1e-9;
constexpr double kRigidFloor = 1e-6;
constexpr double kClosedFormAbs = 1e-9;
constexpr double kRotationRel = 1e-8;
constexpr double kTranslationRel = 1e-8;
constexpr double kAdditiveScaleRel = 1e-9;
constexpr double kMultiplicativeScaleRel = 1e-8;
constexpr double kSigmaLawRel = 1e-12;
constexpr double kOracleAbs = 1e-8;
constexpr double kMinRigidity = 0.1;
constexpr double kExactRecovery = 1e-6;
constexpr double kFoldResidual = 1e-9;
constexpr double kFoldError = 1e-3;
constexpr double kCacheHitRate = 0.30;
constexpr double kStructureSeconds = 10.0;
constexpr double kPlannerSeconds = 120.0;
constexpr double kComparisonSeconds = 15.0 * 60.0;
constexpr int kStructureNetworks = 200;
constexpr int kInvarianceCases = 100;
constexpr int kOracleCases = 100;
constexpr int kSearchProblems = 20;
constexpr int kSeeds = 20;

const std::vector<std::string> kBundled = {"corridor_6", "dense_8", "open_12", "sparse_6", "sparse_8"};
const char* kCorridor = "corridor_6";

int failures = 0;

void verdict(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Scenario bundled(const std::string& name) { return load_scenario(fs::path(RCGP_SCENARIO_DIR) / (name + ".json")); }

bool connected(const Configurationd& c, const std::vector<Edge>& edges) {
  const auto n = static_cast<std::size_t>(c.cols());
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.i)].push_back(static_cast<std::size_t>(e.j));
    adj[static_cast<std::size_t>(e.j)].push_back(static_cast<std::size_t>(e.i));
  }
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  return count == n;
}

// Random connected network: n in [3, 8], positions in a 10x10 box, sensing radius 4.
Configurationd random_network(std::mt19937_64& rng, MeasurementGraph& graph, NoiseModel noise) {
  std::uniform_int_distribution<int> size(3, 8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const int n = size(rng);
  for (;;) {
    Configurationd c(2, n);
    for (int k = 0; k < n; ++k) c.col(k) = Point2d(u(rng), u(rng));
    auto edges = sensing_edges(c, 4.0);
    if (!connected(c, edges)) continue;
    graph = MeasurementGraph{std::move(edges), noise};
    return c;
  }
}

std::vector<double> spectrum(const Configurationd& c, const MeasurementGraph& g) {
  return eigenvalues_symmetric(build_fim(c, g));
}

std::vector<double> oracle_spectrum(const Eigen::MatrixXd& m) {
  std::vector<double> a(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) a[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return oracle::jacobi_eigenvalues(std::move(a), static_cast<std::size_t>(m.rows()));
}

// max_k |a_k - factor * b_k| relative to the largest eigenvalue of a
double spectral_gap(const std::vector<double>& a, const std::vector<double>& b, double factor = 1.0) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - factor * b[k]));
  const double scale = std::max(std::abs(a.front()), std::abs(a.back()));
  return scale > 0 ? worst / scale : worst;
}

void criterion_fim_structure() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  int asymmetric = 0, indefinite = 0, wrong_kernel = 0, rigid = 0;
  for (int k = 0; k < kStructureNetworks; ++k) {
    MeasurementGraph g;
    const Configurationd c = random_network(rng, g, {NoiseKind::Additive, 1.0});
    const Eigen::MatrixXd f = build_fim(c, g);
    const double scale = std::max(1e-300, f.cwiseAbs().maxCoeff());
    if ((f - f.transpose()).cwiseAbs().maxCoeff() > kSymmetryRel * scale) ++asymmetric;
    const auto ev = eigenvalues_symmetric(f);
    const double tol = kPsdRel * std::max(1.0, ev.back());
    if (ev.front() < -tol) ++indefinite;
    if (c.cols() >= 3 && rigidity_eigenvalue(c, g) > kRigidFloor) {
      ++rigid;
      const auto zeros = std::count_if(ev.begin(), ev.end(), [&](double v) { return std::abs(v) < tol; });
      if (zeros != 3) ++wrong_kernel;
    }
  }
  const double secs = seconds_since(start);
  verdict(1, "FIM structure suite", asymmetric == 0 && indefinite == 0 && wrong_kernel == 0 && secs < kStructureSeconds,
          std::to_string(kStructureNetworks) + " networks, " + std::to_string(rigid) + " rigid; asymmetric " +
              std::to_string(asymmetric) + ", indefinite " + std::to_string(indefinite) + ", bad kernel " +
              std::to_string(wrong_kernel) + ", " + num(secs) + " s");
}

void criterion_closed_forms() {
  bool ok = true;
  std::string detail;
  Configurationd pair(2, 2);
  pair << 0, 1, 0, 0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    const MeasurementGraph g{{{0, 1}}, {NoiseKind::Additive, sigma}};
    const Eigen::MatrixXd f = build_fim(pair, g);
    const double expected = 2.0 / (sigma * sigma);
    const double prod = eigenvalues_symmetric(f).back();
    const double ref = oracle_spectrum(f).back();
    ok = ok && std::abs(prod - expected) <= kClosedFormAbs && std::abs(ref - expected) <= kClosedFormAbs;
    detail += "edge sigma " + num(sigma) + " -> " + num(prod) + "; ";
  }
  const double h = std::sqrt(3.0) / 2.0;
  Configurationd tri(2, 3);
  tri << 0, 1, 0.5, 0, 0, h;
  const MeasurementGraph all3{{{0, 1}, {0, 2}, {1, 2}}, {NoiseKind::Additive, 1.0}};
  const double tri_prod = rigidity_eigenvalue(tri, all3);
  const double tri_ref = oracle_spectrum(build_fim(tri, all3))[3];
  ok = ok && std::abs(tri_prod - 1.5) <= kClosedFormAbs && std::abs(tri_ref - 1.5) <= kClosedFormAbs;
  Configurationd line(2, 3);
  line << 0, 1, 2, 0, 0, 0;
  const double line_prod = rigidity_eigenvalue(line, all3);
  const double line_ref = oracle_spectrum(build_fim(line, all3))[3];
  ok = ok && line_prod < kClosedFormAbs && std::abs(line_ref) < kClosedFormAbs;
  detail += "triangle " + num(tri_prod) + ", collinear " + num(line_prod);
  verdict(2, "Closed-form spectra", ok, detail);
}

void criterion_invariance() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  std::uniform_real_distribution<double> factor(0.2, 5.0);
  double worst_rot = 0, worst_trans = 0, worst_add = 0, worst_mult = 0, worst_sigma = 0;
  for (int k = 0; k < kInvarianceCases; ++k) {
    MeasurementGraph g;
    const Configurationd c = random_network(rng, g, {NoiseKind::Additive, 0.7});
    const auto base = spectrum(c, g);

    const Point2d offset(shift(rng), shift(rng));
    worst_trans = std::max(worst_trans, spectral_gap(base, spectrum(Configurationd(c.colwise() + offset), g)));

    const Eigen::Rotation2Dd rot(angle(rng));
    const Point2d pivot(shift(rng), shift(rng));
    const Configurationd turned = (rot.toRotationMatrix() * (c.colwise() - pivot)).colwise() + pivot;
    worst_rot = std::max(worst_rot, spectral_gap(base, spectrum(turned, g)));

    const double s = factor(rng);
    worst_add = std::max(worst_add, spectral_gap(base, spectrum(Configurationd(c * s), g)));

    MeasurementGraph gm = g;
    gm.noise.kind = NoiseKind::Multiplicative;
    const auto mult = spectrum(c, gm);
    worst_mult = std::max(worst_mult, spectral_gap(spectrum(Configurationd(c * s), gm), mult, 1.0 / (s * s)));

    const double cfac = factor(rng);
    MeasurementGraph gs = g;
    gs.noise.sigma *= cfac;
    worst_sigma = std::max(worst_sigma, spectral_gap(spectrum(c, gs), base, 1.0 / (cfac * cfac)));
  }
  const bool ok = worst_trans <= kTranslationRel && worst_rot <= kRotationRel && worst_add <= kAdditiveScaleRel &&
                  worst_mult <= kMultiplicativeScaleRel && worst_sigma <= kSigmaLawRel;
  verdict(3, "Invariance suite", ok,
          std::to_string(kInvarianceCases) + " cases each; worst rel: translation " + num(worst_trans) + ", rotation " +
              num(worst_rot) + ", additive scale " + num(worst_add) + ", multiplicative scale " + num(worst_mult) +
              ", sigma law " + num(worst_sigma));
}

void criterion_oracle() {
  std::mt19937_64 rng(3003);
  double worst = 0.0;
  std::size_t largest = 0;
  for (int k = 0; k < kOracleCases; ++k) {
    MeasurementGraph g;
    const NoiseModel noise{k % 2 ? NoiseKind::Multiplicative : NoiseKind::Additive, 0.1 + 0.01 * k};
    const Configurationd c = random_network(rng, g, noise);
    const Eigen::MatrixXd f = build_fim(c, g);
    const auto prod = eigenvalues_symmetric(f);
    const auto ref = oracle_spectrum(f);
    largest = std::max(largest, prod.size());
    for (std::size_t i = 0; i < prod.size(); ++i) worst = std::max(worst, std::abs(prod[i] - ref[i]));
  }
  verdict(4, "Eigensolver oracle equivalence", worst <= kOracleAbs,
          std::to_string(kOracleCases) + " FIMs up to " + std::to_string(largest) + "x" + std::to_string(largest) +
              ", worst abs diff " + num(worst));
}

void criterion_planner_soundness() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (const std::string& name : kBundled) {
    const Scenario s = bundled(name);
    auto graph = std::make_shared<const PlanningGraph>(build_planning_graph(s.workspace, s.spacing, s.connect_radius));
    PlanningProblem problem = make_problem(s, graph);
    problem.min_rigidity = kMinRigidity;
    try {
      const TrajectorySet plan = plan_all(problem);
      const ValidationReport report = validate_solution(plan, problem);
      const bool good = report.pass() && report.collisions == 0 && report.invalid_moves == 0 &&
                        report.percent_rigid() == 100.0;
      ok = ok && good;
      detail += name + " " + (good ? "ok" : "INVALID") + " (makespan " + std::to_string(plan.horizon() - 1) + "); ";
    } catch (const PlanningFailed& e) {
      ok = false;
      detail += name + " failed: " + e.what() + "; ";
    }
  }
  const double secs = seconds_since(start);
  verdict(5, "Planner soundness", ok && secs < kPlannerSeconds, detail + num(secs) + " s");
}

void criterion_search_optimality() {
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<int> cell(0, 6);
  int solved = 0, matched = 0, attempts = 0;
  while (solved < kSearchProblems && attempts < 1000) {
    ++attempts;
    std::vector<Polygon> obstacles;
    for (int k = 0; k < 4; ++k) {
      const double x = cell(rng) + 0.5, y = cell(rng) + 0.5;
      obstacles.push_back({{x - 0.3, y - 0.3}, {x + 0.3, y - 0.3}, {x + 0.3, y + 0.3}, {x - 0.3, y + 0.3}});
    }
    auto graph = std::make_shared<const PlanningGraph>(build_planning_graph(Workspace{{0, 0, 7, 7}, obstacles}, 1.0, 2.0));
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(graph->size()) - 1);
    const NodeId s = node(rng), t = node(rng);
    if (s == t) continue;
    const PlanningProblem problem = make_planning_problem(graph, {s}, {t}, 3.0, {}, kMinRigidity);
    ConflictSet conflicts;
    for (int k = 0; k < 15; ++k) {
      const NodeId v = node(rng);
      if (v != s) conflicts.insert({1 + static_cast<int>(rng() % 8), v});
    }
    ValidSetTable table;
    try {
      table = std::get<ValidSetTable>(construct_valid_sets(0, {}, conflicts, problem));
    } catch (const Error&) {
      continue;
    }
    ++solved;
    const int best = oracle::earliest_arrival(table, *graph);
    try {
      const Path path = plan_single(table, problem);
      if (static_cast<int>(path.size()) - 1 == best) ++matched;
    } catch (const NoPath&) {
      if (best < 0) ++matched;
    }
  }
  verdict(6, "Search optimality", solved == kSearchProblems && matched == solved,
          std::to_string(matched) + "/" + std::to_string(solved) + " 8x8 problems match the breadth-first optimum");
}

void criterion_conflicts() {
  const Scenario s = bundled(kCorridor);
  auto graph = std::make_shared<const PlanningGraph>(build_planning_graph(s.workspace, s.spacing, s.connect_radius));
  const PlanningProblem problem = make_problem(s, graph);
  PlanningContext context;
  bool terminated = true, valid = true, success = false;
  try {
    const TrajectorySet plan = plan_all(problem, context);
    success = true;
    valid = validate_solution(plan, problem).pass();
  } catch (const PlanningFailed&) {
    success = false;
  } catch (...) {
    terminated = false;
  }
  const std::size_t budget = static_cast<std::size_t>(context.options.max_replans_per_agent + 1) * problem.agent_count();
  const bool ok = terminated && context.stats.conflicts >= 1 && context.stats.replans <= budget && valid;
  verdict(7, "Conflict mechanism", ok,
          std::string(kCorridor) + ": " + std::to_string(context.stats.conflicts) + " conflicts, " +
              std::to_string(context.stats.replans) + " replans, " + (success ? "success" : "PlanningFailed") +
              (valid ? "" : ", INVALID output"));
}

ComparisonTable comparison() {
  std::vector<Scenario> scenarios;
  for (const std::string& name : kBundled) scenarios.push_back(bundled(name));
  std::vector<std::uint64_t> seeds(kSeeds);
  for (int k = 0; k < kSeeds; ++k) seeds[static_cast<std::size_t>(k)] = static_cast<std::uint64_t>(k);
  RunOptions options;
  options.localization_seeds = RunOptions::default_localization_seeds(kSeeds);
  return run_compare(scenarios, seeds, options);
}

void criterion_baseline(const ComparisonTable& table, double secs) {
  std::map<std::string, const ComparisonRow*> rcgp, rrt;
  for (const ComparisonRow& row : table.rows) (row.algorithm == Algorithm::Rcgp ? rcgp : rrt)[row.scenario] = &row;
  bool noise_ok = true;
  for (const std::string& name : kBundled) {
    const Scenario s = bundled(name);
    noise_ok = noise_ok && s.noise.kind == NoiseKind::Additive && s.noise.sigma == 0.1;
  }
  int makespan_wins = 0, error_wins = 0, rrt_nonrigid = 0, rcgp_full = 0;
  std::string detail;
  for (const std::string& name : kBundled) {
    const ComparisonRow* a = rcgp[name];
    const ComparisonRow* b = rrt[name];
    if (!a || !b || a->successes == 0 || b->successes == 0) {
      detail += name + " missing; ";
      continue;
    }
    if (b->makespan.median >= a->makespan.median) ++makespan_wins;
    if (a->max_error.median <= b->max_error.median) ++error_wins;
    if (b->percent_rigid.median < 100.0) ++rrt_nonrigid;
    if (a->percent_rigid.median == 100.0 && a->successes == a->runs) ++rcgp_full;
    detail += name + " makespan " + num(a->makespan.median) + "/" + num(b->makespan.median) + " max err " +
              num(a->max_error.median) + "/" + num(b->max_error.median) + " rigid " + num(a->percent_rigid.median) +
              "/" + num(b->percent_rigid.median) + "; ";
  }
  const int n = static_cast<int>(kBundled.size());
  const bool ok = noise_ok && makespan_wins >= 4 && rrt_nonrigid >= 1 && rcgp_full == n && error_wins >= 4 &&
                  secs < kComparisonSeconds;
  verdict(8, "Baseline comparison trend", ok,
          "(a) " + std::to_string(makespan_wins) + "/" + std::to_string(n) + " (b) RRT<100 on " +
              std::to_string(rrt_nonrigid) + ", RCGP 100 on " + std::to_string(rcgp_full) + "/" + std::to_string(n) +
              " (c) " + std::to_string(error_wins) + "/" + std::to_string(n) + "; " + detail + num(secs) + " s");
}

void criterion_localization() {
  Configurationd truth(2, 6);
  truth << 0, 2, 1, 3, 0.5, 2.5, 0, 0, 1.5, 1.2, 2.8, 2.9;
  std::vector<RangeSample> samples;
  for (const Edge& e : sensing_edges(truth, 3.0)) {
    const double d = (truth.col(e.i) - truth.col(e.j)).norm();
    samples.push_back({e.i, e.j, d, d});
  }
  const double rigidity = rigidity_eigenvalue(truth, MeasurementGraph{sensing_edges(truth, 3.0), {NoiseKind::Additive, 0.1}});
  std::map<Eigen::Index, Point2d> anchors{{0, truth.col(0)}, {1, truth.col(1)}, {4, truth.col(4)}};
  Configurationd initial = truth;
  std::mt19937_64 rng(5005);
  std::normal_distribution<double> noise(0.0, 0.2);
  for (Eigen::Index k : {2, 3, 5}) initial.col(k) += Point2d(noise(rng), noise(rng));
  const LocalizationResult exact = localize(samples, anchors, initial, &truth);

  Configurationd fold(2, 4);
  fold << 0, 2, 5, 1, 0, 0, 5, 0;
  const std::vector<RangeSample> collinear{{0, 3, 1.0, 1.0}, {1, 3, 1.0, 1.0}};
  const std::map<Eigen::Index, Point2d> fold_anchors{{0, fold.col(0)}, {1, fold.col(1)}, {2, fold.col(2)}};
  Configurationd fold_init = fold;
  fold_init.col(3) += Point2d(0.0, 0.1);
  const LocalizationResult ambiguous = localize(collinear, fold_anchors, fold_init, &fold);

  const bool ok = rigidity > 0 && exact.max_error < kExactRecovery && ambiguous.residual < kFoldResidual &&
                  ambiguous.max_error > kFoldError;
  verdict(9, "Localization sanity", ok,
          "rigid 6-node max error " + num(exact.max_error) + "; collinear residual " + num(ambiguous.residual) +
              ", max error " + num(ambiguous.max_error));
}

void criterion_determinism(const ComparisonTable& first) {
  const ComparisonTable second = comparison();
  const std::string a = comparison_json(first, false);
  const std::string b = comparison_json(second, false);
  verdict(10, "Determinism", a == b && a.find("planning_time") == std::string::npos,
          "compare JSON " + std::string(a == b ? "byte-identical" : "DIFFERS") + " (" + std::to_string(a.size()) +
              " bytes)");
}

void criterion_cache() {
  const Scenario s = bundled(kCorridor);
  auto graph = std::make_shared<const PlanningGraph>(build_planning_graph(s.workspace, s.spacing, s.connect_radius));
  const PlanningProblem problem = make_problem(s, graph);
  PlanningContext cached;
  PlanningContext uncached;
  uncached.options.use_cache = false;
  bool same = false;
  std::string note;
  try {
    const TrajectorySet a = plan_all(problem, cached);
    const TrajectorySet b = plan_all(problem, uncached);
    same = a.paths == b.paths;
  } catch (const PlanningFailed& e) {
    note = std::string(", failed: ") + e.what();
  }
  const double rate = cached.cache.hit_rate();
  verdict(11, "Cache efficacy", rate > kCacheHitRate && same,
          std::string(kCorridor) + ": hit rate " + num(rate) + " over " + std::to_string(cached.stats.rigidity_checks) +
              " checks, " + std::to_string(cached.stats.replans) + " replans, trajectories " +
              (same ? "identical" : "differ") + " without cache" + note);
}

}  // namespace

int main() {
  const auto guard = [](int id, const std::string& title, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      verdict(id, title, false, std::string("threw: ") + e.what());
    }
  };
  guard(1, "FIM structure suite", criterion_fim_structure);
  guard(2, "Closed-form spectra", criterion_closed_forms);
  guard(3, "Invariance suite", criterion_invariance);
  guard(4, "Eigensolver oracle equivalence", criterion_oracle);
  guard(5, "Planner soundness", criterion_planner_soundness);
  guard(6, "Search optimality", criterion_search_optimality);
  guard(7, "Conflict mechanism", criterion_conflicts);
  ComparisonTable table;
  guard(8, "Baseline comparison trend", [&] {
    const auto start = Clock::now();
    table = comparison();
    criterion_baseline(table, seconds_since(start));
  });
  guard(9, "Localization sanity", criterion_localization);
  guard(10, "Determinism", [&] { criterion_determinism(table); });
  guard(11, "Cache efficacy", criterion_cache);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
