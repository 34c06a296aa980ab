#include "rcgp/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rcgp/errors.hpp"

namespace rcgp {

namespace {

using Eigen::Index;

double cost_of(std::span<const RangeSample> samples, const Configurationd& p) {
  double cost = 0.0;
  for (const RangeSample& s : samples) {
    const double r = (p.col(s.i) - p.col(s.j)).norm() - s.measured;
    cost += r * r;
  }
  return cost;
}

std::mt19937_64 step_rng(std::uint64_t seed, int t) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t)};
  return std::mt19937_64(seq);
}

}  // namespace

std::vector<RangeSample> simulate_ranges(const Configurationd& config, const MeasurementGraph& graph,
                                         std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<RangeSample> out;
  out.reserve(graph.edges.size());
  for (const Edge& e : graph.edges) {
    RangeSample s;
    s.i = e.i;
    s.j = e.j;
    s.truth = (config.col(e.i) - config.col(e.j)).norm();
    const double draw = graph.noise.sigma * gauss(rng);
    s.measured = graph.noise.kind == NoiseKind::Additive ? s.truth + draw : s.truth * (1.0 + draw);
    s.measured = std::max(0.0, s.measured);
    out.push_back(s);
  }
  return out;
}

std::vector<RangeSample> simulate_ranges(const Configurationd& config, const MeasurementGraph& graph,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return simulate_ranges(config, graph, rng);
}

LocalizationResult localize(std::span<const RangeSample> samples, const std::map<Index, Point2d>& anchors,
                            const Configurationd& initial, const Configurationd* truth, const LmOptions& options) {
  const Index n = initial.cols();
  if (anchors.size() < 3)
    throw InsufficientAnchors("localization needs 3 anchors, got " + std::to_string(anchors.size()));

  LocalizationResult result;
  result.estimated = initial;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (const auto& [id, pos] : anchors) {
    if (id < 0 || id >= n) throw std::out_of_range("anchor id outside the network");
    result.estimated.col(id) = pos;
    result.anchors.push_back(id);
  }
  Index unknowns = 0;
  for (Index k = 0; k < n; ++k)
    if (!anchors.contains(k)) slot[static_cast<std::size_t>(k)] = unknowns++;

  Configurationd& p = result.estimated;
  const auto m = static_cast<Index>(samples.size());
  Eigen::MatrixXd jac(m, 2 * unknowns);
  Eigen::VectorXd res(m);
  double cost = cost_of(samples, p);
  const double initial_cost = cost;
  double damping = options.initial_damping;

  for (int iter = 0; iter < options.max_iterations && unknowns > 0; ++iter) {
    jac.setZero();
    for (Index r = 0; r < m; ++r) {
      const RangeSample& s = samples[static_cast<std::size_t>(r)];
      const Point2d d = p.col(s.i) - p.col(s.j);
      const double len = d.norm();
      res(r) = len - s.measured;
      if (len == 0.0) continue;
      const Point2d u = d / len;
      if (const Index a = slot[static_cast<std::size_t>(s.i)]; a >= 0) jac.block<1, 2>(r, 2 * a) = u.transpose();
      if (const Index b = slot[static_cast<std::size_t>(s.j)]; b >= 0) jac.block<1, 2>(r, 2 * b) = -u.transpose();
    }
    const Eigen::VectorXd grad = jac.transpose() * res;
    if (grad.norm() < options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal().array() += damping;
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      Configurationd trial = p;
      for (Index k = 0; k < n; ++k)
        if (const Index a = slot[static_cast<std::size_t>(k)]; a >= 0) trial.col(k) += step.segment<2>(2 * a);
      const double trial_cost = cost_of(samples, trial);
      if (!std::isfinite(trial_cost)) throw DivergedEstimate("localization produced a non-finite estimate");
      if (trial_cost < cost) {
        p = std::move(trial);
        cost = trial_cost;
        damping = std::max(options.min_damping, damping / 10.0);
        accepted = true;
      } else if (damping >= options.max_damping) {
        break;
      } else {
        damping = std::min(options.max_damping, damping * 10.0);
      }
    }
    result.iterations = iter + 1;
    if (!accepted) break;  // no descent left at maximal damping
  }
  if (unknowns == 0) result.converged = true;
  if (cost > std::max(options.divergence_cost, initial_cost))
    throw DivergedEstimate("localization residual grew to " + std::to_string(cost));
  result.residual = cost;

  if (truth != nullptr) {
    if (truth->cols() != n) throw std::invalid_argument("ground truth size differs from the network");
    result.per_node_error.assign(static_cast<std::size_t>(n), 0.0);
    double sum = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (slot[static_cast<std::size_t>(k)] < 0) continue;
      const double err = (p.col(k) - truth->col(k)).norm();
      result.per_node_error[static_cast<std::size_t>(k)] = err;
      sum += err;
      result.max_error = std::max(result.max_error, err);
    }
    result.mean_error = unknowns > 0 ? sum / static_cast<double>(unknowns) : 0.0;
  }
  return result;
}

EvaluationSummary evaluate_trajectories(const Motion& motion, double sensing_radius, const NoiseModel& noise,
                                        std::span<const std::uint64_t> seeds) {
  EvaluationSummary summary;
  summary.seed_max_errors.assign(seeds.size(), 0.0);
  double error_sum = 0.0;
  std::size_t error_count = 0;
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int t = 0; t < motion.horizon(); ++t) {
    const Configurationd& truth = motion.frames[static_cast<std::size_t>(t)];
    const Index n = truth.cols();
    const MeasurementGraph graph{sensing_edges(truth, sensing_radius), noise};
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      std::mt19937_64 rng = step_rng(seeds[s], t);
      const std::vector<RangeSample> samples = simulate_ranges(truth, graph, rng);

      std::vector<Index> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), Index{0});
      const std::size_t anchor_count = std::min<std::size_t>(3, order.size());
      for (std::size_t k = 0; k < anchor_count; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
        std::swap(order[k], order[pick(rng)]);
      }
      std::map<Index, Point2d> anchors;
      for (std::size_t k = 0; k < anchor_count; ++k) anchors.emplace(order[k], truth.col(order[k]));

      Configurationd initial = truth;
      for (Index k = 0; k < n; ++k) {
        if (anchors.contains(k)) continue;
        const double dx = gauss(rng);
        initial.col(k) += noise.sigma * Point2d(dx, gauss(rng));
      }

      ++summary.localizations;
      try {
        const LocalizationResult result = localize(samples, anchors, initial, &truth);
        for (Index k = 0; k < n; ++k) {
          if (anchors.contains(k)) continue;
          error_sum += result.per_node_error[static_cast<std::size_t>(k)];
          ++error_count;
        }
        summary.max_error = std::max(summary.max_error, result.max_error);
        summary.seed_max_errors[s] = std::max(summary.seed_max_errors[s], result.max_error);
      } catch (const Error&) {
        ++summary.failed;
        if (summary.flagged_timesteps.empty() || summary.flagged_timesteps.back() != t)
          summary.flagged_timesteps.push_back(t);
      }
    }
  }
  summary.avg_error = error_count > 0 ? error_sum / static_cast<double>(error_count) : 0.0;
  return summary;
}

std::vector<double> rigidity_series(const Motion& motion, double sensing_radius, const NoiseModel& noise) {
  std::vector<double> series;
  series.reserve(motion.frames.size());
  for (const Configurationd& frame : motion.frames) {
    if (frame.cols() < 3) {
      series.push_back(0.0);
      continue;
    }
    series.push_back(check_network_rigidity(frame, sensing_radius, noise, 0.0).rigidity_eigenvalue);
  }
  return series;
}

double percent_rigid(const Motion& motion, double sensing_radius, const NoiseModel& noise, double min_rigidity) {
  if (motion.frames.empty()) return 0.0;
  std::size_t rigid = 0;
  for (const Configurationd& frame : motion.frames) {
    if (frame.cols() < 3) continue;
    if (check_network_rigidity(frame, sensing_radius, noise, min_rigidity).is_rigid) ++rigid;
  }
  return 100.0 * static_cast<double>(rigid) / static_cast<double>(motion.frames.size());
}

}  // namespace rcgp
