#include <doctest.h>

#include <cmath>
#include <random>

#include "rcgp/errors.hpp"
#include "rcgp/localization.hpp"
#include "rcgp/motion.hpp"

using namespace rcgp;

namespace {

Configurationd hexagon_network() {
  Configurationd c(2, 6);
  c << 0, 2, 1, 3, 0.5, 2.5,  //
      0, 0, 1.5, 1.2, 2.8, 2.9;
  return c;
}

std::vector<RangeSample> exact_ranges(const Configurationd& c, double radius) {
  std::vector<RangeSample> out;
  for (const Edge& e : sensing_edges(c, radius)) {
    const double d = (c.col(e.i) - c.col(e.j)).norm();
    out.push_back({e.i, e.j, d, d});
  }
  return out;
}

}  // namespace

TEST_CASE("noise-free localization recovers the truth") {
  const Configurationd truth = hexagon_network();
  const auto samples = exact_ranges(truth, 3.0);
  std::map<Eigen::Index, Point2d> anchors{{0, truth.col(0)}, {1, truth.col(1)}, {4, truth.col(4)}};
  Configurationd initial = truth;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 0.2);
  for (Eigen::Index k : {2, 3, 5}) initial.col(k) += Point2d(n(rng), n(rng));
  const auto result = localize(samples, anchors, initial, &truth);
  CHECK(result.converged);
  CHECK(result.max_error < 1e-6);
  CHECK(result.residual < 1e-12);
  CHECK(result.anchors == std::vector<Eigen::Index>{0, 1, 4});
  CHECK(result.per_node_error[0] == 0.0);
}

TEST_CASE("collinear measurements leave the fold unresolved") {
  Configurationd truth(2, 4);
  truth << 0, 2, 5, 1,  //
      0, 0, 5, 0;
  const std::vector<RangeSample> samples{{0, 3, 1.0, 1.0}, {1, 3, 1.0, 1.0}};
  const std::map<Eigen::Index, Point2d> anchors{{0, truth.col(0)}, {1, truth.col(1)}, {2, truth.col(2)}};
  Configurationd initial = truth;
  initial.col(3) += Point2d(0.0, 0.1);
  const auto result = localize(samples, anchors, initial, &truth);
  CHECK(result.residual < 1e-9);
  CHECK(result.max_error > 1e-3);
}

TEST_CASE("localization preconditions") {
  const Configurationd truth = hexagon_network();
  const auto samples = exact_ranges(truth, 3.0);
  const std::map<Eigen::Index, Point2d> two{{0, truth.col(0)}, {1, truth.col(1)}};
  CHECK_THROWS_AS(localize(samples, two, truth), InsufficientAnchors);
  const std::map<Eigen::Index, Point2d> all{{0, truth.col(0)}, {1, truth.col(1)}, {2, truth.col(2)},
                                            {3, truth.col(3)}, {4, truth.col(4)}, {5, truth.col(5)}};
  const auto trivial = localize(samples, all, truth, &truth);
  CHECK(trivial.converged);
  CHECK(trivial.max_error == 0.0);
}

TEST_CASE("simulated ranges") {
  const Configurationd truth = hexagon_network();
  const MeasurementGraph g{sensing_edges(truth, 3.0), {NoiseKind::Additive, 0.1}};
  const auto a = simulate_ranges(truth, g, std::uint64_t{5});
  const auto b = simulate_ranges(truth, g, std::uint64_t{5});
  REQUIRE(a.size() == g.edges.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].measured == b[k].measured);
    CHECK(a[k].measured >= 0.0);
    CHECK(a[k].truth == doctest::Approx((truth.col(a[k].i) - truth.col(a[k].j)).norm()));
  }
  const MeasurementGraph loud{g.edges, {NoiseKind::Multiplicative, 50.0}};
  for (const auto& s : simulate_ranges(truth, loud, std::uint64_t{1})) CHECK(s.measured >= 0.0);
}

TEST_CASE("trajectory evaluation") {
  std::vector<std::vector<Point2d>> paths;
  const Configurationd base = hexagon_network();
  for (Eigen::Index k = 0; k < base.cols(); ++k) {
    Point2d p = base.col(k);
    std::vector<Point2d> path;
    for (int t = 0; t < 4; ++t) path.push_back(p + Point2d(0.5 * t, 0));
    paths.push_back(path);
  }
  const Motion motion = motion_from_paths(paths);
  const std::vector<std::uint64_t> seeds{0, 1, 2, 3};
  const NoiseModel noise{NoiseKind::Additive, 0.1};
  const auto a = evaluate_trajectories(motion, 3.0, noise, seeds);
  const auto b = evaluate_trajectories(motion, 3.0, noise, seeds);
  CHECK(a.avg_error == b.avg_error);
  CHECK(a.max_error == b.max_error);
  CHECK(a.localizations == 16);
  CHECK(a.seed_max_errors.size() == 4);
  CHECK(a.avg_error <= a.max_error);
  CHECK(a.avg_error > 0.0);
  CHECK(a.max_error == *std::max_element(a.seed_max_errors.begin(), a.seed_max_errors.end()));

  CHECK(percent_rigid(motion, 3.0, noise, 0.1) == 100.0);
  const auto series = rigidity_series(motion, 3.0, noise);
  CHECK(series.size() == 4);
  for (double v : series) CHECK(v == doctest::Approx(series.front()));
}

TEST_CASE("percent rigid on a collapsing motion") {
  const Motion motion = motion_from_paths({{{0, 0}}, {{1, 0}}, {{1, 1}, {2, 0}}});
  REQUIRE(motion.horizon() == 2);
  CHECK(percent_rigid(motion, 3.0, NoiseModel{}, 0.1) == doctest::Approx(50.0));
}
