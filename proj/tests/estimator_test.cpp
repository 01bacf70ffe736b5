#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "heatwalk/estimator.hpp"

using namespace heatwalk;

namespace {

BoundaryData constant_data(double c) {
  return {[c](double, const Point&) { return c; }, [c](const Point&) { return c; }};
}

BoundaryData hyp1_data() {
  const auto f = [](double t, const Point& x) {
    double p = std::exp(t);
    for (double xi : x) p *= xi * (1.0 - xi);
    return p;
  };
  return {f, [f](const Point& x) { return f(0.0, x); }};
}

BoundaryData eigen_data(std::size_t d) {
  return {[](double, const Point&) { return 0.0; },
          [d](const Point& x) {
            double p = 1.0;
            for (std::size_t i = 0; i < d; ++i) p *= std::sin(std::numbers::pi * x[i]);
            return p;
          }};
}

}  // namespace

TEST_CASE("constant data gives an exact constant estimate") {
  const Domain cube = Domain::unit_hypercube(3);
  const Estimate est =
      estimate_solution(cube, constant_data(2.5), 0.7, cube.center_point(), 1e-3, 500, 99);
  CHECK(est.mean == 2.5);
  CHECK(est.std_error == 0.0);
  CHECK(est.ci_lo == 2.5);
  CHECK(est.ci_hi == 2.5);
  CHECK(est.n_samples == 500);
}

TEST_CASE("preconditions are enforced") {
  const Domain cube = Domain::unit_hypercube(2);
  const BoundaryData data = constant_data(1.0);
  CHECK_THROWS_AS(estimate_solution(cube, data, 0.5, {0.5, 0.5}, 1e-3, 1, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_solution(cube, data, 0.5, {1.5, 0.5}, 1e-3, 100, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_solution(cube, data, 0.0, {0.5, 0.5}, 1e-3, 100, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_solution(cube, data, 0.5, {0.5, 0.5}, 0.0, 100, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS(walk_statistics(cube, data, 0.5, {0.5, 0.5}, 1e-3, 0, 7),
                  std::invalid_argument);
}

TEST_CASE("payoff selects f on boundary stops and f0 on time stops") {
  const BoundaryData hyp1 = hyp1_data();

  WalkOutcome boundary;
  boundary.stop_kind = StopKind::BoundaryProjected;
  boundary.t_eps = 0.4;
  boundary.x_eps = {0.0, 0.3, 0.8};  // on a cube face: the product vanishes
  CHECK(sample_payoff(boundary, hyp1) == 0.0);

  WalkOutcome interior;
  interior.stop_kind = StopKind::TimeExhausted;
  interior.t_eps = 0.0;
  interior.x_eps = {0.5, 0.5, 0.5};
  CHECK(sample_payoff(interior, hyp1) == doctest::Approx(0.015625).epsilon(1e-15));

  SUBCASE("time-exhausted payoff under norm-type data") {
    const BoundaryData hyp2 = {
        [](double t, const Point& x) { return (1.0 + std::cos(2.0 * std::numbers::pi * t)) * norm2(x); },
        [](const Point& x) { return 2.0 * norm2(x); }};
    WalkOutcome stop;
    stop.stop_kind = StopKind::TimeExhausted;
    stop.x_eps = {0.5, 0.0, 0.0};
    CHECK(sample_payoff(stop, hyp2) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("hyp1 payoffs stay inside their analytic range") {
  const Domain cube = Domain::unit_hypercube(3);
  const double t = 0.8;
  const WalkStatistics stats =
      walk_statistics(cube, hyp1_data(), t, cube.center_point(), 1e-3, 20'000, 3);
  CHECK(stats.payoffs.lo >= 0.0);
  CHECK(stats.payoffs.hi <= std::exp(t) * std::pow(4.0, -3.0));
}

TEST_CASE("eigenfunction estimate matches the closed-form solution") {
  const Domain square = Domain::unit_hypercube(2);
  const double exact = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * 0.05);
  const Estimate est =
      estimate_solution(square, eigen_data(2), 0.05, {0.5, 0.5}, 1e-4, 20'000, 2024);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error + 0.01);
  CHECK(est.ci_lo == doctest::Approx(est.mean - 1.96 * est.std_error));
  CHECK(est.ci_hi == doctest::Approx(est.mean + 1.96 * est.std_error));
}

TEST_CASE("time-dependent boundary data: decaying single mode") {
  // h(t, x) = exp(-pi^2 t) sin(pi x0) solves the IBVP on the square with
  // its own restriction as boundary data, nonzero on two faces.
  const auto h = [](double t, const Point& x) {
    return std::exp(-std::numbers::pi * std::numbers::pi * t) * std::sin(std::numbers::pi * x[0]);
  };
  const BoundaryData data = {h, [h](const Point& x) { return h(0.0, x); }};
  const Domain square = Domain::unit_hypercube(2);
  const Estimate est = estimate_solution(square, data, 0.1, {0.5, 0.5}, 1e-4, 30'000, 404);
  const double exact = h(0.1, {0.5, 0.5});
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error + 0.01);
  CHECK(est.boundary_stop_fraction > 0.0);  // the f path is actually exercised
}

TEST_CASE("estimates are bit-identical across worker counts") {
  const Domain cube = Domain::unit_hypercube(3);
  EstimateOptions one, three;
  one.workers = 1;
  three.workers = 3;
  const Estimate a =
      estimate_solution(cube, hyp1_data(), 0.5, cube.center_point(), 1e-3, 30'000, 17, one);
  const Estimate b =
      estimate_solution(cube, hyp1_data(), 0.5, cube.center_point(), 1e-3, 30'000, 17, three);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean_steps == b.mean_steps);
  CHECK(a.boundary_stop_fraction == b.boundary_stop_fraction);
}

TEST_CASE("worker count resolution prefers the explicit value, then the env var") {
  CHECK(resolve_workers(5) == 5);
  setenv("HEATWALK_WORKERS", "3", 1);
  CHECK(resolve_workers(0) == 3);
  CHECK(resolve_workers(2) == 2);
  unsetenv("HEATWALK_WORKERS");
  CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("time-sweep curves from independent seeds agree within their CI bands") {
  const Domain cube = Domain::unit_hypercube(3);
  const Point center = cube.center_point();
  int disagreements = 0;
  for (int k = 1; k <= 20; ++k) {
    const double t = 0.1 * k;
    const Estimate a = estimate_solution(cube, hyp1_data(), t, center, 1e-3, 1000, 111);
    const Estimate b = estimate_solution(cube, hyp1_data(), t, center, 1e-3, 1000, 222);
    const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    if (std::abs(a.mean - b.mean) > 3.0 * se) ++disagreements;
  }
  CHECK(disagreements <= 2);
}

TEST_CASE("standard error scales like 1/sqrt(n)") {
  const Domain square = Domain::unit_hypercube(2);
  const Estimate small =
      estimate_solution(square, eigen_data(2), 0.05, {0.5, 0.5}, 1e-3, 10'000, 5);
  const Estimate large =
      estimate_solution(square, eigen_data(2), 0.05, {0.5, 0.5}, 1e-3, 1'000'000, 5);
  const double ratio = small.std_error / large.std_error / 10.0;
  CHECK(ratio > 0.9);
  CHECK(ratio < 1.1);
}

TEST_CASE("boundary data compatibility check") {
  const Domain cube = Domain::unit_hypercube(2);
  CHECK_NOTHROW(verify_compatibility(hyp1_data(), cube));
  const BoundaryData broken = {[](double, const Point&) { return 0.0; },
                               [](const Point&) { return 1.0; }};
  CHECK_THROWS_AS(verify_compatibility(broken, cube), std::invalid_argument);
}

TEST_CASE("walk statistics histograms") {
  const Domain cube = Domain::unit_hypercube(3);
  const std::size_t n = 20'000;
  const WalkStatistics stats =
      walk_statistics(cube, hyp1_data(), 0.8, cube.center_point(), 1e-3, n, 13, 25);
  CHECK(stats.payoffs.counts.size() == 25);
  CHECK(stats.step_counts.counts.size() == 25);
  std::uint64_t total = 0;
  for (std::uint64_t c : stats.payoffs.counts) total += c;
  CHECK(total == n);
  total = 0;
  for (std::uint64_t c : stats.step_counts.counts) total += c;
  CHECK(total == n);
  CHECK(stats.boundary_stop_fraction >= 0.0);
  CHECK(stats.boundary_stop_fraction <= 1.0);

  SUBCASE("tiny start times stop on the clock, not the boundary") {
    const WalkStatistics tiny =
        walk_statistics(cube, hyp1_data(), 0.001, cube.center_point(), 1e-4, 10'000, 13);
    CHECK(tiny.boundary_stop_fraction < 0.05);
  }

  SUBCASE("constant payoffs collapse to a single bin") {
    const WalkStatistics flat =
        walk_statistics(cube, constant_data(3.0), 0.5, cube.center_point(), 1e-3, 100, 13, 10);
    CHECK(flat.payoffs.lo == 3.0);
    CHECK(flat.payoffs.hi == 3.0);
    CHECK(flat.payoffs.counts[0] == 100);
  }
}
