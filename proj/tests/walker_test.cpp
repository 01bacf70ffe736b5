#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "heatwalk/sampling.hpp"
#include "heatwalk/walker.hpp"
#include "support/stats.hpp"

using namespace heatwalk;

namespace {

const Domain kCube3 = Domain::unit_hypercube(3);
const Point kCenter3{0.5, 0.5, 0.5};

}  // namespace

TEST_CASE("alpha takes the binding constraint") {
  CHECK(alpha(1.0, kCenter3, kCube3) ==
        doctest::Approx(std::numbers::e / 24.0).epsilon(1e-14));
  CHECK(alpha(0.01, kCenter3, kCube3) == 0.01);
  CHECK(alpha(0.7, {0.0, 0.5, 0.5}, kCube3) == 0.0);  // boundary point
  CHECK(alpha(0.7, {1.2, 0.5, 0.5}, kCube3) == 0.0);  // outside, clamped
}

TEST_CASE("step honors the displacement and time bounds") {
  RngStream stream(5, 0);
  WalkState state{1.0, kCenter3, 0};
  for (int k = 0; k < 2000; ++k) {
    const double delta = kCube3.distance_to_boundary(state.x);
    const double a = alpha(state.t, state.x, kCube3);
    if (a <= 1e-12) break;
    const WalkState next = step(state, kCube3, stream);
    CHECK(next.n == state.n + 1);
    CHECK(next.t >= 0.0);
    CHECK(next.t <= state.t);
    const double moved = distance(next.x, state.x);
    CHECK(moved <= delta * (1.0 + 1e-12));
    CHECK(moved <= std::sqrt(2.0 * 3.0 * a / std::numbers::e) * (1.0 + 1e-12));
    state = next;
  }
  CHECK(state.n > 0);

  SUBCASE("stepping at alpha = 0 is a caller bug") {
    WalkState stopped{0.0, kCenter3, 0};
    RngStream s2(5, 1);
    CHECK_THROWS_AS(step(stopped, kCube3, s2), std::logic_error);
  }
}

TEST_CASE("step sequences replay bit-identically for a fixed stream") {
  RngStream s1(17, 3), s2(17, 3);
  WalkState a{1.0, kCenter3, 0}, b{1.0, kCenter3, 0};
  for (int k = 0; k < 200 && alpha(a.t, a.x, kCube3) > 1e-9; ++k) {
    a = step(a, kCube3, s1);
    b = step(b, kCube3, s2);
    REQUIRE(a.t == b.t);
    REQUIRE(a.x == b.x);
  }
}

TEST_CASE("run_walk classifies terminal states") {
  RngStream stream(23, 0);
  const double eps = 1e-3;
  for (int k = 0; k < 5000; ++k) {
    const WalkOutcome out = run_walk(1.0, kCenter3, kCube3, eps, stream);
    REQUIRE(out.t_eps >= 0.0);
    REQUIRE(out.t_eps <= 1.0);
    if (out.stop_kind == StopKind::BoundaryProjected) {
      REQUIRE(kCube3.distance_to_boundary(out.x_eps) == 0.0);
      REQUIRE_FALSE(kCube3.contains(out.x_eps));
    } else {
      REQUIRE(out.t_eps == 0.0);
      const double delta = kCube3.distance_to_boundary(out.x_eps);
      REQUIRE(delta * delta > 2.0 * eps * 3.0 / std::numbers::e);
    }
  }

  SUBCASE("an immediately stopped walk reports zero steps") {
    RngStream s2(23, 1);
    // alpha at the start is min(t0, ...) = t0 = 1e-5 <= eps
    const WalkOutcome out = run_walk(1e-5, kCenter3, kCube3, 1e-4, s2);
    CHECK(out.n_steps == 0);
    CHECK(out.stop_kind == StopKind::TimeExhausted);
    CHECK(out.t_eps == 0.0);

    // near-boundary start, large time: space branch triggers the stop
    const WalkOutcome out2 = run_walk(1.0, {1e-4, 0.5, 0.5}, kCube3, 1e-4, s2);
    CHECK(out2.n_steps == 0);
    CHECK(out2.stop_kind == StopKind::BoundaryProjected);
    CHECK(out2.t_eps == 1.0);
  }

  SUBCASE("invalid starts are rejected") {
    RngStream s3(23, 2);
    CHECK_THROWS_AS(run_walk(0.0, kCenter3, kCube3, 1e-3, s3), std::invalid_argument);
    CHECK_THROWS_AS(run_walk(1.0, {1.5, 0.5, 0.5}, kCube3, 1e-3, s3), std::invalid_argument);
    CHECK_THROWS_AS(run_walk(1.0, kCenter3, kCube3, 0.0, s3), std::invalid_argument);
  }
}

TEST_CASE("mean step count grows like |log eps|") {
  std::vector<double> logs, means;
  for (int n = 4; n <= 10; n += 2) {
    const double eps = std::pow(0.5, n);
    double total = 0.0;
    const std::size_t walks = 2000;
    for (std::size_t k = 0; k < walks; ++k) {
      RngStream stream(31, 1000 * static_cast<std::uint64_t>(n) + k);
      total += static_cast<double>(run_walk(1.0, kCenter3, kCube3, eps, stream).n_steps);
    }
    logs.push_back(std::abs(std::log(eps)));
    means.push_back(total / walks);
  }
  CHECK(means.back() > means.front());
  CHECK(testsupport::linear_fit_r2(logs, means) > 0.9);
}

TEST_CASE("step cap raises the dedicated error") {
  detail::WalkControls controls;
  controls.max_steps = 3;
  RngStream stream(37, 0);
  CHECK_THROWS_AS(detail::run_walk(1.0, kCenter3, kCube3, 1e-9, stream, controls),
                  StepLimitError);
}

TEST_CASE("optional path recording captures every state") {
  detail::WalkControls controls;
  std::vector<WalkState> path;
  controls.path = &path;
  RngStream stream(41, 0);
  const WalkOutcome out = detail::run_walk(1.0, kCenter3, kCube3, 1e-3, stream, controls);
  REQUIRE(path.size() == out.n_steps + 1);
  CHECK(path.front().t == 1.0);
  for (std::size_t k = 1; k < path.size(); ++k) CHECK(path[k].t <= path[k - 1].t);
}

TEST_CASE("classical walk on spheres recovers a harmonic mean value") {
  const Domain ball = Domain::ball(3, 1.0);
  const Point x0{0.3, 0.0, 0.0};
  const std::size_t n = 100'000;
  std::vector<double> payoffs(n);
  for (std::size_t k = 0; k < n; ++k) {
    RngStream stream(47, k);
    const Point exit_point = run_classical_wos(x0, ball, 1e-4, 0.9, stream);
    REQUIRE_FALSE(ball.contains(exit_point));
    REQUIRE(std::abs(norm2(exit_point) - 1.0) <= 1e-9);
    payoffs[k] = exit_point[0];  // u(x) = x_1 is harmonic
  }
  const auto m = testsupport::moments(payoffs);
  CHECK(std::abs(m.mean - 0.3) <= 3.0 * m.std_error);

  SUBCASE("fixed seed replays bit-identically") {
    RngStream s1(49, 9), s2(49, 9);
    CHECK(run_classical_wos(x0, ball, 1e-4, 0.5, s1) ==
          run_classical_wos(x0, ball, 1e-4, 0.5, s2));
  }

  SUBCASE("invalid starts and parameters are rejected") {
    RngStream s(49, 10);
    CHECK_THROWS_AS(run_classical_wos({1.5, 0.0, 0.0}, ball, 1e-4, 0.9, s),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_classical_wos(x0, ball, 1e-4, 1.0, s), std::invalid_argument);
    CHECK_THROWS_AS(run_classical_wos(x0, ball, 0.0, 0.9, s), std::invalid_argument);
  }
}

TEST_CASE("temperature martingale: empirical mean matches the start value") {
  for (std::size_t d : {2, 3}) {
    const Domain cube = Domain::unit_hypercube(d);
    const Point center = cube.center_point();
    const double dd = static_cast<double>(d);
    const auto h = [dd](double t, const Point& x) {
      double s = 2.0 * dd * t;
      for (double xi : x) s += xi * xi;
      return s;
    };
    const double grad_bound = 2.0 * dd;  // max(|dh/dt|, |grad h|) on the cube
    const double eps = 1e-4;
    const std::size_t n = 100'000;
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) {
      RngStream stream(53, k);
      const WalkOutcome out = run_walk(1.0, center, cube, eps, stream);
      values[k] = h(out.t_eps, out.x_eps);
    }
    const auto m = testsupport::moments(values);
    const double allowance =
        2.0 * std::sqrt(2.0 * dd / std::numbers::e) * std::sqrt(eps) * grad_bound;
    CHECK(std::abs(m.mean - h(1.0, center)) <= 3.0 * m.std_error + allowance);
  }
}

TEST_CASE("boundary-stop fraction is monotone in the start time") {
  const double eps = 1e-3;
  const std::size_t n = 10'000;
  std::vector<double> fractions, ses;
  for (int k = 1; k <= 10; ++k) {
    const double t0 = 0.2 * k;
    std::size_t boundary = 0;
    for (std::size_t w = 0; w < n; ++w) {
      RngStream stream(59, w);  // common random numbers across the grid
      if (run_walk(t0, kCenter3, kCube3, eps, stream).stop_kind ==
          StopKind::BoundaryProjected)
        ++boundary;
    }
    const double p = static_cast<double>(boundary) / n;
    fractions.push_back(p);
    ses.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  for (std::size_t k = 1; k < fractions.size(); ++k) {
    const double se = std::sqrt(ses[k] * ses[k] + ses[k - 1] * ses[k - 1]);
    CHECK(fractions[k] >= fractions[k - 1] - 3.0 * se);
  }
  CHECK(fractions.back() > fractions.front());
}

TEST_CASE("in-domain invariant fuzz across shapes and dimensions") {
  std::uint64_t steps_done = 0;
  for (std::size_t d : {1, 2, 3, 10}) {
    std::vector<Domain> domains = {Domain::unit_hypercube(d), Domain::ball(d, 1.0),
                                   Domain::half_ball(d, 1.0)};
    for (const Domain& dom : domains) {
      RngStream stream(61, d);
      Point direction(d);
      for (int rep = 0; rep < 120; ++rep) {
        WalkState state{1.0, sample_interior(dom, stream), 0};
        detail::StepTrace trace;
        while (alpha(state.t, state.x, dom) > 1e-6 && state.n < 600) {
          const double t_before = state.t;
          detail::step_in_place(state, dom, stream, nullptr, &trace, direction);
          ++steps_done;
          REQUIRE(state.t >= 0.0);
          REQUIRE(state.t >= t_before * (1.0 - trace.radius) * (1.0 - 1e-12));
          REQUIRE(trace.step_length <= trace.boundary_distance);
          const bool inside_or_boundary =
              dom.contains(state.x) || dom.distance_to_boundary(state.x) == 0.0;
          REQUIRE(inside_or_boundary);
        }
      }
    }
  }
  CHECK(steps_done > 20'000);
}
