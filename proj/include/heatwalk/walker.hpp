#pragma once
/**
 * The space-time Markov chain (T_n, X_n) jumping on heat balls, its
 * stopping rule and terminal classification, plus the classical walk on
 * spheres as an elliptic baseline.
 *
 * One step from (t, x) with scale a = alpha(t, x):
 *   T' = T - a R,   X' = X + 2 sqrt(a) psi_d(R) V,
 * with R drawn from the radial density and V uniform on the unit sphere.
 * The jump length never exceeds the boundary distance, so the chain stays
 * in the closed domain; T is clamped at 0 against rounding.
 */

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "heatwalk/geometry.hpp"
#include "heatwalk/rng.hpp"

namespace heatwalk {

struct WalkState {
  double t = 0.0;        // time remaining, non-increasing, never negative
  Point x;               // position in closure(D)
  std::uint64_t n = 0;   // step count
};

enum class StopKind { BoundaryProjected, TimeExhausted };

struct WalkOutcome {
  double t_eps = 0.0;
  Point x_eps;
  StopKind stop_kind = StopKind::TimeExhausted;
  std::uint64_t n_steps = 0;
};

/// A walk ran past the step cap. The mean step count is provably finite,
/// so this signals a bug rather than an unlucky walk.
class StepLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest admissible heat-ball scale: min(t, (e/2d) * delta^2(x)).
double alpha(double t, const Point& x, const Domain& domain);

namespace detail {

struct StepTrace {
  double boundary_distance = 0.0;  // delta(X_n) before the jump
  double alpha = 0.0;
  double radius = 0.0;             // the draw R
  double step_length = 0.0;        // actual |X_{n+1} - X_n| used
};

struct WalkControls {
  std::function<double(std::size_t, double)> psi_override;  // test hook
  std::uint64_t max_steps = 10'000'000;
  std::vector<WalkState>* path = nullptr;  // optional diagnostics sink
};

void step_in_place(WalkState& state, const Domain& domain, RngStream& stream,
                   const WalkControls* controls, StepTrace* trace, Point& direction_buf);

WalkOutcome run_walk(double t0, const Point& x0, const Domain& domain, double eps,
                     RngStream& stream, const WalkControls& controls);

}  // namespace detail

/// One transition of the chain. Requires alpha(state) > 0.
WalkState step(const WalkState& state, const Domain& domain, RngStream& stream);

/// Runs the chain until alpha <= eps, then classifies the stop:
/// delta^2 <= 2 eps d / e projects onto the boundary keeping the clock,
/// otherwise the remaining time is spent in place (t_eps = 0).
WalkOutcome run_walk(double t0, const Point& x0, const Domain& domain, double eps,
                     RngStream& stream);

/// Classical walk on spheres: X' = X + beta * delta(X) * V while
/// delta(X) > eps, then projection onto the boundary.
Point run_classical_wos(const Point& x0, const Domain& domain, double eps, double beta,
                        RngStream& stream);

}  // namespace heatwalk
