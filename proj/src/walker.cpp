#include "heatwalk/walker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatwalk/sampling.hpp"

namespace heatwalk {

double alpha(double t, const Point& x, const Domain& domain) {
  const double delta = domain.distance_to_boundary(x);
  const double space_scale =
      std::numbers::e / (2.0 * static_cast<double>(domain.dimension())) * delta * delta;
  return std::min(t, space_scale);
}

namespace detail {

void step_in_place(WalkState& state, const Domain& domain, RngStream& stream,
                   const WalkControls* controls, StepTrace* trace, Point& direction_buf) {
  const std::size_t d = domain.dimension();
  const double delta = domain.distance_to_boundary(state.x);
  const double a = std::min(
      state.t, std::numbers::e / (2.0 * static_cast<double>(d)) * delta * delta);
  if (!(a > 0.0)) throw std::logic_error("walker::step called with alpha = 0; caller must stop first");

  const double r = sample_radius(d, stream);
  const double profile = (controls && controls->psi_override) ? controls->psi_override(d, r)
                                                              : psi(d, r);
  // 2 sqrt(a) psi_d(R) <= delta holds exactly in the reals; the clamp
  // absorbs the last-ulp rounding of the product.
  const double length = std::min(2.0 * std::sqrt(a) * profile, delta);
  sample_unit_vector(d, stream, direction_buf);
  for (std::size_t i = 0; i < d; ++i) state.x[i] += length * direction_buf[i];
  state.t = std::max(0.0, state.t - a * r);
  state.n += 1;

  if (trace) {
    trace->boundary_distance = delta;
    trace->alpha = a;
    trace->radius = r;
    trace->step_length = length;
  }
}

WalkOutcome run_walk(double t0, const Point& x0, const Domain& domain, double eps,
                     RngStream& stream, const WalkControls& controls) {
  if (!(t0 > 0.0)) throw std::invalid_argument("run_walk: t0 must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("run_walk: eps must be positive");
  if (!domain.contains(x0)) throw std::invalid_argument("run_walk: x0 must lie inside the domain");

  const std::size_t d = domain.dimension();
  WalkState state{t0, x0, 0};
  Point direction(d);
  if (controls.path) controls.path->push_back(state);

  while (alpha(state.t, state.x, domain) > eps) {
    if (state.n >= controls.max_steps)
      throw StepLimitError("run_walk exceeded the per-walk step cap of " +
                           std::to_string(controls.max_steps));
    step_in_place(state, domain, stream, &controls, nullptr, direction);
    if (controls.path) controls.path->push_back(state);
  }

  const double delta = domain.distance_to_boundary(state.x);
  WalkOutcome out;
  out.n_steps = state.n;
  if (delta * delta <= 2.0 * eps * static_cast<double>(d) / std::numbers::e) {
    out.stop_kind = StopKind::BoundaryProjected;
    out.x_eps = domain.project_to_boundary(state.x);
    out.t_eps = state.t;
  } else {
    out.stop_kind = StopKind::TimeExhausted;
    out.x_eps = state.x;
    out.t_eps = 0.0;
  }
  return out;
}

}  // namespace detail

WalkState step(const WalkState& state, const Domain& domain, RngStream& stream) {
  WalkState next = state;
  Point direction;
  detail::step_in_place(next, domain, stream, nullptr, nullptr, direction);
  return next;
}

WalkOutcome run_walk(double t0, const Point& x0, const Domain& domain, double eps,
                     RngStream& stream) {
  return detail::run_walk(t0, x0, domain, eps, stream, detail::WalkControls{});
}

Point run_classical_wos(const Point& x0, const Domain& domain, double eps, double beta,
                        RngStream& stream) {
  if (!(eps > 0.0)) throw std::invalid_argument("run_classical_wos: eps must be positive");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("run_classical_wos: beta must lie in (0,1)");
  if (!domain.contains(x0))
    throw std::invalid_argument("run_classical_wos: x0 must lie inside the domain");

  const std::size_t d = domain.dimension();
  Point x = x0;
  Point direction(d);
  std::uint64_t steps = 0;
  double delta = domain.distance_to_boundary(x);
  while (delta > eps) {
    if (steps >= 10'000'000)
      throw StepLimitError("run_classical_wos exceeded the per-walk step cap");
    sample_unit_vector(d, stream, direction);
    for (std::size_t i = 0; i < d; ++i) x[i] += beta * delta * direction[i];
    delta = domain.distance_to_boundary(x);
    ++steps;
  }
  return domain.project_to_boundary(x);
}

}  // namespace heatwalk
