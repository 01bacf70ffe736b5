#include "heatwalk/oracle.hpp"

#include <cmath>
#include <numbers>

#include "heatwalk/quadrature.hpp"
#include "heatwalk/sampling.hpp"

namespace heatwalk {

double heat_equation_residual(const std::function<double(double, const Point&)>& h, double t,
                              const Point& x) {
  const double ht = 1e-5;
  const double hx = 1e-4;
  const double dt = (h(t + ht, x) - h(t - ht, x)) / (2.0 * ht);
  double lap = 0.0;
  Point y = x;
  const double center = h(t, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + hx;
    const double up = h(t, y);
    y[i] = x[i] - hx;
    const double down = h(t, y);
    y[i] = x[i];
    lap += (up - 2.0 * center + down) / (hx * hx);
  }
  const double scale = 1.0 + std::abs(dt) + std::abs(lap);
  return std::abs(dt - lap) / scale;
}

namespace {

double mean_value_integral(const Temperature& temp, double t, const Point& x, double a,
                           const MeanValueOptions& opt) {
  const std::size_t d = x.size();
  const SphereRule sphere = sphere_rule(d, opt.sphere_order, opt.sphere_mc_nodes,
                                        opt.sphere_mc_seed);
  const double two_sqrt_a = 2.0 * std::sqrt(a);
  Point y(d);
  const auto sphere_average = [&](double s) {
    const double r = two_sqrt_a * psi(d, s);
    double acc = 0.0;
    for (std::size_t k = 0; k < sphere.nodes.size(); ++k) {
      for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + r * sphere.nodes[k][i];
      acc += sphere.weights[k] * temp.h(t - a * s, y);
    }
    return acc;
  };
  return integrate_against_radius_pdf(d, sphere_average, opt.radial_panels, opt.radial_order);
}

}  // namespace

double mean_value_check(const Temperature& temp, double t, const Point& x, double alpha,
                        double tol, const MeanValueOptions& options) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mean_value_check: alpha must be positive");
  const double reference = temp.h(t, x);
  const double coarse = std::abs(reference - mean_value_integral(temp, t, x, alpha, options));
  MeanValueOptions fine = options;
  fine.radial_panels *= 2;
  fine.sphere_order *= 2;
  fine.sphere_mc_nodes *= 2;
  const double refined = std::abs(reference - mean_value_integral(temp, t, x, alpha, fine));
  if (std::abs(coarse - refined) > tol)
    throw QuadratureError("mean_value_check did not converge: residuals " +
                          std::to_string(coarse) + " vs " + std::to_string(refined));
  return refined;
}

double exact_eigen_solution(std::size_t d, double t, const Point& x) {
  if (x.size() != d) throw std::invalid_argument("exact_eigen_solution: dimension mismatch");
  double value = std::exp(-static_cast<double>(d) * std::numbers::pi * std::numbers::pi * t);
  for (double xi : x) value *= std::sin(std::numbers::pi * xi);
  return value;
}

FdSolution::FdSolution(double x0, double x1, double y0, double y1, double t, std::size_t nx,
                       std::size_t ny, std::vector<double> values)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), t_(t), nx_(nx), ny_(ny), values_(std::move(values)) {}

double FdSolution::value(double x, double y) const {
  if (x < x0_ || x > x1_ || y < y0_ || y > y1_)
    throw std::invalid_argument("FdSolution::value: point outside the solved rectangle");
  const double fx = (x - x0_) / (x1_ - x0_) * static_cast<double>(nx_ - 1);
  const double fy = (y - y0_) / (y1_ - y0_) * static_cast<double>(ny_ - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(fx), nx_ - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(fy), ny_ - 2);
  const double ax = fx - static_cast<double>(i);
  const double ay = fy - static_cast<double>(j);
  const auto at = [&](std::size_t ii, std::size_t jj) { return values_[jj * nx_ + ii]; };
  return (1.0 - ax) * (1.0 - ay) * at(i, j) + ax * (1.0 - ay) * at(i + 1, j) +
         (1.0 - ax) * ay * at(i, j + 1) + ax * ay * at(i + 1, j + 1);
}

FdSolution fd_solve_2d(double x0, double x1, double y0, double y1, const BoundaryData& data,
                       double t, std::size_t nx, std::size_t ny, std::size_t nt) {
  if (!(x0 < x1 && y0 < y1)) throw std::invalid_argument("fd_solve_2d: empty rectangle");
  if (nx < 3 || ny < 3) throw std::invalid_argument("fd_solve_2d: need at least 3 nodes per axis");
  if (nt == 0) throw std::invalid_argument("fd_solve_2d: need at least one time step");
  if (!(t >= 0.0)) throw std::invalid_argument("fd_solve_2d: time beyond the simulated horizon");
  if (!data.f || !data.f0) throw std::invalid_argument("fd_solve_2d: boundary data must be set");

  const double dx = (x1 - x0) / static_cast<double>(nx - 1);
  const double dy = (y1 - y0) / static_cast<double>(ny - 1);
  const double dt = t / static_cast<double>(nt);
  const double dx2 = dx * dx, dy2 = dy * dy;
  const double stable = dx2 * dy2 / (2.0 * (dx2 + dy2));
  if (dt > stable)
    throw std::invalid_argument("fd_solve_2d: dt = " + std::to_string(dt) +
                                " violates the stability bound " + std::to_string(stable));

  const auto node = [&](std::size_t i, std::size_t j) {
    return Point{x0 + dx * static_cast<double>(i), y0 + dy * static_cast<double>(j)};
  };

  std::vector<double> u(nx * ny), next(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) u[j * nx + i] = data.f0(node(i, j));

  for (std::size_t step = 1; step <= nt; ++step) {
    const double now = dt * static_cast<double>(step);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        const double c = u[j * nx + i];
        const double lap = (u[j * nx + i + 1] - 2.0 * c + u[j * nx + i - 1]) / dx2 +
                           (u[(j + 1) * nx + i] - 2.0 * c + u[(j - 1) * nx + i]) / dy2;
        next[j * nx + i] = c + dt * lap;
      }
    }
    for (std::size_t i = 0; i < nx; ++i) {
      next[i] = data.f(now, node(i, 0));
      next[(ny - 1) * nx + i] = data.f(now, node(i, ny - 1));
    }
    for (std::size_t j = 0; j < ny; ++j) {
      next[j * nx] = data.f(now, node(0, j));
      next[j * nx + nx - 1] = data.f(now, node(nx - 1, j));
    }
    u.swap(next);
  }
  return FdSolution(x0, x1, y0, y1, t, nx, ny, std::move(u));
}

MartingaleCheck martingale_check(const Domain& domain, const Temperature& temp, double t,
                                 const Point& x, double eps, std::uint64_t n, std::uint64_t seed,
                                 const EstimateOptions& options) {
  if (!temp.h) throw std::invalid_argument("martingale_check: temperature function must be set");
  BoundaryData data;
  data.f = temp.h;
  data.f0 = [&temp](const Point& y) { return temp.h(0.0, y); };
  const Estimate est = estimate_solution(domain, data, t, x, eps, n, seed, options);

  MartingaleCheck check;
  check.empirical_mean = est.mean;
  check.reference = temp.h(t, x);
  check.std_error = est.std_error;
  const double diff = est.mean - check.reference;
  check.z = est.std_error > 0.0 ? diff / est.std_error : 0.0;
  const double d = static_cast<double>(domain.dimension());
  check.bias_allowance =
      temp.gradient_bound * (eps + std::sqrt(2.0 * eps * d / std::numbers::e));
  return check;
}

}  // namespace heatwalk
