#pragma once
/**
 * Independent verification machinery: the space-time mean value identity
 * evaluated by tensor quadrature, a closed-form eigenfunction solution,
 * a small explicit finite-difference reference solver (2-D only), and a
 * martingale diagnostic on finished walks.
 *
 * Everything here exists to cross-check the walk and the estimator
 * through routes that do not share their code paths.
 */

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "heatwalk/estimator.hpp"
#include "heatwalk/geometry.hpp"

namespace heatwalk {

/// A solution of dh/dt = laplacian(h) on its region of use, together with
/// a bound on sup max(|dh/dt|, |grad h|) for tolerance formulas.
struct Temperature {
  std::function<double(double, const Point&)> h;
  double gradient_bound = 0.0;
};

/// Finite-difference residual |dh/dt - laplacian(h)| / scale at (t, x);
/// used to validate that a Temperature's function is in fact one.
double heat_equation_residual(const std::function<double(double, const Point&)>& h, double t,
                              const Point& x);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeanValueOptions {
  std::size_t radial_panels = 32;
  std::size_t radial_order = 12;
  std::size_t sphere_order = 32;     // d = 2: node count; d = 3: polar order
  std::size_t sphere_mc_nodes = 100'000;  // d > 3
  std::uint64_t sphere_mc_seed = 0x5EEDu;
};

/// Absolute residual |h(t,x) - E_R[ sphere average of h on the heat ball ]|
/// where the radial average is taken against the step density. Computes the
/// residual at the given and doubled resolution and throws QuadratureError
/// if they disagree by more than tol.
double mean_value_check(const Temperature& temp, double t, const Point& x, double alpha,
                        double tol, const MeanValueOptions& options = {});

/// exp(-d pi^2 t) * prod_i sin(pi x_i): the decaying fundamental mode of
/// the unit hypercube with zero boundary values.
double exact_eigen_solution(std::size_t d, double t, const Point& x);

/// Explicit 5-point solution on a rectangle, evaluated at time t, with a
/// bilinear accessor for off-grid points.
class FdSolution {
 public:
  FdSolution(double x0, double x1, double y0, double y1, double t, std::size_t nx,
             std::size_t ny, std::vector<double> values);
  double value(double x, double y) const;
  double time() const { return t_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

 private:
  double x0_, x1_, y0_, y1_, t_;
  std::size_t nx_, ny_;
  std::vector<double> values_;  // row-major, j * nx + i
};

/// Forward-Euler solve of the heat equation on [x0,x1] x [y0,y1] up to
/// time t with nx x ny nodes and nt time steps. Throws on violation of
/// the explicit-scheme stability bound dt <= dx^2 dy^2 / (2(dx^2+dy^2)).
FdSolution fd_solve_2d(double x0, double x1, double y0, double y1, const BoundaryData& data,
                       double t, std::size_t nx, std::size_t ny, std::size_t nt);

struct MartingaleCheck {
  double empirical_mean = 0.0;
  double reference = 0.0;   // h(t, x) at the start
  double std_error = 0.0;
  double z = 0.0;           // (mean - reference) / SE, 0 when SE = 0
  double bias_allowance = 0.0;  // gradient_bound * (eps + sqrt(2 eps d / e))
};

/// Runs n walks and compares the empirical mean of h at the stopping state
/// against h(t, x). For a temperature the gap is pure Monte Carlo noise
/// plus the O(sqrt(eps)) stopping bias covered by bias_allowance.
MartingaleCheck martingale_check(const Domain& domain, const Temperature& temp, double t,
                                 const Point& x, double eps, std::uint64_t n, std::uint64_t seed,
                                 const EstimateOptions& options = {});

}  // namespace heatwalk
