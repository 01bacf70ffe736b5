#pragma once
/**
 * Monte Carlo estimation of the IBVP solution from independent walks,
 * with uncertainty quantification and walk statistics.
 *
 * Each walk k draws from its own stream (seed, k); per-walk results land
 * in an index-ordered buffer and are reduced sequentially, so estimates
 * are bit-identical for a fixed seed regardless of the worker count.
 */

#include <cstdint>
#include <functional>
#include <vector>

#include "heatwalk/geometry.hpp"
#include "heatwalk/walker.hpp"

namespace heatwalk {

/// Boundary condition f on R+ x boundary and initial condition f0 on the
/// closed domain, with the compatibility requirement f(0, .) = f0 on the
/// boundary.
struct BoundaryData {
  std::function<double(double, const Point&)> f;
  std::function<double(const Point&)> f0;
};

/// Checks f(0, y) = f0(y) on boundary points obtained by projecting seeded
/// random interior points; throws std::invalid_argument beyond tol.
void verify_compatibility(const BoundaryData& data, const Domain& domain, double tol = 1e-9,
                          std::size_t samples = 256, std::uint64_t seed = 1);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;  // mean - 1.96 std_error
  double ci_hi = 0.0;  // mean + 1.96 std_error
  std::uint64_t n_samples = 0;
  double mean_steps = 0.0;
  double boundary_stop_fraction = 0.0;
};

struct EstimateOptions {
  int workers = 0;  // 0: HEATWALK_WORKERS env var, else hardware concurrency
  std::uint64_t max_steps_per_walk = 10'000'000;
  std::function<double(std::size_t, double)> psi_override;  // test hook
};

/// Resolved worker count for the options (>= 1).
int resolve_workers(int requested);

/// Payoff of one finished walk: f at a projected boundary point, f0 at a
/// time-exhausted interior point.
double sample_payoff(const WalkOutcome& outcome, const BoundaryData& data);

/// Mean of n independent payoffs started from (t, x), with standard error
/// and 95% confidence interval. Requires x in D, t > 0, eps > 0, n >= 2.
Estimate estimate_solution(const Domain& domain, const BoundaryData& data, double t,
                           const Point& x, double eps, std::uint64_t n, std::uint64_t seed,
                           const EstimateOptions& options = {});

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

struct WalkStatistics {
  Histogram step_counts;
  Histogram payoffs;
  double boundary_stop_fraction = 0.0;
  Estimate estimate;
};

/// Histograms of the per-walk payoff and step count (uniform bins over the
/// observed range) plus the boundary-stop fraction. Requires n >= 1.
WalkStatistics walk_statistics(const Domain& domain, const BoundaryData& data, double t,
                               const Point& x, double eps, std::uint64_t n, std::uint64_t seed,
                               std::size_t bins = 50, const EstimateOptions& options = {});

}  // namespace heatwalk
