#include "heatwalk/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "heatwalk/sampling.hpp"

namespace heatwalk {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HEATWALK_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void verify_compatibility(const BoundaryData& data, const Domain& domain, double tol,
                          std::size_t samples, std::uint64_t seed) {
  if (!data.f || !data.f0) throw std::invalid_argument("boundary data: f and f0 must be set");
  RngStream stream(seed, 0);
  for (std::size_t k = 0; k < samples; ++k) {
    // A random interior point projected outward gives a boundary sample.
    const Point y = domain.project_to_boundary(sample_interior(domain, stream));
    const double fv = data.f(0.0, y);
    const double f0v = data.f0(y);
    if (!(std::abs(fv - f0v) <= tol))
      throw std::invalid_argument("boundary data: f(0,.) != f0 on the boundary (|" +
                                  std::to_string(fv) + " - " + std::to_string(f0v) + "| > tol)");
  }
}

double sample_payoff(const WalkOutcome& outcome, const BoundaryData& data) {
  if (outcome.stop_kind == StopKind::BoundaryProjected) return data.f(outcome.t_eps, outcome.x_eps);
  return data.f0(outcome.x_eps);
}

namespace {

struct PerWalk {
  double payoff = 0.0;
  double steps = 0.0;
  bool boundary = false;
};

std::vector<PerWalk> run_walk_batch(const Domain& domain, const BoundaryData& data, double t,
                                    const Point& x, double eps, std::uint64_t n,
                                    std::uint64_t seed, const EstimateOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("estimator: t must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("estimator: eps must be positive");
  if (!domain.contains(x)) throw std::invalid_argument("estimator: start point must lie inside the domain");
  if (!data.f || !data.f0) throw std::invalid_argument("estimator: boundary data must be set");

  detail::WalkControls controls;
  controls.max_steps = options.max_steps_per_walk;
  controls.psi_override = options.psi_override;

  std::vector<PerWalk> results(n);
  const int workers = std::min<std::uint64_t>(resolve_workers(options.workers), std::max<std::uint64_t>(n, 1));

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      RngStream stream(seed, k);
      const WalkOutcome outcome = detail::run_walk(t, x, domain, eps, stream, controls);
      results[k].payoff = sample_payoff(outcome, data);
      results[k].steps = static_cast<double>(outcome.n_steps);
      results[k].boundary = outcome.stop_kind == StopKind::BoundaryProjected;
    }
  };

  if (workers <= 1) {
    run_range(0, n);
    return results;
  }

  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::uint64_t chunk = (n + static_cast<std::uint64_t>(workers) - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t begin = static_cast<std::uint64_t>(w) * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        run_range(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

Estimate reduce_estimate(const std::vector<PerWalk>& results) {
  const std::uint64_t n = results.size();
  double sum = 0.0, steps = 0.0;
  std::uint64_t boundary = 0;
  for (const PerWalk& r : results) {
    sum += r.payoff;
    steps += r.steps;
    boundary += r.boundary ? 1 : 0;
  }
  Estimate est;
  est.n_samples = n;
  est.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const PerWalk& r : results) {
    const double dv = r.payoff - est.mean;
    ss += dv * dv;
  }
  est.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  est.ci_lo = est.mean - 1.96 * est.std_error;
  est.ci_hi = est.mean + 1.96 * est.std_error;
  est.mean_steps = steps / static_cast<double>(n);
  est.boundary_stop_fraction = static_cast<double>(boundary) / static_cast<double>(n);
  return est;
}

Histogram build_histogram(const std::vector<double>& values, std::size_t bins) {
  Histogram h;
  h.counts.assign(std::max<std::size_t>(bins, 1), 0);
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  h.lo = *lo_it;
  h.hi = *hi_it;
  const double width = h.hi - h.lo;
  for (double v : values) {
    std::size_t idx = 0;
    if (width > 0.0) {
      idx = static_cast<std::size_t>((v - h.lo) / width * static_cast<double>(h.counts.size()));
      idx = std::min(idx, h.counts.size() - 1);
    }
    ++h.counts[idx];
  }
  return h;
}

}  // namespace

Estimate estimate_solution(const Domain& domain, const BoundaryData& data, double t,
                           const Point& x, double eps, std::uint64_t n, std::uint64_t seed,
                           const EstimateOptions& options) {
  if (n < 2) throw std::invalid_argument("estimate_solution: need at least 2 walks");
  return reduce_estimate(run_walk_batch(domain, data, t, x, eps, n, seed, options));
}

WalkStatistics walk_statistics(const Domain& domain, const BoundaryData& data, double t,
                               const Point& x, double eps, std::uint64_t n, std::uint64_t seed,
                               std::size_t bins, const EstimateOptions& options) {
  if (n < 2) throw std::invalid_argument("walk_statistics: need at least 2 walks");
  if (bins == 0) throw std::invalid_argument("walk_statistics: need at least one bin");
  const std::vector<PerWalk> results = run_walk_batch(domain, data, t, x, eps, n, seed, options);

  WalkStatistics stats;
  stats.estimate = reduce_estimate(results);
  stats.boundary_stop_fraction = stats.estimate.boundary_stop_fraction;

  std::vector<double> payoffs(results.size()), steps(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    payoffs[i] = results[i].payoff;
    steps[i] = results[i].steps;
  }
  stats.payoffs = build_histogram(payoffs, bins);
  stats.step_counts = build_histogram(steps, bins);
  return stats;
}

}  // namespace heatwalk
