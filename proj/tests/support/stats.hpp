#pragma once
// Shared helpers for the test suites: moment summaries, a one-sample
// Kolmogorov-Smirnov statistic, and least-squares fit quality.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace testsupport {

struct Moments {
  double mean = 0.0;
  double std_dev = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

inline Moments moments(const std::vector<double>& values) {
  Moments m;
  m.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std_dev = std::sqrt(ss / static_cast<double>(m.n - 1));
  m.std_error = m.std_dev / std::sqrt(static_cast<double>(m.n));
  return m;
}

/// Two-sided one-sample KS statistic sup |F_n - F| (samples get sorted).
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

/// Asymptotic KS critical value at significance alpha.
inline double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

/// R^2 of the least-squares line y = a + b x.
inline double linear_fit_r2(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double b = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = my + b * (xs[i] - mx);
    ss_res += (ys[i] - fit) * (ys[i] - fit);
  }
  return 1.0 - ss_res / syy;
}

}  // namespace testsupport
