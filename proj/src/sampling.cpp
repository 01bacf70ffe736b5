#include "heatwalk/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace heatwalk {

double psi(std::size_t d, double s) {
  if (d == 0) throw std::domain_error("psi: dimension must be >= 1");
  if (s < 0.0 || s > 1.0) throw std::domain_error("psi: argument must lie in [0,1]");
  if (s == 0.0 || s == 1.0) return 0.0;
  // max(0, .) absorbs rounding of s*ln(1/s) below zero near s = 1
  return std::sqrt(std::max(0.0, s * (0.5 * static_cast<double>(d)) * std::log(1.0 / s)));
}

double sample_radius(std::size_t d, RngStream& stream) {
  if (d == 0) throw std::domain_error("sample_radius: dimension must be >= 1");
  const std::size_t n_uniform = d / 2 + 1;
  double product = 1.0;
  for (std::size_t i = 0; i < n_uniform; ++i) product *= stream.next_unit();
  double r = std::pow(product, 2.0 / static_cast<double>(d));
  if (d % 2 == 1) {
    const double g = stream.next_gaussian();
    r *= std::exp(-g * g / static_cast<double>(d));
  }
  return r;
}

double radius_pdf(std::size_t d, double s) {
  if (d == 0) throw std::domain_error("radius_pdf: dimension must be >= 1");
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double half_d = 0.5 * static_cast<double>(d);
  const double p = psi(d, s);
  return std::pow(p, static_cast<double>(d)) / (s * std::tgamma(half_d));
}

void sample_unit_vector(std::size_t d, RngStream& stream, Point& out) {
  if (d == 0) throw std::domain_error("sample_unit_vector: dimension must be >= 1");
  out.resize(d);
  if (d == 1) {
    double g;
    do {
      g = stream.next_gaussian();
    } while (g == 0.0);
    out[0] = g > 0.0 ? 1.0 : -1.0;
    return;
  }
  double norm_sq;
  do {
    norm_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double g = stream.next_gaussian();
      out[i] = g;
      norm_sq += g * g;
    }
  } while (norm_sq == 0.0);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : out) v *= inv;
}

Point sample_unit_vector(std::size_t d, RngStream& stream) {
  Point out;
  sample_unit_vector(d, stream, out);
  return out;
}

double expected_radius(std::size_t d) {
  if (d == 0) throw std::domain_error("expected_radius: dimension must be >= 1");
  const double dd = static_cast<double>(d);
  const double per_uniform = dd / (dd + 2.0);
  const double n_uniform = static_cast<double>(d / 2 + 1);
  double mean = std::pow(per_uniform, n_uniform);
  if (d % 2 == 1) mean /= std::sqrt(1.0 + 2.0 / dd);
  return mean;
}

Point sample_interior(const Domain& domain, RngStream& stream) {
  const auto [lo, hi] = domain.bounding_box();
  const std::size_t d = domain.dimension();
  Point x(d);
  if (domain.kind() == ShapeKind::Hypercube) {
    do {
      for (std::size_t i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * stream.next_unit();
    } while (!domain.contains(x));
    return x;
  }
  // Ball and half ball: direction times radius^(1/d) scaling; box rejection
  // would be hopeless in high dimension.
  const bool half = domain.kind() == ShapeKind::HalfBall;
  const double radius = half ? hi[0] : 0.5 * (hi[0] - lo[0]);
  std::size_t axis = 0;
  if (half)
    for (std::size_t i = 0; i < d; ++i)
      if (lo[i] == 0.0) axis = i;
  const Point center = half ? Point(d, 0.0) : domain.center_point();
  Point v;
  do {
    sample_unit_vector(d, stream, v);
    const double r = radius * std::pow(stream.next_unit(), 1.0 / static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) x[i] = center[i] + r * v[i];
    if (half) x[axis] = std::abs(x[axis]);
  } while (!domain.contains(x));
  return x;
}

}  // namespace heatwalk
