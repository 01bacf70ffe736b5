#pragma once
/**
 * Small deterministic quadrature toolkit: Gauss-Legendre rules, composite
 * integration, fixed node sets on unit spheres, and integrals against the
 * radial step density.
 *
 * The radial density has an integrable singularity at 0 for d <= 2 and
 * half-integer powers for odd d; the substitution s = exp(-v^2) turns every
 * integral against it into a smooth integrand on a finite interval, so the
 * composite rules converge fast for all dimensions.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "heatwalk/geometry.hpp"

namespace heatwalk {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// Nodes and weights of the n-point Gauss-Legendre rule.
GaussLegendre gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre integral of f over [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    std::size_t panels, std::size_t order);

/// Adaptive Simpson integration to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// Fixed node set with weights summing to 1 (i.e. a sphere-average rule).
/// d = 1: the two points; d = 2: uniform angles; d = 3: Gauss-Legendre in
/// cos(theta) times uniform azimuth; d > 3: seeded Monte Carlo nodes.
struct SphereRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
};
SphereRule sphere_rule(std::size_t d, std::size_t order, std::size_t mc_nodes = 100'000,
                       std::uint64_t mc_seed = 0x5EEDu);

/// E[g(R)] = integral of g against radius_pdf over (0,1), computed through
/// the s = exp(-v^2) substitution.
double integrate_against_radius_pdf(std::size_t d, const std::function<double(double)>& g,
                                    std::size_t panels = 64, std::size_t order = 12);

/// Tabulated CDF of the radial density, built once by quadrature of
/// radius_pdf and then queried in O(order) per point.
class RadiusCdf {
 public:
  explicit RadiusCdf(std::size_t d, std::size_t segments = 4000, std::size_t order = 8);
  double operator()(double x) const;  // P(R <= x)

 private:
  std::size_t d_;
  GaussLegendre rule_;
  double v_max_;
  double step_;
  std::vector<double> suffix_;  // suffix_[k] = integral over [v_k, v_max]
};

}  // namespace heatwalk
