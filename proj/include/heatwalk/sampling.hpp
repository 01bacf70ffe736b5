#pragma once
/**
 * Random ingredients of one heat-ball step: the radial variable R with
 * density f_R(s) = psi_d^d(s) / (s Gamma(d/2)) on [0,1], uniform unit
 * vectors, the radius profile psi_d, and closed-form moments for
 * statistical tests.
 */

#include <cstddef>

#include "heatwalk/geometry.hpp"
#include "heatwalk/rng.hpp"

namespace heatwalk {

/// psi_d(s) = sqrt(s * (d/2) * ln(1/s)) for s in [0,1], with the
/// continuous extension psi_d(0) = psi_d(1) = 0. Throws std::domain_error
/// outside [0,1]. Maximum over [0,1] is sqrt(d/(2e)), attained at s = 1/e.
double psi(std::size_t d, double s);

/// One draw of the radial variable: R = (U_1 ... U_{floor(d/2)+1})^{2/d}
/// for even d, times exp(-G^2/d) for odd d. Always in [0,1].
double sample_radius(std::size_t d, RngStream& stream);

/// Density f_R of sample_radius; 0 outside (0,1). Integrates to 1.
double radius_pdf(std::size_t d, double s);

/// Uniform point on the unit sphere in R^d (normalized iid Gaussians),
/// written into out (resized to d).
void sample_unit_vector(std::size_t d, RngStream& stream, Point& out);
Point sample_unit_vector(std::size_t d, RngStream& stream);

/// Closed-form E[R] for sample_radius:
///   even d:  (d/(d+2))^{(d+2)/2}
///   odd  d:  (d/(d+2))^{(d+1)/2} * (1 + 2/d)^{-1/2}
/// i.e. one d/(d+2) factor per uniform plus the Gaussian factor for odd d.
double expected_radius(std::size_t d);

/// Uniform point of the open domain (rejection from the bounding box).
Point sample_interior(const Domain& domain, RngStream& stream);

}  // namespace heatwalk
