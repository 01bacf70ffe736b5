#include "heatwalk/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatwalk/rng.hpp"
#include "heatwalk/sampling.hpp"

namespace heatwalk {

GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    std::size_t panels, std::size_t order) {
  const GaussLegendre rule = gauss_legendre(order);
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < order; ++k)
      panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    total += panel * 0.5 * h;
  }
  return total;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

SphereRule sphere_rule(std::size_t d, std::size_t order, std::size_t mc_nodes,
                       std::uint64_t mc_seed) {
  if (d == 0) throw std::invalid_argument("sphere_rule: dimension must be >= 1");
  SphereRule rule;
  if (d == 1) {
    rule.nodes = {Point{-1.0}, Point{1.0}};
    rule.weights = {0.5, 0.5};
    return rule;
  }
  if (d == 2) {
    const std::size_t n = std::max<std::size_t>(8, order);
    rule.nodes.reserve(n);
    rule.weights.assign(n, 1.0 / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      rule.nodes.push_back(Point{std::cos(a), std::sin(a)});
    }
    return rule;
  }
  if (d == 3) {
    const std::size_t m = std::max<std::size_t>(4, order);
    const std::size_t n_phi = 2 * m;
    const GaussLegendre gl = gauss_legendre(m);
    rule.nodes.reserve(m * n_phi);
    rule.weights.reserve(m * n_phi);
    for (std::size_t i = 0; i < m; ++i) {
      const double c = gl.nodes[i];             // cos(theta)
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double w = 0.5 * gl.weights[i] / static_cast<double>(n_phi);
      for (std::size_t j = 0; j < n_phi; ++j) {
        const double phi =
            2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_phi);
        rule.nodes.push_back(Point{s * std::cos(phi), s * std::sin(phi), c});
        rule.weights.push_back(w);
      }
    }
    return rule;
  }
  // d > 3: seeded Monte Carlo averaging.
  RngStream stream(mc_seed, d);
  rule.nodes.reserve(mc_nodes);
  rule.weights.assign(mc_nodes, 1.0 / static_cast<double>(mc_nodes));
  Point v;
  for (std::size_t k = 0; k < mc_nodes; ++k) {
    sample_unit_vector(d, stream, v);
    rule.nodes.push_back(v);
  }
  return rule;
}

namespace {

double radial_v_max(std::size_t d) {
  // exp(-v^2 d/2) * v^(d+1) is far below double precision at this point.
  return std::sqrt(50.0 + 100.0 / static_cast<double>(d));
}

// Integrand of integral g(s) f_R(s) ds after s = exp(-v^2).
double transformed_density(std::size_t d, double v) {
  const double s = std::exp(-v * v);
  return radius_pdf(d, s) * 2.0 * v * s;
}

}  // namespace

double integrate_against_radius_pdf(std::size_t d, const std::function<double(double)>& g,
                                    std::size_t panels, std::size_t order) {
  const double v_max = radial_v_max(d);
  return integrate_gl(
      [&](double v) {
        const double s = std::exp(-v * v);
        return g(s) * transformed_density(d, v);
      },
      0.0, v_max, panels, order);
}

RadiusCdf::RadiusCdf(std::size_t d, std::size_t segments, std::size_t order)
    : d_(d), rule_(gauss_legendre(order)), v_max_(radial_v_max(d)) {
  step_ = v_max_ / static_cast<double>(segments);
  suffix_.assign(segments + 1, 0.0);
  for (std::size_t k = segments; k-- > 0;) {
    const double lo = step_ * static_cast<double>(k);
    const double mid = lo + 0.5 * step_;
    double seg = 0.0;
    for (std::size_t j = 0; j < rule_.nodes.size(); ++j)
      seg += rule_.weights[j] * transformed_density(d_, mid + 0.5 * step_ * rule_.nodes[j]);
    suffix_[k] = suffix_[k + 1] + seg * 0.5 * step_;
  }
}

double RadiusCdf::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // P(R <= x) integrates the transformed density over v >= sqrt(ln(1/x)).
  const double v0 = std::sqrt(std::log(1.0 / x));
  if (v0 >= v_max_) return 0.0;
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(v0 / step_),
                                               suffix_.size() - 2);
  const double hi = step_ * static_cast<double>(k + 1);
  const double mid = 0.5 * (v0 + hi);
  const double half = 0.5 * (hi - v0);
  double part = 0.0;
  for (std::size_t j = 0; j < rule_.nodes.size(); ++j)
    part += rule_.weights[j] * transformed_density(d_, mid + half * rule_.nodes[j]);
  return std::min(1.0, part * half + suffix_[k + 1]);
}

}  // namespace heatwalk
