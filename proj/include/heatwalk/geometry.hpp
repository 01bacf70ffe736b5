#pragma once
/**
 * Bounded domains in R^d with exact Euclidean boundary distance,
 * closest-point projection and membership tests.
 *
 * The shape catalog is closed: axis-aligned boxes, balls and half balls.
 * The walk's containment guarantee needs exact distances, so approximate
 * signed-distance fields are deliberately not supported.
 *
 * Conventions:
 *   - Domains are open sets; contains() uses strict inequalities.
 *   - distance_to_boundary() clamps to 0 for points outside the domain.
 *   - Projection ties are broken deterministically: lowest axis index
 *     first, lower face before upper face. A ball center projects along
 *     the first axis toward the lower side.
 */

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace heatwalk {

using Point = std::vector<double>;

enum class ShapeKind { Hypercube, Ball, HalfBall };

class Domain {
 public:
  /// Axis-aligned box given by per-axis open intervals ]lo_i, hi_i[.
  static Domain hypercube(std::vector<double> lo, std::vector<double> hi);
  /// Unit box ]0,1[^d.
  static Domain unit_hypercube(std::size_t d);
  /// Open ball of given center and radius.
  static Domain ball(Point center, double radius);
  /// Origin-centered ball.
  static Domain ball(std::size_t d, double radius);
  /// Half ball {x : ||x|| < r, x[axis] > 0}.
  static Domain half_ball(std::size_t d, double radius, std::size_t axis = 0);

  std::size_t dimension() const { return dim_; }
  ShapeKind kind() const { return kind_; }

  /// Exact distance from x to the boundary; 0 if x lies outside D.
  double distance_to_boundary(const Point& x) const;

  /// Closest boundary point; deterministic under ties.
  Point project_to_boundary(const Point& x) const;

  /// True iff x belongs to the open set D.
  bool contains(const Point& x) const;

  /// A point interior to the domain suitable as a default start
  /// (box center, ball center, (r/2)·e_axis for the half ball).
  Point center_point() const;

  /// Axis-aligned bounding box (lo, hi) of the closure.
  std::pair<Point, Point> bounding_box() const;

  /// Textual form, e.g. "hypercube(3)", "ball(2, 0.5)". Round-trips
  /// through parse_domain for every constructible domain.
  std::string to_text() const;

  bool operator==(const Domain& other) const;

 private:
  Domain() = default;
  void check_dimension(const Point& x) const;

  ShapeKind kind_ = ShapeKind::Hypercube;
  std::size_t dim_ = 0;
  std::vector<double> lo_, hi_;  // hypercube
  Point center_;                 // ball
  double radius_ = 0.0;          // ball, half ball
  std::size_t axis_ = 0;         // half ball cut axis
};

/// Parses "hypercube(d)" | "ball(d, r)" | "halfball(d, r)" plus the
/// extended forms emitted by Domain::to_text for non-canonical shapes.
Domain parse_domain(const std::string& text);

double norm2(const Point& x);
double distance(const Point& a, const Point& b);

}  // namespace heatwalk
