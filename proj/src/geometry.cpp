#include "heatwalk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace heatwalk {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("domain spec: bad ") + what + " '" + s + "'");
  }
}

std::size_t parse_index(const std::string& s, const char* what) {
  double v = parse_number(s, what);
  if (v < 0 || v != std::floor(v)) {
    throw std::invalid_argument(std::string("domain spec: ") + what + " must be a non-negative integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

double norm2(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

// Grows y away from center by last-place units until it leaves the open
// ball; spherical surface points are not representable exactly, and
// projections must never land inside the open set.
void push_out_of_ball(Point& y, const Point& center, double radius) {
  const double grow = std::nextafter(1.0, 2.0);
  for (int guard = 0; guard < 16 && distance(y, center) < radius; ++guard)
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = center[i] + (y[i] - center[i]) * grow;
}

}  // namespace

Domain Domain::hypercube(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw std::invalid_argument("hypercube: lo/hi must be non-empty and of equal size");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("hypercube: need lo < hi on every axis");
  Domain d;
  d.kind_ = ShapeKind::Hypercube;
  d.dim_ = lo.size();
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

Domain Domain::unit_hypercube(std::size_t d) {
  if (d == 0) throw std::invalid_argument("hypercube: dimension must be >= 1");
  return hypercube(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
}

Domain Domain::ball(Point center, double radius) {
  if (center.empty()) throw std::invalid_argument("ball: dimension must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  Domain d;
  d.kind_ = ShapeKind::Ball;
  d.dim_ = center.size();
  d.center_ = std::move(center);
  d.radius_ = radius;
  return d;
}

Domain Domain::ball(std::size_t d, double radius) { return ball(Point(d, 0.0), radius); }

Domain Domain::half_ball(std::size_t d, double radius, std::size_t axis) {
  if (d == 0) throw std::invalid_argument("halfball: dimension must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("halfball: radius must be positive");
  if (axis >= d) throw std::invalid_argument("halfball: cut axis out of range");
  Domain dom;
  dom.kind_ = ShapeKind::HalfBall;
  dom.dim_ = d;
  dom.radius_ = radius;
  dom.axis_ = axis;
  return dom;
}

void Domain::check_dimension(const Point& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match domain dimension " + std::to_string(dim_));
}

double Domain::distance_to_boundary(const Point& x) const {
  check_dimension(x);
  double margin = 0.0;
  switch (kind_) {
    case ShapeKind::Hypercube: {
      margin = hi_[0] - lo_[0];
      for (std::size_t i = 0; i < dim_; ++i)
        margin = std::min(margin, std::min(x[i] - lo_[i], hi_[i] - x[i]));
      break;
    }
    case ShapeKind::Ball:
      margin = radius_ - distance(x, center_);
      break;
    case ShapeKind::HalfBall:
      margin = std::min(x[axis_], radius_ - norm2(x));
      break;
  }
  return std::max(0.0, margin);
}

bool Domain::contains(const Point& x) const {
  check_dimension(x);
  switch (kind_) {
    case ShapeKind::Hypercube:
      for (std::size_t i = 0; i < dim_; ++i)
        if (!(x[i] > lo_[i] && x[i] < hi_[i])) return false;
      return true;
    case ShapeKind::Ball:
      return distance(x, center_) < radius_;
    case ShapeKind::HalfBall:
      return x[axis_] > 0.0 && norm2(x) < radius_;
  }
  return false;
}

Point Domain::project_to_boundary(const Point& x) const {
  check_dimension(x);
  switch (kind_) {
    case ShapeKind::Hypercube: {
      // Strictly outside on some axis: nearest boundary point is the clamp.
      bool outside = false;
      Point clamped = x;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] < lo_[i]) { clamped[i] = lo_[i]; outside = true; }
        if (x[i] > hi_[i]) { clamped[i] = hi_[i]; outside = true; }
      }
      if (outside) return clamped;
      // Inside or on a face: move to the closest face.
      // Ties: lowest axis index wins, lower face before upper face.
      std::size_t best_axis = 0;
      bool best_upper = false;
      double best = x[0] - lo_[0];
      for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] - lo_[i] < best) { best = x[i] - lo_[i]; best_axis = i; best_upper = false; }
        if (hi_[i] - x[i] < best) { best = hi_[i] - x[i]; best_axis = i; best_upper = true; }
      }
      Point y = x;
      y[best_axis] = best_upper ? hi_[best_axis] : lo_[best_axis];
      return y;
    }
    case ShapeKind::Ball: {
      double n = distance(x, center_);
      Point y = center_;
      if (n == 0.0) {
        y[0] -= radius_;  // degenerate center: lower face of axis 0
      } else {
        double scale = radius_ / n;
        for (std::size_t i = 0; i < dim_; ++i) y[i] = center_[i] + scale * (x[i] - center_[i]);
      }
      push_out_of_ball(y, center_, radius_);
      return y;
    }
    case ShapeKind::HalfBall: {
      // Candidate 1: nearest point of the flat disc {y_axis = 0, ||y|| <= r}.
      Point disc = x;
      disc[axis_] = 0.0;
      double m = norm2(disc);
      if (m > radius_) {
        double scale = radius_ / m;
        for (double& v : disc) v *= scale;
      }
      double d_disc = distance(x, disc);
      // Candidate 2: nearest point of the spherical cap {||y|| = r, y_axis >= 0}.
      Point cap(dim_, 0.0);
      if (x[axis_] >= 0.0) {
        double n = norm2(x);
        if (n == 0.0) {
          cap[axis_] = radius_;
        } else {
          double scale = radius_ / n;
          for (std::size_t i = 0; i < dim_; ++i) cap[i] = scale * x[i];
        }
      } else {
        // Below the cut plane: the nearest cap point sits on the rim.
        Point rim = x;
        rim[axis_] = 0.0;
        double n = norm2(rim);
        if (n == 0.0) {
          std::size_t b = (axis_ == 0 && dim_ > 1) ? 1 : 0;
          cap[b] = radius_;
        } else {
          double scale = radius_ / n;
          for (std::size_t i = 0; i < dim_; ++i) cap[i] = scale * rim[i];
        }
      }
      push_out_of_ball(cap, Point(dim_, 0.0), radius_);
      double d_cap = distance(x, cap);
      return d_disc <= d_cap ? disc : cap;  // flat face wins ties
    }
  }
  return x;
}

std::pair<Point, Point> Domain::bounding_box() const {
  Point lo(dim_, 0.0), hi(dim_, 0.0);
  switch (kind_) {
    case ShapeKind::Hypercube:
      lo = Point(lo_.begin(), lo_.end());
      hi = Point(hi_.begin(), hi_.end());
      break;
    case ShapeKind::Ball:
      for (std::size_t i = 0; i < dim_; ++i) {
        lo[i] = center_[i] - radius_;
        hi[i] = center_[i] + radius_;
      }
      break;
    case ShapeKind::HalfBall:
      for (std::size_t i = 0; i < dim_; ++i) {
        lo[i] = i == axis_ ? 0.0 : -radius_;
        hi[i] = radius_;
      }
      break;
  }
  return {std::move(lo), std::move(hi)};
}

Point Domain::center_point() const {
  Point c(dim_, 0.0);
  switch (kind_) {
    case ShapeKind::Hypercube:
      for (std::size_t i = 0; i < dim_; ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
      break;
    case ShapeKind::Ball:
      c = center_;
      break;
    case ShapeKind::HalfBall:
      c[axis_] = 0.5 * radius_;
      break;
  }
  return c;
}

bool Domain::operator==(const Domain& other) const {
  return kind_ == other.kind_ && dim_ == other.dim_ && lo_ == other.lo_ && hi_ == other.hi_ &&
         center_ == other.center_ && radius_ == other.radius_ && axis_ == other.axis_;
}

std::string Domain::to_text() const {
  std::ostringstream out;
  switch (kind_) {
    case ShapeKind::Hypercube: {
      bool unit = true;
      for (std::size_t i = 0; i < dim_; ++i)
        if (lo_[i] != 0.0 || hi_[i] != 1.0) unit = false;
      out << "hypercube(" << dim_;
      if (!unit)
        for (std::size_t i = 0; i < dim_; ++i)
          out << ", " << fmt_double(lo_[i]) << ":" << fmt_double(hi_[i]);
      out << ")";
      break;
    }
    case ShapeKind::Ball: {
      bool origin = std::all_of(center_.begin(), center_.end(), [](double v) { return v == 0.0; });
      out << "ball(" << dim_ << ", " << fmt_double(radius_);
      if (!origin)
        for (double v : center_) out << ", " << fmt_double(v);
      out << ")";
      break;
    }
    case ShapeKind::HalfBall:
      out << "halfball(" << dim_ << ", " << fmt_double(radius_);
      if (axis_ != 0) out << ", " << axis_;
      out << ")";
      break;
  }
  return out.str();
}

Domain parse_domain(const std::string& text) {
  const std::string s = trim(text);
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw std::invalid_argument("domain spec '" + text + "': expected name(args)");
  const std::string name = trim(s.substr(0, open));
  const std::string body = s.substr(open + 1, s.size() - open - 2);

  std::vector<std::string> args;
  std::string cur;
  for (char c : body) {
    if (c == ',') {
      args.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) args.push_back(trim(cur));
  if (args.empty()) throw std::invalid_argument("domain spec '" + text + "': missing dimension");

  const std::size_t d = parse_index(args[0], "dimension");
  if (d == 0) throw std::invalid_argument("domain spec: dimension must be >= 1");

  if (name == "hypercube") {
    if (args.size() == 1) return Domain::unit_hypercube(d);
    if (args.size() != d + 1)
      throw std::invalid_argument("hypercube: expected one lo:hi interval per axis");
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      auto colon = args[i + 1].find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("hypercube: interval must be lo:hi, got '" + args[i + 1] + "'");
      lo[i] = parse_number(trim(args[i + 1].substr(0, colon)), "interval bound");
      hi[i] = parse_number(trim(args[i + 1].substr(colon + 1)), "interval bound");
    }
    return Domain::hypercube(std::move(lo), std::move(hi));
  }
  if (name == "ball") {
    if (args.size() != 2 && args.size() != d + 2)
      throw std::invalid_argument("ball: expected ball(d, r) or ball(d, r, c0, ..)");
    double r = parse_number(args[1], "radius");
    if (args.size() == 2) return Domain::ball(d, r);
    Point c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = parse_number(args[i + 2], "center coordinate");
    return Domain::ball(std::move(c), r);
  }
  if (name == "halfball") {
    if (args.size() != 2 && args.size() != 3)
      throw std::invalid_argument("halfball: expected halfball(d, r) or halfball(d, r, axis)");
    double r = parse_number(args[1], "radius");
    std::size_t axis = args.size() == 3 ? parse_index(args[2], "axis") : 0;
    return Domain::half_ball(d, r, axis);
  }
  throw std::invalid_argument("domain spec: unknown shape '" + name + "'");
}

}  // namespace heatwalk
