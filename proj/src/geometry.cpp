#include "frozone/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace frozone {

Vec2 normalized(const Vec2& v) {
  const double n = v.norm();
  if (n < kGeomTol) {
    return {};
  }
  return v / n;
}

Vec2 rotate(const Vec2& v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) {
    a += 2.0 * std::numbers::pi;
  }
  return a;
}

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) {
    return dist(p, a);
  }
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw std::invalid_argument("convex polygon needs at least 3 vertices");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!lex_less(vertices_[0], vertices_[i])) {
      throw std::invalid_argument("first polygon vertex must be lexicographically smallest");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2& c = vertices_[(i + 2) % n];
    if (cross(b - a, c - b) <= kGeomTol) {
      throw std::invalid_argument("polygon vertices must be strictly convex and counterclockwise");
    }
  }
}

Hull convex_hull(std::span<const Vec2> points) {
  if (points.empty()) {
    throw std::invalid_argument("empty point set");
  }
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  if (pts.size() == 1) {
    return pts.front();
  }

  // Lower then upper chain; collinear points are dropped (<= tolerance).
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  const auto turns_left = [&](const Vec2& p) {
    return cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) > kGeomTol;
  };
  for (const Vec2& p : pts) {
    while (k >= 2 && !turns_left(p)) {
      --k;
    }
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && !turns_left(*it)) {
      --k;
    }
    hull[k++] = *it;
  }
  hull.resize(k - 1);

  if (hull.size() < 3) {
    return Segment{pts.front(), pts.back()};
  }
  return ConvexPolygon(std::move(hull));
}

bool contains(const ConvexPolygon& poly, const Vec2& p) {
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    const Vec2 edge = b - a;
    // Signed distance of p from the edge line, positive on the interior side.
    if (cross(edge, p - a) / edge.norm() < -kGeomTol) {
      return false;
    }
  }
  return true;
}

namespace {

struct ContainsVisitor {
  const Vec2& p;
  bool operator()(const ConvexPolygon& poly) const { return contains(poly, p); }
  bool operator()(const Circle& c) const { return dist(p, c.center) <= c.radius + kGeomTol; }
  bool operator()(const InflatedSegment& s) const {
    return dist_to_segment(p, s.a, s.b) <= s.inflation + kGeomTol;
  }
};

struct DistanceVisitor {
  const Vec2& p;
  double operator()(const ConvexPolygon& poly) const {
    double best = std::numeric_limits<double>::infinity();
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      best = std::min(best, dist_to_segment(p, v[i], v[(i + 1) % v.size()]));
    }
    return best;
  }
  double operator()(const Circle& c) const { return dist(p, c.center) - c.radius; }
  double operator()(const InflatedSegment& s) const {
    return dist_to_segment(p, s.a, s.b) - s.inflation;
  }
};

}  // namespace

bool contains(const Pfz& zone, const Vec2& p) { return std::visit(ContainsVisitor{p}, zone); }

double dist_to_zone(const Pfz& zone, const Vec2& p) {
  if (contains(zone, p)) {
    return 0.0;
  }
  return std::visit(DistanceVisitor{p}, zone);
}

}  // namespace frozone
