#pragma once

// Planar primitives shared by every module: vectors, rotations, convex hulls
// and the three zone shapes a potential freezing zone can take.

#include <cmath>
#include <span>
#include <variant>
#include <vector>

namespace frozone {

/// Absolute tolerance (meters) for every geometric predicate.
inline constexpr double kGeomTol = 1e-9;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

  Vec2& operator+=(const Vec2& r) {
    x += r.x;
    y += r.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& r) {
    x -= r.x;
    y -= r.y;
    return *this;
  }

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3-D cross product; positive when b is counterclockwise of a.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Lexicographic (x, then y) ordering used for canonical hulls.
constexpr bool lex_less(const Vec2& a, const Vec2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

/// Euclidean distance between two points.
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Unit vector along v, or the zero vector when ‖v‖ is below kGeomTol.
Vec2 normalized(const Vec2& v);

/// Counterclockwise rotation of v by phi radians about +z.
Vec2 rotate(const Vec2& v, double phi);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Distance from p to the closed segment [a, b].
double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b);

struct Segment {
  Vec2 a;
  Vec2 b;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Convex polygon in canonical form: counterclockwise, no three consecutive
/// vertices collinear, lexicographically smallest vertex first.
class ConvexPolygon {
 public:
  /// Throws std::invalid_argument unless `vertices` is already canonical.
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  std::vector<Vec2> vertices_;
};

/// Result of a hull computation: a lone point, a segment (all inputs
/// collinear), or a proper polygon.
using Hull = std::variant<Vec2, Segment, ConvexPolygon>;

/// Andrew's monotone chain. Throws std::invalid_argument("empty point set").
Hull convex_hull(std::span<const Vec2> points);

struct Circle {
  Vec2 center;
  double radius{0.0};
  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Segment grown by `inflation` meters (a stadium).
struct InflatedSegment {
  Vec2 a;
  Vec2 b;
  double inflation{0.0};
  friend bool operator==(const InflatedSegment&, const InflatedSegment&) = default;
};

/// Potential freezing zone. Regions are closed: boundary points are inside.
using Pfz = std::variant<ConvexPolygon, Circle, InflatedSegment>;

bool contains(const ConvexPolygon& poly, const Vec2& p);
bool contains(const Pfz& zone, const Vec2& p);

/// Distance from p to the zone; exactly 0 iff contains(zone, p).
double dist_to_zone(const Pfz& zone, const Vec2& p);

}  // namespace frozone
