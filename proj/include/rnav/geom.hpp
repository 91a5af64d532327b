#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace rnav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Absolute tolerance used for angle equality and tie detection.
inline constexpr double kAngleTol = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product; positive when b is counter-clockwise of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Vec2 normalized(Vec2 a) { return a / a.norm(); }

/// Representative of a cyclic angle in (-pi, pi].
double normalize_angle(double a);
/// Representative in [0, 2pi).
double wrap_two_pi(double a);
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double polar_angle(Vec2 v) { return std::atan2(v.y, v.x); }

/// Rotations needed to go from `from` to `to`, counter-clockwise and clockwise.
struct AngularDistance {
  double ccw;
  double cw;
};
/// Both components lie in [0, 2pi) and sum to 2pi, except for coincident
/// angles where both are 0.
AngularDistance angle_cw_ccw_distance(double from, double to);

/// Closed arc of the circle starting at `start` and extending counter-clockwise
/// by `width`. A width of 2pi or more covers the full circle.
struct Arc {
  double start = 0.0;
  double width = 0.0;

  double end() const { return normalize_angle(start + width); }
  bool full() const { return width >= kTwoPi - kAngleTol; }
  bool contains(double angle, double tol = kAngleTol) const;
  /// Counter-clockwise offset of `angle` from the arc start, in [0, 2pi).
  double offset_of(double angle) const;
  Arc widened(double delta) const;
};

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_segment_segment(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);
bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

/// Distance from a point to a convex polygon given counter-clockwise; zero
/// inside. One or two vertices describe a point or a segment.
double distance_point_convex(Vec2 p, std::span<const Vec2> poly);
/// Distance between two convex polygons (each possibly a point or segment).
double distance_convex_convex(std::span<const Vec2> a, std::span<const Vec2> b);
/// Distance from a segment to a convex polygon.
double distance_segment_convex(Vec2 a, Vec2 b, std::span<const Vec2> poly);

/// Smallest t >= 0 with |origin + t*dir - center| = radius, or a negative
/// value when the ray misses. `dir` must be a unit vector.
double ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius);
/// Smallest t >= 0 at which the ray crosses segment [a, b], or negative.
double ray_segment(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b);

}  // namespace rnav
