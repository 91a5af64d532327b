#include "rnav/geom.hpp"

#include <algorithm>
#include <limits>

namespace rnav {

double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  else if (r > kPi) r -= kTwoPi;
  return r;
}

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

AngularDistance angle_cw_ccw_distance(double from, double to) {
  double ccw = wrap_two_pi(to - from);
  if (ccw < kAngleTol || kTwoPi - ccw < kAngleTol) return {0.0, 0.0};
  return {ccw, kTwoPi - ccw};
}

bool Arc::contains(double angle, double tol) const {
  if (full()) return true;
  const double off = wrap_two_pi(angle - start);
  return off <= width + tol || kTwoPi - off <= tol;
}

double Arc::offset_of(double angle) const { return wrap_two_pi(angle - start); }

Arc Arc::widened(double delta) const {
  Arc out{normalize_angle(start - delta), width + 2.0 * delta};
  if (out.width >= kTwoPi) out.width = kTwoPi;
  return out;
}

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  const auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const double d1 = orient(b0, b1, a0), d2 = orient(b0, b1, a1);
  const double d3 = orient(a0, a1, b0), d4 = orient(a0, a1, b1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(b0, b1, a0)) return true;
  if (d2 == 0 && on_segment(b0, b1, a1)) return true;
  if (d3 == 0 && on_segment(a0, a1, b0)) return true;
  if (d4 == 0 && on_segment(a0, a1, b1)) return true;
  return false;
}

double distance_segment_segment(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min({distance_point_segment(a0, b0, b1), distance_point_segment(a1, b0, b1),
                   distance_point_segment(b0, a0, a1), distance_point_segment(b1, a0, a1)});
}

namespace {

bool inside_convex(Vec2 p, std::span<const Vec2> poly) {
  if (poly.size() < 3) return false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

}  // namespace

double distance_point_convex(Vec2 p, std::span<const Vec2> poly) {
  if (poly.size() == 1) return (p - poly[0]).norm();
  if (poly.size() == 2) return distance_point_segment(p, poly[0], poly[1]);
  if (inside_convex(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, distance_point_segment(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

double distance_segment_convex(Vec2 a, Vec2 b, std::span<const Vec2> poly) {
  if (poly.size() == 1) return distance_point_segment(poly[0], a, b);
  if (inside_convex(a, poly) || inside_convex(b, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size() == 2 ? 1 : poly.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, distance_segment_segment(a, b, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

double distance_convex_convex(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.size() == 1) return distance_point_convex(a[0], b);
  if (b.size() == 1) return distance_point_convex(b[0], a);
  if (inside_convex(a[0], b) || inside_convex(b[0], a)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t na = a.size() == 2 ? 1 : a.size();
  const std::size_t nb = b.size() == 2 ? 1 : b.size();
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      best = std::min(best, distance_segment_segment(a[i], a[(i + 1) % a.size()], b[j],
                                                     b[(j + 1) % b.size()]));
  return best;
}

double ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
  const Vec2 oc = origin - center;
  const double b = dot(oc, dir);
  const double c = oc.squared_norm() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return -1.0;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  if (t0 >= 0.0) return t0;
  const double t1 = -b + sq;
  return t1 >= 0.0 ? 0.0 : -1.0;  // origin inside: hit at 0
}

double ray_segment(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double denom = cross(dir, ab);
  if (std::abs(denom) < 1e-15) return -1.0;
  const Vec2 ao = a - origin;
  const double t = cross(ao, ab) / denom;
  const double u = cross(ao, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return -1.0;
  return t;
}

}  // namespace rnav
