#include "rnav/hats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rnav {

namespace {

bool in_triangle(Vec2 p, const std::array<Vec2, 3>& t, double tol) {
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = t[i], b = t[(i + 1) % 3];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    if (cross(b - a, p - a) / len < -tol) return false;
  }
  return true;
}

// Far end, along `dir`, of the boundary set whose tangent has polar angle `tangent_angle`.
Vec2 tangency_point(const ConvexCurve& c, double tangent_angle, Vec2 dir) {
  const auto params = c.tangent_arc_params(tangent_angle);
  Vec2 best = c.point_at(params.front());
  for (double s : params) {
    const Vec2 p = c.point_at(s);
    if (dot(p, dir) > dot(best, dir)) best = p;
  }
  return best;
}

bool in_sector(Vec2 p, Vec2 center, double radius, double start, double width) {
  const Vec2 d = p - center;
  if (d.squared_norm() > radius * radius * (1.0 + 1e-12)) return false;
  if (d.squared_norm() == 0.0) return true;
  return Arc{start, width}.contains(polar_angle(d), 1e-12);
}

std::vector<Vec2> sector_polygon(Vec2 center, double radius, double start, double width,
                                 int samples) {
  std::vector<Vec2> poly{center, center + unit(start) * radius};
  const double step = width / samples;
  const double outer = radius / std::cos(0.5 * step);
  for (int i = 0; i < samples; ++i) poly.push_back(center + unit(start + (i + 0.5) * step) * outer);
  poly.push_back(center + unit(start + width) * radius);
  return poly;
}

void check_xi(double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) throw std::domain_error("speed ratio must lie in [0, 1)");
}

}  // namespace

std::array<Vec2, 3> Hat::triangle() const { return {vertex, tangency_cw, tangency_ccw}; }

bool Hat::contains(Vec2 p) const {
  const double scale = std::max({segment_length_ccw(), segment_length_cw(), 1e-12});
  if (!in_triangle(p, triangle(), 1e-12 * scale)) return false;
  return obstacle.clearance(p) >= -1e-12 * scale;
}

Hat build_hat(const ConvexCurve& obstacle, Vec2 f, double delta) {
  if (!(delta > 0.0 && delta < kPi / 2.0))
    throw std::invalid_argument("build_hat: delta must lie in (0, pi/2)");
  const double theta = polar_angle(f);
  Hat h{.vertex = {}, .tangency_ccw = {}, .tangency_cw = {},
        .ray_ccw = normalize_angle(theta + kPi / 2.0 - delta),
        .ray_cw = normalize_angle(theta - kPi / 2.0 + delta),
        .delta = delta, .height = 0.0, .obstacle = obstacle};
  const Vec2 u_ccw = unit(h.ray_ccw);
  const Vec2 u_cw = unit(h.ray_cw);
  // The ccw ray touches where the boundary tangent points at 3pi/2 - delta
  // relative to f, the cw ray at 3pi/2 + delta.
  h.tangency_ccw = tangency_point(obstacle, theta + 1.5 * kPi - delta, u_ccw);
  h.tangency_cw = tangency_point(obstacle, theta + 1.5 * kPi + delta, u_cw);
  const double denom = cross(u_ccw, u_cw);
  if (std::abs(denom) < 1e-14) throw DegenerateHat();
  const double a = cross(h.tangency_cw - h.tangency_ccw, u_cw) / denom;
  h.vertex = h.tangency_ccw + u_ccw * a;
  h.height = obstacle.distance(h.vertex);
  return h;
}

ExtendedHat extend_hat(const Hat& hat, double delta1) {
  if (!(delta1 >= 0.0 && delta1 < kPi / 2.0))
    throw std::invalid_argument("extend_hat: delta1 must lie in [0, pi/2)");
  return ExtendedHat{hat, delta1};
}

bool ExtendedHat::contains(Vec2 p) const {
  if (base.contains(p)) return true;
  const double w = sweep();
  return in_sector(p, base.vertex, base.segment_length_ccw(), base.ray_ccw, w) ||
         in_sector(p, base.vertex, base.segment_length_cw(), base.ray_cw - w, w);
}

std::vector<std::vector<Vec2>> ExtendedHat::convex_parts(int arc_samples) const {
  const auto tri = base.triangle();
  const double w = sweep();
  return {std::vector<Vec2>(tri.begin(), tri.end()),
          sector_polygon(base.vertex, base.segment_length_ccw(), base.ray_ccw, w, arc_samples),
          sector_polygon(base.vertex, base.segment_length_cw(), base.ray_cw - w, w, arc_samples)};
}

double ExtendedHat::distance_to(const ConvexCurve& body, int arc_samples) const {
  double best = std::numeric_limits<double>::infinity();
  for (auto& part : convex_parts(arc_samples)) {
    // Drop repeated points from degenerate (zero-length) tangent segments.
    std::vector<Vec2> clean;
    for (const Vec2& p : part)
      if (clean.empty() || (p - clean.back()).squared_norm() > 0.0) clean.push_back(p);
    while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    if (clean.size() >= 3) {
      // Collinear triangles (zero-height hats) become segments.
      const double area = cross(clean[1] - clean[0], clean[2] - clean[0]);
      if (clean.size() == 3 && std::abs(area) < 1e-18) clean = {clean[0], clean[2]};
    }
    const double d = distance_convex_convex(clean, body.core()) - body.radius();
    best = std::min(best, std::max(0.0, d));
  }
  return best;
}

double ExtendedHat::support_value(Vec2 dir) const {
  double best = -std::numeric_limits<double>::infinity();
  for (auto& part : convex_parts(1024))
    for (const Vec2& p : part) best = std::max(best, dot(p, dir));
  return best;
}

double ExtendedHat::bounding_radius() const {
  return std::max(base.segment_length_ccw(), base.segment_length_cw()) / std::cos(0.5 * sweep() / 256);
}

double hat_max_distance(const Hat& hat, int subdivisions) {
  const auto tri = hat.triangle();
  int n = subdivisions;
  if (n <= 0) {
    double longest = 0.0;
    for (int i = 0; i < 3; ++i) longest = std::max(longest, (tri[(i + 1) % 3] - tri[i]).norm());
    const double step = 1e-3 * std::max(hat.height, 1e-12);
    n = std::clamp(static_cast<int>(std::ceil(longest / step)), 50, 2000);
  }
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double a = static_cast<double>(i) / n, b = static_cast<double>(j) / n;
      const Vec2 p = tri[0] * (1.0 - a - b) + tri[1] * a + tri[2] * b;
      if (hat.obstacle.clearance(p) < 0.0) continue;
      best = std::max(best, hat.obstacle.distance(p));
    }
  }
  return best;
}

double criterion_omega(double xi) {
  check_xi(xi);
  return 1.0 / std::sqrt(1.0 - xi * xi) - 1.0;
}

double criterion_upsilon(double xi) {
  check_xi(xi);
  const double c = std::sqrt(1.0 - xi * xi);
  return (std::sqrt(1.0 + 3.0 * xi * xi) - c) / c;
}

double criterion_gamma(double xi) {
  check_xi(xi);
  return xi / std::sqrt(1.0 - xi * xi);
}

double criterion_xi_fn(double xi) {
  check_xi(xi);
  const double c = std::sqrt(1.0 - xi * xi);
  return (1.0 - c) / (2.0 * c);
}

double rotating_grid_threshold(double delta) { return 2.0 * std::sin(delta) + 1.0 / std::cos(delta); }

double rotating_grid_delta_for(double threshold) {
  if (threshold < 1.0) throw std::domain_error("grid threshold is at least 1");
  double lo = 0.0, hi = kPi / 2.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rotating_grid_threshold(mid) < threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double corridor_extent(double xi) { return criterion_gamma(xi); }

double grid_theta(double alpha, double delta) {
  return 2.0 / std::sin(2.0 * delta) *
         (std::cos(2.0 * delta) * std::sin(alpha) + std::sin(delta) -
          std::cos(delta) * std::tan(alpha));
}

std::vector<NeighborCheck> appendix_c_validate(double d_over_l, double delta) {
  constexpr double kStep = 1e-4;
  const int n = std::max(1, static_cast<int>(std::ceil(2.0 * delta / kStep)));
  double o0 = 0.0, o1 = -std::numeric_limits<double>::infinity(), o3 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double a = -delta + 2.0 * delta * i / n;
    const double e1 = std::sin(delta + a) + std::abs(std::cos(delta - a));
    const double e2 = std::sin(delta - a) + std::abs(std::cos(delta + a));
    o0 = std::max(o0, std::max(e1, e2) / std::cos(delta));
    o1 = std::max(o1, grid_theta(a, delta));
    const double rhs = std::cos(a) / std::cos(delta) *
                       std::max(std::sin(delta - a), std::sin(delta + a));
    o3 = std::max(o3, rhs / (std::cos(a) - std::sin(std::abs(a))));
  }
  const auto entry = [&](const char* name, double req, bool strict) {
    const double margin = d_over_l - req;
    return NeighborCheck{name, req, margin, strict ? margin > 0.0 : margin >= 0.0};
  };
  return {entry("O0", o0, false), entry("O1", o1, true), entry("O2", o1, true),
          entry("O3", o3, true), entry("O4", o3, true)};
}

Theorem2Report check_theorem2(const World& world, Vec2 robot_start, Vec2 f, double horizon,
                              double time_step) {
  Theorem2Report rep;
  const auto& classes = world.classes();
  rep.max_hat_height.assign(classes.size(), 0.0);
  const auto class_index = [&](int id) {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i].id == id) return static_cast<int>(i);
    return -1;
  };
  for (const ObstacleClass& c : classes) {
    if (!c.delta_star) {
      rep.pass = rep.a_pass = rep.b_pass = false;
      if (!rep.first_violation) rep.first_violation = HatViolation{'a', 0.0, -1, -1, 0.0};
    }
  }
  if (!rep.pass) return rep;

  const auto record = [&](const HatViolation& v) {
    rep.pass = false;
    (v.condition == 'a' ? rep.a_pass : rep.b_pass) = false;
    if (!rep.first_violation) rep.first_violation = v;
  };

  const int steps = std::max(0, static_cast<int>(std::floor(horizon / time_step + 1e-9)));
  const std::size_t n = world.size();
  for (int k = 0; k <= steps; ++k) {
    const double t = k * time_step;
    const auto shapes = world.shapes_at(t);
    ++rep.samples;
    for (std::size_t i = 0; i < n; ++i) {
      const int ci = class_index(world.obstacles()[i].class_id);
      const Hat hat = build_hat(shapes[i], f, *classes[ci].delta_star);
      rep.max_hat_height[ci] = std::max(rep.max_hat_height[ci], hat.height);
      if (k == 0) {
        const auto tri = hat.triangle();
        double d = 0.0;
        if (!in_triangle(robot_start, tri, 0.0)) {
          d = std::min({distance_point_segment(robot_start, tri[0], tri[1]),
                        distance_point_segment(robot_start, tri[1], tri[2]),
                        distance_point_segment(robot_start, tri[2], tri[0])});
        }
        rep.b_margin = std::min(rep.b_margin, d);
        if (hat.contains(robot_start))
          record({'b', t, static_cast<int>(i), -1, -hat.obstacle.distance(robot_start)});
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const int cj = class_index(world.obstacles()[j].class_id);
        const ExtendedHat ext = extend_hat(hat, *classes[cj].delta_star);
        const double gap = (shapes[j].centroid() - hat.vertex).norm() - shapes[j].bounding_radius() -
                           ext.bounding_radius();
        if (gap > rep.min_margin) continue;
        if (gap > 0.0) {
          rep.min_margin = std::min(rep.min_margin, gap);
          continue;
        }
        const double d = ext.distance_to(shapes[j]);
        rep.min_margin = std::min(rep.min_margin, d);
        if (d <= 0.0) record({'a', t, static_cast<int>(i), static_cast<int>(j), d});
      }
    }
    if (!rep.pass) break;
  }
  return rep;
}

}  // namespace rnav
