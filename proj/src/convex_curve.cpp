#include "rnav/convex_curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace rnav {

ConvexCurve ConvexCurve::disk(Vec2 center, double radius) { return ConvexCurve({center}, radius); }

ConvexCurve ConvexCurve::stadium(Vec2 center, double half_length, double radius,
                                 double orientation) {
  if (half_length <= 0.0) return disk(center, radius);
  const Vec2 axis = unit(orientation) * half_length;
  return ConvexCurve({center - axis, center + axis}, radius);
}

ConvexCurve ConvexCurve::segment(Vec2 center, double half_length, double orientation) {
  return stadium(center, half_length, kSegmentRadiusFactor * half_length, orientation);
}

ConvexCurve ConvexCurve::rounded_polygon(std::vector<Vec2> core, double radius) {
  const std::size_t n = core.size();
  if (n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = core[i], b = core[(i + 1) % n], c = core[(i + 2) % n];
      if (cross(b - a, c - b) <= 0.0)
        throw std::invalid_argument("rounded_polygon: core must be strictly convex and counter-clockwise");
    }
  }
  return ConvexCurve(std::move(core), radius);
}

ConvexCurve::ConvexCurve(std::vector<Vec2> core, double radius)
    : core_(std::move(core)), radius_(radius) {
  if (core_.empty()) throw std::invalid_argument("ConvexCurve: empty core");
  if (!(radius_ > 0.0)) throw std::invalid_argument("ConvexCurve: corner radius must be positive");
  build();
}

void ConvexCurve::build() {
  const std::size_t n = core_.size();
  edge_normal_.clear();
  arc_begin_.assign(n, 0.0);
  arc_width_.assign(n, kTwoPi);
  piece_start_.clear();
  piece_length_.clear();
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 d = core_[(i + 1) % n] - core_[i];
      const double len = d.norm();
      if (len <= 0.0) throw std::invalid_argument("ConvexCurve: repeated core vertex");
      edge_normal_.push_back(Vec2{d.y, -d.x} / len);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 n_in = edge_normal_[(i + n - 1) % n];
      const Vec2 n_out = edge_normal_[i];
      arc_begin_[i] = polar_angle(n_in);
      arc_width_[i] = wrap_two_pi(polar_angle(n_out) - arc_begin_[i]);
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    piece_start_.push_back(s);
    piece_length_.push_back(radius_ * arc_width_[i]);
    s += piece_length_.back();
    if (n > 1) {
      piece_start_.push_back(s);
      piece_length_.push_back((core_[(i + 1) % n] - core_[i]).norm());
      s += piece_length_.back();
    }
  }
  perimeter_ = s;
}

int ConvexCurve::piece_of(double s) const {
  auto it = std::upper_bound(piece_start_.begin(), piece_start_.end(), s);
  int idx = static_cast<int>(it - piece_start_.begin()) - 1;
  return std::clamp(idx, 0, piece_count() - 1);
}

BoundaryLabel ConvexCurve::label_at(double s) const {
  double sm = std::fmod(s, perimeter_);
  if (sm < 0.0) sm += perimeter_;
  const int p = piece_of(sm);
  const double off = sm - piece_start_[p];
  if (is_arc(p)) return {p, off / radius_};
  const double len = piece_length_[p];
  return {p, std::clamp(off / len, 0.0, 1.0)};
}

double ConvexCurve::arc_length_of(const BoundaryLabel& label) const {
  if (is_arc(label.piece)) return piece_start_[label.piece] + label.local * radius_;
  return piece_start_[label.piece] + label.local * piece_length_[label.piece];
}

Vec2 ConvexCurve::core_point(const BoundaryLabel& label) const {
  const int v = vertex_of(label.piece);
  if (is_arc(label.piece)) return core_[v];
  const Vec2 a = core_[v], b = core_[(v + 1) % core_.size()];
  return a + (b - a) * label.local;
}

Vec2 ConvexCurve::outward_normal(const BoundaryLabel& label) const {
  const int v = vertex_of(label.piece);
  if (is_arc(label.piece)) return unit(arc_begin_[v] + label.local);
  return edge_normal_[v];
}

Vec2 ConvexCurve::point_at(double s) const {
  const BoundaryLabel l = label_at(s);
  return core_point(l) + outward_normal(l) * radius_;
}

Vec2 ConvexCurve::tangent_at(double s) const {
  const Vec2 n = outward_normal(label_at(s));
  return {-n.y, n.x};
}

std::vector<double> ConvexCurve::tangent_arc_params(double angle) const {
  // Tangent at angle theta <=> outward normal at angle theta - pi/2.
  const double normal_angle = angle - kPi / 2.0;
  std::vector<double> out;
  const int n = static_cast<int>(core_.size());
  for (int i = 0; i < n; ++i) {
    const int arc_piece = n > 1 ? 2 * i : 0;
    double off = wrap_two_pi(normal_angle - arc_begin_[i]);
    if (kTwoPi - off < kAngleTol) off = 0.0;
    if (off <= arc_width_[i] + kAngleTol) {
      off = std::min(off, arc_width_[i]);
      out.push_back(piece_start_[arc_piece] + off * radius_);
    }
    if (n > 1) {
      const double diff = normalize_angle(polar_angle(edge_normal_[i]) - normal_angle);
      if (std::abs(diff) <= kAngleTol) {
        out.push_back(piece_start_[2 * i + 1]);
        out.push_back(piece_start_[2 * i + 1] + piece_length_[2 * i + 1]);
      }
    }
  }
  for (double& s : out) {
    if (s >= perimeter_ - 1e-12 * perimeter_) s = 0.0;
  }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double s : out) {
    if (uniq.empty() || s - uniq.back() > 1e-12 * perimeter_) uniq.push_back(s);
  }
  // 0 and perimeter are the same boundary point.
  if (uniq.size() > 1 && uniq.front() == 0.0 && perimeter_ - uniq.back() <= 1e-12 * perimeter_)
    uniq.pop_back();
  return uniq;
}

Vec2 ConvexCurve::support(Vec2 dir) const {
  const Vec2 u = normalized(dir);
  std::size_t best = 0;
  double best_val = dot(core_[0], u);
  for (std::size_t i = 1; i < core_.size(); ++i) {
    const double v = dot(core_[i], u);
    if (v > best_val) { best_val = v; best = i; }
  }
  return core_[best] + u * radius_;
}

double ConvexCurve::support_value(Vec2 dir) const { return dot(support(dir), normalized(dir)); }

double ConvexCurve::clearance(Vec2 p) const { return distance_point_convex(p, core_) - radius_; }

double ConvexCurve::distance(Vec2 p) const { return std::max(0.0, clearance(p)); }

double ConvexCurve::distance_to(const ConvexCurve& other) const {
  return std::max(0.0, distance_convex_convex(core_, other.core_) - radius_ - other.radius_);
}

bool ConvexCurve::intersects_segment(Vec2 a, Vec2 b) const {
  return distance_segment_convex(a, b, core_) <= radius_;
}

double ConvexCurve::ray_cast(Vec2 origin, Vec2 dir) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = core_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = ray_circle(origin, dir, core_[i], radius_);
    if (t >= 0.0) best = std::min(best, t);
  }
  for (std::size_t i = 0; i < edge_normal_.size(); ++i) {
    const Vec2 off = edge_normal_[i] * radius_;
    const double t = ray_segment(origin, dir, core_[i] + off, core_[(i + 1) % n] + off);
    if (t >= 0.0) best = std::min(best, t);
  }
  return best;
}

Vec2 ConvexCurve::centroid() const {
  Vec2 c{};
  for (const Vec2& v : core_) c += v;
  return c / static_cast<double>(core_.size());
}

double ConvexCurve::bounding_radius() const {
  const Vec2 c = centroid();
  double r = 0.0;
  for (const Vec2& v : core_) r = std::max(r, (v - c).norm());
  return r + radius_;
}

ConvexCurve ConvexCurve::transformed(Vec2 position, double angle, double scale) const {
  ConvexCurve out = *this;
  const double c = std::cos(angle), s = std::sin(angle);
  for (Vec2& v : out.core_) {
    const Vec2 w = v * scale;
    v = Vec2{c * w.x - s * w.y, s * w.x + c * w.y} + position;
  }
  for (Vec2& n : out.edge_normal_) n = Vec2{c * n.x - s * n.y, s * n.x + c * n.y};
  for (double& a : out.arc_begin_) a = normalize_angle(a + angle);
  if (scale != 1.0) {
    double acc = 0.0;
    for (std::size_t p = 0; p < out.piece_length_.size(); ++p) {
      out.piece_start_[p] = acc;
      if (!out.is_arc(static_cast<int>(p))) out.piece_length_[p] *= scale;
      acc += out.piece_length_[p];
    }
    out.perimeter_ = acc;
  }
  return out;
}

}  // namespace rnav
