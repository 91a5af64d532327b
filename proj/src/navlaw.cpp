#include "rnav/navlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rnav {

double ExtendedFacet::distance_at(double angle) const {
  const Arc& arc = base.arc;
  const double off = arc.offset_of(angle);
  if (arc.full() || off <= arc.width) return base.profile_at_offset(std::min(off, arc.width));
  // Outside the arc: clamp to the nearer end.
  const double past_end = off - arc.width;
  const double before_start = kTwoPi - off;
  return past_end <= before_start ? base.dists.back() : base.dists.front();
}

std::vector<double> ExtendedFacet::endpoints() const {
  if (range.full()) return {};
  return {range.start, range.end()};
}

ExtendedFacet enlarge(const Facet& facet, const DeltaFunction& delta) {
  ExtendedFacet e;
  e.base = facet;
  e.delta = delta(facet.d_min);
  e.range = facet.arc.widened(e.delta);
  return e;
}

std::vector<ExtendedFacet> enlarge(const std::vector<Facet>& facets,
                                   const std::vector<ObstacleClass>& classes) {
  std::vector<ExtendedFacet> out;
  out.reserve(facets.size());
  for (const Facet& f : facets) {
    const auto it = std::find_if(classes.begin(), classes.end(),
                                 [&](const ObstacleClass& c) { return c.id == f.class_id; });
    if (it == classes.end()) throw std::invalid_argument("enlarge: facet of unknown class");
    out.push_back(enlarge(f, it->delta));
  }
  return out;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Unobstructed: return "UNOBSTRUCTED";
    case Branch::Obstructed: return "OBSTRUCTED";
    case Branch::Hold: return "HOLD";
  }
  return "?";
}

ControlDecision select_control(double beta, const std::vector<ExtendedFacet>& extended, double v,
                               const ControlOptions& options) {
  ControlDecision dec;
  int k = -1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < extended.size(); ++i) {
    if (!extended[i].range.contains(beta)) continue;
    const double d = extended[i].distance_at(beta);
    if (d < best) {
      best = d;
      k = static_cast<int>(i);
    }
  }
  bool gate_open = true;
  if (options.d_star) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const ExtendedFacet& e : extended) nearest = std::min(nearest, e.base.d_min);
    gate_open = nearest < *options.d_star;
  }
  if (k < 0 || !gate_open) {
    dec.branch = Branch::Unobstructed;
    dec.chosen_angle = normalize_angle(beta);
    dec.velocity = unit(beta) * v;
    return dec;
  }

  const ExtendedFacet& obstructing = extended[k];
  dec.branch = Branch::Obstructed;
  dec.obstructing = k;
  for (const ExtendedFacet& e : extended) {
    for (double a : e.endpoints()) {
      if (!obstructing.range.contains(a)) continue;
      if (e.distance_at(a) <= obstructing.distance_at(a) + kAngleTol) dec.endpoint_set.push_back(a);
    }
  }
  if (dec.endpoint_set.empty()) throw NoEscapeDirection();

  double ccw_best = kTwoPi + 1.0, cw_best = kTwoPi + 1.0;
  double ccw_angle = 0.0, cw_angle = 0.0;
  for (double a : dec.endpoint_set) {
    const AngularDistance d = angle_cw_ccw_distance(beta, a);
    // Coincident endpoints are both the counter-clockwise and clockwise nearest.
    if (d.ccw < ccw_best) { ccw_best = d.ccw; ccw_angle = a; }
    if (d.cw < cw_best) { cw_best = d.cw; cw_angle = a; }
  }
  dec.tie = std::abs(ccw_best - cw_best) <= kAngleTol;
  bool take_ccw = ccw_best <= cw_best + kAngleTol;
  if (dec.tie && options.tie_rng) take_ccw = ((*options.tie_rng)() & 1u) == 0u;
  dec.chosen_angle = normalize_angle(take_ccw ? ccw_angle : cw_angle);
  dec.velocity = unit(dec.chosen_angle) * v;
  return dec;
}

std::vector<SafetyTuning> check_safety_tuning(const std::vector<ObstacleClass>& classes, double v) {
  std::vector<SafetyTuning> out;
  for (const ObstacleClass& c : classes) {
    const double ratio = c.speed_bound / v;
    const double required = ratio >= 1.0 ? kPi / 2.0 : std::asin(ratio);
    const double d0 = c.delta.at_zero();
    out.push_back({c.id, d0, required, ratio < 1.0 && d0 > required});
  }
  return out;
}

DriftTuning check_drift_tuning(const ObstacleClass& cls, double hat_height, double delta_star,
                               double v) {
  DriftTuning r{};
  r.class_id = cls.id;
  const double ratio = cls.speed_bound / v;
  r.delta_bar = ratio >= 1.0 ? kPi / 2.0 : std::asin(ratio);
  r.delta_star = delta_star;
  r.delta_at_zero = cls.delta.at_zero();
  r.hat_height = hat_height;
  r.flat = cls.delta.flat_until(hat_height);
  r.in_range = r.delta_bar < r.delta_at_zero && r.delta_at_zero < delta_star &&
               delta_star < kPi / 2.0;
  return r;
}

std::vector<DriftTuning> check_drift_tuning(const std::vector<ObstacleClass>& classes, double v) {
  std::vector<DriftTuning> out;
  for (const ObstacleClass& c : classes) {
    if (!c.delta_star) {
      DriftTuning r{};
      r.class_id = c.id;
      r.delta_at_zero = c.delta.at_zero();
      out.push_back(r);
      continue;
    }
    out.push_back(check_drift_tuning(c, c.hat_height_bound.value_or(0.0), *c.delta_star, v));
  }
  return out;
}

double disk_flat_length(double radius, double delta) {
  return radius * (1.0 - std::cos(delta)) / std::cos(delta);
}

}  // namespace rnav
