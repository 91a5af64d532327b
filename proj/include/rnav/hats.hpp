#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnav/convex_curve.hpp"
#include "rnav/world.hpp"

namespace rnav {

/// Region in front of a convex obstacle, as seen against the desired
/// direction f, between the two tangent rays that make the angle
/// pi/2 - delta with f and the near part of the boundary.
struct Hat {
  Vec2 vertex;
  Vec2 tangency_ccw;  // far end of the counter-clockwise tangent segment
  Vec2 tangency_cw;
  double ray_ccw = 0.0;  // polar angle of the counter-clockwise ray
  double ray_cw = 0.0;
  double delta = 0.0;
  double height = 0.0;  // distance from the vertex to the obstacle
  ConvexCurve obstacle;

  /// Triangle spanned by the vertex and both tangency points, counter-clockwise.
  std::array<Vec2, 3> triangle() const;
  /// Closed hat: the triangle minus the obstacle interior.
  bool contains(Vec2 p) const;
  double segment_length_ccw() const { return (tangency_ccw - vertex).norm(); }
  double segment_length_cw() const { return (tangency_cw - vertex).norm(); }
};

/// Hat plus the two disk sectors swept by its tangent segments rotated about
/// the vertex by delta + delta1, outwards.
struct ExtendedHat {
  Hat base;
  double delta1 = 0.0;

  double sweep() const { return base.delta + delta1; }
  bool contains(Vec2 p) const;
  /// Convex pieces covering the region: the hat triangle and two polygons
  /// circumscribing the sectors.
  std::vector<std::vector<Vec2>> convex_parts(int arc_samples = 256) const;
  /// Distance to a body disjoint from the hat's own obstacle; 0 on contact.
  double distance_to(const ConvexCurve& body, int arc_samples = 256) const;
  /// max <p, dir> over the region.
  double support_value(Vec2 dir) const;
  double bounding_radius() const;
};

class DegenerateHat : public std::runtime_error {
 public:
  DegenerateHat() : std::runtime_error("hat tangent lines are parallel") {}
};

/// Throws std::invalid_argument unless delta is in (0, pi/2).
Hat build_hat(const ConvexCurve& obstacle, Vec2 f, double delta);
ExtendedHat extend_hat(const Hat& hat, double delta1);

/// Largest distance to the obstacle over the hat, by dense barycentric
/// sampling of the hat triangle (points inside the obstacle skipped).
double hat_max_distance(const Hat& hat, int subdivisions = 0);

/// Spacing criteria as functions of the speed ratio xi = v_o / v in [0, 1).
/// Throw std::domain_error outside that range.
double criterion_omega(double xi);
double criterion_upsilon(double xi);
double criterion_gamma(double xi);
double criterion_xi_fn(double xi);
/// Lower bound on D/L for the rotating-segment grid: 2 sin delta + 1/cos delta.
double rotating_grid_threshold(double delta);
/// Inverse of rotating_grid_threshold on [0, pi/2).
double rotating_grid_delta_for(double threshold);
/// Vertical extent, in disk radii, of the extended hat of a disk with
/// delta = delta1 = arcsin xi: xi / sqrt(1 - xi^2).
double corridor_extent(double xi);

struct NeighborCheck {
  std::string neighbor;  // "O0" .. "O4"
  double required;       // lower bound on D/L implied by this neighbor
  double margin;         // D/L - required
  bool pass;
};
/// Evaluates the neighbour inequalities of the rotating grid for
/// alpha in [-delta, delta] on a 1e-4 rad grid.
std::vector<NeighborCheck> appendix_c_validate(double d_over_l, double delta);
/// Theta(alpha) from the O1/O2 neighbour condition.
double grid_theta(double alpha, double delta);

struct HatViolation {
  char condition;  // 'a' extended hat meets another obstacle, 'b' robot starts inside a hat
  double time;
  int obstacle;    // owner of the hat
  int other;       // offending obstacle for 'a', -1 for 'b'
  double margin;
};

struct Theorem2Report {
  bool pass = true;
  std::optional<HatViolation> first_violation;
  bool a_pass = true;
  bool b_pass = true;
  /// Distance from the robot start to the nearest hat triangle; 0 when inside one.
  double b_margin = std::numeric_limits<double>::infinity();
  /// Smallest extended-hat to obstacle distance seen over all samples.
  double min_margin = std::numeric_limits<double>::infinity();
  /// Largest delta*-hat height seen, per class id order of world.classes().
  std::vector<double> max_hat_height;
  int samples = 0;
};

/// Checks the spacing hypotheses of the drift guarantee: at every sampled time
/// the delta_j*-extended delta_i*-hat of each class-i obstacle is disjoint
/// from every other obstacle of class j, and at t = 0 the robot is outside all
/// delta_i*-hats. Classes without delta_star fail the check.
Theorem2Report check_theorem2(const World& world, Vec2 robot_start, Vec2 f, double horizon,
                              double time_step);

}  // namespace rnav
