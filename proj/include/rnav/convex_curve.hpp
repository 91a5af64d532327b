#pragma once

#include <limits>
#include <vector>

#include "rnav/geom.hpp"

namespace rnav {

/// Material label of a boundary point: the boundary piece it lies on and its
/// position within that piece (angular offset for a rounded corner, fraction
/// in [0, 1] for a straight edge). Labels survive rigid motion and uniform
/// scaling of the core, so they identify the same material point over time.
struct BoundaryLabel {
  int piece = 0;
  double local = 0.0;
};

/// Closed convex curve bounding the Minkowski sum of a convex core polygon and
/// a disk of radius `radius()`.
///
/// One core vertex gives a disk, two give a stadium ("cigar"), more give a
/// convex polygon with rounded corners. The boundary is traversed
/// counter-clockwise, so the body lies to the left of the unit tangent and the
/// inward normal is the tangent turned by +pi/2. Arc length starts at the
/// beginning of the corner arc at core vertex 0.
class ConvexCurve {
 public:
  static ConvexCurve disk(Vec2 center, double radius);
  /// Segment of half-length `half_length` along `orientation`, thickened by `radius`.
  static ConvexCurve stadium(Vec2 center, double half_length, double radius, double orientation);
  /// Thin stadium standing in for a zero-width segment; radius is 1e-6 of the half-length.
  static ConvexCurve segment(Vec2 center, double half_length, double orientation);
  /// Core vertices must form a strictly convex polygon in counter-clockwise order.
  static ConvexCurve rounded_polygon(std::vector<Vec2> core, double radius);

  static constexpr double kSegmentRadiusFactor = 1e-6;

  const std::vector<Vec2>& core() const { return core_; }
  double radius() const { return radius_; }
  double perimeter() const { return perimeter_; }
  int piece_count() const { return static_cast<int>(piece_start_.size()); }

  Vec2 point_at(double s) const;
  Vec2 tangent_at(double s) const;
  Vec2 inward_normal_at(double s) const { return perp(tangent_at(s)); }
  /// Polar angle of the tangent at s.
  double tangent_angle_at(double s) const { return polar_angle(tangent_at(s)); }

  BoundaryLabel label_at(double s) const;
  double arc_length_of(const BoundaryLabel& label) const;
  /// Core point carrying the label (the body-frame point before the radius offset).
  Vec2 core_point(const BoundaryLabel& label) const;
  /// Outward unit normal at the labelled boundary point.
  Vec2 outward_normal(const BoundaryLabel& label) const;

  /// Every arc length at which the tangent polar angle equals `angle`. Returns
  /// one value on a rounded corner; both ends of a straight edge parallel to
  /// the target direction. Values are sorted ascending in [0, perimeter).
  std::vector<double> tangent_arc_params(double angle) const;

  /// A point of the body maximizing <p, dir>.
  Vec2 support(Vec2 dir) const;
  double support_value(Vec2 dir) const;

  /// Euclidean distance from p to the body; zero inside.
  double distance(Vec2 p) const;
  /// Distance from p to the core minus the radius; negative strictly inside.
  double clearance(Vec2 p) const;
  bool contains(Vec2 p) const { return clearance(p) <= 0.0; }
  /// Distance between the bodies (zero when they touch or overlap).
  double distance_to(const ConvexCurve& other) const;
  /// True when the closed segment [a, b] meets the body.
  bool intersects_segment(Vec2 a, Vec2 b) const;

  /// Smallest positive ray parameter at which the ray enters the body, or
  /// +infinity on a miss. `dir` must be unit.
  double ray_cast(Vec2 origin, Vec2 dir) const;

  Vec2 centroid() const;
  /// Radius of a disk about centroid() enclosing the body.
  double bounding_radius() const;

  /// Image under p -> position + R(angle) * (scale * p) applied to the core;
  /// the corner radius is unchanged.
  ConvexCurve transformed(Vec2 position, double angle, double scale) const;

 private:
  ConvexCurve(std::vector<Vec2> core, double radius);
  void build();
  int piece_of(double s) const;
  bool is_arc(int piece) const { return piece % 2 == 0; }
  int vertex_of(int piece) const { return piece / 2; }

  std::vector<Vec2> core_;
  double radius_ = 0.0;
  // Pieces alternate: corner arc at vertex i (piece 2i), then edge i (piece 2i+1)
  // from vertex i to vertex i+1. A disk has a single arc piece.
  std::vector<Vec2> edge_normal_;   // outward normal of edge i
  std::vector<double> arc_begin_;   // outward-normal angle where corner arc i starts
  std::vector<double> arc_width_;   // angular sweep of corner arc i
  std::vector<double> piece_start_;
  std::vector<double> piece_length_;
  double perimeter_ = 0.0;
};

}  // namespace rnav
