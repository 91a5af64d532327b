#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rnav/geom.hpp"
#include "rnav/world.hpp"

namespace rnav {

inline constexpr double kNoReturn = std::numeric_limits<double>::infinity();
inline constexpr int kNoObstacle = -1;

struct RayReturn {
  double alpha = 0.0;          // polar angle in [0, 2pi)
  double dist = kNoReturn;     // kNoReturn when nothing is within range
  int obstacle_id = kNoObstacle;
  int class_id = kNoObstacle;  // class of the hit obstacle, revealed with the return
  bool hit() const { return obstacle_id != kNoObstacle; }
};

/// Panoramic range scan on M uniformly spaced rays, alpha_m = 2*pi*m/M.
struct RangeScan {
  std::vector<RayReturn> rays;
  double timestamp = 0.0;
  double max_range = 0.0;
  double spacing() const { return kTwoPi / static_cast<double>(rays.size()); }
};

class RobotInsideObstacle : public std::runtime_error {
 public:
  RobotInsideObstacle(int obstacle, double t);
  int obstacle;
  double time;
};

/// Casts `ray_count` rays from `origin` against the given obstacle shapes.
/// Throws RobotInsideObstacle when the origin is inside or on an obstacle.
RangeScan scan(const World& world, const std::vector<ConvexCurve>& shapes, Vec2 origin, double t,
               int ray_count, double max_range);
RangeScan scan(const World& world, Vec2 origin, double t, int ray_count, double max_range);

/// A maximal arc of the scan on which the range is continuous and comes from a
/// single obstacle. The arc ends sit midway between the boundary rays and their
/// discordant neighbours; the profile holds one sample per ray at its offset
/// from the arc start.
struct Facet {
  Arc arc;
  std::vector<double> offsets;
  std::vector<double> dists;
  double d_min = 0.0;
  int class_id = 0;
  int obstacle_id = 0;
  int first_ray = 0;

  double alpha_minus() const { return arc.start; }
  double alpha_plus() const { return arc.end(); }
  /// Range profile at an angle inside the arc, linear between samples and
  /// constant beyond the outermost samples.
  double profile_at_offset(double offset) const;
};

/// Splits the scan at range jumps of at least `edge_threshold`, at hit/miss
/// transitions and where the obstacle id changes. Arcs without returns are
/// dropped. Facets come back ordered by increasing alpha_minus in [0, 2pi).
std::vector<Facet> extract_facets(const RangeScan& scan, double edge_threshold);

/// CSV rows `t,ray_index,alpha,dist,obstacle_id`; a miss leaves dist and id empty.
void write_scan_csv(std::ostream& os, const RangeScan& scan, bool header = true);

}  // namespace rnav
