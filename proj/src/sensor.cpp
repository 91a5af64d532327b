#include "rnav/sensor.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace rnav {

RobotInsideObstacle::RobotInsideObstacle(int ob, double t)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "robot inside obstacle " << ob << " at t=" << t;
        return os.str();
      }()),
      obstacle(ob),
      time(t) {}

RangeScan scan(const World& world, const std::vector<ConvexCurve>& shapes, Vec2 origin, double t,
               int ray_count, double max_range) {
  if (ray_count < 8) throw std::invalid_argument("scan: at least 8 rays required");
  for (std::size_t j = 0; j < shapes.size(); ++j)
    if (shapes[j].clearance(origin) <= 0.0) throw RobotInsideObstacle(static_cast<int>(j), t);

  RangeScan out;
  out.timestamp = t;
  out.max_range = max_range;
  out.rays.resize(static_cast<std::size_t>(ray_count));

  // Obstacles that can be hit at all within range.
  std::vector<int> near;
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    if (shapes[j].distance(origin) <= max_range) near.push_back(static_cast<int>(j));
  }
  for (int m = 0; m < ray_count; ++m) {
    RayReturn& r = out.rays[m];
    r.alpha = kTwoPi * m / ray_count;
    const Vec2 dir = unit(r.alpha);
    for (int j : near) {
      const double d = shapes[j].ray_cast(origin, dir);
      if (d <= max_range && d < r.dist) {
        r.dist = d;
        r.obstacle_id = j;
      }
    }
    if (r.hit()) r.class_id = world.obstacles()[r.obstacle_id].class_id;
  }
  return out;
}

RangeScan scan(const World& world, Vec2 origin, double t, int ray_count, double max_range) {
  return scan(world, world.shapes_at(t), origin, t, ray_count, max_range);
}

double Facet::profile_at_offset(double offset) const {
  if (offset <= offsets.front()) return dists.front();
  if (offset >= offsets.back()) return dists.back();
  auto hi = std::upper_bound(offsets.begin(), offsets.end(), offset);
  const std::size_t i = static_cast<std::size_t>(hi - offsets.begin());
  const double u = (offset - offsets[i - 1]) / (offsets[i] - offsets[i - 1]);
  return dists[i - 1] + u * (dists[i] - dists[i - 1]);
}

namespace {

bool discordant(const RayReturn& a, const RayReturn& b, double edge_threshold) {
  if (a.hit() != b.hit()) return true;
  if (!a.hit()) return false;
  return a.obstacle_id != b.obstacle_id || std::abs(a.dist - b.dist) >= edge_threshold;
}

Facet make_facet(const RangeScan& scan, int first, int count) {
  const int m = static_cast<int>(scan.rays.size());
  const double step = scan.spacing();
  Facet f;
  f.first_ray = first;
  const RayReturn& r0 = scan.rays[first];
  f.obstacle_id = r0.obstacle_id;
  f.class_id = r0.class_id;
  f.arc = Arc{normalize_angle(r0.alpha - 0.5 * step), std::min(kTwoPi, count * step)};
  f.d_min = kNoReturn;
  for (int i = 0; i < count; ++i) {
    const RayReturn& r = scan.rays[(first + i) % m];
    f.offsets.push_back((i + 0.5) * step);
    f.dists.push_back(r.dist);
    f.d_min = std::min(f.d_min, r.dist);
  }
  return f;
}

}  // namespace

std::vector<Facet> extract_facets(const RangeScan& scan, double edge_threshold) {
  const int m = static_cast<int>(scan.rays.size());
  std::vector<Facet> facets;
  if (m == 0) return facets;

  int first_break = -1;  // index i such that rays i-1 and i are discordant
  for (int i = 0; i < m; ++i) {
    if (discordant(scan.rays[(i + m - 1) % m], scan.rays[i], edge_threshold)) {
      first_break = i;
      break;
    }
  }
  if (first_break < 0) {
    if (scan.rays[0].hit()) facets.push_back(make_facet(scan, 0, m));
    return facets;
  }

  int run_start = first_break;
  int run_len = 1;
  for (int k = 1; k <= m; ++k) {
    const int i = (first_break + k) % m;
    const bool boundary =
        k == m || discordant(scan.rays[(i + m - 1) % m], scan.rays[i], edge_threshold);
    if (boundary) {
      if (scan.rays[run_start].hit()) facets.push_back(make_facet(scan, run_start, run_len));
      run_start = i;
      run_len = 1;
    } else {
      ++run_len;
    }
  }
  std::sort(facets.begin(), facets.end(), [](const Facet& a, const Facet& b) {
    return wrap_two_pi(a.arc.start) < wrap_two_pi(b.arc.start);
  });
  return facets;
}

void write_scan_csv(std::ostream& os, const RangeScan& scan, bool header) {
  if (header) os << "t,ray_index,alpha,dist,obstacle_id\n";
  char buf[128];
  for (std::size_t i = 0; i < scan.rays.size(); ++i) {
    const RayReturn& r = scan.rays[i];
    std::snprintf(buf, sizeof buf, "%.6f,%zu,%.9f,", scan.timestamp, i, r.alpha);
    os << buf;
    if (r.hit()) {
      std::snprintf(buf, sizeof buf, "%.9f,%d", r.dist, r.obstacle_id);
      os << buf;
    } else {
      os << ',';
    }
    os << '\n';
  }
}

}  // namespace rnav
