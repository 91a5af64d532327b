#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "rnav/hats.hpp"
#include "rnav/sim.hpp"

namespace rnav {

namespace {

struct Frame {
  double min_x, min_y, max_x, max_y;
  double scale;

  double sx(double x) const { return (x - min_x) * scale; }
  double sy(double y) const { return (max_y - y) * scale; }
};

std::string points(const std::vector<Vec2>& pts, const Frame& fr) {
  std::string out;
  char buf[64];
  for (const Vec2& p : pts) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", fr.sx(p.x), fr.sy(p.y));
    out += buf;
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::vector<Vec2> outline(const ConvexCurve& c, int n = 72) {
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back(c.point_at(c.perimeter() * i / n));
  return pts;
}

}  // namespace

void write_svg(std::ostream& os, const World& world, const Trace& trace, const SvgOptions& options) {
  std::vector<double> times = options.snapshot_times;
  if (times.empty()) times.push_back(0.0);

  Frame fr{1e300, 1e300, -1e300, -1e300, 1.0};
  auto grow = [&](Vec2 p) {
    fr.min_x = std::min(fr.min_x, p.x);
    fr.min_y = std::min(fr.min_y, p.y);
    fr.max_x = std::max(fr.max_x, p.x);
    fr.max_y = std::max(fr.max_y, p.y);
  };
  grow(trace.start);
  grow(trace.end);
  for (const auto& r : trace.records) grow(r.position);
  std::vector<std::vector<ConvexCurve>> snaps;
  for (double t : times) {
    snaps.push_back(world.shapes_at(t));
    for (const auto& s : snaps.back()) {
      const Vec2 c = s.centroid();
      const double r = s.bounding_radius();
      grow(c - Vec2{r, r});
      grow(c + Vec2{r, r});
    }
  }
  const double pad = 1.0;
  fr.min_x -= pad;
  fr.min_y -= pad;
  fr.max_x += pad;
  fr.max_y += pad;
  const double span = std::max(fr.max_x - fr.min_x, fr.max_y - fr.min_y);
  fr.scale = 800.0 / span;
  const double w = (fr.max_x - fr.min_x) * fr.scale, h = (fr.max_y - fr.min_y) * fr.scale;

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.2f %.2f\">\n",
                w, h, w, h);
  os << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (std::isfinite(options.goal_distance)) {
    // Goal line through start + goal_distance * f, perpendicular to f.
    const Vec2 g = trace.start + options.f * options.goal_distance;
    const Vec2 a = g + perp(options.f) * span, b = g - perp(options.f) * span;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"green\" "
                  "stroke-dasharray=\"6,4\"/>\n",
                  fr.sx(a.x), fr.sy(a.y), fr.sx(b.x), fr.sy(b.y));
    os << buf;
  }

  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const double opacity = snaps.size() == 1 ? 0.6 : 0.15 + 0.5 * k / (snaps.size() - 1);
    std::snprintf(buf, sizeof buf, "<g fill=\"gray\" fill-opacity=\"%.2f\" stroke=\"black\">\n",
                  opacity);
    os << buf;
    for (const auto& s : snaps[k]) os << "<polygon points=\"" << points(outline(s), fr) << "\"/>\n";
    os << "</g>\n";
    if (options.hat_delta) {
      os << "<g fill=\"orange\" fill-opacity=\"0.3\" stroke=\"none\">\n";
      for (const auto& s : snaps[k]) {
        const Hat hat = build_hat(s, options.f, *options.hat_delta);
        const auto tri = hat.triangle();
        os << "<polygon points=\"" << points({tri.begin(), tri.end()}, fr) << "\"/>\n";
      }
      os << "</g>\n";
    }
  }

  std::vector<Vec2> path;
  for (const auto& r : trace.records) path.push_back(r.position);
  path.push_back(trace.end);
  os << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\""
     << points(path, fr) << "\"/>\n";
  std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"blue\"/>\n",
                fr.sx(trace.start.x), fr.sy(trace.start.y));
  os << buf;
  std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>\n",
                fr.sx(trace.end.x), fr.sy(trace.end.y),
                trace.status == Status::Collision ? "red" : "blue");
  os << buf << "</svg>\n";
}

}  // namespace rnav
