#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rnav/sensor.hpp"

using namespace rnav;

namespace {

World disks(std::vector<std::pair<Vec2, double>> spec) {
  std::vector<Obstacle> obs;
  for (auto [c, r] : spec) obs.push_back({ConvexCurve::disk({0, 0}, r), MotionProgram::fixed(c), 0, ""});
  return World({ObstacleClass{}}, obs);
}

}  // namespace

TEST_CASE("empty world returns nothing") {
  const World w;
  const RangeScan s = scan(w, {0, 0}, 0.0, 40, 30.0);
  REQUIRE(s.rays.size() == 40);
  for (std::size_t i = 0; i < s.rays.size(); ++i) {
    CHECK_FALSE(s.rays[i].hit());
    CHECK(s.rays[i].alpha == doctest::Approx(kTwoPi * i / 40));
  }
  CHECK(extract_facets(s, 2.0).empty());
  CHECK_THROWS_AS(scan(w, {0, 0}, 0.0, 7, 30.0), std::invalid_argument);
}

TEST_CASE("single disk due east") {
  const World w = disks({{{5, 0}, 1.0}});
  const RangeScan s = scan(w, {0, 0}, 0.0, 40, 30.0);
  CHECK(s.rays[0].dist == doctest::Approx(4.0));
  CHECK(s.rays[0].obstacle_id == 0);
  CHECK_THROWS_AS(scan(w, {5, 0.5}, 0.0, 40, 30.0), RobotInsideObstacle);
}

TEST_CASE("nearer of two disks on the same bearing") {
  const World w = disks({{{3, 0}, 1.0}, {{6, 0}, 1.0}});
  const RangeScan s = scan(w, {0, 0}, 0.0, 40, 30.0);
  // Marching oracle along the ray.
  double hit = 0.0;
  for (double t = 0.0;; t += 1e-4) {
    if (w.shape_at(0, 0).contains({t, 0}) || w.shape_at(1, 0).contains({t, 0})) {
      hit = t;
      break;
    }
  }
  CHECK(s.rays[0].dist == doctest::Approx(hit).epsilon(1e-4));
  CHECK(s.rays[0].dist == doctest::Approx(2.0));
  CHECK(s.rays[0].obstacle_id == 0);
}

TEST_CASE("facet boundaries follow the angular extent of a disk") {
  // Disk at bearing 12 rays of 40, radius chosen so it covers rays 10..14.
  const double spacing = kTwoPi / 40;
  const double bearing = 12 * spacing;
  const double dist = 10.0;
  const double half = std::asin(3.4 / dist);  // tangent half-angle
  const World w = disks({{unit(bearing) * dist, 3.4}});
  const RangeScan s = scan(w, {0, 0}, 0.0, 40, 30.0);
  // Rays inside the tangent cone hit.
  int first = -1, last = -1;
  for (int m = 0; m < 40; ++m) {
    const bool inside = std::abs(normalize_angle(m * spacing - bearing)) < half;
    CHECK(s.rays[m].hit() == inside);
    if (inside && first < 0) first = m;
    if (inside) last = m;
  }
  REQUIRE(first == 10);
  REQUIRE(last == 14);
  const auto facets = extract_facets(s, 2.0);
  REQUIRE(facets.size() == 1);
  CHECK(facets[0].alpha_minus() == doctest::Approx(9.5 * spacing));
  CHECK(facets[0].alpha_plus() == doctest::Approx(14.5 * spacing));
  CHECK(facets[0].d_min == doctest::Approx(dist - 3.4));
}

TEST_CASE("depth jump splits facets of adjacent disks") {
  const World w = disks({{unit(0.15) * 4.0, 1.0}, {unit(-0.3) * 9.0, 2.5}});
  const RangeScan s = scan(w, {0, 0}, 0.0, 40, 30.0);
  const auto facets = extract_facets(s, 2.0);
  REQUIRE(facets.size() == 2);
  CHECK(facets[0].obstacle_id != facets[1].obstacle_id);
  for (const Facet& f : facets) {
    for (std::size_t i = 1; i < f.dists.size(); ++i) CHECK(std::abs(f.dists[i] - f.dists[i - 1]) < 2.0);
  }
}

TEST_CASE("facets agree with constructed scans") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto syn = oracle::synthetic_scan(rng, 40, 2.0);
    const auto facets = extract_facets(syn.scan, 2.0);
    REQUIRE(facets.size() == syn.expected.size());
    std::vector<oracle::PlannedFacet> got;
    for (const Facet& f : facets) got.push_back({f.first_ray, static_cast<int>(f.dists.size()), f.obstacle_id});
    std::sort(got.begin(), got.end(), [](auto& a, auto& b) { return a.first_ray < b.first_ray; });
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].first_ray == syn.expected[i].first_ray);
      CHECK(got[i].count == syn.expected[i].count);
      CHECK(got[i].obstacle_id == syn.expected[i].obstacle_id);
    }
    for (const Facet& f : facets) {
      CHECK(f.d_min == *std::min_element(f.dists.begin(), f.dists.end()));
      CHECK(f.arc.width == doctest::Approx(f.dists.size() * syn.scan.spacing()));
    }
  }
}

TEST_CASE("unbroken scan of one obstacle is a full-circle facet") {
  RangeScan s;
  for (int m = 0; m < 16; ++m) s.rays.push_back({kTwoPi * m / 16, 3.0 + 0.1 * std::sin(m), 0, 0});
  const auto facets = extract_facets(s, 2.0);
  REQUIRE(facets.size() == 1);
  CHECK(facets[0].arc.full());
}

TEST_CASE("scan CSV format") {
  const World w = disks({{{5, 0}, 1.0}});
  const RangeScan s = scan(w, {0, 0}, 0.5, 8, 30.0);
  std::ostringstream os;
  write_scan_csv(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,ray_index,alpha,dist,obstacle_id");
  std::getline(is, line);
  CHECK(line == "0.500000,0,0.000000000,4.000000000,0");
  std::getline(is, line);
  CHECK(line == "0.500000,1,0.785398163,,");
}
