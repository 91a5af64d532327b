#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rnav/navlaw.hpp"

using namespace rnav;

namespace {

Facet facet(double start, int rays, double d, int id = 0, double spacing = kTwoPi / 40) {
  Facet f;
  f.arc = Arc{start, rays * spacing};
  for (int i = 0; i < rays; ++i) {
    f.offsets.push_back((i + 0.5) * spacing);
    f.dists.push_back(d);
  }
  f.d_min = d;
  f.obstacle_id = id;
  return f;
}

}  // namespace

TEST_CASE("enlargement uses the facet distance") {
  const auto table = DeltaFunction::reference_table();
  CHECK(enlarge(facet(0.0, 3, 0.5), table).delta == doctest::Approx(1.27));
  CHECK(enlarge(facet(0.0, 3, 100.0), table).delta == doctest::Approx(0.003));
  CHECK(enlarge(facet(0.0, 3, 0.75), table).delta == doctest::Approx(1.24));
  const auto e = enlarge(facet(0.2, 4, 3.0), DeltaFunction::constant(0.1));
  CHECK(e.range.start == doctest::Approx(0.1));
  CHECK(e.range.width == doctest::Approx(4 * kTwoPi / 40 + 0.2));
  CHECK_THROWS_AS(enlarge({facet(0.0, 2, 1.0, 0)}, std::vector<ObstacleClass>{ObstacleClass{.id = 3}}),
                  std::invalid_argument);
}

TEST_CASE("extended profile is clamped to the nearest arc end") {
  Facet f = facet(0.0, 3, 1.0);
  f.dists = {1.0, 2.0, 3.0};
  const auto e = enlarge(f, DeltaFunction::constant(0.5));
  CHECK(e.distance_at(-0.2) == 1.0);
  CHECK(e.distance_at(3 * kTwoPi / 40 + 0.2) == 3.0);
  CHECK(e.distance_at(1.5 * kTwoPi / 40) == doctest::Approx(2.0));
}

TEST_CASE("free heading is kept") {
  const auto d = select_control(0.3, {}, 2.0);
  CHECK(d.branch == Branch::Unobstructed);
  CHECK((d.velocity - unit(0.3) * 2.0).norm() < 1e-12);
}

TEST_CASE("symmetric obstruction resolves counter-clockwise") {
  const double spacing = kTwoPi / 40;
  const auto e = enlarge(facet(-1.5 * spacing, 3, 2.0), DeltaFunction::constant(0.2));
  const auto d = select_control(0.0, {e}, 1.0);
  CHECK(d.branch == Branch::Obstructed);
  CHECK(d.tie);
  CHECK(d.chosen_angle == doctest::Approx(1.5 * spacing + 0.2));
  std::mt19937_64 rng(3);
  int ccw = 0;
  for (int i = 0; i < 200; ++i) {
    ControlOptions opt;
    opt.tie_rng = &rng;
    ccw += select_control(0.0, {e}, 1.0, opt).chosen_angle > 0;
  }
  CHECK(ccw > 50);
  CHECK(ccw < 150);
}

TEST_CASE("escape skips endpoints hidden behind a nearer facet") {
  // The 0.8 m facet obstructs; the 1.0 m facet's ccw endpoint lies in its
  // range but farther away, so it is not an escape.
  const double spacing = kTwoPi / 40;
  const auto near = enlarge(facet(-2.5 * spacing, 4, 1.0, 0), DeltaFunction::constant(0.3));
  const auto far = enlarge(facet(1.5 * spacing, 6, 0.8, 1), DeltaFunction::constant(0.3));
  const auto d = select_control(0.01, {near, far}, 1.0);
  const auto o = oracle::brute_force_control(0.01, {near, far});
  REQUIRE(o.obstructed);
  CHECK(d.chosen_angle == doctest::Approx(normalize_angle(o.angle)).epsilon(1e-9));
  CHECK(d.chosen_angle == doctest::Approx(normalize_angle(far.range.start)));
  for (double a : d.endpoint_set) CHECK(std::abs(normalize_angle(a - near.range.end())) > 1e-6);
  CHECK(d.endpoint_set.size() == 2);
}

TEST_CASE("distance gate") {
  const auto e = enlarge(facet(-0.1, 3, 5.0), DeltaFunction::constant(0.2));
  ControlOptions opt;
  opt.d_star = 4.0;
  CHECK(select_control(0.0, {e}, 1.0, opt).branch == Branch::Unobstructed);
  opt.d_star = 6.0;
  CHECK(select_control(0.0, {e}, 1.0, opt).branch == Branch::Obstructed);
}

TEST_CASE("full-circle cover has no escape") {
  const auto e = enlarge(facet(0.0, 40, 1.0), DeltaFunction::constant(0.1));
  CHECK_THROWS_AS(select_control(0.0, {e}, 1.0), NoEscapeDirection);
}

TEST_CASE("control agrees with brute force on random configurations") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int obstructed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto syn = oracle::synthetic_scan(rng, 40, 2.0);
    std::vector<ExtendedFacet> ext;
    for (const Facet& f : extract_facets(syn.scan, 2.0))
      ext.push_back(enlarge(f, DeltaFunction::constant(1.2 * u(rng))));
    const double beta = -kPi + kTwoPi * u(rng);
    const auto o = oracle::brute_force_control(beta, ext);
    if (o.no_escape) {
      CHECK_THROWS_AS(select_control(beta, ext, 1.0), NoEscapeDirection);
      continue;
    }
    const auto d = select_control(beta, ext, 1.0);
    CHECK((d.branch == Branch::Obstructed) == o.obstructed);
    CHECK(std::abs(normalize_angle(d.chosen_angle - o.angle)) < 1e-6);
    CHECK(d.velocity.norm() == doctest::Approx(1.0));
    obstructed += o.obstructed;
  }
  CHECK(obstructed > 50);
}

TEST_CASE("tuning checks") {
  ObstacleClass c{.id = 0, .speed_bound = 0.0, .delta = DeltaFunction::constant(0.01)};
  CHECK(check_safety_tuning({c}, 1.0)[0].pass);
  c.speed_bound = 0.5;
  c.delta = DeltaFunction::reference_table();
  const auto s = check_safety_tuning({c}, 1.0)[0];
  CHECK(s.pass);
  CHECK(s.required == doctest::Approx(kPi / 6));
  c.speed_bound = 0.999;
  c.delta = DeltaFunction::constant(1.0);
  CHECK_FALSE(check_safety_tuning({c}, 1.0)[0].pass);

  ObstacleClass k{.id = 0, .speed_bound = 0.5, .delta = DeltaFunction::constant(0.6)};
  CHECK(check_drift_tuning(k, 0.3, 0.7, 1.0).pass());
  k.delta = DeltaFunction::flat_then_decay(0.6, 0.1, 0.55, 1.0);
  CHECK_FALSE(check_drift_tuning(k, 0.3, 0.7, 1.0).pass());
  CHECK(disk_flat_length(1.0, 0.6) == doctest::Approx(0.2116).epsilon(1e-3));
  CHECK_FALSE(check_drift_tuning({ObstacleClass{}}, 1.0)[0].pass());
}
