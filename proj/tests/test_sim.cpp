#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rnav/scenarios.hpp"
#include "rnav/sensor.hpp"
#include "rnav/sim.hpp"

using namespace rnav;

namespace {

World single_disk(Vec2 at, double r, Vec2 velocity = {}, double speed_bound = 0.0,
                  DeltaFunction delta = DeltaFunction::reference_table()) {
  ObstacleClass c;
  c.speed_bound = speed_bound;
  c.delta = delta;
  Obstacle o{ConvexCurve::disk({0.0, 0.0}, r), MotionProgram::translating(at, velocity), 0, "disk"};
  return World({c}, {o});
}

std::string csv_of(const Trace& t) {
  std::ostringstream os;
  write_trace_csv(os, t);
  return os.str();
}

struct GridChoice {
  Vec2 velocity;
  double cost;
};

/// Exact evaluation of the 64 x 16 polar grid against disks in uniform motion.
GridChoice vom_grid_oracle(Vec2 p, Vec2 f, double v, const std::vector<std::pair<Vec2, Vec2>>& disks,
                           double radius, const VomConfig& cfg) {
  auto eval = [&](Vec2 u, bool& free) {
    double gap = 1e300;
    free = true;
    for (const auto& [c0, vel] : disks) {
      // Relative position c0 - p moves with vel - u; closest approach over [0, T].
      const Vec2 d0 = p - c0, w = u - vel;
      double s = w.squared_norm() > 0 ? -dot(d0, w) / w.squared_norm() : 0.0;
      s = std::clamp(s, 0.0, cfg.lookahead);
      const double g = (d0 + w * s).norm() - radius;
      gap = std::min(gap, g);
      if (g <= 0.0) free = false;
    }
    const double cost = (v - dot(u, f)) / v + cfg.weight * std::max(0.0, cfg.offset - gap) / cfg.offset;
    return cost;
  };
  GridChoice best{{0, 0}, 1e300};
  bool free;
  const double c0 = eval({0.0, 0.0}, free);
  if (free) best = {{0.0, 0.0}, c0};
  for (int s = 1; s <= cfg.speeds; ++s)
    for (int h = 0; h < cfg.headings; ++h) {
      const Vec2 u = unit(polar_angle(f) + 2 * M_PI * h / cfg.headings) * (v * s / cfg.speeds);
      const double c = eval(u, free);
      if (free && c < best.cost) best = {u, c};
    }
  return best;
}

}  // namespace

TEST_CASE("empty world advances v dt per step and reaches the goal on time") {
  SimConfig cfg;
  cfg.goal_distance = 5.0;
  RobotState s;
  const Trace t = run(World(), s, cfg);
  CHECK(t.status == Status::Reached);
  CHECK(std::abs(t.end_time - 5.0) <= cfg.dt);
  REQUIRE(t.records.size() >= 10);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    CHECK(t.records[i].position.x - t.records[i - 1].position.x == doctest::Approx(0.1));
    CHECK(t.records[i].position.y == 0.0);
    CHECK(std::string(t.records[i].branch) == "UNOBSTRUCTED");
  }
}

TEST_CASE("unicycle turning is clamped by the rate limit") {
  SimConfig cfg;
  cfg.vehicle = Vehicle::Unicycle;
  cfg.turn_rate_limit = 1.0;
  Simulator sim(World(), cfg);
  RobotState s;
  s.heading = 0.0;
  s.f = unit(0.5);
  const StepResult r = sim.step(s, 0.0);
  CHECK(r.state.heading == doctest::Approx(0.1));
  // Speed stays v along the actual heading.
  CHECK((r.state.position - s.position).norm() == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("static disk ahead takes the obstructed branch chosen by the oracle") {
  const World w = single_disk({4.0, 0.3}, 1.0);
  SimConfig cfg;
  Simulator sim(w, cfg);
  RobotState s;
  const StepResult r = sim.step(s, 0.0);
  CHECK(std::string(r.record.branch) == "OBSTRUCTED");

  const RangeScan sc = scan(w, {0.0, 0.0}, 0.0, cfg.ray_count, cfg.max_range);
  const auto facets = extract_facets(sc, cfg.edge_threshold);
  const auto ext = enlarge(facets, w.classes());
  const auto o = oracle::brute_force_control(0.0, ext);
  REQUIRE(o.obstructed);
  CHECK(normalize_angle(polar_angle(r.record.velocity)) == doctest::Approx(normalize_angle(o.angle)).epsilon(1e-6));
  REQUIRE(ext.size() == 1);
  const double half = 0.5 * ext[0].base.arc.width;
  const double turn = std::abs(normalize_angle(polar_angle(r.record.velocity)));
  CHECK(turn >= ext[0].delta + half - std::abs(normalize_angle(ext[0].base.arc.start + half)) - 1e-9);
  CHECK(r.record.velocity.norm() == doctest::Approx(1.0));
}

TEST_CASE("heading noise statistics and determinism") {
  std::mt19937_64 rng(1);
  CHECK(heading_noise(rng, 0.0, 0.1) == 0.0);
  double sum = 0, sum2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = heading_noise(rng, 0.1, 0.1);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(sd == doctest::Approx(0.01).epsilon(0.05));
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(heading_noise(a, 0.1, 0.1) == heading_noise(b, 0.1, 0.1));
}

TEST_CASE("noisy runs are reproducible and keep speed v") {
  SimConfig cfg;
  cfg.noise = 0.1;
  cfg.seed = 7;
  cfg.goal_distance = 30.0;
  const ScenarioSpec spec = gen_disk_field({});
  const Trace a = run(spec.world(), spec.robot_state(), spec.sim_config(cfg));
  const Trace b = run(spec.world(), spec.robot_state(), spec.sim_config(cfg));
  CHECK(csv_of(a) == csv_of(b));
  for (const auto& r : a.records)
    if (std::string(r.branch) != "HOLD") CHECK(r.velocity.norm() == doctest::Approx(1.0));
  cfg.seed = 8;
  const Trace c = run(spec.world(), spec.robot_state(), spec.sim_config(cfg));
  CHECK(csv_of(a) != csv_of(c));
}

TEST_CASE("batch runs match sequential runs in order") {
  std::vector<BatchJob> jobs;
  for (int s = 0; s < 4; ++s) {
    DiskFieldParams p;
    p.seed = s;
    const ScenarioSpec spec = gen_disk_field(p);
    jobs.push_back({spec.world(), spec.robot_state(), spec.sim_config()});
  }
  const auto par = run_batch(jobs, 3);
  for (std::size_t i = 0; i < jobs.size(); ++i)
    CHECK(csv_of(par[i]) == csv_of(run(jobs[i].world, jobs[i].initial, jobs[i].config)));
}

TEST_CASE("collision and ill-posed terminals") {
  // A disk faster than the robot charging head-on cannot be escaped.
  const World fast = single_disk({3.0, 0.0}, 0.5, {-3.0, 0.0}, 3.0, DeltaFunction::constant(0.0));
  SimConfig cfg;
  cfg.horizon = 10.0;
  const Trace t = run(fast, RobotState{}, cfg);
  CHECK(t.status == Status::Collision);
  CHECK(t.collision_obstacle == 0);

  ObstacleClass c;
  c.speed_bound = 1.0;
  World clash({c}, {{ConvexCurve::disk({0, 0}, 0.5), MotionProgram::translating({5, 2}, {1, 0}), 0, "a"},
                    {ConvexCurve::disk({0, 0}, 0.5), MotionProgram::fixed({8, 2}), 0, "b"}});
  const Trace u = run(clash, RobotState{{0.0, -3.0}}, cfg);
  CHECK(u.status == Status::AbortedIllPosed);
  REQUIRE(u.illposed_pair);
  CHECK(u.illposed_pair->first == 0);
  CHECK(u.illposed_pair->second == 1);
  CHECK(u.end_time == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("VOM agrees with the polar grid oracle") {
  RobotState s;
  VomConfig cfg;
  CHECK(vom_control(s, World(), 0.0, cfg) == Vec2{1.0, 0.0});

  SUBCASE("static disk ahead") {
    const World w = single_disk({4.0, 0.2}, 1.0);
    const Vec2 u = vom_control(s, w, 0.0, cfg);
    const GridChoice g = vom_grid_oracle(s.position, s.f, 1.0, {{{4.0, 0.2}, {0.0, 0.0}}}, 1.0, cfg);
    CHECK(u.x == doctest::Approx(g.velocity.x));
    CHECK(u.y == doctest::Approx(g.velocity.y));
    // Outside the collision cone.
    CHECK(distance_point_segment({4.0, 0.2}, s.position, s.position + u * cfg.lookahead) > 1.0);
  }
  SUBCASE("lateral crossing") {
    const World w = single_disk({5.0, 3.0}, 0.8, {0.0, -0.6}, 0.6);
    const Vec2 u = vom_control(s, w, 0.0, cfg);
    const GridChoice g =
        vom_grid_oracle(s.position, s.f, 1.0, {{{5.0, 3.0}, {0.0, -0.6}}}, 0.8, cfg);
    CHECK(u.x == doctest::Approx(g.velocity.x));
    CHECK(u.y == doctest::Approx(g.velocity.y));
    // Straight ahead at full speed would be hit.
    bool straight_free = true;
    for (double t = 0; t <= cfg.lookahead; t += 0.01)
      if ((Vec2{t, 0.0} - Vec2{5.0, 3.0 - 0.6 * t}).norm() <= 0.8) straight_free = false;
    CHECK_FALSE(straight_free);
    const Trace tr = [&] {
      SimConfig sc;
      sc.controller = Controller::Vom;
      sc.goal_distance = 12.0;
      return run(w, s, sc);
    }();
    CHECK(tr.status == Status::Reached);
    CHECK(std::string(tr.records.front().branch) == "VOM");
  }
}

TEST_CASE("no collisions on a compliant disk field") {
  for (int seed = 0; seed < 10; ++seed) {
    DiskFieldParams p;
    p.seed = seed;
    const ScenarioSpec spec = gen_disk_field(p);
    const Trace t = run(spec.world(), spec.robot_state(), spec.sim_config());
    CAPTURE(seed);
    CHECK(t.status != Status::Collision);
    CHECK(t.min_clearance() > 0.0);
  }
}

TEST_CASE("counterexample drift sign follows the speed ratio") {
  CounterexampleParams p;
  p.pairs = 4;
  p.half_length = 2.0;
  p.eps = 0.1;
  p.eta = 0.1;
  const double critical = (p.half_length - p.eps) / p.eta;

  p.v_o = 0.25;  // e = 4
  CHECK(p.v / p.v_o < critical);
  const ScenarioSpec back = gen_counterexample(p);
  const auto d1 = counterexample_net_displacement(back, run(back.world(), back.robot_state(), back.sim_config()));
  REQUIRE(d1);
  CHECK(*d1 < 0.0);

  p.v_o = 1.0 / (2.0 * critical + 2.0);
  CHECK(p.v / p.v_o > 2.0 * critical);
  const ScenarioSpec fwd = gen_counterexample(p);
  const auto d2 = counterexample_net_displacement(fwd, run(fwd.world(), fwd.robot_state(), fwd.sim_config()));
  REQUIRE(d2);
  CHECK(*d2 > 0.0);
}

TEST_CASE("halving dt barely moves the end point") {
  std::vector<ScenarioSpec> specs = {gen_disk_field({}), gen_segment_field({}), gen_corridor({})};
  for (const auto& spec : specs) {
    CAPTURE(spec.name);
    SimConfig a = spec.sim_config();
    SimConfig b = a;
    b.dt = a.dt / 2;
    const Trace ta = run(spec.world(), spec.robot_state(), a);
    const Trace tb = run(spec.world(), spec.robot_state(), b);
    double length = 0.0;
    for (std::size_t i = 1; i < ta.records.size(); ++i)
      length += (ta.records[i].position - ta.records[i - 1].position).norm();
    length += (ta.end - ta.records.back().position).norm();
    CHECK((ta.end - tb.end).norm() < 0.05 * length);
  }
}

TEST_CASE("trace and summary formats") {
  SimConfig cfg;
  cfg.goal_distance = 0.25;
  const Trace t = run(World(), RobotState{}, cfg);
  const std::string csv = csv_of(t);
  CHECK(csv.rfind("t,x,y,vx,vy,branch,min_clearance,drift,nearest_id\n", 0) == 0);
  CHECK(csv.find("0.000,0.000000000,0.000000000,1.000000000,0.000000000,UNOBSTRUCTED,-1.000000000,1.000000000,-1") !=
        std::string::npos);
  std::ostringstream os;
  write_summary(os, t, {1.0, 0.0});
  CHECK(os.str().rfind("status=REACHED ", 0) == 0);
  CHECK(os.str().find("time_to_goal=0.25") != std::string::npos);
}
