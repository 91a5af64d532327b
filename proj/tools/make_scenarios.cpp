// Regenerates the shipped scenario files and the golden trace.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rnav/scenarios.hpp"

namespace fs = std::filesystem;
using namespace rnav;

namespace {

/// Regenerates with a constant Delta midway between the safety and drift angles.
template <class P, class G>
ScenarioSpec drift_tuned(P p, G gen, double v_o_over_v) {
  const ScenarioSpec first = gen(p);
  p.delta = DeltaFunction::constant(0.5 * (std::asin(v_o_over_v) + *first.classes[0].delta_star));
  return gen(p);
}

ScenarioSpec empty_scene() {
  ScenarioSpec s;
  s.name = "empty";
  s.goal_distance = 10.0;
  s.meta.family = "empty";
  s.meta.description = "no obstacles";
  return s;
}

ScenarioSpec collision_scene() {
  ScenarioSpec s;
  s.name = "collision";
  ObstacleClass c;
  c.speed_bound = 0.8;
  c.delta = DeltaFunction::constant(0.1);  // below arcsin(0.8)
  s.classes.push_back(c);
  ObstacleSpec o;
  o.name = "charger";
  o.shape = ShapeSpec::disk(1.0);
  o.motion = MotionProgram::translating({6.0, 0.0}, {-0.8, 0.0});
  s.obstacles.push_back(o);
  s.goal_distance = 20.0;
  s.meta.family = "collision";
  s.meta.targets = "theorem1";
  s.meta.intent = "violating";
  s.meta.description = "head-on disk with an enlargement too small for its speed";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? argv[1] : "scenarios";
  fs::create_directories(dir);
  auto save = [&](const ScenarioSpec& s, const std::string& file) {
    save_scenario(s, (dir / file).string());
    std::cout << (dir / file).string() << "\n";
  };

  save(empty_scene(), "empty.yaml");

  DiskFieldParams df;
  df.seed = 1;
  save(drift_tuned(df, gen_disk_field, df.v_o / df.v), "disk_field.yaml");
  df.spacing_factor = 0.5;
  ScenarioSpec tight = drift_tuned(df, gen_disk_field, df.v_o / df.v);
  tight.name = "disk_field_tight";
  save(tight, "disk_field_tight.yaml");

  CorridorParams co;
  co.seed = 1;
  save(drift_tuned(co, gen_corridor, co.v_o / co.v), "corridor.yaml");

  SegmentFieldParams sf;
  sf.seed = 1;
  save(drift_tuned(sf, gen_segment_field, sf.v_o / sf.v), "segment_field.yaml");

  RotatingGridParams rg;
  save(drift_tuned(rg, gen_rotating_grid, rg.half_length * rg.omega / rg.v), "rotating_grid.yaml");

  save(gen_counterexample({}), "counterexample.yaml");

  ScenarioSpec cx = gen_complex({});
  cx.name = "complex";
  save(cx, "complex.yaml");
  cx.name = "complex_unicycle";
  cx.sim.vehicle = Vehicle::Unicycle;
  cx.sim.turn_rate_limit = 1.0;
  cx.sim.noise = 0.1;
  cx.meta.description += ", unicycle with heading noise";
  save(cx, "complex_unicycle.yaml");

  save(collision_scene(), "collision.yaml");

  const ScenarioSpec golden = load_scenario((dir / "complex.yaml").string());
  const Trace t = run(golden.world(), golden.robot_state(), golden.sim_config());
  std::ofstream os(dir / "complex.golden.csv");
  write_trace_csv(os, t);
  std::cout << (dir / "complex.golden.csv").string() << "\n";
  return 0;
}
