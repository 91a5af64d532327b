#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnav/sim.hpp"
#include "rnav/world.hpp"

namespace rnav {

/// Reference shape of an obstacle, centred on its pivot.
struct ShapeSpec {
  enum class Kind { Disk, Stadium, Segment, Polygon };
  Kind kind = Kind::Disk;
  double radius = 0.0;       // disk, stadium and polygon rounding
  double half_length = 0.0;  // stadium and segment, along the body x axis
  std::vector<Vec2> vertices;

  static ShapeSpec disk(double r) { return {Kind::Disk, r, 0.0, {}}; }
  static ShapeSpec stadium(double half_length, double r) { return {Kind::Stadium, r, half_length, {}}; }
  static ShapeSpec segment(double half_length) { return {Kind::Segment, 0.0, half_length, {}}; }
  static ShapeSpec polygon(std::vector<Vec2> v, double r) { return {Kind::Polygon, r, 0.0, std::move(v)}; }

  ConvexCurve build() const;
  bool operator==(const ShapeSpec&) const = default;
};

struct ObstacleSpec {
  std::string name;
  int class_id = 0;
  ShapeSpec shape;
  MotionProgram motion;
  bool operator==(const ObstacleSpec&) const = default;
};

struct RobotSpec {
  Vec2 position;
  double v = 1.0;
  Vec2 f{1.0, 0.0};
  double heading = 0.0;
  bool operator==(const RobotSpec&) const = default;
};

/// Per-scenario overrides of the simulation defaults.
struct SimOverrides {
  std::optional<double> dt;
  std::optional<int> rays;
  std::optional<double> edge_threshold;
  std::optional<double> max_range;
  std::optional<double> horizon;
  std::optional<Vehicle> vehicle;
  std::optional<double> turn_rate_limit;
  std::optional<double> noise;
  std::optional<double> d_star;
  bool operator==(const SimOverrides&) const = default;
};

/// What a scenario is built to demonstrate.
struct ScenarioMeta {
  std::string family;
  /// Condition the scene targets: lemma1, theorem1, theorem2, claim1, claim2,
  /// claim3, counterexample or none.
  std::string targets = "none";
  /// compliant: every applicable check passes; violating: some check fails.
  std::string intent = "compliant";
  std::string description;
  bool operator==(const ScenarioMeta&) const = default;
};

struct ScenarioSpec {
  std::string name;
  std::vector<ObstacleClass> classes;
  std::vector<ObstacleSpec> obstacles;
  RobotSpec robot;
  SimOverrides sim;
  double goal_distance = 50.0;
  ScenarioMeta meta;

  World world() const;
  RobotState robot_state() const;
  /// `base` with this scenario's overrides and goal applied.
  SimConfig sim_config(SimConfig base = {}) const;
  bool operator==(const ScenarioSpec&) const = default;
};

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& text);
std::string dump_scenario(const ScenarioSpec& spec);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

struct DiskFieldParams {
  int n = 20;
  double r_min = 0.5;
  double r_max = 1.0;
  double v_o = 0.25;
  double v = 1.0;
  /// Gap between obstacles as a multiple of the spacing criterion times max radius.
  double spacing_factor = 1.1;
  std::uint64_t seed = 0;
  double field_width = 16.0;
  DeltaFunction delta = DeltaFunction::reference_table();
  std::optional<double> delta_star;
};
/// Disks in columns across f, each moving within its own lane perpendicular to f.
ScenarioSpec gen_disk_field(const DiskFieldParams& p);

struct CorridorParams {
  int groups = 1;
  double radius = 1.0;
  double v_o = 0.5;
  double v = 1.0;
  double d_in = 1.5;            // robot to the first group's interval along f, in radii
  double d_i = 1.5;             // gap between consecutive intervals, in radii
  int disks_per_group = 2;
  double vertical_gap = 0.1;    // between vertical lanes of a group
  double interval_width = 1.0;  // travel of a group along f, in radii
  std::uint64_t seed = 0;
  DeltaFunction delta = DeltaFunction::reference_table();
  std::optional<double> delta_star;
};
/// Corridor bounded by two walls parallel to f, crossed by groups of disks
/// whose centres stay aligned across f.
ScenarioSpec gen_corridor(const CorridorParams& p);

struct SegmentFieldParams {
  int n = 9;
  double half_length = 1.0;
  double v_o = 0.125;
  double v = 1.0;
  double d_f = 0.3;       // spacing along f
  double d_f_perp = 0.1;  // spacing across f
  std::uint64_t seed = 0;
  int rows = 3;           // segments per column
  DeltaFunction delta = DeltaFunction::reference_table();
  std::optional<double> delta_star;
};
/// Segments kept perpendicular to f, each translating within its own cell.
ScenarioSpec gen_segment_field(const SegmentFieldParams& p);

struct RotatingGridParams {
  double spacing = 1.6;  // D
  double half_length = 1.0;
  double omega = 1.0 / 6.0;
  int rows = 3;          // lines of pivots crossed by the robot
  int cols = 5;
  double v = 1.0;
  /// Shifts the pattern to its configuration at time phase / omega.
  double phase = 0.0;
  DeltaFunction delta = DeltaFunction::reference_table();
  std::optional<double> delta_star;
};
/// Grid of segments spinning about their pivots, neighbours in opposite
/// directions. Throws IllPosedScene when diagonal neighbours would collide.
ScenarioSpec gen_rotating_grid(const RotatingGridParams& p);

struct CounterexampleParams {
  int pairs = 4;  // N; 2N segments
  double half_length = 2.0;
  double eta = 0.1;  // spacing along f between consecutive segments
  double v_o = 0.25;
  double eps = 0.1;
  double v = 1.0;
  /// Relocate each segment ahead of the line once the robot passes it.
  bool rearrange = false;
};
/// Staggered segments drifting against f.
ScenarioSpec gen_counterexample(const CounterexampleParams& p);

struct ComplexParams {
  int rows = 5;         // cells across f
  int cols = 6;         // cells along f
  double cell = 3.5;    // cell side
  double fill = 0.85;   // probability that a cell holds an obstacle
  double v_t = 0.2;     // translation speed cap per axis
  double omega_max = 0.3;
  double v = 1.0;
  std::uint64_t seed = 0;
  DeltaFunction delta = DeltaFunction::reference_table();
};
/// Disks, stadiums and rounded polygons translating and rotating, each within
/// its own cell of a grid ahead of the robot.
ScenarioSpec gen_complex(const ComplexParams& p);

/// Progress along f at the first record where the robot has passed the last
/// segment of a counterexample scene; nullopt if it never does.
std::optional<double> counterexample_net_displacement(const ScenarioSpec& spec, const Trace& trace);

/// Whether the extended hat of a disk, for delta = delta1 = arcsin xi, stays
/// within the strip across f spanned by the disk.
bool corridor_strip_contains(double xi);

}  // namespace rnav
