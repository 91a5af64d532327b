#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnav/convex_curve.hpp"
#include "rnav/delta_function.hpp"

namespace rnav {

struct Sinusoid {
  double amplitude = 0.0;
  double angular_frequency = 0.0;  // rad/s
  double phase = 0.0;
  bool operator==(const Sinusoid&) const = default;
};

/// C2 transition adding `delta` over [start, start + duration]. A triggered
/// step measures `start` from the moment its obstacle's trigger fires and is
/// inactive until then.
struct SmoothStep {
  double start = 0.0;
  double duration = 0.2;
  double delta = 0.0;
  bool triggered = false;
  bool operator==(const SmoothStep&) const = default;
};

/// Scalar time function offset + rate*t + sum of sinusoids + smooth steps.
struct Signal {
  double offset = 0.0;
  double rate = 0.0;
  std::vector<Sinusoid> sines;
  std::vector<SmoothStep> steps;

  static Signal constant(double v) { return Signal{v, 0.0, {}, {}}; }
  static Signal linear(double v0, double rate) { return Signal{v0, rate, {}, {}}; }

  double value(double t, std::optional<double> fired_at = std::nullopt) const;
  double derivative(double t, std::optional<double> fired_at = std::nullopt) const;
  /// Upper bound of |derivative| over all t.
  double max_rate() const;
  bool operator==(const Signal&) const = default;
};

struct Pose {
  Vec2 position;
  double angle = 0.0;
  double scale = 1.0;
};

struct PoseRate {
  Vec2 velocity;
  double angular_rate = 0.0;
  double scale_rate = 0.0;
};

/// Configuration map of an obstacle: the reference body is rotated about its
/// body-frame origin (the pivot), its core is uniformly scaled, and the result
/// is translated. Compositions of translation, rotation about a moving pivot
/// and length change are all expressed by the four signals.
struct MotionProgram {
  Signal x;
  Signal y;
  Signal angle;
  Signal scale = Signal::constant(1.0);
  /// Triggered steps fire once the robot is this far past the pivot along f.
  std::optional<double> trigger_lead;

  static MotionProgram fixed(Vec2 at, double angle = 0.0);
  static MotionProgram translating(Vec2 at, Vec2 velocity, double angle = 0.0);
  static MotionProgram spinning(Vec2 at, double angle0, double omega);

  Pose pose(double t, std::optional<double> fired_at = std::nullopt) const;
  PoseRate rate(double t, std::optional<double> fired_at = std::nullopt) const;
  bool operator==(const MotionProgram&) const = default;
};

struct ObstacleClass {
  int id = 0;
  /// Declared bound on the normal speed of boundary points of members.
  double speed_bound = 0.0;
  DeltaFunction delta = DeltaFunction::reference_table();
  /// Hat angle for which the spacing conditions of the drift guarantee are
  /// asserted; absent when the scenario makes no drift claim.
  std::optional<double> delta_star;
  /// Upper bound on the delta_star-hat heights of members, for tuning checks.
  std::optional<double> hat_height_bound;
  bool operator==(const ObstacleClass&) const = default;
};

struct Obstacle {
  /// Reference configuration in the body frame.
  ConvexCurve reference;
  MotionProgram motion;
  int class_id = 0;
  std::string name;
};

class IllPosedScene : public std::runtime_error {
 public:
  IllPosedScene(int a, int b, double t);
  int first;
  int second;
  double time;
};

class BoundViolated : public std::runtime_error {
 public:
  BoundViolated(int class_id, double declared, double observed);
  int class_id;
  double declared;
  double observed;
};

/// Obstacles, their classes and per-run trigger state. Copy per simulation run.
class World {
 public:
  World() = default;
  World(std::vector<ObstacleClass> classes, std::vector<Obstacle> obstacles);

  const std::vector<ObstacleClass>& classes() const { return classes_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  std::size_t size() const { return obstacles_.size(); }
  const ObstacleClass& class_of(int obstacle) const;
  const ObstacleClass* find_class(int class_id) const;

  Pose pose(int obstacle, double t) const;
  PoseRate pose_rate(int obstacle, double t) const;
  ConvexCurve shape_at(int obstacle, double t) const;
  std::vector<ConvexCurve> shapes_at(double t) const;

  /// Fires pending triggers of obstacles the robot has passed along f at time t.
  void update_triggers(Vec2 robot, Vec2 f, double t);
  std::optional<double> fired_at(int obstacle) const { return fired_[obstacle]; }

 private:
  std::vector<ObstacleClass> classes_;
  std::vector<Obstacle> obstacles_;
  std::vector<std::optional<double>> fired_;
};

/// Velocity of the material point that currently sits at arc length s on the
/// obstacle boundary.
Vec2 boundary_point_velocity(const World& world, int obstacle, double s, double t);
/// Same quantity by central differences of the configuration map (step in seconds).
Vec2 boundary_point_velocity_fd(const World& world, int obstacle, double s, double t,
                                double step = 1e-6);
/// Component of the boundary velocity along the inward normal.
double normal_velocity(const World& world, int obstacle, double s, double t);
/// Negative part max(0, -a): the outward normal speed.
inline double negative_part(double a) { return a < 0.0 ? -a : 0.0; }

struct Lemma1Report {
  bool pass = true;
  double max_outward_speed = 0.0;
  double margin = 0.0;  // v - max_outward_speed
  double worst_s = 0.0;
  Vec2 worst_point;
};
/// Necessary condition for avoidability: outward normal speed <= v everywhere.
Lemma1Report check_lemma1(const World& world, int obstacle, double t, double v,
                          int samples = 1024);

struct ClassSpeedObservation {
  int class_id = 0;
  double declared = 0.0;
  double observed = 0.0;  // supremum over sampled boundary points and times
  bool below_robot_speed = true;  // declared < v
  bool ok() const { return observed <= declared + kSpeedTolerance && below_robot_speed; }
  static constexpr double kSpeedTolerance = 1e-6;
};

/// Suprema of the outward normal speed (or of |V^N| when two_sided) per class
/// over t in [0, horizon] sampled at time_step, boundaries at `samples` points.
std::vector<ClassSpeedObservation> observe_normal_speeds(const World& world, double horizon,
                                                         double time_step, bool two_sided,
                                                         int samples = 256);
/// Throws BoundViolated when a declared class bound is below the observation,
/// otherwise returns the observations with `below_robot_speed` set from v.
std::vector<ClassSpeedObservation> check_theorem1_speed(const World& world, double horizon,
                                                        double time_step, double v,
                                                        bool two_sided = false,
                                                        int samples = 256);

struct OverlapEvent {
  int first;
  int second;
  double time;
};
/// First pair of obstacles touching at time t, if any.
std::optional<OverlapEvent> find_overlap(const std::vector<ConvexCurve>& shapes, double t);
/// Scans [0, horizon] at time_step; returns the first overlap found.
std::optional<OverlapEvent> find_overlap_over(const World& world, double horizon,
                                              double time_step);

}  // namespace rnav
