#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rnav/navlaw.hpp"
#include "rnav/world.hpp"

namespace rnav {

struct RobotState {
  Vec2 position;
  double heading = 0.0;  // unicycle only
  double v_max = 1.0;
  Vec2 f{1.0, 0.0};      // desired azimuth, unit length
};

enum class Vehicle { VelocityPoint, Unicycle };
enum class Controller { Pcl, Vom };

/// Velocity-obstacle baseline settings.
struct VomConfig {
  double lookahead = 10.0;   // seconds of known future obstacle motion
  double offset = 0.5;       // desired clearance
  double weight = 2.0;       // separation term weight
  int headings = 64;
  int speeds = 16;
  double sample_step = 0.2;  // seconds between future samples
};

struct SimConfig {
  double dt = 0.1;
  int ray_count = 40;
  double edge_threshold = 2.0;
  double max_range = 30.0;
  double horizon = 120.0;
  Vehicle vehicle = Vehicle::VelocityPoint;
  double turn_rate_limit = 1.0;  // rad/s
  double noise = 0.0;            // heading disturbance std dev, rad/s
  std::uint64_t seed = 0;
  Controller controller = Controller::Pcl;
  VomConfig vom;
  int substeps = 10;
  /// Run ends REACHED once progress along f from the start exceeds this.
  double goal_distance = std::numeric_limits<double>::infinity();
  std::optional<double> d_star;
  bool random_ties = false;

  /// Throws std::invalid_argument on nonpositive dt, horizon < dt, or too few rays.
  void validate() const;
};

enum class Status { Reached, Timeout, Collision, AbortedIllPosed };
const char* status_name(Status s);

struct TraceRecord {
  double t = 0.0;
  Vec2 position;
  Vec2 velocity;  // commanded, held over the period
  const char* branch = "";
  double min_clearance = 0.0;
  double drift = 0.0;  // <velocity, f>
  int nearest_id = -1;
};

struct Trace {
  std::vector<TraceRecord> records;
  Status status = Status::Timeout;
  double end_time = 0.0;
  Vec2 start;
  Vec2 end;
  int collision_obstacle = -1;
  std::optional<std::pair<int, int>> illposed_pair;

  double drift_infimum() const;
  double min_clearance() const;
  double progress(Vec2 f) const { return dot(end - start, f); }
};

/// Gaussian heading perturbation with standard deviation std_dev * dt.
double heading_noise(std::mt19937_64& rng, double std_dev, double dt);

struct StepResult {
  RobotState state;
  TraceRecord record;
  std::optional<Status> terminal;
  int collision_obstacle = -1;
  double time = 0.0;  // time reached by the step, earlier on termination
};

/// Carries the controller memory and noise stream across steps of one run.
class Simulator {
 public:
  Simulator(World world, SimConfig config);

  /// One control period from time t: sense, decide, then integrate with the
  /// command held over the period.
  StepResult step(const RobotState& state, double t);
  Trace run(RobotState initial);

  const World& world() const { return world_; }
  const SimConfig& config() const { return config_; }

 private:
  Vec2 decide(const RobotState& state, double t, const std::vector<ConvexCurve>& shapes,
              const char*& branch);

  World world_;
  SimConfig config_;
  std::mt19937_64 noise_rng_;
  std::mt19937_64 tie_rng_;
  std::optional<Vec2> previous_;
  Vec2 origin_;  // start of the current run; goal progress is measured from here
  std::vector<double> point_speed_;
};

Trace run(World world, const RobotState& initial, const SimConfig& config);

/// Chooses the admissible candidate velocity of least cost using the known
/// future motion of every obstacle, approximated by bounding disks.
Vec2 vom_control(const RobotState& state, const World& world, double t, const VomConfig& config);

struct VomCandidate {
  Vec2 velocity;
  double time_to_collision;  // +inf when free over the lookahead
  double min_gap;            // smallest predicted gap to any obstacle
  double cost;
};
/// Every candidate of the velocity grid with its evaluation.
std::vector<VomCandidate> vom_candidates(const RobotState& state, const World& world, double t,
                                         const VomConfig& config);

struct BatchJob {
  World world;
  RobotState initial;
  SimConfig config;
};
/// Runs jobs on a thread pool; results follow job order.
std::vector<Trace> run_batch(const std::vector<BatchJob>& jobs, unsigned threads = 0);

void write_trace_csv(std::ostream& os, const Trace& trace);
void write_summary(std::ostream& os, const Trace& trace, Vec2 f);

struct SvgOptions {
  std::vector<double> snapshot_times;
  /// Overlay the hats of this angle at each snapshot when set.
  std::optional<double> hat_delta;
  Vec2 f{1.0, 0.0};
  double goal_distance = std::numeric_limits<double>::infinity();
};
void write_svg(std::ostream& os, const World& world, const Trace& trace, const SvgOptions& options);

}  // namespace rnav
