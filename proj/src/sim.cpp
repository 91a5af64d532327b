#include "rnav/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "rnav/sensor.hpp"

namespace rnav {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("horizon must be at least dt");
  if (ray_count < 8) throw std::invalid_argument("at least 8 rays required");
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");
  if (!(edge_threshold > 0.0)) throw std::invalid_argument("edge threshold must be positive");
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Reached: return "REACHED";
    case Status::Timeout: return "TIMEOUT";
    case Status::Collision: return "COLLISION";
    case Status::AbortedIllPosed: return "ABORTED_ILLPOSED";
  }
  return "?";
}

double Trace::drift_infimum() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records) m = std::min(m, r.drift);
  return m;
}

double Trace::min_clearance() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records) m = std::min(m, r.min_clearance);
  return m;
}

double heading_noise(std::mt19937_64& rng, double std_dev, double dt) {
  if (std_dev == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, std_dev * dt)(rng);
}

namespace {

bool rigid(const MotionProgram& m) {
  return m.scale.rate == 0.0 && m.scale.sines.empty() && m.scale.steps.empty() &&
         m.scale.offset == 1.0;
}

// Upper bound on the speed of any point of the obstacle over [0, horizon].
double max_point_speed(const Obstacle& ob, double horizon) {
  double reach = 0.0;
  for (const Vec2& v : ob.reference.core()) reach = std::max(reach, v.norm());
  const Signal& sc = ob.motion.scale;
  double scale = std::abs(sc.offset) + std::abs(sc.rate) * horizon;
  for (const auto& q : sc.sines) scale += std::abs(q.amplitude);
  for (const auto& q : sc.steps) scale += std::abs(q.delta);
  const double arm = reach * scale + ob.reference.radius();
  return ob.motion.x.max_rate() + ob.motion.y.max_rate() + ob.motion.angle.max_rate() * arm +
         sc.max_rate() * reach;
}

// Minimum distance from the origin to the segment [a, b].
double origin_segment_distance(Vec2 a, Vec2 b) { return distance_point_segment({0.0, 0.0}, a, b); }

}  // namespace

Simulator::Simulator(World world, SimConfig config)
    : world_(std::move(world)),
      config_(std::move(config)),
      noise_rng_(config_.seed),
      tie_rng_(config_.seed ^ 0x9e3779b97f4a7c15ULL) {
  config_.validate();
  for (const Obstacle& ob : world_.obstacles()) point_speed_.push_back(max_point_speed(ob, config_.horizon));
}

Vec2 Simulator::decide(const RobotState& state, double t, const std::vector<ConvexCurve>& shapes,
                       const char*& branch) {
  if (config_.controller == Controller::Vom) {
    branch = "VOM";
    return vom_control(state, world_, t, config_.vom);
  }
  const RangeScan sc = scan(world_, shapes, state.position, t, config_.ray_count, config_.max_range);
  const auto facets = extract_facets(sc, config_.edge_threshold);
  const auto ext = enlarge(facets, world_.classes());
  ControlOptions opt;
  opt.d_star = config_.d_star;
  if (config_.random_ties) opt.tie_rng = &tie_rng_;
  try {
    const ControlDecision d = select_control(polar_angle(state.f), ext, state.v_max, opt);
    branch = branch_name(d.branch);
    return d.velocity;
  } catch (const NoEscapeDirection&) {
    branch = branch_name(Branch::Hold);
    return previous_.value_or(state.f * state.v_max);
  }
}

StepResult Simulator::step(const RobotState& state, double t) {
  StepResult out;
  out.state = state;
  out.time = t;
  TraceRecord& rec = out.record;
  rec.t = t;
  rec.position = state.position;

  world_.update_triggers(state.position, state.f, t);
  const std::vector<ConvexCurve> shapes = world_.shapes_at(t);
  if (auto ov = find_overlap(shapes, t)) {
    out.terminal = Status::AbortedIllPosed;
    out.collision_obstacle = ov->first;
    return out;
  }
  rec.min_clearance = std::numeric_limits<double>::infinity();
  std::vector<double> clearance(shapes.size());
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    clearance[j] = shapes[j].clearance(state.position);
    if (clearance[j] < rec.min_clearance) {
      rec.min_clearance = clearance[j];
      rec.nearest_id = static_cast<int>(j);
    }
  }
  if (rec.min_clearance <= 0.0) {
    out.terminal = Status::Collision;
    out.collision_obstacle = rec.nearest_id;
    return out;
  }

  Vec2 cmd = decide(state, t, shapes, rec.branch);
  previous_ = cmd;
  cmd = rotate(cmd, heading_noise(noise_rng_, config_.noise, config_.dt));
  rec.velocity = cmd;
  rec.drift = dot(cmd, state.f);

  // Obstacles that may be reached within this period.
  const double speed = cmd.norm();
  std::vector<int> near;
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    const double reach = (speed + point_speed_[j]) * config_.dt;
    if (clearance[j] <= reach + 1e-9) near.push_back(static_cast<int>(j));
  }

  const double h = config_.dt / config_.substeps;
  RobotState s = state;
  for (int k = 0; k < config_.substeps; ++k) {
    const double t0 = t + k * h, t1 = t0 + h;
    Vec2 vel = cmd;
    if (config_.vehicle == Vehicle::Unicycle) {
      const double want = normalize_angle(polar_angle(cmd) - s.heading);
      const double limit = config_.turn_rate_limit * h;
      s.heading = normalize_angle(s.heading + std::clamp(want, -limit, limit));
      vel = unit(s.heading) * speed;
    }
    const Vec2 p0 = s.position;
    const Vec2 p1 = p0 + vel * h;
    world_.update_triggers(p1, s.f, t1);
    for (int j : near) {
      const Obstacle& ob = world_.obstacles()[j];
      bool hit;
      if (rigid(ob.motion)) {
        // Robot path relative to the obstacle, in its body frame.
        const Pose a = world_.pose(j, t0), b = world_.pose(j, t1);
        hit = ob.reference.intersects_segment(rotate(p0 - a.position, -a.angle),
                                              rotate(p1 - b.position, -b.angle));
      } else {
        hit = world_.shape_at(j, t1).intersects_segment(p0, p1) ||
              world_.shape_at(j, t0).intersects_segment(p0, p1);
      }
      if (hit) {
        s.position = p1;
        out.state = s;
        out.time = t1;
        out.terminal = Status::Collision;
        out.collision_obstacle = j;
        return out;
      }
    }
    s.position = p1;
    if (dot(p1 - origin_, s.f) >= config_.goal_distance) {
      out.state = s;
      out.time = t1;
      out.terminal = Status::Reached;
      return out;
    }
  }
  out.state = s;
  out.time = t + config_.dt;
  return out;
}

Trace Simulator::run(RobotState initial) {
  Trace trace;
  origin_ = initial.position;
  previous_.reset();
  trace.start = initial.position;
  RobotState s = initial;
  double t = 0.0;
  const long steps = std::lround(std::ceil(config_.horizon / config_.dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    t = k * config_.dt;
    StepResult r = step(s, t);
    if (!r.terminal || *r.terminal != Status::AbortedIllPosed) {
      if (r.record.branch[0] != '\0') trace.records.push_back(r.record);
    }
    s = r.state;
    if (r.terminal) {
      trace.status = *r.terminal;
      trace.end_time = r.time;
      trace.end = s.position;
      if (*r.terminal == Status::Collision) trace.collision_obstacle = r.collision_obstacle;
      if (*r.terminal == Status::AbortedIllPosed) {
        const auto ov = find_overlap(world_.shapes_at(r.time), r.time);
        if (ov) trace.illposed_pair = std::make_pair(ov->first, ov->second);
      }
      return trace;
    }
    t = r.time;
  }
  trace.status = Status::Timeout;
  trace.end_time = t;
  trace.end = s.position;
  return trace;
}

Trace run(World world, const RobotState& initial, const SimConfig& config) {
  Simulator sim(std::move(world), config);
  return sim.run(initial);
}

std::vector<VomCandidate> vom_candidates(const RobotState& state, const World& world, double t,
                                         const VomConfig& config) {
  const double v = state.v_max;
  const int samples = std::max(1, static_cast<int>(std::ceil(config.lookahead / config.sample_step)));
  const double step = config.lookahead / samples;

  struct Track {
    std::vector<Vec2> centers;
    double radius;
    double min_speed;
  };
  std::vector<Track> tracks;
  for (std::size_t j = 0; j < world.size(); ++j) {
    const Obstacle& ob = world.obstacles()[j];
    const Vec2 c_ref = ob.reference.centroid();
    const double r_ref = ob.reference.bounding_radius();
    const double core_reach = r_ref - ob.reference.radius();
    Track tr;
    tr.radius = 0.0;
    for (int k = 0; k <= samples; ++k) {
      const Pose p = world.pose(static_cast<int>(j), t + k * step);
      tr.centers.push_back(p.position + rotate(c_ref * p.scale, p.angle));
      tr.radius = std::max(tr.radius, core_reach * std::abs(p.scale) + ob.reference.radius());
    }
    // Skip tracks that stay out of reach over the whole lookahead.
    // Candidates slower than min_speed stay beyond the offset from this track.
    const double clear0 = (tr.centers[0] - state.position).norm() - tr.radius - config.offset;
    tr.min_speed = std::max(0.0, clear0 / step);
    for (int k = 1; k <= samples && tr.min_speed > 0.0; ++k) {
      const double d = distance_point_segment(state.position, tr.centers[k - 1], tr.centers[k]);
      tr.min_speed = std::min(tr.min_speed, std::max(0.0, (d - tr.radius - config.offset) / (k * step)));
    }
    if (tr.min_speed > v) continue;
    tracks.push_back(std::move(tr));
  }

  std::vector<VomCandidate> out;
  out.reserve(static_cast<std::size_t>(config.headings * config.speeds + 1));
  auto evaluate = [&](Vec2 u) {
    VomCandidate c{u, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                   0.0};
    const double speed = u.norm();
    for (const Track& tr : tracks) {
      if (speed < tr.min_speed) continue;
      Vec2 prev = state.position - tr.centers[0];
      double gap = prev.norm() - tr.radius;
      if (gap <= 0.0) c.time_to_collision = 0.0;
      for (int k = 1; k <= samples; ++k) {
        const Vec2 rel = state.position + u * (k * step) - tr.centers[k];
        const double g = origin_segment_distance(prev, rel) - tr.radius;
        gap = std::min(gap, g);
        if (g <= 0.0 && c.time_to_collision > (k - 1) * step) c.time_to_collision = (k - 1) * step;
        prev = rel;
      }
      c.min_gap = std::min(c.min_gap, gap);
    }
    const double progress = (v - dot(u, state.f)) / v;
    const double crowd = std::max(0.0, config.offset - c.min_gap) / config.offset;
    c.cost = progress + config.weight * crowd;
    out.push_back(c);
  };
  evaluate({0.0, 0.0});
  const double base = polar_angle(state.f);
  for (int s = 1; s <= config.speeds; ++s) {
    for (int h = 0; h < config.headings; ++h) {
      evaluate(unit(base + kTwoPi * h / config.headings) * (v * s / config.speeds));
    }
  }
  return out;
}

Vec2 vom_control(const RobotState& state, const World& world, double t, const VomConfig& config) {
  const auto cands = vom_candidates(state, world, t, config);
  const VomCandidate* best = nullptr;
  for (const auto& c : cands) {
    if (!std::isinf(c.time_to_collision)) continue;
    if (!best || c.cost < best->cost) best = &c;
  }
  if (best) return best->velocity;
  // Nothing is free over the lookahead: postpone contact as long as possible.
  for (const auto& c : cands) {
    if (!best || c.time_to_collision > best->time_to_collision ||
        (c.time_to_collision == best->time_to_collision && c.cost < best->cost))
      best = &c;
  }
  return best->velocity;
}

std::vector<Trace> run_batch(const std::vector<BatchJob>& jobs, unsigned threads) {
  std::vector<Trace> out(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      out[i] = run(jobs[i].world, jobs[i].initial, jobs[i].config);
  };
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "t,x,y,vx,vy,branch,min_clearance,drift,nearest_id\n";
  char buf[256];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%.3f,%.9f,%.9f,%.9f,%.9f,%s,%.9f,%.9f,%d\n", r.t,
                  r.position.x, r.position.y, r.velocity.x, r.velocity.y, r.branch,
                  std::isinf(r.min_clearance) ? -1.0 : r.min_clearance, r.drift, r.nearest_id);
    os << buf;
  }
}

void write_summary(std::ostream& os, const Trace& trace, Vec2 f) {
  const auto num = [](double x) {
    char b[64];
    if (std::isnan(x)) return std::string("nan");
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    std::snprintf(b, sizeof b, "%.9f", x);
    return std::string(b);
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  os << "status=" << status_name(trace.status) << " end_time=" << num(trace.end_time)
     << " time_to_goal=" << num(trace.status == Status::Reached ? trace.end_time : nan)
     << " min_clearance=" << num(trace.min_clearance())
     << " drift_infimum=" << num(trace.records.empty() ? nan : trace.drift_infimum())
     << " progress=" << num(trace.progress(f)) << " end_x=" << num(trace.end.x)
     << " end_y=" << num(trace.end.y) << " collision_obstacle=" << trace.collision_obstacle
     << " steps=" << trace.records.size() << "\n";
}

}  // namespace rnav
