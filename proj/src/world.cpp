#include "rnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rnav {

namespace {

// 6u^5 - 15u^4 + 10u^3 and its derivative in u.
double smoother(double u) { return u * u * u * (u * (6.0 * u - 15.0) + 10.0); }
double smoother_d(double u) { return 30.0 * u * u * (u - 1.0) * (u - 1.0); }

std::optional<double> step_origin(const SmoothStep& st, std::optional<double> fired_at) {
  if (!st.triggered) return st.start;
  if (!fired_at) return std::nullopt;
  return *fired_at + st.start;
}

}  // namespace

double Signal::value(double t, std::optional<double> fired_at) const {
  double v = offset + rate * t;
  for (const Sinusoid& s : sines) v += s.amplitude * std::sin(s.angular_frequency * t + s.phase);
  for (const SmoothStep& st : steps) {
    const auto t0 = step_origin(st, fired_at);
    if (!t0 || t <= *t0) continue;
    const double u = st.duration > 0.0 ? std::min(1.0, (t - *t0) / st.duration) : 1.0;
    v += st.delta * smoother(u);
  }
  return v;
}

double Signal::derivative(double t, std::optional<double> fired_at) const {
  double d = rate;
  for (const Sinusoid& s : sines)
    d += s.amplitude * s.angular_frequency * std::cos(s.angular_frequency * t + s.phase);
  for (const SmoothStep& st : steps) {
    const auto t0 = step_origin(st, fired_at);
    if (!t0 || t <= *t0 || st.duration <= 0.0) continue;
    const double u = (t - *t0) / st.duration;
    if (u >= 1.0) continue;
    d += st.delta * smoother_d(u) / st.duration;
  }
  return d;
}

double Signal::max_rate() const {
  double m = std::abs(rate);
  for (const Sinusoid& s : sines) m += std::abs(s.amplitude * s.angular_frequency);
  for (const SmoothStep& st : steps)
    if (st.duration > 0.0) m += 1.875 * std::abs(st.delta) / st.duration;
  return m;
}

MotionProgram MotionProgram::fixed(Vec2 at, double angle) {
  MotionProgram m;
  m.x = Signal::constant(at.x);
  m.y = Signal::constant(at.y);
  m.angle = Signal::constant(angle);
  return m;
}

MotionProgram MotionProgram::translating(Vec2 at, Vec2 velocity, double angle) {
  MotionProgram m;
  m.x = Signal::linear(at.x, velocity.x);
  m.y = Signal::linear(at.y, velocity.y);
  m.angle = Signal::constant(angle);
  return m;
}

MotionProgram MotionProgram::spinning(Vec2 at, double angle0, double omega) {
  MotionProgram m;
  m.x = Signal::constant(at.x);
  m.y = Signal::constant(at.y);
  m.angle = Signal::linear(angle0, omega);
  return m;
}

Pose MotionProgram::pose(double t, std::optional<double> fired_at) const {
  return {{x.value(t, fired_at), y.value(t, fired_at)},
          angle.value(t, fired_at),
          scale.value(t, fired_at)};
}

PoseRate MotionProgram::rate(double t, std::optional<double> fired_at) const {
  return {{x.derivative(t, fired_at), y.derivative(t, fired_at)},
          angle.derivative(t, fired_at),
          scale.derivative(t, fired_at)};
}

IllPosedScene::IllPosedScene(int a, int b, double t)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "obstacles " << a << " and " << b << " intersect at t=" << t;
        return os.str();
      }()),
      first(a),
      second(b),
      time(t) {}

BoundViolated::BoundViolated(int cls, double decl, double obs)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "class " << cls << ": declared normal-speed bound " << decl
           << " is below observed " << obs;
        return os.str();
      }()),
      class_id(cls),
      declared(decl),
      observed(obs) {}

World::World(std::vector<ObstacleClass> classes, std::vector<Obstacle> obstacles)
    : classes_(std::move(classes)), obstacles_(std::move(obstacles)) {
  for (const Obstacle& o : obstacles_) {
    if (!find_class(o.class_id))
      throw std::invalid_argument("obstacle '" + o.name + "' references unknown class " +
                                  std::to_string(o.class_id));
  }
  fired_.assign(obstacles_.size(), std::nullopt);
}

const ObstacleClass* World::find_class(int class_id) const {
  for (const ObstacleClass& c : classes_)
    if (c.id == class_id) return &c;
  return nullptr;
}

const ObstacleClass& World::class_of(int obstacle) const {
  return *find_class(obstacles_[obstacle].class_id);
}

Pose World::pose(int obstacle, double t) const {
  return obstacles_[obstacle].motion.pose(t, fired_[obstacle]);
}

PoseRate World::pose_rate(int obstacle, double t) const {
  return obstacles_[obstacle].motion.rate(t, fired_[obstacle]);
}

ConvexCurve World::shape_at(int obstacle, double t) const {
  const Pose p = pose(obstacle, t);
  return obstacles_[obstacle].reference.transformed(p.position, p.angle, p.scale);
}

std::vector<ConvexCurve> World::shapes_at(double t) const {
  std::vector<ConvexCurve> out;
  out.reserve(obstacles_.size());
  for (std::size_t j = 0; j < obstacles_.size(); ++j) out.push_back(shape_at(static_cast<int>(j), t));
  return out;
}

void World::update_triggers(Vec2 robot, Vec2 f, double t) {
  for (std::size_t j = 0; j < obstacles_.size(); ++j) {
    const auto& lead = obstacles_[j].motion.trigger_lead;
    if (!lead || fired_[j]) continue;
    const Vec2 pivot = obstacles_[j].motion.pose(t).position;
    if (dot(robot - pivot, f) >= *lead) fired_[j] = t;
  }
}

Vec2 boundary_point_velocity(const World& world, int obstacle, double s, double t) {
  const Obstacle& ob = world.obstacles()[obstacle];
  const Pose p = world.pose(obstacle, t);
  const PoseRate r = world.pose_rate(obstacle, t);
  const ConvexCurve current = ob.reference.transformed(p.position, p.angle, p.scale);
  const BoundaryLabel label = current.label_at(s);
  const Vec2 core = ob.reference.core_point(label);
  const Vec2 body = core * p.scale + ob.reference.outward_normal(label) * ob.reference.radius();
  const Vec2 arm = rotate(body, p.angle);
  return r.velocity + perp(arm) * r.angular_rate + rotate(core, p.angle) * r.scale_rate;
}

Vec2 boundary_point_velocity_fd(const World& world, int obstacle, double s, double t,
                                double step) {
  const ConvexCurve current = world.shape_at(obstacle, t);
  const BoundaryLabel label = current.label_at(s);
  const auto at = [&](double tt) {
    const ConvexCurve c = world.shape_at(obstacle, tt);
    return c.point_at(c.arc_length_of(label));
  };
  return (at(t + step) - at(t - step)) / (2.0 * step);
}

double normal_velocity(const World& world, int obstacle, double s, double t) {
  const ConvexCurve current = world.shape_at(obstacle, t);
  return dot(boundary_point_velocity(world, obstacle, s, t), current.inward_normal_at(s));
}

Lemma1Report check_lemma1(const World& world, int obstacle, double t, double v, int samples) {
  const ConvexCurve current = world.shape_at(obstacle, t);
  Lemma1Report rep;
  for (int i = 0; i < samples; ++i) {
    const double s = current.perimeter() * i / samples;
    const double vn = dot(boundary_point_velocity(world, obstacle, s, t), current.inward_normal_at(s));
    const double out = negative_part(vn);
    if (i == 0 || out > rep.max_outward_speed) {
      rep.max_outward_speed = out;
      rep.worst_s = s;
      rep.worst_point = current.point_at(s);
    }
  }
  rep.margin = v - rep.max_outward_speed;
  rep.pass = rep.max_outward_speed <= v;
  return rep;
}

std::vector<ClassSpeedObservation> observe_normal_speeds(const World& world, double horizon,
                                                         double time_step, bool two_sided,
                                                         int samples) {
  std::vector<ClassSpeedObservation> obs;
  for (const ObstacleClass& c : world.classes()) obs.push_back({c.id, c.speed_bound, 0.0, true});
  const auto slot = [&](int class_id) -> ClassSpeedObservation& {
    for (auto& o : obs)
      if (o.class_id == class_id) return o;
    return obs.front();
  };
  const int steps = std::max(0, static_cast<int>(std::floor(horizon / time_step + 1e-9)));
  for (int k = 0; k <= steps; ++k) {
    const double t = k * time_step;
    for (std::size_t j = 0; j < world.size(); ++j) {
      const int jj = static_cast<int>(j);
      const ConvexCurve current = world.shape_at(jj, t);
      ClassSpeedObservation& o = slot(world.obstacles()[j].class_id);
      for (int i = 0; i < samples; ++i) {
        const double s = current.perimeter() * i / samples;
        const double vn =
            dot(boundary_point_velocity(world, jj, s, t), current.inward_normal_at(s));
        o.observed = std::max(o.observed, two_sided ? std::abs(vn) : negative_part(vn));
      }
    }
  }
  return obs;
}

std::vector<ClassSpeedObservation> check_theorem1_speed(const World& world, double horizon,
                                                        double time_step, double v,
                                                        bool two_sided, int samples) {
  auto obs = observe_normal_speeds(world, horizon, time_step, two_sided, samples);
  for (auto& o : obs) {
    o.below_robot_speed = o.declared < v;
    if (o.observed > o.declared + ClassSpeedObservation::kSpeedTolerance)
      throw BoundViolated(o.class_id, o.declared, o.observed);
  }
  return obs;
}

std::optional<OverlapEvent> find_overlap(const std::vector<ConvexCurve>& shapes, double t) {
  for (std::size_t a = 0; a < shapes.size(); ++a) {
    const Vec2 ca = shapes[a].centroid();
    const double ra = shapes[a].bounding_radius();
    for (std::size_t b = a + 1; b < shapes.size(); ++b) {
      const double reach = ra + shapes[b].bounding_radius();
      if ((shapes[b].centroid() - ca).squared_norm() > reach * reach) continue;
      if (shapes[a].distance_to(shapes[b]) <= 0.0)
        return OverlapEvent{static_cast<int>(a), static_cast<int>(b), t};
    }
  }
  return std::nullopt;
}

std::optional<OverlapEvent> find_overlap_over(const World& world, double horizon,
                                              double time_step) {
  const int steps = std::max(0, static_cast<int>(std::floor(horizon / time_step + 1e-9)));
  for (int k = 0; k <= steps; ++k) {
    const double t = k * time_step;
    if (auto ev = find_overlap(world.shapes_at(t), t)) return ev;
  }
  return std::nullopt;
}

}  // namespace rnav
