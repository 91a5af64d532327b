#include "rnav/scenarios.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rnav/hats.hpp"

namespace rnav {

ConvexCurve ShapeSpec::build() const {
  switch (kind) {
    case Kind::Disk:
      return ConvexCurve::disk({0.0, 0.0}, radius);
    case Kind::Stadium:
      return ConvexCurve::stadium({0.0, 0.0}, half_length, radius, 0.0);
    case Kind::Segment:
      return ConvexCurve::segment({0.0, 0.0}, half_length, 0.0);
    case Kind::Polygon:
      return ConvexCurve::rounded_polygon(vertices, radius);
  }
  throw std::logic_error("unknown shape kind");
}

World ScenarioSpec::world() const {
  std::vector<Obstacle> obs;
  obs.reserve(obstacles.size());
  for (const auto& o : obstacles) obs.push_back({o.shape.build(), o.motion, o.class_id, o.name});
  return World(classes, std::move(obs));
}

RobotState ScenarioSpec::robot_state() const {
  RobotState s;
  s.position = robot.position;
  s.heading = robot.heading;
  s.v_max = robot.v;
  s.f = normalized(robot.f);
  return s;
}

SimConfig ScenarioSpec::sim_config(SimConfig base) const {
  if (sim.dt) base.dt = *sim.dt;
  if (sim.rays) base.ray_count = *sim.rays;
  if (sim.edge_threshold) base.edge_threshold = *sim.edge_threshold;
  if (sim.max_range) base.max_range = *sim.max_range;
  if (sim.horizon) base.horizon = *sim.horizon;
  if (sim.vehicle) base.vehicle = *sim.vehicle;
  if (sim.turn_rate_limit) base.turn_rate_limit = *sim.turn_rate_limit;
  if (sim.noise) base.noise = *sim.noise;
  if (sim.d_star) base.d_star = *sim.d_star;
  base.goal_distance = goal_distance;
  return base;
}

// ---------------------------------------------------------------------------
// YAML

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  std::ostringstream os;
  os << what;
  if (n.Mark().line >= 0) os << " (line " << n.Mark().line + 1 << ")";
  throw ScenarioParseError(os.str());
}

double as_double(const YAML::Node& n, const char* what) {
  if (!n || !n.IsScalar()) fail(n, std::string("expected a number for ") + what);
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(n, std::string("expected a number for ") + what);
  }
}

double get_double(const YAML::Node& m, const char* key, double fallback) {
  const YAML::Node n = m[key];
  return n ? as_double(n, key) : fallback;
}

std::optional<double> get_optional(const YAML::Node& m, const char* key) {
  const YAML::Node n = m[key];
  if (!n) return std::nullopt;
  return as_double(n, key);
}

Vec2 as_vec2(const YAML::Node& n, const char* what) {
  if (!n || !n.IsSequence() || n.size() != 2) fail(n, std::string("expected [x, y] for ") + what);
  return {as_double(n[0], what), as_double(n[1], what)};
}

std::string get_string(const YAML::Node& m, const char* key, const std::string& fallback) {
  const YAML::Node n = m[key];
  if (!n) return fallback;
  if (!n.IsScalar()) fail(n, std::string("expected a string for ") + key);
  return n.as<std::string>();
}

void check_keys(const YAML::Node& m, std::initializer_list<const char*> allowed, const char* where) {
  if (!m.IsMap()) fail(m, std::string("expected a mapping for ") + where);
  for (const auto& kv : m) {
    const std::string k = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(kv.first, "unknown key '" + k + "' in " + where);
  }
}

Signal parse_signal(const YAML::Node& n, const char* what) {
  if (n.IsScalar()) return Signal::constant(as_double(n, what));
  check_keys(n, {"offset", "rate", "sines", "steps"}, what);
  Signal s;
  s.offset = get_double(n, "offset", 0.0);
  s.rate = get_double(n, "rate", 0.0);
  if (const auto sines = n["sines"]) {
    if (!sines.IsSequence()) fail(sines, "sines must be a list");
    for (const auto& e : sines) {
      check_keys(e, {"amplitude", "omega", "phase"}, "sine");
      s.sines.push_back({get_double(e, "amplitude", 0.0), get_double(e, "omega", 0.0),
                         get_double(e, "phase", 0.0)});
    }
  }
  if (const auto steps = n["steps"]) {
    if (!steps.IsSequence()) fail(steps, "steps must be a list");
    for (const auto& e : steps) {
      check_keys(e, {"start", "duration", "delta", "triggered"}, "step");
      SmoothStep st;
      st.start = get_double(e, "start", 0.0);
      st.duration = get_double(e, "duration", 0.2);
      st.delta = get_double(e, "delta", 0.0);
      if (e["triggered"]) st.triggered = e["triggered"].as<bool>();
      if (st.duration <= 0.0) fail(e, "step duration must be positive");
      s.steps.push_back(st);
    }
  }
  return s;
}

DeltaFunction parse_delta(const YAML::Node& n) {
  if (!n) return DeltaFunction::reference_table();
  try {
    if (n.IsScalar()) {
      if (n.as<std::string>() == "reference") return DeltaFunction::reference_table();
      return DeltaFunction::constant(as_double(n, "delta"));
    }
    if (!n.IsSequence()) fail(n, "delta must be 'reference', a number or a list of [distance, delta]");
    std::vector<DeltaFunction::Fracture> fr;
    for (const auto& e : n) {
      const Vec2 p = as_vec2(e, "delta fracture");
      fr.push_back({p.x, p.y});
    }
    return DeltaFunction(std::move(fr));
  } catch (const std::invalid_argument& e) {
    fail(n, std::string("invalid delta function: ") + e.what());
  }
}

ShapeSpec parse_shape(const YAML::Node& n) {
  check_keys(n, {"type", "radius", "half_length", "vertices"}, "shape");
  const std::string type = get_string(n, "type", "");
  ShapeSpec s;
  if (type == "disk") {
    s = ShapeSpec::disk(get_double(n, "radius", 0.0));
    if (s.radius <= 0.0) fail(n, "disk radius must be positive");
  } else if (type == "stadium") {
    s = ShapeSpec::stadium(get_double(n, "half_length", 0.0), get_double(n, "radius", 0.0));
    if (s.radius <= 0.0 || s.half_length <= 0.0) fail(n, "stadium needs positive radius and half_length");
  } else if (type == "segment") {
    s = ShapeSpec::segment(get_double(n, "half_length", 0.0));
    if (s.half_length <= 0.0) fail(n, "segment half_length must be positive");
  } else if (type == "polygon") {
    const auto v = n["vertices"];
    if (!v || !v.IsSequence() || v.size() < 3) fail(n, "polygon needs at least 3 vertices");
    std::vector<Vec2> pts;
    for (const auto& e : v) pts.push_back(as_vec2(e, "vertex"));
    s = ShapeSpec::polygon(std::move(pts), get_double(n, "radius", 0.0));
    try {
      (void)s.build();
    } catch (const std::invalid_argument& e) {
      fail(n, std::string("invalid polygon: ") + e.what());
    }
  } else {
    fail(n, "unknown shape type '" + type + "'");
  }
  return s;
}

MotionProgram parse_motion(const YAML::Node& n) {
  MotionProgram m;
  if (!n) return m;
  check_keys(n, {"x", "y", "angle", "scale", "trigger_lead"}, "motion");
  if (n["x"]) m.x = parse_signal(n["x"], "x");
  if (n["y"]) m.y = parse_signal(n["y"], "y");
  if (n["angle"]) m.angle = parse_signal(n["angle"], "angle");
  if (n["scale"]) m.scale = parse_signal(n["scale"], "scale");
  m.trigger_lead = get_optional(n, "trigger_lead");
  return m;
}

ScenarioSpec parse_root(const YAML::Node& root) {
  if (!root.IsMap()) throw ScenarioParseError("scenario must be a mapping");
  check_keys(root, {"name", "classes", "obstacles", "robot", "sim", "goal", "meta"}, "scenario");
  ScenarioSpec spec;
  spec.name = get_string(root, "name", "");
  spec.classes.clear();

  if (const auto cls = root["classes"]) {
    if (!cls.IsSequence()) fail(cls, "classes must be a list");
    for (const auto& c : cls) {
      check_keys(c, {"id", "speed_bound", "delta", "delta_star", "hat_height_bound"}, "class");
      ObstacleClass oc;
      if (!c["id"]) fail(c, "class needs an id");
      oc.id = c["id"].as<int>();
      oc.speed_bound = get_double(c, "speed_bound", 0.0);
      if (oc.speed_bound < 0.0) fail(c, "speed_bound must be nonnegative");
      oc.delta = parse_delta(c["delta"]);
      oc.delta_star = get_optional(c, "delta_star");
      oc.hat_height_bound = get_optional(c, "hat_height_bound");
      if (std::any_of(spec.classes.begin(), spec.classes.end(),
                      [&](const ObstacleClass& o) { return o.id == oc.id; }))
        fail(c, "duplicate class id");
      spec.classes.push_back(std::move(oc));
    }
  }

  if (const auto obs = root["obstacles"]) {
    if (!obs.IsSequence()) fail(obs, "obstacles must be a list");
    for (const auto& o : obs) {
      check_keys(o, {"name", "class", "shape", "motion"}, "obstacle");
      ObstacleSpec os;
      os.name = get_string(o, "name", "");
      os.class_id = o["class"] ? o["class"].as<int>() : 0;
      if (!o["shape"]) fail(o, "obstacle needs a shape");
      os.shape = parse_shape(o["shape"]);
      os.motion = parse_motion(o["motion"]);
      if (std::none_of(spec.classes.begin(), spec.classes.end(),
                       [&](const ObstacleClass& c) { return c.id == os.class_id; }))
        fail(o, "obstacle refers to unknown class " + std::to_string(os.class_id));
      spec.obstacles.push_back(std::move(os));
    }
  }

  if (const auto r = root["robot"]) {
    check_keys(r, {"position", "v", "f", "heading"}, "robot");
    if (r["position"]) spec.robot.position = as_vec2(r["position"], "robot position");
    spec.robot.v = get_double(r, "v", 1.0);
    if (r["f"]) spec.robot.f = as_vec2(r["f"], "robot f");
    spec.robot.heading = get_double(r, "heading", 0.0);
    if (spec.robot.v <= 0.0) fail(r, "robot speed must be positive");
    if (spec.robot.f.norm() < 1e-12) fail(r, "robot f must be nonzero");
  }

  if (const auto s = root["sim"]) {
    check_keys(s, {"dt", "rays", "edge_threshold", "max_range", "horizon", "vehicle",
                   "turn_rate_limit", "noise", "d_star"},
               "sim");
    spec.sim.dt = get_optional(s, "dt");
    if (s["rays"]) spec.sim.rays = s["rays"].as<int>();
    spec.sim.edge_threshold = get_optional(s, "edge_threshold");
    spec.sim.max_range = get_optional(s, "max_range");
    spec.sim.horizon = get_optional(s, "horizon");
    if (s["vehicle"]) {
      const std::string v = s["vehicle"].as<std::string>();
      if (v == "velocity_point") spec.sim.vehicle = Vehicle::VelocityPoint;
      else if (v == "unicycle") spec.sim.vehicle = Vehicle::Unicycle;
      else fail(s["vehicle"], "vehicle must be velocity_point or unicycle");
    }
    spec.sim.turn_rate_limit = get_optional(s, "turn_rate_limit");
    spec.sim.noise = get_optional(s, "noise");
    spec.sim.d_star = get_optional(s, "d_star");
  }

  if (const auto g = root["goal"]) {
    check_keys(g, {"distance"}, "goal");
    spec.goal_distance = get_double(g, "distance", spec.goal_distance);
  }

  if (const auto m = root["meta"]) {
    check_keys(m, {"family", "targets", "intent", "description"}, "meta");
    spec.meta.family = get_string(m, "family", "");
    spec.meta.targets = get_string(m, "targets", "none");
    spec.meta.intent = get_string(m, "intent", "compliant");
    spec.meta.description = get_string(m, "description", "");
    if (spec.meta.intent != "compliant" && spec.meta.intent != "violating")
      fail(m, "intent must be compliant or violating");
  }
  return spec;
}

void emit_vec(YAML::Emitter& e, Vec2 v) {
  e << YAML::Flow << YAML::BeginSeq << v.x << v.y << YAML::EndSeq;
}

void emit_signal(YAML::Emitter& e, const Signal& s) {
  if (s.sines.empty() && s.steps.empty() && s.rate == 0.0) {
    e << s.offset;
    return;
  }
  e << YAML::BeginMap << YAML::Key << "offset" << YAML::Value << s.offset;
  if (s.rate != 0.0) e << YAML::Key << "rate" << YAML::Value << s.rate;
  if (!s.sines.empty()) {
    e << YAML::Key << "sines" << YAML::Value << YAML::BeginSeq;
    for (const auto& w : s.sines)
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "amplitude" << YAML::Value << w.amplitude
        << YAML::Key << "omega" << YAML::Value << w.angular_frequency << YAML::Key << "phase"
        << YAML::Value << w.phase << YAML::EndMap;
    e << YAML::EndSeq;
  }
  if (!s.steps.empty()) {
    e << YAML::Key << "steps" << YAML::Value << YAML::BeginSeq;
    for (const auto& st : s.steps)
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "start" << YAML::Value << st.start
        << YAML::Key << "duration" << YAML::Value << st.duration << YAML::Key << "delta"
        << YAML::Value << st.delta << YAML::Key << "triggered" << YAML::Value << st.triggered
        << YAML::EndMap;
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
}

void emit_delta(YAML::Emitter& e, const DeltaFunction& d) {
  if (d == DeltaFunction::reference_table()) {
    e << "reference";
    return;
  }
  if (d.fractures().size() == 1) {
    e << d.at_zero();
    return;
  }
  e << YAML::BeginSeq;
  for (const auto& f : d.fractures())
    e << YAML::Flow << YAML::BeginSeq << f.distance << f.delta << YAML::EndSeq;
  e << YAML::EndSeq;
}

void emit_shape(YAML::Emitter& e, const ShapeSpec& s) {
  e << YAML::Flow << YAML::BeginMap;
  switch (s.kind) {
    case ShapeSpec::Kind::Disk:
      e << YAML::Key << "type" << YAML::Value << "disk" << YAML::Key << "radius" << YAML::Value
        << s.radius;
      break;
    case ShapeSpec::Kind::Stadium:
      e << YAML::Key << "type" << YAML::Value << "stadium" << YAML::Key << "half_length"
        << YAML::Value << s.half_length << YAML::Key << "radius" << YAML::Value << s.radius;
      break;
    case ShapeSpec::Kind::Segment:
      e << YAML::Key << "type" << YAML::Value << "segment" << YAML::Key << "half_length"
        << YAML::Value << s.half_length;
      break;
    case ShapeSpec::Kind::Polygon:
      e << YAML::Key << "type" << YAML::Value << "polygon" << YAML::Key << "radius" << YAML::Value
        << s.radius << YAML::Key << "vertices" << YAML::Value << YAML::BeginSeq;
      for (Vec2 v : s.vertices) emit_vec(e, v);
      e << YAML::EndSeq;
      break;
  }
  e << YAML::EndMap;
}

template <class T>
void emit_opt(YAML::Emitter& e, const char* key, const std::optional<T>& v) {
  if (v) e << YAML::Key << key << YAML::Value << *v;
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
  try {
    return parse_root(YAML::Load(text));
  } catch (const ScenarioParseError&) {
    throw;
  } catch (const YAML::Exception& e) {
    throw ScenarioParseError(e.what());
  }
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioSpec& spec) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << spec.name;

  e << YAML::Key << "meta" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "family" << YAML::Value << spec.meta.family;
  e << YAML::Key << "targets" << YAML::Value << spec.meta.targets;
  e << YAML::Key << "intent" << YAML::Value << spec.meta.intent;
  e << YAML::Key << "description" << YAML::Value << spec.meta.description;
  e << YAML::EndMap;

  e << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : spec.classes) {
    e << YAML::BeginMap << YAML::Key << "id" << YAML::Value << c.id;
    e << YAML::Key << "speed_bound" << YAML::Value << c.speed_bound;
    e << YAML::Key << "delta" << YAML::Value;
    emit_delta(e, c.delta);
    emit_opt(e, "delta_star", c.delta_star);
    emit_opt(e, "hat_height_bound", c.hat_height_bound);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : spec.obstacles) {
    e << YAML::BeginMap << YAML::Key << "name" << YAML::Value << o.name;
    e << YAML::Key << "class" << YAML::Value << o.class_id;
    e << YAML::Key << "shape" << YAML::Value;
    emit_shape(e, o.shape);
    e << YAML::Key << "motion" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "x" << YAML::Value;
    emit_signal(e, o.motion.x);
    e << YAML::Key << "y" << YAML::Value;
    emit_signal(e, o.motion.y);
    e << YAML::Key << "angle" << YAML::Value;
    emit_signal(e, o.motion.angle);
    if (o.motion.scale != Signal::constant(1.0)) {
      e << YAML::Key << "scale" << YAML::Value;
      emit_signal(e, o.motion.scale);
    }
    emit_opt(e, "trigger_lead", o.motion.trigger_lead);
    e << YAML::EndMap << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "robot" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "position" << YAML::Value;
  emit_vec(e, spec.robot.position);
  e << YAML::Key << "v" << YAML::Value << spec.robot.v;
  e << YAML::Key << "f" << YAML::Value;
  emit_vec(e, spec.robot.f);
  e << YAML::Key << "heading" << YAML::Value << spec.robot.heading;
  e << YAML::EndMap;

  const SimOverrides& s = spec.sim;
  e << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  emit_opt(e, "dt", s.dt);
  emit_opt(e, "rays", s.rays);
  emit_opt(e, "edge_threshold", s.edge_threshold);
  emit_opt(e, "max_range", s.max_range);
  emit_opt(e, "horizon", s.horizon);
  if (s.vehicle)
    e << YAML::Key << "vehicle" << YAML::Value
      << (*s.vehicle == Vehicle::Unicycle ? "unicycle" : "velocity_point");
  emit_opt(e, "turn_rate_limit", s.turn_rate_limit);
  emit_opt(e, "noise", s.noise);
  emit_opt(e, "d_star", s.d_star);
  e << YAML::EndMap;

  e << YAML::Key << "goal" << YAML::Value << YAML::BeginMap << YAML::Key << "distance"
    << YAML::Value << spec.goal_distance << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_scenario(spec);
}

// ---------------------------------------------------------------------------
// Generators

namespace {

constexpr double kMaxOmega = M_PI;  // 0.5 Hz

/// Zero-mean sum of 1 to 3 sinusoids about `center` with total amplitude at
/// most `amp_cap` and speed at most `speed_cap`.
Signal random_signal(std::mt19937_64& rng, double center, double amp_cap, double speed_cap) {
  Signal s = Signal::constant(center);
  if (amp_cap <= 0.0 || speed_cap <= 0.0) return s;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 1 + static_cast<int>(u(rng) * 3.0) % 3;
  double sum_w = 0.0, sum_wo = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = 0.2 + 0.8 * u(rng);
    const double omega = 0.2 + (kMaxOmega - 0.2) * u(rng);
    const double phase = 2.0 * M_PI * u(rng);
    s.sines.push_back({w, omega, phase});
    sum_w += w;
    sum_wo += w * omega;
  }
  const double scale = std::min(speed_cap / sum_wo, amp_cap / sum_w);
  for (auto& w : s.sines) w.amplitude *= scale;
  return s;
}

double amplitude_of(const Signal& s) {
  double a = 0.0;
  for (const auto& w : s.sines) a += std::abs(w.amplitude);
  return a;
}

double delta_bar(double v_o, double v) { return std::asin(std::clamp(v_o / v, 0.0, 1.0)); }

/// Largest xi' with criterion(xi') <= target, by bisection on [0, 1).
template <class F>
double invert_increasing(F criterion, double target) {
  double lo = 0.0, hi = 1.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (criterion(mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

ObstacleClass make_class(int id, double speed_bound, const DeltaFunction& delta, double delta_star,
                         double hat_height) {
  ObstacleClass c;
  c.id = id;
  c.speed_bound = speed_bound;
  c.delta = delta;
  c.delta_star = delta_star;
  c.hat_height_bound = hat_height;
  return c;
}

/// Compliant when the layout meets its spacing condition and every class is
/// tuned for drift.
std::string intent_for(bool spacing_ok, const std::vector<ObstacleClass>& classes, double v) {
  bool tuned = true;
  for (const auto& t : check_drift_tuning(classes, v)) tuned = tuned && t.pass();
  return spacing_ok && tuned ? "compliant" : "violating";
}

void require(bool ok, const std::string& what) {
  if (!ok) throw GenerationFailed(what);
}

std::string fmt_name(const char* prefix, int i) { return prefix + std::to_string(i); }

}  // namespace

ScenarioSpec gen_disk_field(const DiskFieldParams& p) {
  require(p.n >= 0, "disk count must be nonnegative");
  require(p.r_min > 0.0 && p.r_min <= p.r_max, "need 0 < r_min <= r_max");
  require(p.v > 0.0 && p.v_o >= 0.0 && p.v_o < p.v, "need 0 <= v_o < v");
  require(p.spacing_factor > 0.0, "spacing factor must be positive");
  require(p.field_width > 0.0, "field width must be positive");

  const double xi = p.v_o / p.v;
  const double s_req = std::max(p.spacing_factor * criterion_upsilon(xi) * p.r_max, 1e-3 * p.r_max);
  double dstar;
  if (p.delta_star) {
    dstar = *p.delta_star;
  } else if (p.spacing_factor > 1.0) {
    const double target = criterion_upsilon(xi) * (1.0 + 0.5 * (p.spacing_factor - 1.0));
    dstar = std::asin(invert_increasing(criterion_upsilon, target));
  } else {
    dstar = delta_bar(p.v_o, p.v) + 1e-3;
  }
  require(dstar > 0.0 && dstar < M_PI / 2, "delta_star out of range");

  ScenarioSpec spec;
  spec.name = "disk_field_s" + std::to_string(p.seed);
  spec.classes.push_back(
      make_class(0, p.v_o, p.delta, dstar, p.r_max * (1.0 / std::cos(dstar) - 1.0)));
  spec.meta.family = "disk_field";
  spec.meta.targets = "theorem2";
  spec.meta.intent = intent_for(p.spacing_factor > 1.0, spec.classes, p.v);
  spec.meta.description = "moving disks in lanes across f";

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Columns share one radius so the gap between neighbouring columns is exact.
  struct Lane {
    Signal y;
    double amp;
  };
  std::vector<std::vector<Lane>> columns;
  std::vector<double> radii, heights;
  for (int i = 0; i < p.n; ++i) {
    if (columns.empty() || heights.back() + s_req + 2.0 * radii.back() + 2.0 > p.field_width) {
      columns.emplace_back();
      radii.push_back(p.r_min + (p.r_max - p.r_min) * u(rng));
      heights.push_back(-s_req);
    }
    Lane lane;
    lane.y = random_signal(rng, 0.0, 1.0, p.v_o);
    lane.amp = amplitude_of(lane.y);
    columns.back().push_back(lane);
    heights.back() += s_req + 2.0 * (radii.back() + lane.amp);
  }

  double x = 0.0;
  int idx = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const double r = radii[c];
    x = c == 0 ? p.r_max / std::cos(dstar) + 1.0 + u(rng) : x + radii[c - 1] + r + s_req;
    double top = 0.5 * heights[c];
    for (const auto& l : columns[c]) {
      ObstacleSpec o;
      o.name = fmt_name("disk", idx++);
      o.shape = ShapeSpec::disk(r);
      o.motion.x = Signal::constant(x);
      o.motion.y = l.y;
      o.motion.y.offset = top - r - l.amp;
      top -= 2.0 * (r + l.amp) + s_req;
      spec.obstacles.push_back(std::move(o));
    }
  }
  spec.goal_distance = columns.empty() ? 10.0 : x + p.r_max + 3.0;
  return spec;
}

bool corridor_strip_contains(double xi) {
  if (xi <= 0.0) return true;
  if (xi >= 1.0) return false;
  const double d = std::asin(xi);
  const ConvexCurve disk = ConvexCurve::disk({0.0, 0.0}, 1.0);
  const ExtendedHat eh = extend_hat(build_hat(disk, {1.0, 0.0}, d), d);
  return std::max(eh.support_value({0.0, 1.0}), eh.support_value({0.0, -1.0})) < 1.0;
}

ScenarioSpec gen_corridor(const CorridorParams& p) {
  require(p.groups >= 0, "group count must be nonnegative");
  require(p.radius > 0.0 && p.disks_per_group >= 1, "need positive radius and disks per group");
  require(p.v > 0.0 && p.v_o >= 0.0 && p.v_o < p.v, "need 0 <= v_o < v");
  require(p.d_in > 0.0 && p.d_i > 0.0 && p.vertical_gap > 0.0 && p.interval_width >= 0.0,
          "spacings must be positive");
  const double R = p.radius;
  const double xi = p.v_o / p.v;
  const double dbar = delta_bar(p.v_o, p.v);

  // Strip containment needs tan(delta*) < 1; the hat height R Omega must stay
  // below the gaps d_in R and d_i R.
  double dstar;
  if (p.delta_star) {
    dstar = *p.delta_star;
  } else {
    const double gap = p.groups > 1 ? std::min(p.d_in, p.d_i) : p.d_in;
    const double upper = std::min(M_PI / 4, std::acos(1.0 / (1.0 + gap)));
    dstar = dbar < upper ? 0.5 * (dbar + upper) : dbar + 1e-3;
  }

  ScenarioSpec spec;
  spec.name = "corridor_g" + std::to_string(p.groups) + "_s" + std::to_string(p.seed);
  const double omega_star = 1.0 / std::cos(dstar) - 1.0;
  const double wall_r = 0.5;
  spec.classes.push_back(make_class(0, p.v_o, p.delta, dstar, R * omega_star));
  spec.classes.push_back(make_class(1, 0.0, p.delta, dstar, wall_r * omega_star));
  spec.meta.family = "corridor";
  spec.meta.targets = "claim1";
  const bool spaced = p.d_in > omega_star && (p.groups < 2 || p.d_i > omega_star);
  spec.meta.intent = intent_for(corridor_strip_contains(xi) && spaced, spec.classes, p.v);
  spec.meta.description = "corridor crossed by groups of disks aligned across f";

  std::mt19937_64 rng(p.seed);
  const double lane_amp = 0.5 * R;
  const double lane_h = 2.0 * R + 2.0 * lane_amp;
  const double gap = p.vertical_gap * R;
  const double H = 0.5 * (p.disks_per_group * lane_h + (p.disks_per_group - 1) * gap);
  const double w = p.interval_width * R;

  // Each group's projection on f stays within [a, a + 2R + w].
  double a = p.d_in * R;
  int idx = 0;
  double end_x = 0.0;
  for (int g = 0; g < p.groups; ++g) {
    const Signal gx = random_signal(rng, a + R + 0.5 * w, 0.5 * w, p.v_o / std::sqrt(2.0));
    for (int k = 0; k < p.disks_per_group; ++k) {
      const double yc = H - R - lane_amp - k * (lane_h + gap);
      ObstacleSpec o;
      o.name = fmt_name("disk", idx++);
      o.class_id = 0;
      o.shape = ShapeSpec::disk(R);
      o.motion.x = gx;
      o.motion.y = random_signal(rng, yc, lane_amp, p.v_o / std::sqrt(2.0));
      spec.obstacles.push_back(std::move(o));
    }
    end_x = a + 2.0 * R + w;
    a = end_x + p.d_i * R;
  }
  spec.goal_distance = (p.groups > 0 ? end_x : 0.0) + 3.0;

  const double x_lo = -5.0, x_hi = spec.goal_distance + 5.0;
  for (int side = 0; side < 2; ++side) {
    ObstacleSpec o;
    o.name = side == 0 ? "wall_top" : "wall_bottom";
    o.class_id = 1;
    o.shape = ShapeSpec::stadium(0.5 * (x_hi - x_lo), wall_r);
    o.motion = MotionProgram::fixed({0.5 * (x_lo + x_hi), (side == 0 ? 1 : -1) * (H + wall_r)});
    spec.obstacles.push_back(std::move(o));
  }
  return spec;
}

ScenarioSpec gen_segment_field(const SegmentFieldParams& p) {
  require(p.n >= 0 && p.rows >= 1, "need n >= 0 and rows >= 1");
  require(p.half_length > 0.0, "half length must be positive");
  require(p.v > 0.0 && p.v_o >= 0.0 && p.v_o < p.v, "need 0 <= v_o < v");
  require(p.d_f > 0.0 && p.d_f_perp > 0.0, "spacings must be positive");
  const double L = p.half_length;
  const double dbar = delta_bar(p.v_o, p.v);

  // Depth 2L tan(delta*) behind each segment and overhang 2L Xi across f.
  double dstar;
  if (p.delta_star) {
    dstar = *p.delta_star;
  } else {
    const double upper = std::min(
        std::atan(p.d_f / (2 * L)),
        std::asin(invert_increasing(criterion_xi_fn, p.d_f_perp / (2 * L))));
    dstar = dbar < upper ? 0.5 * (dbar + upper) : dbar + 1e-3;
  }

  ScenarioSpec spec;
  spec.name = "segment_field_s" + std::to_string(p.seed);
  spec.classes.push_back(make_class(0, p.v_o, p.delta, dstar, L * std::tan(dstar)));
  spec.meta.family = "segment_field";
  spec.meta.targets = "claim2";
  const double xi = p.v_o / p.v;
  spec.meta.intent = intent_for(
      p.d_f / (2 * L) > criterion_gamma(xi) && p.d_f_perp / (2 * L) > criterion_xi_fn(xi),
      spec.classes, p.v);
  spec.meta.description = "translating segments perpendicular to f";

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ax = 0.1 * p.d_f;
  const double ay = 0.5 * L;
  const double pitch_x = 2 * ax + p.d_f;
  const double pitch_y = 2 * L + 2 * ay + p.d_f_perp;
  const double x0 = L * std::tan(std::max(dstar, p.delta(0.0))) + ax + 1.0;

  int cols = (p.n + p.rows - 1) / p.rows;
  for (int i = 0; i < p.n; ++i) {
    const int c = i / p.rows, r = i % p.rows;
    const double xc = x0 + c * pitch_x;
    const double yc = (r - 0.5 * (p.rows - 1)) * pitch_y + (c % 2 ? 0.5 * L * u(rng) : 0.0);
    ObstacleSpec o;
    o.name = fmt_name("seg", i);
    o.shape = ShapeSpec::segment(L);
    o.motion.x = random_signal(rng, xc, ax, p.v_o / std::sqrt(2.0));
    o.motion.y = random_signal(rng, yc, ay, p.v_o / std::sqrt(2.0));
    o.motion.angle = Signal::constant(M_PI / 2);
    spec.obstacles.push_back(std::move(o));
  }
  spec.goal_distance = x0 + std::max(0, cols - 1) * pitch_x + ax + 3.0;
  return spec;
}

ScenarioSpec gen_rotating_grid(const RotatingGridParams& p) {
  require(p.rows >= 1 && p.cols >= 1, "need at least one row and column");
  require(p.spacing > 0.0 && p.half_length > 0.0 && p.v > 0.0, "sizes must be positive");
  const double L = p.half_length, D = p.spacing;
  const double speed = L * std::abs(p.omega);
  require(speed < p.v, "segment tips must be slower than the robot");
  if (p.omega != 0.0 && D <= std::sqrt(2.0) * L) throw IllPosedScene(0, 1, 0.0);
  if (D <= L) throw IllPosedScene(0, 1, 0.0);

  const double dbar = delta_bar(speed, p.v);
  double dstar;
  if (p.delta_star) {
    dstar = *p.delta_star;
  } else {
    const double upper = D / L > 1.0 ? rotating_grid_delta_for(D / L) : 0.0;
    dstar = dbar < upper ? 0.5 * (dbar + upper) : dbar + 1e-3;
  }

  ScenarioSpec spec;
  spec.name = "rotating_grid";
  spec.classes.push_back(make_class(0, speed, p.delta, dstar, L * std::tan(dstar)));
  spec.meta.family = "rotating_grid";
  spec.meta.targets = "claim3";
  spec.meta.intent = intent_for(D / L > rotating_grid_threshold(dbar), spec.classes, p.v);
  spec.meta.description = "segments spinning about grid pivots, neighbours counter-rotating";

  const double x0 = L + 1.0;
  int idx = 0;
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      ObstacleSpec o;
      o.name = fmt_name("seg", idx++);
      o.shape = ShapeSpec::segment(L);
      const Vec2 at{x0 + r * D, (c - 0.5 * (p.cols - 1)) * D};
      const bool even = (r + c) % 2 == 0;
      o.motion = even ? MotionProgram::spinning(at, M_PI / 2 - p.phase, -p.omega)
                      : MotionProgram::spinning(at, p.phase, p.omega);
      spec.obstacles.push_back(std::move(o));
    }
  }
  spec.goal_distance = x0 + (p.rows - 1) * D + L + 2.0;

  const World w = spec.world();
  if (auto ov = find_overlap(w.shapes_at(0.0), 0.0)) throw IllPosedScene(ov->first, ov->second, 0.0);
  return spec;
}

ScenarioSpec gen_counterexample(const CounterexampleParams& p) {
  require(p.pairs >= 1, "need at least one pair");
  require(p.half_length > 0.0 && p.eta > 0.0 && p.eps > 0.0 && p.eps < p.half_length,
          "need L > eps > 0 and eta > 0");
  require(p.v > 0.0 && p.v_o > 0.0 && p.v_o < p.v, "need 0 < v_o < v");
  const double L = p.half_length;
  const double dbar = delta_bar(p.v_o, p.v);

  ScenarioSpec spec;
  spec.name = "counterexample";
  spec.classes.push_back(make_class(0, p.v_o, DeltaFunction::constant(dbar + 0.1), dbar + 0.15,
                                    L * std::tan(dbar + 0.15)));
  spec.meta.family = "counterexample";
  spec.meta.targets = "counterexample";
  spec.meta.intent = "violating";
  spec.meta.description = "staggered segments drifting against f";

  const int count = 2 * p.pairs;
  for (int k = 1; k <= count; ++k) {
    ObstacleSpec o;
    o.name = fmt_name("seg", k);
    o.shape = ShapeSpec::segment(L);
    const Vec2 at{k * p.eta, k % 2 == 1 ? 0.0 : L + p.eps};
    o.motion = MotionProgram::translating(at, {-p.v_o, 0.0}, M_PI / 2);
    if (p.rearrange) {
      o.motion.trigger_lead = 0.5;
      o.motion.y.steps.push_back({0.0, 0.2, 5 * L, true});
      o.motion.x.steps.push_back({0.2, 0.2, count * p.eta, true});
      o.motion.y.steps.push_back({0.4, 0.2, -5 * L, true});
    }
    spec.obstacles.push_back(std::move(o));
  }
  spec.robot.position = {0.0, 0.0};
  spec.goal_distance = 1e6;
  spec.sim.horizon = 60.0;
  return spec;
}

ScenarioSpec gen_complex(const ComplexParams& p) {
  require(p.rows >= 1 && p.cols >= 1, "need at least one row and column");
  require(p.cell > 2.0 && p.v > 0.0 && p.v_t >= 0.0 && p.omega_max >= 0.0, "bad sizes");
  require(p.fill >= 0.0 && p.fill <= 1.0, "fill must be a probability");

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioSpec spec;
  spec.name = "complex_s" + std::to_string(p.seed);
  spec.meta.family = "complex";
  spec.meta.targets = "theorem1";
  spec.meta.description = "translating and rotating obstacles of mixed shapes";

  const double x0 = 4.0;
  const double reach = 0.5 * p.cell - 0.25;  // farthest body point from the cell centre
  double bound = 0.0;
  int idx = 0;
  for (int c = 0; c < p.cols; ++c) {
    for (int r = 0; r < p.rows; ++r) {
      if (u(rng) >= p.fill) continue;
      ObstacleSpec o;
      o.name = fmt_name("ob", idx++);
      const double size = std::min(1.2, 0.6 * reach) * (0.5 + 0.5 * u(rng));
      const int kind = static_cast<int>(u(rng) * 3.0) % 3;
      double extent = size;
      if (kind == 0) {
        o.shape = ShapeSpec::disk(size);
      } else if (kind == 1) {
        const double rad = 0.2 + 0.2 * u(rng);
        o.shape = ShapeSpec::stadium(size - rad, rad);
      } else {
        const int n = 3 + static_cast<int>(u(rng) * 4.0) % 4;
        const double rad = 0.1;
        std::vector<Vec2> core;
        const double a0 = 2.0 * M_PI * u(rng);
        for (int k = 0; k < n; ++k) core.push_back((size - rad) * unit(a0 + 2.0 * M_PI * k / n));
        o.shape = ShapeSpec::polygon(std::move(core), rad);
      }
      const Vec2 centre{x0 + (c + 0.5) * p.cell, (r - 0.5 * (p.rows - 1)) * p.cell};
      const double amp = reach - extent;
      o.motion.x = random_signal(rng, centre.x, amp, p.v_t);
      o.motion.y = random_signal(rng, centre.y, amp, p.v_t);
      double omega = 0.0;
      if (kind != 0) {
        omega = (u(rng) < 0.5 ? -1.0 : 1.0) * p.omega_max * (0.3 + 0.7 * u(rng));
        o.motion.angle = Signal::linear(2.0 * M_PI * u(rng), omega);
      }
      bound = std::max(bound, std::hypot(o.motion.x.max_rate(), o.motion.y.max_rate()) +
                                  std::abs(omega) * extent);
      spec.obstacles.push_back(std::move(o));
    }
  }
  require(bound < p.v, "obstacles must be slower than the robot");
  ObstacleClass cls;
  cls.id = 0;
  cls.speed_bound = bound;
  cls.delta = p.delta;
  spec.classes.push_back(cls);
  spec.goal_distance = x0 + p.cols * p.cell + 3.0;
  spec.sim.horizon = 120.0;
  return spec;
}

std::optional<double> counterexample_net_displacement(const ScenarioSpec& spec, const Trace& trace) {
  if (spec.obstacles.empty()) return std::nullopt;
  const World w = spec.world();
  const Vec2 f = normalized(spec.robot.f);
  int last = 0;
  for (int i = 1; i < static_cast<int>(w.size()); ++i)
    if (dot(w.pose(i, 0.0).position, f) > dot(w.pose(last, 0.0).position, f)) last = i;
  for (const auto& r : trace.records) {
    if (dot(r.position - w.pose(last, r.t).position, f) > 0.0)
      return dot(r.position - trace.start, f);
  }
  if (dot(trace.end - w.pose(last, trace.end_time).position, f) > 0.0)
    return dot(trace.end - trace.start, f);
  return std::nullopt;
}

}  // namespace rnav
