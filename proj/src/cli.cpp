#include "rnav/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rnav/hats.hpp"
#include "rnav/navlaw.hpp"

namespace rnav::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x, int precision = 6) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::string class_tag(const std::string& name, int id) {
  return name + "[" + std::to_string(id) + "]";
}

}  // namespace

int exit_code_for(Status s) {
  switch (s) {
    case Status::Reached: return kExitOk;
    case Status::Timeout: return kExitTimeout;
    case Status::Collision: return kExitCollision;
    case Status::AbortedIllPosed: return kExitIllPosed;
  }
  return kExitTimeout;
}

SimConfig make_config(const ScenarioSpec& spec, const SimFlags& flags, std::uint64_t seed,
                      Controller controller) {
  SimConfig c = spec.sim_config();
  if (flags.dt) c.dt = *flags.dt;
  if (flags.rays) c.ray_count = *flags.rays;
  if (flags.edge_threshold) c.edge_threshold = *flags.edge_threshold;
  if (flags.goal_distance) c.goal_distance = *flags.goal_distance;
  if (flags.d_star) c.d_star = *flags.d_star;
  if (flags.noise) c.noise = *flags.noise;
  c.seed = seed;
  c.controller = controller;
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// run

int cmd_run(const RunOptions& options, std::ostream& log) {
  ScenarioSpec spec;
  SimConfig config;
  try {
    spec = load_scenario(options.scenario);
    config = make_config(spec, options.flags, options.seed, options.controller);
  } catch (const ScenarioParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  }

  World world;
  try {
    world = spec.world();
  } catch (const IllPosedScene& e) {
    log << "error: " << e.what() << "\n";
    return kExitIllPosed;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  }

  const RobotState start = spec.robot_state();
  const Trace trace = run(world, start, config);

  if (!options.out.empty()) {
    auto csv = open_out(options.out + ".trace.csv");
    write_trace_csv(csv, trace);
    auto summary = open_out(options.out + ".summary");
    write_summary(summary, trace, start.f);
    SvgOptions svg;
    svg.snapshot_times = options.snapshot_times;
    svg.hat_delta = options.hat_delta;
    svg.f = start.f;
    svg.goal_distance = config.goal_distance;
    auto img = open_out(options.out + ".svg");
    write_svg(img, world, trace, svg);
  }
  write_summary(log, trace, start.f);
  if (trace.illposed_pair)
    log << "ill-posed: obstacles " << trace.illposed_pair->first << " and "
        << trace.illposed_pair->second << " touch\n";
  return exit_code_for(trace.status);
}

// ---------------------------------------------------------------------------
// check

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skip: return "SKIP";
  }
  return "?";
}

bool CheckReport::pass() const {
  return std::none_of(items.begin(), items.end(),
                      [](const CheckItem& i) { return i.verdict == Verdict::Fail; });
}

const CheckItem* CheckReport::find(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return &i;
  return nullptr;
}

CheckReport check_scenario(const ScenarioSpec& spec, const CheckOptions& options) {
  const SimConfig base = spec.sim_config();
  const double horizon = options.horizon.value_or(base.horizon);
  const double step = options.time_step.value_or(base.dt);
  const double v = spec.robot.v;
  const Vec2 f = normalized(spec.robot.f);
  const World world = spec.world();

  CheckReport rep;
  rep.scenario = spec.name;
  auto add = [&](std::string name, bool ok, double margin, std::string detail = {}) {
    rep.items.push_back({std::move(name), ok ? Verdict::Pass : Verdict::Fail, margin,
                         std::move(detail)});
  };
  auto skip = [&](std::string name, std::string detail) {
    rep.items.push_back({std::move(name), Verdict::Skip, kNaN, std::move(detail)});
  };

  if (auto ov = find_overlap_over(world, horizon, step)) {
    std::ostringstream d;
    d << "obstacles " << ov->first << " and " << ov->second << " touch at t=" << num(ov->time, 3);
    add("well_posed", false, kNaN, d.str());
  } else {
    add("well_posed", true, kNaN);
  }

  {
    const int times = std::max(1, static_cast<int>(std::ceil(horizon / std::max(step, horizon / 60.0))));
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    for (int k = 0; k <= times; ++k) {
      const double t = horizon * k / times;
      for (int i = 0; i < static_cast<int>(world.size()); ++i) {
        const Lemma1Report r = check_lemma1(world, i, t, v, 256);
        if (r.margin < worst) {
          worst = r.margin;
          where = world.obstacles()[i].name + " at t=" + num(t, 3);
        }
      }
    }
    if (world.size() == 0) worst = v;
    add("lemma1", worst >= -ClassSpeedObservation::kSpeedTolerance, worst, where);
  }

  for (const auto& o : observe_normal_speeds(world, horizon, step, false)) {
    add(class_tag("speed_bound", o.class_id), o.observed <= o.declared + o.kSpeedTolerance,
        o.declared - o.observed, "observed " + num(o.observed) + " declared " + num(o.declared));
    add(class_tag("speed_below_v", o.class_id), o.declared < v, v - o.declared);
  }

  for (const auto& s : check_safety_tuning(world.classes(), v))
    add(class_tag("safety_tuning", s.class_id), s.pass, s.delta_at_zero - s.required,
        "Delta(0) " + num(s.delta_at_zero) + " arcsin(v_o/v) " + num(s.required));

  const bool drift_claim =
      !world.classes().empty() &&
      std::all_of(world.classes().begin(), world.classes().end(),
                  [](const ObstacleClass& c) { return c.delta_star.has_value(); });
  if (!drift_claim) {
    skip("theorem2.a", "no delta_star declared");
    skip("theorem2.b", "no delta_star declared");
    for (const auto& c : world.classes()) skip(class_tag("drift_tuning", c.id), "no delta_star declared");
    return rep;
  }

  for (const auto& o : observe_normal_speeds(world, horizon, step, true))
    add(class_tag("speed_bound_two_sided", o.class_id),
        o.observed <= o.declared + o.kSpeedTolerance, o.declared - o.observed,
        "observed " + num(o.observed) + " declared " + num(o.declared));

  const Theorem2Report th2 = check_theorem2(world, spec.robot.position, f, horizon, step);
  std::string a_detail, b_detail;
  if (th2.first_violation) {
    const HatViolation& hv = *th2.first_violation;
    std::ostringstream d;
    d << "first violation (" << hv.condition << ") hat of " << hv.obstacle;
    if (hv.other >= 0) d << " meets " << hv.other;
    d << " at t=" << num(hv.time, 3);
    (hv.condition == 'a' ? a_detail : b_detail) = d.str();
  }
  add("theorem2.a", th2.a_pass, th2.min_margin, a_detail);
  add("theorem2.b", th2.b_pass, th2.b_margin, b_detail);

  for (std::size_t i = 0; i < world.classes().size(); ++i) {
    const ObstacleClass& c = world.classes()[i];
    const double height = c.hat_height_bound
                              ? *c.hat_height_bound
                              : (i < th2.max_hat_height.size() ? th2.max_hat_height[i] : 0.0);
    const DriftTuning t = check_drift_tuning(c, height, *c.delta_star, v);
    std::string detail = "Delta(0) " + num(t.delta_at_zero) + " in (" + num(t.delta_bar) + ", " +
                         num(t.delta_star) + ")";
    if (!t.flat) detail += ", not constant up to " + num(height);
    add(class_tag("drift_tuning", c.id), t.pass(),
        std::min(t.delta_at_zero - t.delta_bar, t.delta_star - t.delta_at_zero), detail);
  }
  return rep;
}

void write_check_text(std::ostream& os, const CheckReport& report) {
  os << "scenario " << report.scenario << "\n";
  for (const auto& i : report.items) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-4s %-28s", verdict_name(i.verdict), i.name.c_str());
    os << buf;
    if (!std::isnan(i.margin)) os << " margin " << num(i.margin);
    if (!i.detail.empty()) os << "  " << i.detail;
    os << "\n";
  }
  os << (report.pass() ? "all conditions hold\n" : "some conditions fail\n");
}

void write_check_csv(std::ostream& os, const CheckReport& report) {
  os << "condition,verdict,margin,detail\n";
  for (const auto& i : report.items) {
    std::string detail = i.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    os << i.name << "," << verdict_name(i.verdict) << "," << num(i.margin, 9) << "," << detail
       << "\n";
  }
}

int cmd_check(const std::string& scenario, const std::string& out, const CheckOptions& options,
              std::ostream& log) {
  ScenarioSpec spec;
  try {
    spec = load_scenario(scenario);
  } catch (const ScenarioParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  }
  CheckReport rep;
  try {
    rep = check_scenario(spec, options);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  }
  write_check_text(log, rep);
  if (out.empty()) {
    write_check_csv(log, rep);
  } else {
    auto os = open_out(out + ".check.csv");
    write_check_csv(os, rep);
  }
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// tables

std::vector<double> reference_xi_grid() {
  return {0.0, 1.0 / 8, 1.0 / 7, 1.0 / 6, 1.0 / 4, 1.0 / 3, 1.0 / 2, 1.0 / std::sqrt(2.0)};
}

void write_tables(std::ostream& os, const std::vector<double>& xi) {
  os << "xi,omega_pct,upsilon_pct,gamma_pct,xi_fn_pct,grid_threshold_pct\n";
  char buf[256];
  for (double x : xi) {
    const double grid = x == 0.0 ? 1.0 : 100.0 * (rotating_grid_threshold(std::asin(x)) - 1.0);
    std::snprintf(buf, sizeof buf, "%.9f,%.6f,%.6f,%.6f,%.6f,%.6f\n", x,
                  100.0 * criterion_omega(x), 100.0 * criterion_upsilon(x),
                  100.0 * criterion_gamma(x), 100.0 * criterion_xi_fn(x), grid);
    os << buf;
  }
}

int cmd_tables(const std::vector<double>& xi, const std::string& out, std::ostream& log) {
  try {
    if (out.empty()) {
      write_tables(log, xi);
    } else {
      auto os = open_out(out);
      write_tables(os, xi);
    }
  } catch (const std::domain_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

namespace {

ControllerStats stats_of(const std::vector<std::pair<Status, double>>& runs) {
  ControllerStats s;
  std::vector<double> times;
  for (const auto& [st, t] : runs) {
    if (st == Status::Reached) {
      times.push_back(t);
    } else {
      ++s.censored;
      if (st == Status::Collision) ++s.collisions;
    }
  }
  s.reached = static_cast<int>(times.size());
  if (times.empty()) {
    s.mean = s.median = kNaN;
    return s;
  }
  double sum = 0.0;
  for (double t : times) sum += t;
  s.mean = sum / times.size();
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  s.median = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
  return s;
}

}  // namespace

CompareResult compare(const ScenarioSpec& spec, const CompareOptions& options) {
  if (options.seeds < 0) throw std::invalid_argument("seed count must be nonnegative");
  if (options.bins < 1) throw std::invalid_argument("need at least one bin");
  const World world = spec.world();
  const RobotState start = spec.robot_state();
  std::vector<BatchJob> jobs;
  for (int s = 0; s < options.seeds; ++s) {
    for (Controller c : {Controller::Pcl, Controller::Vom})
      jobs.push_back({world, start, make_config(spec, options.flags, static_cast<std::uint64_t>(s), c)});
  }
  const std::vector<Trace> traces = run_batch(jobs, options.threads);

  CompareResult res;
  std::vector<std::pair<Status, double>> pcl, vom;
  for (int s = 0; s < options.seeds; ++s) {
    const Trace& a = traces[2 * s];
    const Trace& b = traces[2 * s + 1];
    res.rows.push_back({static_cast<std::uint64_t>(s), a.status, a.end_time, b.status, b.end_time});
    pcl.emplace_back(a.status, a.end_time);
    vom.emplace_back(b.status, b.end_time);
  }
  res.pcl = stats_of(pcl);
  res.vom = stats_of(vom);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : res.rows) {
    if (r.pcl_status == Status::Reached) lo = std::min(lo, r.pcl_time), hi = std::max(hi, r.pcl_time);
    if (r.vom_status == Status::Reached) lo = std::min(lo, r.vom_time), hi = std::max(hi, r.vom_time);
  }
  if (lo > hi) return res;
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const int bins = options.bins;
  for (int k = 0; k <= bins; ++k) res.edges.push_back(lo + (hi - lo) * k / bins);
  res.pcl_hist.assign(bins, 0);
  res.vom_hist.assign(bins, 0);
  auto bin_of = [&](double t) {
    return std::clamp(static_cast<int>((t - lo) / (hi - lo) * bins), 0, bins - 1);
  };
  for (const auto& r : res.rows) {
    if (r.pcl_status == Status::Reached) ++res.pcl_hist[bin_of(r.pcl_time)];
    if (r.vom_status == Status::Reached) ++res.vom_hist[bin_of(r.vom_time)];
  }
  return res;
}

void write_compare_runs(std::ostream& os, const CompareResult& result) {
  os << "seed,pcl_status,pcl_time,vom_status,vom_time\n";
  for (const auto& r : result.rows)
    os << r.seed << "," << status_name(r.pcl_status) << "," << num(r.pcl_time, 3) << ","
       << status_name(r.vom_status) << "," << num(r.vom_time, 3) << "\n";
}

void write_compare_histogram(std::ostream& os, const CompareResult& result) {
  os << "bin_lo,bin_hi,pcl,vom\n";
  for (std::size_t k = 0; k + 1 < result.edges.size(); ++k)
    os << num(result.edges[k], 3) << "," << num(result.edges[k + 1], 3) << ","
       << result.pcl_hist[k] << "," << result.vom_hist[k] << "\n";
  os << "censored,," << result.pcl.censored << "," << result.vom.censored << "\n";
}

void write_compare_summary(std::ostream& os, const CompareResult& result) {
  auto line = [&](const char* name, const ControllerStats& s) {
    os << name << " reached=" << s.reached << " censored=" << s.censored
       << " collisions=" << s.collisions << " mean=" << (std::isnan(s.mean) ? "nan" : num(s.mean, 3))
       << " median=" << (std::isnan(s.median) ? "nan" : num(s.median, 3)) << "\n";
  };
  line("pcl", result.pcl);
  line("vom", result.vom);
}

int cmd_compare(const std::string& scenario, const std::string& out, const CompareOptions& options,
                std::ostream& log) {
  ScenarioSpec spec;
  CompareResult res;
  try {
    spec = load_scenario(scenario);
    res = compare(spec, options);
  } catch (const ScenarioParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitParseError;
  }
  if (!out.empty()) {
    auto runs = open_out(out + ".runs.csv");
    write_compare_runs(runs, res);
    auto hist = open_out(out + ".hist.csv");
    write_compare_histogram(hist, res);
  }
  write_compare_summary(log, res);
  return kExitOk;
}

}  // namespace rnav::cli
