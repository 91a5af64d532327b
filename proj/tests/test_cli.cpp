#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rnav/cli.hpp"

using namespace rnav;
using namespace rnav::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = RNAV_SCENARIO_DIR;

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "rnav_cli_tests";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run_scenario(const std::string& file, const std::string& prefix, std::uint64_t seed = 0) {
  RunOptions o;
  o.scenario = (kScenarios / file).string();
  o.out = prefix;
  o.seed = seed;
  std::ostringstream log;
  return cmd_run(o, log);
}

std::vector<fs::path> shipped() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kScenarios))
    if (e.path().extension() == ".yaml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("run exit codes") {
  const std::string dir = scratch().string();
  CHECK(run_scenario("empty.yaml", dir + "/empty") == kExitOk);
  CHECK(run_scenario("collision.yaml", dir + "/collision") == kExitCollision);
  CHECK(run_scenario("counterexample.yaml", dir + "/cx") == kExitTimeout);
  CHECK(run_scenario("missing.yaml", dir + "/missing") == kExitParseError);

  const fs::path bad = scratch() / "bad.yaml";
  std::ofstream(bad) << "name: [unclosed\n";
  RunOptions o;
  o.scenario = bad.string();
  std::ostringstream log;
  CHECK(cmd_run(o, log) == kExitParseError);

  ScenarioSpec clash;
  clash.name = "clash";
  ObstacleClass c;
  c.speed_bound = 1.0;
  clash.classes.push_back(c);
  ObstacleSpec a{"a", 0, ShapeSpec::disk(0.5), MotionProgram::translating({5, 2}, {1, 0})};
  ObstacleSpec b{"b", 0, ShapeSpec::disk(0.5), MotionProgram::fixed({8, 2})};
  clash.obstacles = {a, b};
  clash.robot.position = {0.0, -3.0};
  clash.goal_distance = 50.0;
  const fs::path clash_file = scratch() / "clash.yaml";
  save_scenario(clash, clash_file.string());
  o.scenario = clash_file.string();
  CHECK(cmd_run(o, log) == kExitIllPosed);

  o.scenario = (kScenarios / "empty.yaml").string();
  o.flags.dt = -1.0;
  CHECK(cmd_run(o, log) == kExitParseError);
}

TEST_CASE("run writes trace, picture and summary") {
  const fs::path prefix = scratch() / "artifacts";
  REQUIRE(run_scenario("empty.yaml", prefix.string()) == kExitOk);
  const std::string csv = slurp(prefix.string() + ".trace.csv");
  CHECK(csv.rfind("t,x,y,vx,vy,branch,min_clearance,drift,nearest_id\n", 0) == 0);
  CHECK(slurp(prefix.string() + ".svg").rfind("<svg", 0) == 0);
  const std::string summary = slurp(prefix.string() + ".summary");
  CHECK(summary.find("status=REACHED") != std::string::npos);
  CHECK(summary.find("time_to_goal=") != std::string::npos);
  CHECK(summary.find("min_clearance=") != std::string::npos);
  CHECK(summary.find("drift_infimum=") != std::string::npos);
}

TEST_CASE("complex scene reproduces its golden trace") {
  const fs::path prefix = scratch() / "complex";
  REQUIRE(run_scenario("complex.yaml", prefix.string()) == kExitOk);
  CHECK(slurp(prefix.string() + ".trace.csv") == slurp(kScenarios / "complex.golden.csv"));
  const std::string summary = slurp(prefix.string() + ".summary");
  const auto at = summary.find("min_clearance=");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(summary.substr(at + 14)) > 0.0);
}

TEST_CASE("equal seeds give byte-identical traces") {
  for (const auto& file : shipped()) {
    CAPTURE(file.string());
    const std::string a = (scratch() / "det_a").string(), b = (scratch() / "det_b").string();
    const std::string name = file.filename().string();
    CHECK(run_scenario(name, a, 7) == run_scenario(name, b, 7));
    CHECK(slurp(a + ".trace.csv") == slurp(b + ".trace.csv"));
  }
}

TEST_CASE("check agrees with each shipped scenario's intent") {
  for (const auto& file : shipped()) {
    CAPTURE(file.string());
    const ScenarioSpec spec = load_scenario(file.string());
    const CheckReport rep = check_scenario(spec);
    CHECK(rep.pass() == (spec.meta.intent == "compliant"));
  }
}

TEST_CASE("check reports the failing condition with its margin") {
  const CheckReport col = check_scenario(load_scenario((kScenarios / "collision.yaml").string()));
  const CheckItem* safety = col.find("safety_tuning[0]");
  REQUIRE(safety);
  CHECK(safety->verdict == Verdict::Fail);
  CHECK(safety->margin == doctest::Approx(0.1 - std::asin(0.8)));
  CHECK(col.find("theorem2.a")->verdict == Verdict::Skip);

  const CheckReport cx = check_scenario(load_scenario((kScenarios / "counterexample.yaml").string()));
  CHECK(cx.find("theorem2.a")->verdict == Verdict::Fail);
  CHECK(cx.find("safety_tuning[0]")->verdict == Verdict::Pass);
  CHECK(cx.find("drift_tuning[0]")->verdict == Verdict::Pass);

  const CheckReport df = check_scenario(load_scenario((kScenarios / "disk_field.yaml").string()));
  for (const auto& item : df.items) {
    CAPTURE(item.name);
    CHECK(item.verdict == Verdict::Pass);
    if (!std::isnan(item.margin)) CHECK(item.margin >= 0.0);
  }

  std::ostringstream csv;
  write_check_csv(csv, col);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == col.items.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"condition", "verdict", "margin", "detail"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() >= 3);

  std::ostringstream log;
  CHECK(cmd_check((kScenarios / "collision.yaml").string(), "", {}, log) == kExitCheckFailed);
  CHECK(cmd_check((kScenarios / "empty.yaml").string(), "", {}, log) == kExitOk);
  CHECK(cmd_check("nope.yaml", "", {}, log) == kExitParseError);
}

TEST_CASE("tables") {
  std::ostringstream empty;
  write_tables(empty, {});
  CHECK(empty.str() == "xi,omega_pct,upsilon_pct,gamma_pct,xi_fn_pct,grid_threshold_pct\n");

  std::ostringstream ref;
  write_tables(ref, reference_xi_grid());
  const auto rows = parse_csv(ref.str());
  REQUIRE(rows.size() == 9);
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::stod(rows[1][5]) == 1.0);  // absolute threshold at xi = 0
  // 1/sqrt(1 - 1/4) - 1 and 2 sin + sec - 1 at 30 degrees.
  CHECK(std::stod(rows[7][1]) == doctest::Approx(100.0 * (2.0 / std::sqrt(3.0) - 1.0)).epsilon(1e-6));
  CHECK(std::stod(rows[7][5]) == doctest::Approx(100.0 * (2.0 / std::sqrt(3.0))).epsilon(1e-6));

  std::vector<double> dense;
  for (int i = 1; i < 1000; ++i) dense.push_back(i * 0.0009);
  std::ostringstream d;
  write_tables(d, dense);
  const auto drows = parse_csv(d.str());
  for (std::size_t r = 2; r < drows.size(); ++r)
    for (int c = 1; c <= 5; ++c) CHECK(std::stod(drows[r][c]) >= std::stod(drows[r - 1][c]));

  std::ostringstream log;
  CHECK(cmd_tables({1.5}, "", log) == kExitParseError);
}

TEST_CASE("compare") {
  const ScenarioSpec empty = load_scenario((kScenarios / "empty.yaml").string());
  CompareOptions o;
  o.seeds = 1;
  const CompareResult one = compare(empty, o);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].pcl_status == Status::Reached);
  CHECK(one.rows[0].pcl_time == one.rows[0].vom_time);
  CHECK(one.pcl.censored == 0);

  o.seeds = 3;
  o.flags.noise = 0.1;
  o.threads = 1;
  const CompareResult serial = compare(empty, o);
  o.threads = 3;
  const CompareResult parallel = compare(empty, o);
  std::ostringstream a, b;
  write_compare_runs(a, serial);
  write_compare_runs(b, parallel);
  CHECK(a.str() == b.str());

  const ScenarioSpec col = load_scenario((kScenarios / "collision.yaml").string());
  o.seeds = 2;
  o.flags.noise.reset();
  const CompareResult cens = compare(col, o);
  CHECK(cens.pcl.censored == 2);
  CHECK(cens.pcl.collisions == 2);
  CHECK(cens.pcl.reached == 0);
  CHECK(std::isnan(cens.pcl.mean));

  std::ostringstream hist;
  write_compare_histogram(hist, serial);
  const auto rows = parse_csv(hist.str());
  REQUIRE(rows.size() == 22);
  int pcl = 0, vom = 0;
  for (std::size_t r = 1; r + 1 < rows.size(); ++r) {
    pcl += std::stoi(rows[r][2]);
    vom += std::stoi(rows[r][3]);
  }
  CHECK(pcl == serial.pcl.reached);
  CHECK(vom == serial.vom.reached);
  CHECK(rows.back()[0] == "censored");

  const fs::path prefix = scratch() / "cmp";
  std::ostringstream log;
  CompareOptions o2;
  o2.seeds = 2;
  CHECK(cmd_compare((kScenarios / "empty.yaml").string(), prefix.string(), o2, log) == kExitOk);
  CHECK(fs::exists(prefix.string() + ".runs.csv"));
  CHECK(fs::exists(prefix.string() + ".hist.csv"));
}
