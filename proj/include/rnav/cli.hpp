#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rnav/scenarios.hpp"
#include "rnav/sim.hpp"

namespace rnav::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParseError = 2,
  kExitIllPosed = 3,
  kExitCollision = 4,
  kExitTimeout = 5,
};

int exit_code_for(Status s);

/// Flags shared by run and compare that override the scenario's own settings.
struct SimFlags {
  std::optional<double> dt;
  std::optional<int> rays;
  std::optional<double> edge_threshold;
  std::optional<double> goal_distance;
  std::optional<double> d_star;
  std::optional<double> noise;
};
SimConfig make_config(const ScenarioSpec& spec, const SimFlags& flags, std::uint64_t seed,
                      Controller controller);

struct RunOptions {
  std::string scenario;
  std::string out;  // prefix of the .trace.csv, .svg and .summary files
  std::uint64_t seed = 0;
  Controller controller = Controller::Pcl;
  SimFlags flags;
  std::vector<double> snapshot_times;
  std::optional<double> hat_delta;
};
/// Simulates one scenario and writes its artifacts; messages go to `log`.
int cmd_run(const RunOptions& options, std::ostream& log);

enum class Verdict { Pass, Fail, Skip };
const char* verdict_name(Verdict v);

struct CheckItem {
  std::string name;
  Verdict verdict = Verdict::Pass;
  /// Signed slack of the condition, positive when it holds; NaN when not numeric.
  double margin = 0.0;
  std::string detail;
};

struct CheckReport {
  std::string scenario;
  std::vector<CheckItem> items;
  bool pass() const;
  const CheckItem* find(const std::string& name) const;
};

struct CheckOptions {
  /// Analysis window and step; default to the scenario's horizon and dt.
  std::optional<double> horizon;
  std::optional<double> time_step;
};
CheckReport check_scenario(const ScenarioSpec& spec, const CheckOptions& options = {});
void write_check_text(std::ostream& os, const CheckReport& report);
void write_check_csv(std::ostream& os, const CheckReport& report);
/// Prints the text report to `log` and the CSV to `<out>.check.csv`, or to
/// `log` when out is empty. Returns 0 when every condition holds.
int cmd_check(const std::string& scenario, const std::string& out, const CheckOptions& options,
              std::ostream& log);

/// 0, 1/8, 1/7, 1/6, 1/4, 1/3, 1/2, 1/sqrt(2).
std::vector<double> reference_xi_grid();
/// Columns xi, omega, upsilon, gamma, xi_fn, grid_threshold; the criterion
/// functions in percent of the obstacle size, the grid threshold as the
/// percent excess of 2 sin(delta) + sec(delta) over 1 at delta = arcsin(xi).
void write_tables(std::ostream& os, const std::vector<double>& xi);
int cmd_tables(const std::vector<double>& xi, const std::string& out, std::ostream& log);

struct CompareRow {
  std::uint64_t seed = 0;
  Status pcl_status = Status::Timeout;
  double pcl_time = 0.0;
  Status vom_status = Status::Timeout;
  double vom_time = 0.0;
};

struct ControllerStats {
  int reached = 0;
  int censored = 0;  // timeout, collision or abort
  int collisions = 0;
  double mean = 0.0;    // over reached runs, NaN when none
  double median = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  ControllerStats pcl;
  ControllerStats vom;
  /// Bin edges shared by both histograms and the counts per bin.
  std::vector<double> edges;
  std::vector<int> pcl_hist;
  std::vector<int> vom_hist;
};

struct CompareOptions {
  int seeds = 100;
  SimFlags flags;
  int bins = 20;
  unsigned threads = 0;
};
/// Runs both controllers on seeds 0..n-1; a seed drives the same noise stream
/// for either controller.
CompareResult compare(const ScenarioSpec& spec, const CompareOptions& options);
void write_compare_runs(std::ostream& os, const CompareResult& result);
void write_compare_histogram(std::ostream& os, const CompareResult& result);
void write_compare_summary(std::ostream& os, const CompareResult& result);
/// Writes `<out>.runs.csv` and `<out>.hist.csv` and prints the summary.
int cmd_compare(const std::string& scenario, const std::string& out, const CompareOptions& options,
                std::ostream& log);

}  // namespace rnav::cli
