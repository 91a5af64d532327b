#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rnav/cli.hpp"

namespace {

std::vector<double> parse_xi(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto slash = item.find('/');
    if (slash == std::string::npos) {
      out.push_back(std::stod(item));
      continue;
    }
    const std::string den = item.substr(slash + 1);
    double d = den.rfind("sqrt", 0) == 0 ? std::sqrt(std::stod(den.substr(4))) : std::stod(den);
    out.push_back(std::stod(item.substr(0, slash)) / d);
  }
  return out;
}

void add_sim_flags(CLI::App* app, rnav::cli::SimFlags& f) {
  app->add_option("--dt", f.dt, "control period in seconds")->check(CLI::PositiveNumber);
  app->add_option("--rays", f.rays, "rays per scan")->check(CLI::PositiveNumber);
  app->add_option("--edge-threshold", f.edge_threshold, "jump in range that splits facets");
  app->add_option("--goal-distance", f.goal_distance, "progress along f that ends the run");
  app->add_option("--dstar", f.d_star, "hold the azimuth while every facet is beyond this range");
  app->add_option("--noise", f.noise, "heading disturbance std dev, rad/s");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reactive navigation among moving obstacles"};
  app.require_subcommand(1);

  rnav::cli::RunOptions run;
  std::string controller = "pcl";
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario");
  run_cmd->add_option("--scenario", run.scenario, "scenario YAML")->required();
  run_cmd->add_option("--out", run.out, "output prefix");
  run_cmd->add_option("--seed", run.seed, "noise seed");
  run_cmd->add_option("--controller", controller, "pcl or vom")
      ->check(CLI::IsMember({"pcl", "vom"}));
  run_cmd->add_option("--snapshot-times", run.snapshot_times, "obstacle snapshots in the SVG")
      ->delimiter(',');
  run_cmd->add_option("--hat-delta", run.hat_delta, "draw hats of this angle at the snapshots");
  add_sim_flags(run_cmd, run.flags);

  std::string check_scenario, check_out;
  rnav::cli::CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "evaluate the conditions of the guarantees");
  check_cmd->add_option("--scenario", check_scenario, "scenario YAML")->required();
  check_cmd->add_option("--out", check_out, "prefix of the CSV report");
  check_cmd->add_option("--horizon", check.horizon, "analysis window in seconds");
  check_cmd->add_option("--dt", check.time_step, "analysis step in seconds")
      ->check(CLI::PositiveNumber);

  std::string xi_text, tables_out;
  auto* tables_cmd = app.add_subcommand("tables", "spacing criteria over a speed-ratio grid");
  tables_cmd->add_option("--xi", xi_text, "comma list, fractions like 1/8 or 1/sqrt2 allowed");
  tables_cmd->add_option("--out", tables_out, "CSV file");

  std::string cmp_scenario, cmp_out;
  rnav::cli::CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "time to goal of PCL and VOM over noise seeds");
  cmp_cmd->add_option("--scenario", cmp_scenario, "scenario YAML")->required();
  cmp_cmd->add_option("--out", cmp_out, "output prefix");
  cmp_cmd->add_option("--seeds", cmp.seeds, "number of seeds")->check(CLI::NonNegativeNumber);
  cmp_cmd->add_option("--bins", cmp.bins, "histogram bins")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--threads", cmp.threads, "worker threads, 0 for all cores");
  add_sim_flags(cmp_cmd, cmp.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rnav::cli::kExitParseError;
  }

  try {
    if (*run_cmd) {
      run.controller = controller == "vom" ? rnav::Controller::Vom : rnav::Controller::Pcl;
      return rnav::cli::cmd_run(run, std::cout);
    }
    if (*check_cmd) return rnav::cli::cmd_check(check_scenario, check_out, check, std::cout);
    if (*tables_cmd) {
      std::vector<double> xi = rnav::cli::reference_xi_grid();
      if (tables_cmd->count("--xi")) xi = parse_xi(xi_text);
      return rnav::cli::cmd_tables(xi, tables_out, std::cout);
    }
    if (*cmp_cmd) return rnav::cli::cmd_compare(cmp_scenario, cmp_out, cmp, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rnav::cli::kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
