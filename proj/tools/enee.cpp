// Command-line driver: run simulation scenarios, summarize bias/sd, and
// emit plot data for estimates of externally borrowed events.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "enee/enee.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitFit = 4;

struct RunOptions {
  std::string scenario = "exponential";
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed = -1;
  int jobs = 0;
  double fail_tolerance = 0.0;
};

int run_command(const RunOptions& opt) {
  const enee::Scenario scenario = enee::scenario_from_string(opt.scenario);
  enee::ScenarioConfig config = enee::default_config(scenario);
  enee::SolverConfig solver;
  if (!opt.config_path.empty())
    enee::apply_config_file(opt.config_path, config, solver);
  if (opt.seed >= 0) config.base_seed = static_cast<std::uint64_t>(opt.seed);
  const int jobs = opt.jobs > 0
                       ? opt.jobs
                       : std::max(1u, std::thread::hardware_concurrency());

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) throw enee::IoError("cannot create out dir: " + opt.out_dir);

  std::cerr << "run: scenario=" << opt.scenario
            << " hrs=" << config.hazard_ratios.size()
            << " sims_per_hr=" << config.sims_per_hr
            << " seed=" << config.base_seed << " jobs=" << jobs << '\n';

  enee::RunStats stats;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<enee::SimulationRecord> records =
      enee::run_scenario(config, scenario, solver, jobs, &stats, &std::cerr);
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  const std::string records_path =
      opt.out_dir + "/records_" + opt.scenario + ".csv";
  enee::emit_records_file(records, records_path);

  const int expected =
      static_cast<int>(config.hazard_ratios.size()) * config.sims_per_hr;
  std::cerr << "run: wrote " << records.size() << "/" << expected
            << " records to " << records_path << " ("
            << stats.regenerations << " regenerations, "
            << stats.failed_records << " aborted) in " << elapsed << "s\n";

  if (expected > 0 &&
      static_cast<double>(stats.failed_records) / expected > opt.fail_tolerance) {
    std::cerr << "run: fit failure fraction exceeds tolerance "
              << opt.fail_tolerance << '\n';
    return kExitFit;
  }
  return kExitOk;
}

int summarize_command(const std::string& records_path, const std::string& out_path) {
  const std::vector<enee::SimulationRecord> records =
      enee::parse_records_file(records_path);
  const std::vector<enee::SummaryRow> rows = enee::summarize(records);
  enee::emit_summary_file(rows, out_path);
  std::cerr << "summarize: " << records.size() << " records -> " << rows.size()
            << " rows in " << out_path << '\n';
  return kExitOk;
}

int plot_command(const std::string& records_path, const std::string& out_dir,
                 bool unfiltered, bool no_svg) {
  const std::vector<enee::SimulationRecord> records =
      enee::parse_records_file(records_path);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw enee::IoError("cannot create out dir: " + out_dir);
  const std::vector<std::string> paths =
      enee::emit_plot_data(records, out_dir, unfiltered, !no_svg);
  std::cerr << "plot: wrote " << paths.size() << " panels to " << out_dir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective number of external events borrowed in hybrid "
               "controlled trials: simulation engine and estimators"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run a simulation scenario");
  run->add_option("--scenario", run_opt.scenario, "exponential|weibull")
      ->check(CLI::IsMember({"exponential", "weibull"}))
      ->required();
  run->add_option("--config", run_opt.config_path, "TOML config file");
  run->add_option("--out-dir", run_opt.out_dir, "output directory");
  run->add_option("--seed", run_opt.seed, "override base seed");
  run->add_option("--jobs", run_opt.jobs, "worker threads (default: all cores)");
  run->add_option("--fail-tolerance", run_opt.fail_tolerance,
                  "max tolerated fraction of aborted records");

  std::string records_path, out_path = "summary.csv", plot_dir = "plots";
  bool unfiltered = false, no_svg = false;
  CLI::App* summarize =
      app.add_subcommand("summarize", "Bias/sd summary from a records CSV");
  summarize->add_option("--records", records_path, "records CSV")->required();
  summarize->add_option("--out", out_path, "summary CSV path");

  CLI::App* plot = app.add_subcommand("plot", "Scatter panels from a records CSV");
  plot->add_option("--records", records_path, "records CSV")->required();
  plot->add_option("--out-dir", plot_dir, "panel output directory");
  plot->add_flag("--unfiltered", unfiltered,
                 "emit every estimate without stability filtering");
  plot->add_flag("--no-svg", no_svg, "emit CSV panel data only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(run_opt);
    if (summarize->parsed()) return summarize_command(records_path, out_path);
    if (plot->parsed()) return plot_command(records_path, plot_dir, unfiltered, no_svg);
  } catch (const enee::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const enee::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const enee::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFit;
  }
  return kExitOk;
}
