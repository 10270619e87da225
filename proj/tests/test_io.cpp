#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "enee/config.hpp"
#include "enee/csv.hpp"
#include "enee/engine.hpp"
#include "enee/plot.hpp"
#include "enee/toml_lite.hpp"

using namespace enee;

namespace {

SimulationRecord sample_record(int sim_index, double hr, int d_ext,
                               double generalized, Stability stability) {
  SimulationRecord r;
  r.scenario = Scenario::weibull;
  r.hr = hr;
  r.sim_index = sim_index;
  r.base_seed = 42;
  r.stream_seed = 123456789;
  r.n_C = 35;
  r.n_E = 34;
  r.d_C = 14;
  r.d_E = 11;
  r.d_ext = d_ext;
  r.kappa = 0.4;
  r.tau2_ref = 6.16;
  r.tau2_hyb = 8.4142135623;
  r.estimate_ehss_events = generalized - 5.0;
  r.estimate_ehss_patients = (generalized - 5.0) * 2.5;
  if (stability != Stability::unstable_no_root) {
    r.estimate_generalized = generalized;
    r.derivative = 0.21;
    r.effective_patients_generalized = generalized / r.kappa;
  }
  r.stability = stability;
  return r;
}

}  // namespace

TEST_CASE("toml: scalars, arrays, sections, comments") {
  const std::string text =
      "# scenario settings\n"
      "sims_per_hr = 250\n"
      "hazard_ratios = [0.4, 0.6, 1.0]\n"
      "trial_size_range = [60, 100]\n"
      "weibull_shape = 1.15  # increasing hazard\n"
      "base_seed = 99\n"
      "\n"
      "[solver]\n"
      "derivative_cutoff = 0.0497870684\n"
      "search_upper = 500.0\n";
  const toml::Table table = toml::parse_string(text);
  CHECK(table.at("sims_per_hr").as_int("sims_per_hr") == 250);
  CHECK(table.at("hazard_ratios").as_double_array("hazard_ratios") ==
        std::vector<double>{0.4, 0.6, 1.0});
  CHECK(table.at("weibull_shape").as_double("weibull_shape") ==
        Catch::Approx(1.15));
  CHECK(table.at("solver.search_upper").as_double("x") == Catch::Approx(500.0));

  ScenarioConfig config;
  SolverConfig solver;
  apply_config(table, config, solver);
  CHECK(config.sims_per_hr == 250);
  CHECK(config.hazard_ratios.size() == 3);
  CHECK(config.base_seed == 99);
  CHECK(solver.search_upper == Catch::Approx(500.0));
  CHECK(solver.derivative_cutoff == Catch::Approx(std::exp(-3.0)).epsilon(1e-6));
}

TEST_CASE("toml: malformed input and unknown keys fail loudly") {
  CHECK_THROWS_AS(toml::parse_string("key 12\n"), InvalidConfig);
  CHECK_THROWS_AS(toml::parse_string("key = [1, 2\n"), InvalidConfig);
  CHECK_THROWS_AS(toml::parse_string("a = 1\na = 2\n"), InvalidConfig);
  CHECK_THROWS_AS(toml::parse_string("a = \"unterminated\n"), InvalidConfig);

  ScenarioConfig config;
  SolverConfig solver;
  CHECK_THROWS_AS(apply_config(toml::parse_string("sims_per_hour = 10\n"),
                               config, solver),
                  InvalidConfig);
  CHECK_THROWS_AS(apply_config(toml::parse_string("sims_per_hr = 0\n"),
                               config, solver),
                  InvalidConfig);
  CHECK_THROWS_AS(apply_config(toml::parse_string("censor_prob_range = [0.1]\n"),
                               config, solver),
                  InvalidConfig);
}

TEST_CASE("csv: ten significant digits, empty absent fields") {
  CHECK(format_double(0.4) == "0.4");
  CHECK(format_double(8.4142135623) == "8.414213562");
  CHECK(format_double(-12.0) == "-12");
  CHECK(format_optional(std::nullopt).empty());

  std::vector<SimulationRecord> records = {
      sample_record(0, 0.4, 12, 11.5, Stability::stable),
      sample_record(1, 0.4, 9, 0.0, Stability::unstable_no_root),
  };
  std::ostringstream oss;
  emit_records(records, oss);
  const std::string text = oss.str();
  CHECK(text.find(kRecordHeader) == 0);
  CHECK(text.find("unstable-no-root") != std::string::npos);
  // Absent generalized estimate serializes as an empty field.
  CHECK(text.find(",,") != std::string::npos);
}

TEST_CASE("csv: emit then parse is the identity on emitted bytes") {
  std::vector<SimulationRecord> records;
  for (int i = 0; i < 25; ++i)
    records.push_back(sample_record(
        i, i % 2 == 0 ? 0.4 : 1.0, 5 + i, 4.321 + 0.1 * i,
        i % 5 == 0 ? Stability::unstable_derivative : Stability::stable));
  records.push_back(sample_record(25, 0.6, 7, 0.0, Stability::unstable_no_root));

  const std::string once = records_to_string(records);
  std::istringstream iss(once);
  const std::vector<SimulationRecord> parsed = parse_records(iss);
  REQUIRE(parsed.size() == records.size());
  CHECK(records_to_string(parsed) == once);
  CHECK(parsed[3].estimate_generalized.has_value());
  CHECK(*parsed[3].estimate_generalized ==
        Catch::Approx(*records[3].estimate_generalized).epsilon(1e-9));
  CHECK_FALSE(parsed.back().estimate_generalized.has_value());
  CHECK(parsed.back().stability == Stability::unstable_no_root);
}

TEST_CASE("csv: header-only file for an empty record list") {
  std::ostringstream oss;
  emit_records({}, oss);
  CHECK(oss.str() == std::string(kRecordHeader) + "\r\n");

  std::ostringstream one;
  emit_records({sample_record(0, 0.8, 3, 1.0, Stability::stable)}, one);
  int lines = 0;
  for (char c : one.str())
    if (c == '\n') ++lines;
  CHECK(lines == 2);
}

TEST_CASE("summarize: constant shift gives bias 2 and sd 0") {
  std::vector<SimulationRecord> records;
  for (int i = 0; i < 10; ++i) {
    SimulationRecord r = sample_record(i, 0.8, 6 + i, 0.0, Stability::stable);
    r.estimate_generalized = r.d_ext + 2.0;
    r.estimate_ehss_events = r.d_ext + 2.0;
    records.push_back(r);
  }
  const std::vector<SummaryRow> rows = summarize(records);
  REQUIRE(rows.size() == 2);  // generalized + ehss-events, stable stratum only
  for (const SummaryRow& row : rows) {
    CHECK(row.stability_stratum == "stable");
    CHECK(row.n_sims == 10);
    CHECK(row.bias == Catch::Approx(2.0));
    CHECK(row.sd == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("summarize: strata partition the records per hazard ratio") {
  std::vector<SimulationRecord> records;
  for (int i = 0; i < 30; ++i) {
    const Stability st = i % 3 == 0   ? Stability::unstable_derivative
                         : i % 3 == 1 ? Stability::unstable_no_root
                                      : Stability::stable;
    records.push_back(sample_record(i, i % 2 == 0 ? 0.4 : 1.0, 5, 1.5, st));
  }
  const std::vector<SummaryRow> rows = summarize(records);
  for (double hr : {0.4, 1.0}) {
    int stable_n = 0, unstable_n = 0;
    for (const SummaryRow& row : rows) {
      if (row.hr != hr || row.method != "ehss-events") continue;
      (row.stability_stratum == "stable" ? stable_n : unstable_n) = row.n_sims;
    }
    CHECK(stable_n + unstable_n == 15);
  }
  // Generalized rows exist only in the stable stratum.
  for (const SummaryRow& row : rows)
    if (row.method == "generalized") CHECK(row.stability_stratum == "stable");
}

TEST_CASE("plot: panels split by stability, empty panels omitted") {
  std::vector<SimulationRecord> records;
  for (int i = 0; i < 8; ++i)
    records.push_back(sample_record(i, 0.4, 5 + i, 4.0 + i, Stability::stable));
  for (int i = 8; i < 12; ++i)
    records.push_back(
        sample_record(i, 0.4, 5 + i, 4.0 + i, Stability::unstable_derivative));

  const std::vector<PlotPanel> panels = make_plot_panels(records);
  REQUIRE(panels.size() == 3);  // generalized/stable, ehss stable + unstable
  for (const PlotPanel& p : panels) {
    if (p.method == "generalized") {
      CHECK(p.stratum == "stable");
      CHECK(p.truth.size() == 8);
    }
  }

  const std::vector<PlotPanel> unfiltered = make_plot_panels(records, true);
  for (const PlotPanel& p : unfiltered) {
    CHECK(p.stratum == "all");
    if (p.method == "generalized") CHECK(p.truth.size() == 12);
  }
}

TEST_CASE("plot: exponential exact estimates sit on the identity line") {
  std::vector<SimulationRecord> records;
  for (int i = 0; i < 6; ++i) {
    SimulationRecord r = sample_record(i, 0.6, 4 + i, 2.0, Stability::stable);
    r.scenario = Scenario::exponential;
    r.estimate_exact = static_cast<double>(r.d_ext);
    records.push_back(r);
  }
  const std::vector<PlotPanel> panels = make_plot_panels(records);
  bool found = false;
  for (const PlotPanel& p : panels) {
    if (p.method != "exact-exponential") continue;
    found = true;
    for (std::size_t i = 0; i < p.truth.size(); ++i)
      CHECK(p.estimate[i] == Catch::Approx(p.truth[i]).margin(1e-9));
  }
  CHECK(found);
}

TEST_CASE("plot: panel files are written") {
  const std::string dir = std::filesystem::temp_directory_path() /
                          "enee_plot_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::vector<SimulationRecord> records = {
      sample_record(0, 0.4, 5, 4.0, Stability::stable),
      sample_record(1, 0.4, 6, 5.0, Stability::stable),
  };
  const std::vector<std::string> paths = emit_plot_data(records, dir);
  REQUIRE_FALSE(paths.empty());
  for (const std::string& p : paths) {
    CHECK(std::filesystem::exists(p));
    const std::string svg = p.substr(0, p.size() - 4) + ".svg";
    CHECK(std::filesystem::exists(svg));
  }
  std::ifstream in(paths.front());
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  CHECK(header == "d_ext,estimate");
  std::filesystem::remove_all(dir);
}
