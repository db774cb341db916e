#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace conewolff::cli {

// One asserted comparison; an experiment with no checks is report-only.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "==", "in"
  double bound = 0.0;
  double upper = 0.0;  // for "in": value in [bound, upper]
  bool pass = false;
  nlohmann::json to_json() const;
};

Check check_le(std::string name, double value, double bound);
Check check_ge(std::string name, double value, double bound);
Check check_true(std::string name, bool ok);
Check check_in(std::string name, double value, double lo, double hi);
std::string describe(const Check& c);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string name;  // file stem under plots/
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<Series> series;
};

// A self-contained SVG line plot; log axes are base 2. Output depends only on the spec.
std::string render_svg(const PlotSpec& spec);

struct ExperimentOutput {
  nlohmann::json results = nlohmann::json::object();
  std::string csv;
  std::vector<Check> checks;
  std::vector<PlotSpec> plots;
  bool passed() const;
};

// Writes <root>/<experiment>-<stamp>/{report.json, data.csv, plots/*.svg, config.echo, metadata.json}.
// report.json holds nothing time dependent; the stamp and runtime go to metadata.json.
std::filesystem::path write_report(const std::filesystem::path& root, const std::string& experiment,
                                   const nlohmann::json& report, const ExperimentOutput& out,
                                   const std::string& config_echo, const nlohmann::json& metadata);

// The deterministic part: {"experiment", "config", "results", "checks", "asserted", "passed"}.
nlohmann::json build_report(const std::string& experiment, const nlohmann::json& config, const ExperimentOutput& out);

}  // namespace conewolff::cli
