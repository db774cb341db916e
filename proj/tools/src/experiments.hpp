#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace conewolff::cli {

using Job = std::function<ExperimentOutput()>;

struct ExperimentInfo {
  std::string name;
  std::string keys;   // config keys the experiment reads
  std::string topic;  // what it exercises
  bool asserted = false;
  // Reads and validates every key, then returns the work to do.
  std::function<Job(Config&)> prepare;
};

// Fixed order; `list` prints it as is.
const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo& find_experiment(const std::string& name);
std::string list_experiments();

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 an asserted check failed
  std::filesystem::path dir;
  nlohmann::json report;
};

// Validates, runs and writes the report. The output root is OUTPUT_DIR when set,
// else output.dir, else "out". Throws conewolff::Error on bad configs and failures.
RunResult run_config(Config& cfg, std::ostream& log);

// run_config with error handling: returns 0, 1 (error, diagnostic on err) or 2.
int run(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace conewolff::cli
