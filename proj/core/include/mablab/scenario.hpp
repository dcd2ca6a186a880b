#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mablab/config.hpp"
#include "mablab/estimators.hpp"

namespace mablab {

/// The built-in studies: fixed-horizon greedy/UCB/Thompson, SLRT under the
/// null and the alternative, lil'UCB and the naive gap procedure for gaps
/// 1, 3, 5, first-success stopping, a walk stopped at a line, and the
/// largest of K draws.
/// Pure; every call returns the same list.
std::vector<ScenarioConfig> builtin_scenarios();

/// Throws ConfigError when no builtin has that name.
ScenarioConfig find_builtin(const std::string& name);

struct ScenarioResult {
  std::vector<RunRecord> records;
  std::vector<double> mus;
  BiasReport report;
  std::string summary;
};

/// Runs every repetition. Output does not depend on `threads`.
ScenarioResult simulate_scenario(const ScenarioConfig& config, unsigned threads = 1);

struct ScenarioFiles {
  std::filesystem::path raw_csv;
  std::filesystem::path summary_json;
};

/// Writes <name>.raw.csv and <name>.summary.json into `out_dir`, creating
/// it if needed. Throws IoError when the directory or files cannot be
/// written.
ScenarioFiles write_scenario(const ScenarioConfig& config, const ScenarioResult& result,
                             const std::filesystem::path& out_dir);

ScenarioFiles run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                           unsigned threads = 1);

/// Raw CSV text of a result, exactly as written by write_scenario.
std::string raw_csv_text(const ScenarioConfig& config, const ScenarioResult& result);

}  // namespace mablab
