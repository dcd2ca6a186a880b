#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mablab/distributions.hpp"
#include "mablab/engine.hpp"

namespace mablab {

inline constexpr std::size_t kDefaultReps = 10'000;
inline constexpr std::uint64_t kDefaultSeed = 20190601;
inline constexpr std::size_t kDefaultCap = 1'000'000;

/// One simulation study: arms, strategy and Monte Carlo settings.
struct ScenarioConfig {
  std::string name;
  std::vector<ArmSpec> arms;
  StrategySpec strategy;
  std::size_t reps = kDefaultReps;
  std::uint64_t master_seed = kDefaultSeed;
  std::size_t cap = kDefaultCap;
  std::optional<std::filesystem::path> output_dir;
};

/// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

/// Parses the JSON scenario format. Unknown keys are rejected. Arm indices
/// are 1-based in the file and 0-based in the returned config.
ScenarioConfig parse_config(const std::string& text);

/// Throws IoError if the file cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; parse_config(config_to_json(c)) == c.
std::string config_to_json(const ScenarioConfig& config);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace mablab
