#ifndef POISTEST_CONFIG_HPP
#define POISTEST_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "poistest/mc.hpp"

namespace poistest {

// One `[scenario]` block from a simulation config file.
struct ScenarioBlock {
  enum class Type { Power, LevelSweep, Contiguous };

  std::string id;
  Type type = Type::Power;
  std::vector<TestMethod> tests;
  std::vector<std::size_t> ns;

  // Power
  std::optional<DistSpec> dist;

  // LevelSweep
  double mu_from = 0.0, mu_to = 0.0, mu_step = 0.0;

  // Contiguous
  double base_mu = 0.0;
  std::optional<DistSpec> contaminant;
  double eps = 0.0;
};

struct SimConfig {
  double alpha = 0.05;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  std::vector<ScenarioBlock> scenarios;
};

// Flat key-value format with repeated [scenario] blocks; '#' comments.
// Throws std::invalid_argument with a line number on malformed input.
SimConfig parse_config(const std::string& text);
SimConfig parse_config_file(const std::string& path);

// Runs every scenario and renders the full CSV (header included).
// Rates use 4 decimal places, other statistics 6 significant digits.
std::string run_config_csv(const SimConfig& cfg, int threads = 0);

}  // namespace poistest

#endif
