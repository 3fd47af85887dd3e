#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "metro/coverage.hpp"
#include "metro/evolve.hpp"

namespace metro {

struct StageGaSettings {
  std::size_t population_size = 50;
  std::size_t generations = 10;
  double crossover_rate = 0.9;
  double mutation_rate = 0.3;
  std::size_t elite_count = 2;
};

/// Everything a pipeline run depends on. Stored on disk as flat
/// `key = value` lines; `#` starts a comment.
struct RunConfig {
  std::filesystem::path boundaries;
  std::filesystem::path densities;
  std::filesystem::path generators;
  std::filesystem::path out_dir = "out";
  double cell_size_m = 500.0;
  double sigma_m = 800.0;
  /// 0 selects suggest_station_count() from the grid population.
  std::size_t station_count = 0;
  std::size_t line_count = 5;
  double mutation_sigma_m = 1000.0;
  CoverageMode coverage_mode = CoverageMode::Sum;
  double transfer_penalty_m = 0.0;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  StageGaSettings stage1;
  StageGaSettings stage2;
};

/// Recognised keys, in the order format_config() writes them.
const std::vector<std::string>& config_keys();

/// Relative paths are resolved against `base_dir`. Throws InvalidConfig for
/// unknown keys or malformed values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir = {});

std::string get_config_value(const RunConfig& config, std::string_view key);

RunConfig load_config(const std::filesystem::path& path);

/// Parses `key = value` text; used by load_config().
void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir,
                       std::string_view source_name);

std::string format_config(const RunConfig& config);

/// Throws InvalidConfig for out-of-range numbers; Io naming the path for a
/// missing input file.
void check_config(const RunConfig& config);

/// Per-stage GA settings; stage 2 draws from its own seed derived from `seed`.
GaConfig stage_ga_config(const RunConfig& config, int stage);

}  // namespace metro
