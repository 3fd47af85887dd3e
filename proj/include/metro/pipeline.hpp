#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "metro/config.hpp"
#include "metro/demand.hpp"
#include "metro/lines.hpp"
#include "metro/region.hpp"
#include "metro/stations.hpp"

namespace metro {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitStageFailure = 3;
inline constexpr int kExitInvalidArtifacts = 4;

struct PipelineInputs {
  Region region;
  DemandGrid grid;
  std::vector<GeneratorPoint> generators;
};

/// Loads, projects and rasterizes the configured inputs.
PipelineInputs load_inputs(const RunConfig& config);

CoverageParams coverage_params(const RunConfig& config);

/// Resolves an unset station count from the grid population.
StationStageConfig station_stage_config(const RunConfig& config, const DemandGrid& grid);
LineStageConfig line_stage_config(const RunConfig& config);

struct PipelineObservers {
  StationObserver stage1;
  LineObserver stage2;
};

struct PipelineResult {
  StationStageResult stations;
  LineStageResult lines;
};

/// Stage 1 then stage 2; stage 2 weights pairs by the stage-1 s_i.
PipelineResult run_pipeline(const RunConfig& config, const PipelineInputs& inputs,
                            const PipelineObservers& observers = {});

// Subcommands. Each returns a process exit code and writes its artifacts to
// config.out_dir.

/// grid.csv and grid_summary.txt.
int cmd_grid(const RunConfig& config, std::ostream& out, std::ostream& err);

/// stations.geojson and history_stage1.csv.
int cmd_optimize_stations(const RunConfig& config, std::ostream& out, std::ostream& err);

/// lines.geojson and history_stage2.csv for stations read from disk; s_i is
/// recomputed from the configured demand.
int cmd_optimize_lines(const RunConfig& config, const std::filesystem::path& stations_file, std::ostream& out,
                       std::ostream& err);

/// stations.geojson, lines.geojson, both histories and manifest.txt. With a
/// stations file, stage 1 is skipped and no stage-1 history is written.
int cmd_run(const RunConfig& config, const std::optional<std::filesystem::path>& stations_file, std::ostream& out,
            std::ostream& err);

/// Re-checks artifact invariants; `region_config`, if given, also checks
/// that stations lie inside its districts.
int cmd_validate(const std::filesystem::path& stations_file, const std::filesystem::path& lines_file,
                 const RunConfig* region_config, std::ostream& out, std::ostream& err);

}  // namespace metro
