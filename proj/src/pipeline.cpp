#include "metro/pipeline.hpp"

#include <charconv>
#include <functional>
#include <system_error>

#include "metro/artifacts.hpp"
#include "metro/error.hpp"

namespace metro {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Files are staged in memory and written together; if any write fails the
/// ones already written are removed.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string contents) { files_.emplace_back(std::move(name), std::move(contents)); }

  void commit() {
    std::vector<std::filesystem::path> written;
    try {
      std::filesystem::create_directories(dir_);
      for (const auto& [name, contents] : files_) {
        const auto path = dir_ / name;
        write_text_file(path, contents);
        written.push_back(path);
      }
    } catch (...) {
      std::error_code ignored;
      for (const auto& p : written) std::filesystem::remove(p, ignored);
      throw;
    }
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void warn_sigma(const RunConfig& config, std::ostream& err) {
  if (!(config.sigma_m > 0.0 && config.sigma_m < 1e5)) return;
  if (const auto w = sigma_warning(config.sigma_m)) err << "warning: " << *w << '\n';
}

// Loading failures map to exit 2, anything later to exit 3.
int guarded(std::ostream& err, const std::function<void()>& load, const std::function<void()>& stages) {
  try {
    load();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  try {
    stages();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitStageFailure;
  }
  return kExitOk;
}

std::vector<double> recompute_serviced(const RunConfig& config, const PipelineInputs& inputs,
                                       std::span<const PlanarPoint> stations) {
  return evaluate_coverage(stations, inputs.grid, inputs.generators, coverage_params(config)).per_station;
}

}  // namespace

PipelineInputs load_inputs(const RunConfig& config) {
  check_config(config);
  PipelineInputs inputs;
  inputs.region = load_region(config.boundaries, config.densities);
  inputs.generators = load_generators(config.generators, inputs.region.origin());
  check_generators_within(inputs.region, inputs.generators);
  inputs.grid = rasterize(inputs.region.districts(), config.cell_size_m);
  return inputs;
}

CoverageParams coverage_params(const RunConfig& config) { return {config.sigma_m, config.coverage_mode}; }

StationStageConfig station_stage_config(const RunConfig& config, const DemandGrid& grid) {
  StationStageConfig s;
  s.station_count = config.station_count > 0 ? config.station_count : suggest_station_count(grid.total_population);
  s.mutation_sigma_m = config.mutation_sigma_m;
  s.ga = stage_ga_config(config, 1);
  s.coverage = coverage_params(config);
  return s;
}

LineStageConfig line_stage_config(const RunConfig& config) {
  LineStageConfig l;
  l.line_count = config.line_count;
  l.transfer_penalty_m = config.transfer_penalty_m;
  l.ga = stage_ga_config(config, 2);
  return l;
}

PipelineResult run_pipeline(const RunConfig& config, const PipelineInputs& inputs,
                            const PipelineObservers& observers) {
  PipelineResult result;
  result.stations = optimize_stations(inputs.region, inputs.grid, inputs.generators,
                                      station_stage_config(config, inputs.grid), observers.stage1);
  result.lines = optimize_lines(result.stations.best.stations, result.stations.report.per_station,
                                line_stage_config(config), observers.stage2);
  return result;
}

int cmd_grid(const RunConfig& config, std::ostream& out, std::ostream& err) {
  PipelineInputs inputs;
  return guarded(
      err,
      [&] {
        warn_sigma(config, err);
        inputs = load_inputs(config);
      },
      [&] {
        std::ostringstream summary;
        summary << "cell_size_m = " << format_double(inputs.grid.cell_size_m) << '\n'
                << "cell_count = " << inputs.grid.cells.size() << '\n'
                << "total_population = " << format_double(inputs.grid.total_population) << '\n'
                << "district_count = " << inputs.region.districts().size() << '\n'
                << "generator_count = " << inputs.generators.size() << '\n';
        ArtifactSet files(config.out_dir);
        files.add("grid.csv", grid_csv(inputs.grid));
        files.add("grid_summary.txt", summary.str());
        files.commit();
        out << summary.str();
      });
}

int cmd_optimize_stations(const RunConfig& config, std::ostream& out, std::ostream& err) {
  PipelineInputs inputs;
  return guarded(
      err,
      [&] {
        warn_sigma(config, err);
        inputs = load_inputs(config);
      },
      [&] {
        const auto stage = optimize_stations(inputs.region, inputs.grid, inputs.generators,
                                             station_stage_config(config, inputs.grid));
        ArtifactSet files(config.out_dir);
        files.add("stations.geojson",
                  stations_geojson(stage.best.stations, stage.report.per_station, inputs.region.origin()));
        files.add("history_stage1.csv", stage.history.to_csv());
        files.commit();
        out << "stations = " << stage.best.stations.size() << '\n'
            << "stage1_best_fitness = " << format_double(stage.report.total) << '\n';
      });
}

int cmd_optimize_lines(const RunConfig& config, const std::filesystem::path& stations_file, std::ostream& out,
                       std::ostream& err) {
  PipelineInputs inputs;
  std::vector<PlanarPoint> stations;
  return guarded(
      err,
      [&] {
        warn_sigma(config, err);
        inputs = load_inputs(config);
        stations = load_stations_geojson(stations_file).positions();
      },
      [&] {
        const std::vector<double> serviced = recompute_serviced(config, inputs, stations);
        const auto stage = optimize_lines(stations, serviced, line_stage_config(config));
        ArtifactSet files(config.out_dir);
        files.add("lines.geojson", lines_geojson(stage.best, stations, inputs.region.origin()));
        files.add("history_stage2.csv", stage.history.to_csv());
        files.commit();
        out << "lines = " << stage.best.lines.size() << '\n'
            << "stage2_best_fitness = " << format_double(stage.fitness.value) << '\n';
      });
}

int cmd_run(const RunConfig& config, const std::optional<std::filesystem::path>& stations_file, std::ostream& out,
            std::ostream& err) {
  PipelineInputs inputs;
  std::vector<PlanarPoint> preset;
  return guarded(
      err,
      [&] {
        warn_sigma(config, err);
        inputs = load_inputs(config);
        if (stations_file) preset = load_stations_geojson(*stations_file).positions();
      },
      [&] {
        std::vector<PlanarPoint> stations;
        std::vector<double> serviced;
        std::optional<StationStageResult> stage1;
        if (stations_file) {
          stations = preset;
          serviced = recompute_serviced(config, inputs, stations);
        } else {
          stage1 = optimize_stations(inputs.region, inputs.grid, inputs.generators,
                                     station_stage_config(config, inputs.grid));
          stations = stage1->best.stations;
          serviced = stage1->report.per_station;
        }
        const auto stage2 = optimize_lines(stations, serviced, line_stage_config(config));

        RunConfig echo = config;
        echo.station_count = stations.size();
        std::ostringstream manifest;
        manifest << "# metro-design run manifest; reload with --config to reproduce\n" << format_config(echo);
        manifest << "# stations_source = " << (stations_file ? stations_file->string() : "stage1") << '\n';
        double stage1_total = 0.0;
        for (double s : serviced) stage1_total += s;
        manifest << "# stage1_best_fitness = " << format_double(stage1_total) << '\n'
                 << "# stage2_best_fitness = " << format_double(stage2.fitness.value) << '\n';

        ArtifactSet files(config.out_dir);
        files.add("stations.geojson", stations_geojson(stations, serviced, inputs.region.origin()));
        files.add("lines.geojson", lines_geojson(stage2.best, stations, inputs.region.origin()));
        if (stage1) files.add("history_stage1.csv", stage1->history.to_csv());
        files.add("history_stage2.csv", stage2.history.to_csv());
        files.add("manifest.txt", manifest.str());
        files.commit();
        out << "stations = " << stations.size() << '\n'
            << "lines = " << stage2.best.lines.size() << '\n'
            << "stage1_best_fitness = " << format_double(stage1_total) << '\n'
            << "stage2_best_fitness = " << format_double(stage2.fitness.value) << '\n'
            << "output = " << config.out_dir.string() << '\n';
      });
}

int cmd_validate(const std::filesystem::path& stations_file, const std::filesystem::path& lines_file,
                 const RunConfig* region_config, std::ostream& out, std::ostream& err) {
  StationsArtifact stations;
  LinesArtifact lines;
  std::optional<Region> region;
  try {
    stations = load_stations_geojson(stations_file);
    lines = load_lines_geojson(lines_file);
    if (region_config) region = load_region(region_config->boundaries, region_config->densities);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  const auto violations = validate_artifacts(stations, lines, region ? &*region : nullptr);
  if (violations.empty()) {
    out << "ok: " << stations.stations.size() << " stations, " << lines.lines.size()
        << " lines, all invariants hold\n";
    return kExitOk;
  }
  out << violations.size() << " violation(s):\n";
  for (const std::string& v : violations) out << "  - " << v << '\n';
  return kExitInvalidArtifacts;
}

}  // namespace metro
