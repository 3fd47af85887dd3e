// metro-design: command-line front end for the two-stage network designer.

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "metro/config.hpp"
#include "metro/error.hpp"
#include "metro/pipeline.hpp"

namespace {

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design a metro network: place stations by demand coverage, then lay out lines."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  std::map<std::string, std::string> overrides;
  for (const std::string& key : metro::config_keys()) {
    app.add_option_function<std::string>(
        flag_name(key), [&overrides, key](const std::string& v) { overrides[key] = v; },
        "override config key " + key);
  }

  auto* grid = app.add_subcommand("grid", "rasterize the demand inputs and write grid.csv");
  auto* stations_cmd = app.add_subcommand("optimize-stations", "stage 1 only: place stations");
  auto* lines_cmd = app.add_subcommand("optimize-lines", "stage 2 only: lay out lines over --stations");
  auto* run = app.add_subcommand("run", "both stages plus manifest");
  auto* validate = app.add_subcommand("validate", "check stations/lines artifacts");

  std::string stations_file;
  lines_cmd->add_option("--stations", stations_file, "stations.geojson from an earlier run")
      ->required();
  run->add_option("--stations", stations_file, "skip stage 1 and use these stations");

  std::string validate_stations;
  std::string validate_lines;
  validate->add_option("stations", validate_stations, "stations.geojson")->required();
  validate->add_option("lines", validate_lines, "lines.geojson")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? metro::kExitOk : metro::kExitUsage;
  }

  metro::RunConfig config;
  try {
    if (!config_path.empty()) config = metro::load_config(config_path);
    for (const auto& [key, value] : overrides) metro::set_config_value(config, key, value);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return metro::kExitInputError;
  }

  if (grid->parsed()) return metro::cmd_grid(config, std::cout, std::cerr);
  if (stations_cmd->parsed()) return metro::cmd_optimize_stations(config, std::cout, std::cerr);
  if (lines_cmd->parsed()) return metro::cmd_optimize_lines(config, stations_file, std::cout, std::cerr);
  if (run->parsed()) {
    std::optional<std::filesystem::path> preset;
    if (!stations_file.empty()) preset = stations_file;
    return metro::cmd_run(config, preset, std::cout, std::cerr);
  }
  if (validate->parsed()) {
    const bool with_region = !config.boundaries.empty() && !config.densities.empty();
    return metro::cmd_validate(validate_stations, validate_lines, with_region ? &config : nullptr, std::cout,
                               std::cerr);
  }
  return metro::kExitUsage;
}
