#include "metro/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>

#include "delimited.hpp"
#include "metro/error.hpp"

namespace metro {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw MetroError(ErrorKind::InvalidConfig, "bad value '" + std::string(value) + "' for key " + std::string(key));
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  if (!detail::parse_double(value, out) || !std::isfinite(out)) bad_value(key, value);
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) bad_value(key, value);
  return out;
}

std::string from_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return std::filesystem::absolute(p).lexically_normal();
}

struct KeySpec {
  std::string name;
  std::function<void(RunConfig&, std::string_view, const std::filesystem::path&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
KeySpec number_key(std::string name, T RunConfig::*member) {
  KeySpec spec;
  spec.name = name;
  spec.set = [member, name](RunConfig& c, std::string_view v, const std::filesystem::path&) {
    if constexpr (std::is_floating_point_v<T>) {
      c.*member = to_double(name, v);
    } else {
      const std::uint64_t raw = to_u64(name, v);
      if (raw > std::numeric_limits<T>::max()) bad_value(name, v);
      c.*member = static_cast<T>(raw);
    }
  };
  spec.get = [member](const RunConfig& c) {
    if constexpr (std::is_floating_point_v<T>) {
      return from_double(c.*member);
    } else {
      return std::to_string(c.*member);
    }
  };
  return spec;
}

template <class T>
KeySpec stage_key(std::string name, StageGaSettings RunConfig::*stage, T StageGaSettings::*member) {
  KeySpec spec;
  spec.name = name;
  spec.set = [stage, member, name](RunConfig& c, std::string_view v, const std::filesystem::path&) {
    if constexpr (std::is_floating_point_v<T>) {
      (c.*stage).*member = to_double(name, v);
    } else {
      (c.*stage).*member = static_cast<T>(to_u64(name, v));
    }
  };
  spec.get = [stage, member](const RunConfig& c) {
    if constexpr (std::is_floating_point_v<T>) {
      return from_double((c.*stage).*member);
    } else {
      return std::to_string((c.*stage).*member);
    }
  };
  return spec;
}

KeySpec path_key(std::string name, std::filesystem::path RunConfig::*member) {
  KeySpec spec;
  spec.name = std::move(name);
  spec.set = [member](RunConfig& c, std::string_view v, const std::filesystem::path& base) {
    c.*member = resolve(base, v);
  };
  spec.get = [member](const RunConfig& c) { return (c.*member).string(); };
  return spec;
}

std::vector<KeySpec> make_specs() {
  std::vector<KeySpec> specs;
  specs.push_back(path_key("boundaries", &RunConfig::boundaries));
  specs.push_back(path_key("densities", &RunConfig::densities));
  specs.push_back(path_key("generators", &RunConfig::generators));
  specs.push_back(path_key("out", &RunConfig::out_dir));
  specs.push_back(number_key("cell_size_m", &RunConfig::cell_size_m));
  specs.push_back(number_key("sigma_m", &RunConfig::sigma_m));
  specs.push_back(number_key("station_count", &RunConfig::station_count));
  specs.push_back(number_key("line_count", &RunConfig::line_count));
  specs.push_back(number_key("mutation_sigma_m", &RunConfig::mutation_sigma_m));

  KeySpec mode;
  mode.name = "coverage_mode";
  mode.set = [](RunConfig& c, std::string_view v, const std::filesystem::path&) {
    if (v == "sum") {
      c.coverage_mode = CoverageMode::Sum;
    } else if (v == "nearest") {
      c.coverage_mode = CoverageMode::Nearest;
    } else {
      bad_value("coverage_mode", v);
    }
  };
  mode.get = [](const RunConfig& c) { return std::string(c.coverage_mode == CoverageMode::Sum ? "sum" : "nearest"); };
  specs.push_back(std::move(mode));

  specs.push_back(number_key("transfer_penalty_m", &RunConfig::transfer_penalty_m));
  specs.push_back(number_key("seed", &RunConfig::seed));
  specs.push_back(number_key("threads", &RunConfig::threads));

  for (auto [prefix, stage] : {std::pair{"stage1_", &RunConfig::stage1}, std::pair{"stage2_", &RunConfig::stage2}}) {
    const std::string p = prefix;
    specs.push_back(stage_key(p + "population_size", stage, &StageGaSettings::population_size));
    specs.push_back(stage_key(p + "generations", stage, &StageGaSettings::generations));
    specs.push_back(stage_key(p + "crossover_rate", stage, &StageGaSettings::crossover_rate));
    specs.push_back(stage_key(p + "mutation_rate", stage, &StageGaSettings::mutation_rate));
    specs.push_back(stage_key(p + "elite_count", stage, &StageGaSettings::elite_count));
  }
  return specs;
}

const std::vector<KeySpec>& specs() {
  static const std::vector<KeySpec> table = make_specs();
  return table;
}

const KeySpec& find_spec(std::string_view key) {
  for (const KeySpec& s : specs()) {
    if (s.name == key) return s;
  }
  throw MetroError(ErrorKind::InvalidConfig, "unknown configuration key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const KeySpec& s : specs()) out.push_back(s.name);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir) {
  find_spec(key).set(config, trim(value), base_dir);
}

std::string get_config_value(const RunConfig& config, std::string_view key) { return find_spec(key).get(config); }

void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir,
                       std::string_view source_name) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw MetroError(ErrorKind::InvalidConfig,
                       std::string(source_name) + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1), base_dir);
    } catch (const MetroError& e) {
      throw MetroError(ErrorKind::InvalidConfig,
                       std::string(source_name) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MetroError(ErrorKind::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig config;
  apply_config_text(config, buf.str(), path.parent_path(), path.string());
  return config;
}

std::string format_config(const RunConfig& config) {
  std::ostringstream out;
  for (const KeySpec& s : specs()) out << s.name << " = " << s.get(config) << '\n';
  return out.str();
}

void check_config(const RunConfig& config) {
  auto fail = [](const std::string& msg) { throw MetroError(ErrorKind::InvalidConfig, msg); };
  if (!(config.cell_size_m > 0.0)) fail("cell_size_m must be positive");
  CoverageParams{config.sigma_m, config.coverage_mode}.validate();
  if (config.line_count < 1) fail("line_count must be >= 1");
  if (!(config.mutation_sigma_m > 0.0)) fail("mutation_sigma_m must be positive");
  if (!(config.transfer_penalty_m >= 0.0)) fail("transfer_penalty_m must be >= 0");
  stage_ga_config(config, 1).validate();
  stage_ga_config(config, 2).validate();
  for (const auto& [key, path] : {std::pair{"boundaries", &config.boundaries}, std::pair{"densities", &config.densities},
                                  std::pair{"generators", &config.generators}}) {
    if (path->empty()) throw MetroError(ErrorKind::Io, std::string("no ") + key + " file configured");
    if (!std::filesystem::is_regular_file(*path)) {
      throw MetroError(ErrorKind::Io, std::string(key) + " file not found: " + path->string());
    }
  }
}

GaConfig stage_ga_config(const RunConfig& config, int stage) {
  const StageGaSettings& s = stage == 1 ? config.stage1 : config.stage2;
  GaConfig ga;
  ga.population_size = s.population_size;
  ga.generations = s.generations;
  ga.crossover_rate = s.crossover_rate;
  ga.mutation_rate = s.mutation_rate;
  ga.elite_count = s.elite_count;
  ga.rng_seed = stage == 1 ? config.seed : mix64(config.seed ^ 0x5354414745320000ULL);
  ga.sense = stage == 1 ? Sense::Maximize : Sense::Minimize;
  ga.threads = config.threads;
  return ga;
}

}  // namespace metro
