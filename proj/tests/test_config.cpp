#include <gtest/gtest.h>

#include "metro/config.hpp"
#include "metro/error.hpp"
#include "oracles.hpp"

namespace metro {
namespace {

using testing::TempDir;

TEST(Config, DefaultsRoundTripThroughText) {
  RunConfig a;
  a.boundaries = "/data/b.geojson";
  a.densities = "/data/d.csv";
  a.generators = "/data/g.csv";
  a.out_dir = "/tmp/out";
  a.sigma_m = 1234.5;
  a.coverage_mode = CoverageMode::Nearest;
  a.stage2.crossover_rate = 0.125;
  a.seed = 18'446'744'073'709'551'615ULL;
  RunConfig b;
  apply_config_text(b, format_config(a), "/", "text");
  EXPECT_EQ(format_config(a), format_config(b));
  EXPECT_EQ(b.seed, a.seed);
  EXPECT_EQ(b.coverage_mode, CoverageMode::Nearest);
}

TEST(Config, CommentsBlankLinesAndWhitespace) {
  RunConfig c;
  apply_config_text(c, "# header\n\n  sigma_m =  950  # trailing\nline_count=3\n", "/base", "t");
  EXPECT_DOUBLE_EQ(c.sigma_m, 950);
  EXPECT_EQ(c.line_count, 3u);
}

TEST(Config, RelativePathsResolveAgainstBase) {
  RunConfig c;
  set_config_value(c, "boundaries", "data/b.geojson", "/srv/project");
  EXPECT_EQ(c.boundaries, std::filesystem::path("/srv/project/data/b.geojson"));
  set_config_value(c, "out", "../out", "/srv/project/conf");
  EXPECT_EQ(c.out_dir, std::filesystem::path("/srv/project/out"));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  for (auto [k, v] : {std::pair{"colour", "red"}, std::pair{"sigma_m", "wide"}, std::pair{"line_count", "-1"},
                      std::pair{"coverage_mode", "max"}, std::pair{"stage1_generations", "2.5"}}) {
    try {
      set_config_value(c, k, v);
      ADD_FAILURE() << k;
    } catch (const MetroError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig) << k;
    }
  }
  try {
    apply_config_text(c, "sigma_m 800\n", "/", "x.conf");
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_NE(std::string(e.what()).find("x.conf:1"), std::string::npos);
  }
}

TEST(Config, KeysAreAllReadable) {
  const RunConfig c;
  for (const std::string& key : config_keys()) EXPECT_NO_THROW(get_config_value(c, key)) << key;
  EXPECT_EQ(get_config_value(c, "sigma_m"), "800");
  EXPECT_EQ(get_config_value(c, "coverage_mode"), "sum");
}

TEST(Config, LoadFromFile) {
  TempDir dir;
  const auto p = dir.write("run.conf", "boundaries = b.geojson\nseed = 7\n");
  const RunConfig c = load_config(p);
  EXPECT_EQ(c.boundaries, (dir.path() / "b.geojson").lexically_normal());
  EXPECT_EQ(c.seed, 7u);
  EXPECT_THROW(load_config(dir.path() / "missing.conf"), MetroError);
}

TEST(Config, CheckNamesMissingFile) {
  TempDir dir;
  RunConfig c;
  c.boundaries = dir.write("b.geojson", "{}");
  c.densities = dir.path() / "nope.csv";
  c.generators = dir.write("g.csv", "");
  try {
    check_config(c);
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
    EXPECT_NE(std::string(e.what()).find("nope.csv"), std::string::npos);
  }
  c.densities = dir.write("d.csv", "");
  EXPECT_NO_THROW(check_config(c));
  c.sigma_m = 1e5;
  EXPECT_THROW(check_config(c), MetroError);
}

TEST(Config, StageSeedsDiffer) {
  RunConfig c;
  c.seed = 42;
  const GaConfig s1 = stage_ga_config(c, 1);
  const GaConfig s2 = stage_ga_config(c, 2);
  EXPECT_EQ(s1.rng_seed, 42u);
  EXPECT_NE(s2.rng_seed, 42u);
  EXPECT_EQ(s1.sense, Sense::Maximize);
  EXPECT_EQ(s2.sense, Sense::Minimize);
  c.seed = 43;
  EXPECT_NE(stage_ga_config(c, 2).rng_seed, s2.rng_seed);
}

}  // namespace
}  // namespace metro
