#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "metro/demand.hpp"
#include "metro/error.hpp"
#include "oracles.hpp"

namespace metro {
namespace {

using testing::TempDir;

const GeoPoint kOrigin{3.0, 101.5};

TEST(LoadGenerators, LongFormHeaderRows) {
  TempDir dir;
  const auto p = dir.write("g.csv",
                           "Centre,Number of daily visitors,Latitude,Longitude\n"
                           "Sunway Pyramid, 50000, 3.0731, 101.6071\n"
                           "Cyberjaya, 100000, 2.9223, 101.6509\n");
  const auto gens = load_generators(p, kOrigin);
  ASSERT_EQ(gens.size(), 2u);
  EXPECT_EQ(gens[0].name, "Sunway Pyramid");
  EXPECT_EQ(gens[0].visitors_per_day, 50'000.0);
  EXPECT_EQ(gens[1].name, "Cyberjaya");
  EXPECT_EQ(gens[1].visitors_per_day, 100'000.0);
  EXPECT_DOUBLE_EQ(gens[1].location.lat, 2.9223);
  const PlanarPoint want = project({2.9223, 101.6509}, kOrigin);
  EXPECT_EQ(gens[1].position, want);
}

TEST(LoadGenerators, TabDelimitedAndQuoted) {
  TempDir dir;
  const auto p = dir.write("g.tsv",
                           "name\tdaily_visitors\tlatitude\tlongitude\n"
                           "\"Mall, east wing\"\t1200\t3.1\t101.6\n");
  const auto gens = load_generators(p, kOrigin);
  ASSERT_EQ(gens.size(), 1u);
  EXPECT_EQ(gens[0].name, "Mall, east wing");
  EXPECT_EQ(gens[0].visitors_per_day, 1200.0);
}

TEST(LoadGenerators, NegativeVisitorsRejected) {
  TempDir dir;
  const auto p = dir.write("g.csv", "name,daily_visitors,latitude,longitude\nBad,-5,3.0,101.5\n");
  try {
    load_generators(p, kOrigin);
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeVisitors);
  }
}

TEST(LoadGenerators, MalformedRowsAreParseErrors) {
  TempDir dir;
  for (const char* body : {"name,daily_visitors,latitude,longitude\nX,lots,3.0,101.5\n",
                           "name,daily_visitors,latitude,longitude\nX,10,3.0\n", "who,what\nX,1\n",
                           "name,daily_visitors,latitude,longitude\nX,10,95.0,101.5\n"}) {
    const auto p = dir.write("g.csv", body);
    try {
      load_generators(p, kOrigin);
      ADD_FAILURE() << body;
    } catch (const MetroError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Parse) << body;
    }
  }
}

TEST(CheckGenerators, FarOutsideRegionRejected) {
  const Region r = testing::region_of({testing::square_district("a", 0, 0, 1000, 1000)});
  const std::vector<GeneratorPoint> near{testing::generator_at({5000, 500}, 10)};
  EXPECT_NO_THROW(check_generators_within(r, near));
  const std::vector<GeneratorPoint> far{testing::generator_at({50'000, 500}, 10)};
  try {
    check_generators_within(r, far);
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GeneratorOutOfRegion);
  }
}

TEST(Rasterize, UnitSquareTilesExactly) {
  const std::vector<District> ds{testing::square_district("a", 0, 0, 1000, 1000)};
  const DemandGrid g = rasterize(ds, 500);
  ASSERT_EQ(g.cells.size(), 4u);
  for (const DemandCell& c : g.cells) EXPECT_NEAR(c.population, 250.0, 1e-9);
  EXPECT_NEAR(g.total_population, 1000.0, 1e-9);
  EXPECT_EQ(g.cells[0].centroid, (PlanarPoint{250, 250}));
  EXPECT_EQ(g.cells[1].centroid, (PlanarPoint{750, 250}));
  EXPECT_EQ(g.cells[3].centroid, (PlanarPoint{750, 750}));
}

TEST(Rasterize, CoarseCellsGiveEmptyGrid) {
  const std::vector<District> ds{testing::square_district("a", 0, 0, 1000, 1000)};
  try {
    rasterize(ds, 2000);
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyGrid);
  }
}

TEST(Rasterize, ZeroDensityCellsDropped) {
  const std::vector<District> ds{testing::square_district("a", 0, 0, 1000, 1000),
                                 testing::square_district("b", 1000, 0, 1000, 0)};
  const DemandGrid g = rasterize(ds, 500);
  EXPECT_EQ(g.cells.size(), 4u);
  const std::vector<District> empty{testing::square_district("b", 0, 0, 1000, 0)};
  EXPECT_THROW(rasterize(empty, 500), MetroError);
}

TEST(Rasterize, LShapeCountsCentroidsInside) {
  const Ring l{{0, 0}, {2000, 0}, {2000, 1000}, {1000, 1000}, {1000, 2000}, {0, 2000}};
  const std::vector<District> ds{make_district("l", {Polygon{l, {}}}, 100)};
  const DemandGrid g = rasterize(ds, 1000);
  ASSERT_EQ(g.cells.size(), 3u);
  EXPECT_NEAR(g.total_population, 300.0, 1e-9);
  // Brute-force check of each candidate centroid against the polygon.
  int inside = 0;
  for (double x : {500.0, 1500.0}) {
    for (double y : {500.0, 1500.0}) inside += contains(Polygon{l, {}}, {x, y}) ? 1 : 0;
  }
  EXPECT_EQ(inside, 3);
}

TEST(Rasterize, FirstDistrictOwnsSharedCells) {
  const std::vector<District> ds{testing::square_district("a", 0, 0, 1000, 10),
                                 testing::square_district("b", 0, 0, 1000, 99)};
  const DemandGrid g = rasterize(ds, 500);
  EXPECT_NEAR(g.total_population, 10.0, 1e-12);
}

TEST(Rasterize, TotalEqualsSumOfCells) {
  const std::vector<District> ds{make_district("d", {testing::disk_polygon({300, -200}, 7000, 90)}, 1234),
                                 testing::square_district("s", 8000, 0, 3000, 321)};
  const DemandGrid g = rasterize(ds, 370);
  double sum = 0;
  for (const DemandCell& c : g.cells) sum += c.population;
  EXPECT_NEAR(g.total_population, sum, 1e-9 * sum);
}

TEST(Rasterize, TranslationEquivariant) {
  const PlanarPoint shift{12'345.0, -6'789.0};
  auto build = [](PlanarPoint off) {
    Polygon disk = testing::disk_polygon({off.x, off.y}, 5000, 64);
    return std::vector<District>{make_district("d", {disk}, 800),
                                 testing::square_district("s", off.x + 5000, off.y - 1000, 2000, 300)};
  };
  const DemandGrid a = rasterize(build({0, 0}), 400, PlanarPoint{-5000, -5000});
  const DemandGrid b = rasterize(build(shift), 400, PlanarPoint{-5000 + shift.x, -5000 + shift.y});
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].population, b.cells[i].population);
    EXPECT_NEAR(a.cells[i].centroid.x + shift.x, b.cells[i].centroid.x, 1e-6);
    EXPECT_NEAR(a.cells[i].centroid.y + shift.y, b.cells[i].centroid.y, 1e-6);
  }
}

TEST(Rasterize, HalvingCellSizeConverges) {
  const std::vector<District> ds{make_district("d", {testing::disk_polygon({0, 0}, 9000, 120)}, 1500),
                                 make_district("e", {testing::disk_polygon({17'000, 3000}, 6000, 120)}, 400)};
  const double coarse = rasterize(ds, 1000).total_population;
  const double fine = rasterize(ds, 500).total_population;
  EXPECT_LT(testing::relative_error(coarse, fine), 0.02);
  double analytic = 0;
  for (const District& d : ds) analytic += d.population();
  EXPECT_LT(testing::relative_error(fine, analytic), 0.02);
}

}  // namespace
}  // namespace metro
