#include <gtest/gtest.h>

#include <cmath>

#include "metro/error.hpp"
#include "metro/region.hpp"
#include "oracles.hpp"

namespace metro {
namespace {

using testing::collection;
using testing::rect_feature;
using testing::TempDir;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const MetroError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no MetroError thrown";
  return ErrorKind::Io;
}

TEST(District, UnitSquarePopulation) {
  const District d = testing::square_district("a", 0, 0, 1000, 1000);
  EXPECT_NEAR(d.area_km2, 1.0, 1e-12);
  EXPECT_NEAR(d.population(), 1000.0, 1e-9);
}

TEST(District, MultiPolygonAddsParts) {
  const District d = make_district(
      "m", {testing::rect_polygon(0, 0, 1000, 1000), testing::rect_polygon(5000, 0, 6000, 1000)}, 500);
  EXPECT_NEAR(d.area_km2, 2.0, 1e-12);
  EXPECT_NEAR(d.population(), 1000.0, 1e-9);
  EXPECT_TRUE(d.contains({5500, 500}));
  EXPECT_FALSE(d.contains({3000, 500}));
}

TEST(District, HoleReducesArea) {
  Polygon p = testing::rect_polygon(0, 0, 2000, 2000);
  p.holes.push_back(testing::rect_polygon(500, 500, 1500, 1500).outer);
  const District d = make_district("h", {p}, 100);
  EXPECT_NEAR(d.area_km2, 3.0, 1e-12);
  EXPECT_FALSE(d.contains({1000, 1000}));
}

TEST(District, RejectsDegenerateRings) {
  EXPECT_EQ(kind_of([] { make_district("x", {Polygon{{{0, 0}, {1, 0}}, {}}}, 1); }), ErrorKind::InvalidPolygon);
  EXPECT_EQ(kind_of([] { make_district("x", {Polygon{{{0, 0}, {1, 0}, {2, 0}}, {}}}, 1); }),
            ErrorKind::InvalidPolygon);
  const Ring bowtie{{0, 0}, {1000, 1000}, {1000, 0}, {0, 1000}};
  EXPECT_EQ(kind_of([&] { make_district("x", {Polygon{bowtie, {}}}, 1); }), ErrorKind::InvalidPolygon);
  EXPECT_EQ(kind_of([] { make_district("x", {testing::rect_polygon(0, 0, 1, 1)}, -3); }), ErrorKind::Parse);
}

TEST(Region, ContainsAndNearestBoundary) {
  const Region r = testing::region_of({testing::square_district("a", 0, 0, 1000, 1000)});
  EXPECT_TRUE(r.contains({10, 10}));
  EXPECT_FALSE(r.contains({1010, 10}));
  EXPECT_TRUE(r.contains_within({1010, 10}, 50));
  EXPECT_FALSE(r.contains_within({1100, 10}, 50));
  const PlanarPoint q = r.nearest_boundary_point({1100, 300});
  EXPECT_DOUBLE_EQ(q.x, 1000);
  EXPECT_DOUBLE_EQ(q.y, 300);
  EXPECT_NEAR(r.implied_population(), 1000.0, 1e-9);
}

class LoadRegion : public ::testing::Test {
 protected:
  TempDir dir;
};

TEST_F(LoadRegion, OriginIsBoundingBoxCentre) {
  const auto b = dir.write("b.geojson", collection({rect_feature("a", 101.0, 3.0, 101.2, 3.1),
                                                    rect_feature("b", 101.2, 3.0, 101.4, 3.3)}));
  const auto d = dir.write("d.csv", "district_id,density_per_km2\na,100\nb,200\n");
  const Region r = load_region(b, d);
  EXPECT_NEAR(r.origin().lat, 3.15, 1e-12);
  EXPECT_NEAR(r.origin().lon, 101.2, 1e-12);
  ASSERT_EQ(r.districts().size(), 2u);
  EXPECT_EQ(r.districts()[0].id, "a");
  EXPECT_DOUBLE_EQ(r.districts()[1].density_per_km2, 200.0);
}

TEST_F(LoadRegion, AreaMatchesProjectedRectangle) {
  const auto b = dir.write("b.geojson", collection({rect_feature("a", 101.0, 3.0, 101.1, 3.1)}));
  const auto d = dir.write("d.csv", "district_id,density_per_km2\na,1000\n");
  const Region r = load_region(b, d);
  // The rectangle is centred on the origin, so it projects to a rectangle
  // with sides 0.1 degree of arc along the meridian and along the central
  // parallel.
  const double deg = 6'371'000.0 * std::numbers::pi / 180.0;
  const double want_km2 = (0.1 * deg) * (0.1 * deg * std::cos(3.05 * std::numbers::pi / 180.0)) / 1e6;
  EXPECT_LT(testing::relative_error(r.districts()[0].area_km2, want_km2), 1e-9);
  EXPECT_LT(testing::relative_error(r.implied_population(), want_km2 * 1000), 1e-9);
}

TEST_F(LoadRegion, MergesFeaturesWithSameId) {
  const auto b = dir.write("b.geojson", collection({rect_feature("a", 101.0, 3.0, 101.1, 3.1),
                                                    rect_feature("a", 101.3, 3.0, 101.4, 3.1)}));
  const auto d = dir.write("d.csv", "district_id,density_per_km2\na,10\n");
  const Region r = load_region(b, d);
  ASSERT_EQ(r.districts().size(), 1u);
  EXPECT_EQ(r.districts()[0].polygons.size(), 2u);
}

TEST_F(LoadRegion, MultiPolygonGeometry) {
  const auto b = dir.write("b.geojson", R"({"type":"FeatureCollection","features":[{"type":"Feature",
    "properties":{"district_id":"m"},"geometry":{"type":"MultiPolygon","coordinates":[
    [[[101.0,3.0],[101.01,3.0],[101.01,3.01],[101.0,3.01],[101.0,3.0]]],
    [[[101.05,3.0],[101.06,3.0],[101.06,3.01],[101.05,3.01],[101.05,3.0]]]]}}]})");
  const auto d = dir.write("d.csv", "district_id,density_per_km2\nm,500\n");
  const Region r = load_region(b, d);
  ASSERT_EQ(r.districts().size(), 1u);
  EXPECT_EQ(r.districts()[0].polygons.size(), 2u);
}

TEST_F(LoadRegion, MissingDensityNamesDistrict) {
  const auto b = dir.write("b.geojson", collection({rect_feature("a", 101.0, 3.0, 101.1, 3.1),
                                                    rect_feature("zz", 101.2, 3.0, 101.3, 3.1)}));
  const auto d = dir.write("d.csv", "district_id,density_per_km2\na,10\n");
  try {
    load_region(b, d);
    FAIL();
  } catch (const MetroError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingDensity);
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
}

TEST_F(LoadRegion, ParseErrors) {
  const auto d = dir.write("d.csv", "district_id,density_per_km2\na,10\n");
  const auto junk = dir.write("junk.geojson", "{not json");
  EXPECT_EQ(kind_of([&] { load_region(junk, d); }), ErrorKind::Parse);
  const auto point = dir.write("p.geojson", R"({"type":"FeatureCollection","features":[{"type":"Feature",
    "properties":{"district_id":"a"},"geometry":{"type":"Point","coordinates":[101,3]}}]})");
  EXPECT_EQ(kind_of([&] { load_region(point, d); }), ErrorKind::Parse);
  const auto noid = dir.write("n.geojson", R"({"type":"FeatureCollection","features":[{"type":"Feature",
    "properties":{},"geometry":{"type":"Polygon","coordinates":[[[101,3],[101.1,3],[101.1,3.1],[101,3]]]}}]})");
  EXPECT_EQ(kind_of([&] { load_region(noid, d); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { load_region(dir.path() / "absent.geojson", d); }), ErrorKind::Io);
}

TEST_F(LoadRegion, DensityFileErrors) {
  EXPECT_EQ(kind_of([&] { load_densities(dir.write("a.csv", "id,rho\na,1\n")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { load_densities(dir.write("b.csv", "district_id,density_per_km2\na,-1\n")); }),
            ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { load_densities(dir.write("c.csv", "district_id,density_per_km2\na,1\na,2\n")); }),
            ErrorKind::Parse);
  const auto ok = load_densities(dir.write("ok.csv", "district_id,density_per_km2\n a , 12.5 \n\nb,0\n"));
  EXPECT_DOUBLE_EQ(ok.at("a"), 12.5);
  EXPECT_DOUBLE_EQ(ok.at("b"), 0.0);
}

}  // namespace
}  // namespace metro
