#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>

#include "commaware/grid.hpp"
#include "doctest.h"

using commaware::ConfigError;
using commaware::ScalarGrid;
using commaware::Vec2;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("make builds the expected lattice") {
  const ScalarGrid g = ScalarGrid::make(0.0, 0.0, 50.0, 50.0, 0.5);
  CHECK(g.nx == 101);
  CHECK(g.ny == 101);
  CHECK(g.size() == 10201);
  CHECK(g.node_x(0) == doctest::Approx(0.0));
  CHECK(g.node_x(100) == doctest::Approx(50.0));
  CHECK(g.x_max() == doctest::Approx(50.0));
  CHECK(g.index(3, 2) == 2 * 101 + 3);
}

TEST_CASE("make rejects bad extents") {
  CHECK_THROWS_AS(ScalarGrid::make(0, 0, 50, 50, -1.0), ConfigError);
  CHECK_THROWS_AS(ScalarGrid::make(0, 0, 0, 50, 0.5), ConfigError);
  CHECK_THROWS_AS(ScalarGrid::make(0, 0, 50.3, 50, 0.5), ConfigError);
}

TEST_CASE("bilinear reproduces node values and midpoints") {
  ScalarGrid g = ScalarGrid::make(0.0, 0.0, 2.0, 2.0, 1.0);
  // values a..i laid out row by row
  for (int i = 0; i < 9; ++i) g.values[i] = 10.0 * i + 1.0;
  CHECK(g.bilinear(Vec2(1.0, 1.0)) == doctest::Approx(g.at(1, 1)));
  CHECK(g.bilinear(Vec2(0.5, 0.0)) ==
        doctest::Approx(0.5 * (g.at(0, 0) + g.at(1, 0))));
  CHECK(g.bilinear(Vec2(0.5, 0.5)) ==
        doctest::Approx(0.25 * (g.at(0, 0) + g.at(1, 0) + g.at(0, 1) +
                                g.at(1, 1))));
}

TEST_CASE("bilinear is exact for affine fields") {
  ScalarGrid g = ScalarGrid::make(-1.0, 2.0, 4.0, 7.0, 0.25);
  const auto f = [](double x, double y) { return 3.0 + 0.5 * x - 2.0 * y; };
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      g.at(ix, iy) = f(g.node_x(ix), g.node_y(iy));
    }
  }
  for (double x : {-0.9, 0.3, 1.7, 3.99}) {
    for (double y : {2.01, 3.3, 6.5}) {
      CHECK(g.bilinear(Vec2(x, y)) == doctest::Approx(f(x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("covers matches the extents") {
  const ScalarGrid g = ScalarGrid::make(0.0, 0.0, 2.0, 3.0, 0.5);
  CHECK(g.covers(Vec2(0.0, 0.0)));
  CHECK(g.covers(Vec2(2.0, 3.0)));
  CHECK(!g.covers(Vec2(2.1, 1.0)));
  CHECK(!g.covers(Vec2(1.0, -0.1)));
}

TEST_CASE("csv round trip is exact") {
  ScalarGrid g = ScalarGrid::make(0.0, 0.0, 3.0, 2.0, 0.5);
  for (int i = 0; i < g.size(); ++i) {
    g.values[i] = std::sin(i * 0.7) * 1e3 / 7.0;
  }
  const std::string path = temp_path("commaware_grid_roundtrip.csv");
  g.save_csv(path);
  const ScalarGrid back = ScalarGrid::load_csv(path);
  REQUIRE(back.nx == g.nx);
  REQUIRE(back.ny == g.ny);
  CHECK(back.resolution == g.resolution);
  for (int i = 0; i < g.size(); ++i) {
    CHECK(back.values[i] == g.values[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("load rejects malformed files") {
  const std::string path = temp_path("commaware_grid_bad.csv");
  {
    FILE* f = fopen(path.c_str(), "w");
    fputs("0,1,0,1,0.5\n1,2,3\n", f);
    fclose(f);
  }
  CHECK_THROWS_AS(ScalarGrid::load_csv(path), ConfigError);
  CHECK_THROWS_AS(ScalarGrid::load_csv(temp_path("no_such_grid.csv")),
                  ConfigError);
  std::remove(path.c_str());
}
