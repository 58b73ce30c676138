#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include "hmtk/dyadic.hpp"
#include "hmtk/generators.hpp"
#include "hmtk/io.hpp"
#include "hmtk/wavelets.hpp"

using namespace hmtk;

TEST_CASE("grid1d layout") {
  auto space = make_grid1d(64, 0.0625);
  CHECK(space.size() == 64);
  CHECK(space.name() == "grid1d-64");
  CHECK(space.dist(0, 1) == 0.0625);
  CHECK(space.dist(0, 63) == 63 * 0.0625);
  CHECK(space.weight(17) == 0.0625);
  CHECK(space.diameter() == 3.9375);
  CHECK(space.metric().kind == "euclidean");
}

TEST_CASE("grid2d layout") {
  auto space = make_grid2d(64, 0.0625);
  CHECK(space.size() == 4096);
  CHECK(space.name() == "grid2d-64x64");
  CHECK(space.weight(0) == 0.0625 * 0.0625);
  // Points are row-major; (0,0) to (1,1) is h * sqrt(2).
  CHECK(space.dist(0, 65) == doctest::Approx(0.0625 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(space.coords()[0].size() == 2);
  CHECK_THROWS_AS(make_grid2d(8, 0.0625), SpaceError);  // extent 0.5 < 4
}

TEST_CASE("snowflake warps the line metric") {
  auto space = make_snowflake(64, 0.0625, 0.5);
  CHECK(space.dist(0, 1) == 0.25);  // sqrt(1/16)
  CHECK(space.dist(0, 4) == 0.5);   // sqrt(1/4)
  CHECK(space.weight(3) == 0.0625);
  CHECK_THROWS_AS(make_snowflake(64, 0.0625, 0.0), SpaceError);
  CHECK_THROWS_AS(make_snowflake(64, 0.0625, 1.5), SpaceError);
}

TEST_CASE("power metric is a genuine quasi-metric") {
  auto space = make_power_metric(128, 0.0625, 2.0);
  CHECK(space.dist(0, 2) == 0.015625);  // (2/16)^2
  ValidationReport rep = validate_space(space);
  CHECK(rep.a0 == 2.0);  // adjacent equal steps: (a+b)^2 / (a^2+b^2) with a = b
  CHECK_THROWS_AS(make_power_metric(64, 0.0625, 0.5), SpaceError);
}

TEST_CASE("weighted grid profile") {
  auto space = make_weighted_grid(64, 0.0625, -1.0);
  CHECK(space.weight(0) == 0.0625);           // h * (1+0)^-1
  CHECK(space.weight(16) == 0.0625 / 2.0);    // x = 1
  double direct = 0.0;
  for (int i = 63; i >= 0; --i) direct += space.weight(i);
  CHECK(space.total_mass() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("generator input validation") {
  GeneratorSpec s;
  s.kind = "grid1d";
  s.n = 4;
  s.spacing = 0.0625;
  CHECK_THROWS_WITH_AS(generate(s), doctest::Contains("n"), SpaceError);
  s.n = 64;
  s.spacing = 0.25;
  CHECK_THROWS_WITH_AS(generate(s), doctest::Contains("spacing"), SpaceError);
  s.spacing = 0.015625;  // 64 points * 1/64 = 1 < 4
  CHECK_THROWS_AS(generate(s), SpaceError);
  s.kind = "nonsense";
  s.spacing = 0.0625;
  CHECK_THROWS_AS(generate(s), SpaceError);
}

TEST_CASE("space json round trip preserves every bit") {
  auto space = make_snowflake(64, 0.0625, 0.5);
  const std::string path = "tmp_space_roundtrip.json";
  save_space(space, path);
  FiniteHomSpace back = load_space(path);
  REQUIRE(back.size() == space.size());
  CHECK(back.name() == space.name());
  CHECK(back.metric().kind == "snowflake");
  CHECK(back.metric().param == 0.5);
  for (int i = 0; i < space.size(); ++i) {
    CHECK(back.weight(i) == space.weight(i));
    for (int j = 0; j < space.size(); ++j) CHECK(back.dist(i, j) == space.dist(i, j));
  }
  std::remove(path.c_str());
}

TEST_CASE("matrix space json round trip") {
  FiniteHomSpace space = FiniteHomSpace::from_matrix(
      "m3", 3, {0.0, 0.1, 0.7, 0.1, 0.0, 0.30000000000000004, 0.7, 0.30000000000000004, 0.0},
      {1.0, 2.0, 0.125});
  const std::string path = "tmp_matrix_roundtrip.json";
  save_space(space, path);
  FiniteHomSpace back = load_space(path);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(back.dist(i, j) == space.dist(i, j));
  CHECK(back.weight(2) == 0.125);
  std::remove(path.c_str());
}

TEST_CASE("loading a bad space surfaces the axiom violation") {
  json j;
  j["name"] = "asym";
  j["points"] = json::array();
  for (int i = 0; i < 2; ++i) {
    json p;
    p["id"] = i;
    p["weight"] = 1.0;
    j["points"].push_back(p);
  }
  j["metric"]["kind"] = "matrix";
  j["metric"]["matrix"] = {{0.0, 1.0}, {2.0, 0.0}};
  const std::string path = "tmp_bad_space.json";
  write_text_file(path, dump_json_17(j));
  CHECK_THROWS_WITH_AS(load_space(path), doctest::Contains("asymmetric"), SpaceError);

  j["metric"]["matrix"] = {{0.0, 1.0}, {1.0, 0.0}};
  j["points"][1]["weight"] = -1.0;
  write_text_file(path, dump_json_17(j));
  CHECK_THROWS_WITH_AS(load_space(path), doctest::Contains("nonpositive weight"), SpaceError);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_space("does_not_exist.json"), IoError);
}

TEST_CASE("csv space loader") {
  const std::string path = "tmp_space.csv";
  write_text_file(path, "id,weight,x\n0,0.5,0.0\n1,0.5,1.0\n2,0.5,2.0\n");
  FiniteHomSpace space = load_space_csv(path, MetricSpec{"euclidean", 0.0}, "csv3");
  CHECK(space.size() == 3);
  CHECK(space.dist(0, 2) == 2.0);
  CHECK(space.weight(1) == 0.5);

  write_text_file(path, "0,0.5,0.0\n0,0.5,1.0\n");
  CHECK_THROWS_AS(load_space_csv(path, MetricSpec{"euclidean", 0.0}), IoError);
  write_text_file(path, "0,abc,0.0\n");
  CHECK_THROWS_AS(load_space_csv(path, MetricSpec{"euclidean", 0.0}), IoError);
  std::remove(path.c_str());
}

TEST_CASE("base64 codec") {
  const unsigned char man[] = {'M', 'a', 'n'};
  CHECK(base64_encode(man, 3) == "TWFu");
  CHECK(base64_encode(man, 2) == "TWE=");
  CHECK(base64_encode(man, 1) == "TQ==");
  auto bytes = base64_decode("TWFu");
  REQUIRE(bytes.size() == 3);
  CHECK(bytes[0] == 'M');
  CHECK_THROWS_AS(base64_decode("TW!u"), IoError);

  std::vector<double> xs = {0.0, 1.0, -1.0, 3.141592653589793, 1e-300, 1e300,
                            5e-324, -0.0, 0.1};
  std::vector<double> back = base64_to_doubles(doubles_to_base64(xs));
  REQUIRE(back.size() == xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::memcmp(&back[i], &xs[i], 8) == 0);
  }
  CHECK_THROWS_AS(base64_to_doubles("TWFu"), IoError);  // 3 bytes, not 8k
}

TEST_CASE("fixed precision dumper round-trips doubles and keeps key order") {
  json j;
  j["zeta"] = 0.1;
  j["alpha"] = 1e300;
  j["list"] = {1.0 / 3.0, 2, true};
  std::string text = dump_json_17(j);
  CHECK(text.find("\"zeta\"") < text.find("\"alpha\""));  // insertion order kept
  json back = json::parse(text);
  CHECK(back["zeta"].get<double>() == 0.1);
  CHECK(back["alpha"].get<double>() == 1e300);
  CHECK(back["list"][0].get<double>() == 1.0 / 3.0);
  // Identical input, identical bytes.
  CHECK(dump_json_17(j) == text);
}

TEST_CASE("tree json round trip") {
  auto space = make_grid1d(64, 0.0625);
  ValidationReport val = validate_space(space);
  DyadicTree tree = build_tree(space, val.a0).tree;
  const std::string path = "tmp_tree.json";
  save_tree(tree, space, path);
  DyadicTree back = load_tree(path, space);
  CHECK(back.delta == tree.delta);
  CHECK(back.k_min == tree.k_min);
  CHECK(back.k_max == tree.k_max);
  REQUIRE(back.levels.size() == tree.levels.size());
  for (size_t l = 0; l < tree.levels.size(); ++l) {
    REQUIRE(back.levels[l].size() == tree.levels[l].size());
    for (size_t a = 0; a < tree.levels[l].size(); ++a) {
      CHECK(back.levels[l][a].center == tree.levels[l][a].center);
      CHECK(back.levels[l][a].parent == tree.levels[l][a].parent);
      CHECK(back.levels[l][a].new_center == tree.levels[l][a].new_center);
      CHECK(back.levels[l][a].points == tree.levels[l][a].points);
      CHECK(back.levels[l][a].children == tree.levels[l][a].children);
      CHECK(back.levels[l][a].mass == tree.levels[l][a].mass);
    }
  }
  CHECK(back.point_cube == tree.point_cube);

  // A tampered stored mass is rejected on load.
  json j = json::parse(read_text_file(path));
  j["levels"][0]["cubes"][0]["mass"] = 99.0;
  write_text_file(path, dump_json_17(j));
  CHECK_THROWS_WITH_AS(load_tree(path, space), doctest::Contains("mismatch"), IoError);
  std::remove(path.c_str());
}

TEST_CASE("basis json round trip in both encodings") {
  auto space = make_grid1d(64, 0.0625);
  ValidationReport val = validate_space(space);
  DyadicTree tree = build_tree(space, val.a0).tree;
  WaveletBasis basis = build_mra(space, tree);
  for (bool plain : {false, true}) {
    const std::string path = plain ? "tmp_basis_plain.json" : "tmp_basis_b64.json";
    save_basis(basis, tree, space, path, plain);
    LoadedBasis back = load_basis(path, space);
    REQUIRE(back.basis.fathers.size() == basis.fathers.size());
    REQUIRE(back.basis.mothers.size() == basis.mothers.size());
    for (size_t i = 0; i < basis.fathers.size(); ++i) {
      CHECK(back.basis.fathers[i].support == basis.fathers[i].support);
      CHECK(back.basis.fathers[i].values == basis.fathers[i].values);
      CHECK(back.basis.fathers[i].cube == basis.fathers[i].cube);
    }
    for (size_t i = 0; i < basis.mothers.size(); ++i) {
      CHECK(back.basis.mothers[i].support == basis.mothers[i].support);
      CHECK(back.basis.mothers[i].values == basis.mothers[i].values);
      CHECK(back.basis.mothers[i].level == basis.mothers[i].level);
      CHECK(back.basis.mothers[i].cube == basis.mothers[i].cube);
    }
    CHECK(back.basis.mother_of == basis.mother_of);
    std::remove(path.c_str());
  }
}

TEST_CASE("values csv loader") {
  const std::string path = "tmp_values.csv";
  write_text_file(path, "1.5\n-2.0\n0.25\n");
  auto v = load_values_csv(path, 3);
  CHECK(v == std::vector<double>{1.5, -2.0, 0.25});

  write_text_file(path, "id,value\n2,0.25\n0,1.5\n1,-2.0\n");
  v = load_values_csv(path, 3);
  CHECK(v == std::vector<double>{1.5, -2.0, 0.25});

  write_text_file(path, "1.5\n2.0\n");
  CHECK_THROWS_AS(load_values_csv(path, 3), IoError);
  write_text_file(path, "0,1.0\n0,2.0\n");
  CHECK_THROWS_AS(load_values_csv(path, 2), IoError);
  std::remove(path.c_str());
}
