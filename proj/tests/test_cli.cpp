#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// HMTK_BIN is injected by the build with the absolute path of the hmtk binary.

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(HMTK_BIN) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WEXITSTATUS(st);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("generate, validate, cubes, norm, equiv pipeline") {
  REQUIRE(run("generate --kind grid1d --n 64 --out cli_g64.json") == 0);
  CHECK(run("validate --space cli_g64.json") == 0);
  CHECK(run("cubes --space cli_g64.json --verify --out cli_t64.json") == 0);
  CHECK(run("wavelets --space cli_g64.json --check --out cli_b64.json") == 0);
  CHECK(run("norm --space cli_g64.json --fn sin3 --theta 0.3") == 0);
  CHECK(run("norm --space cli_g64.json --basis cli_b64.json --fn sin3 --report cli_n64.json") ==
        0);
  CHECK(slurp("cli_n64.json").find("\"lip\"") != std::string::npos);
  CHECK(run("equiv --space cli_g64.json --out cli_e64.json") == 0);
  CHECK(run("geometry --space cli_g64.json") == 0);
  CHECK(run("kernel --space cli_g64.json --out cli_k64.json") == 0);
  CHECK(run("report --inputs cli_e64.json --inputs cli_k64.json --out cli_r64.json") == 0);
  CHECK(slurp("cli_r64.json").find("hmtk-report-1") != std::string::npos);
}

TEST_CASE("equiv output is byte-identical across runs and thread flags") {
  REQUIRE(run("generate --kind grid1d --n 64 --out cli_gd.json") == 0);
  REQUIRE(run("--threads 1 equiv --space cli_gd.json --out cli_eq1.json") == 0);
  REQUIRE(run("--threads 8 equiv --space cli_gd.json --out cli_eq8.json") == 0);
  std::string a = slurp("cli_eq1.json");
  std::string b = slurp("cli_eq8.json");
  REQUIRE_FALSE(a.empty());
  CHECK(a == b);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("--definitely-not-a-flag") == 2);
  CHECK(run("validate") == 2);                            // missing --space
  CHECK(run("validate --space missing_file.json") == 2);  // unreadable input
  CHECK(run("generate --kind nosuch --n 64 --out x.json") == 1);  // domain error
  CHECK(run("norm --space cli_g64.json --fn nosuchfn") == 2);
}

TEST_CASE("axiom violations exit with 1") {
  spit("cli_bad.json", R"({
  "name": "asym",
  "points": [
    {"id": 0, "weight": 1.0},
    {"id": 1, "weight": 1.0}
  ],
  "metric": {"kind": "matrix", "matrix": [[0.0, 1.0], [2.0, 0.0]]}
})");
  CHECK(run("validate --space cli_bad.json") == 1);
  std::remove("cli_bad.json");
}

TEST_CASE("help is exit 0") {
  CHECK(run("--help") == 0);
  CHECK(run("equiv --help") == 0);
}
