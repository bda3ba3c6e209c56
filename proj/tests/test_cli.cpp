#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coarselab/cli.hpp"
#include "coarselab/io.hpp"
#include "doctest.h"

using namespace coarselab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("coarselab-cli-" + std::to_string(std::rand()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
    ::setenv("COARSELAB_CACHE", (path / "cache").c_str(), 1);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json read(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return Json::parse(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("space command") {
  TempDir tmp;
  auto r = run({"--out", tmp / "z", "space", "--model", "z", "--range", "100"});
  REQUIRE(r.code == 0);
  auto j = read(tmp / "z/space.json");
  CHECK(j["summary"]["points"] == 201);
  CHECK(j["summary"]["edges"] == 200);
  CHECK(fs::exists(tmp / "z/points.csv"));
  CHECK(fs::exists(tmp / "z/edges.csv"));
  CHECK(read(tmp / "z/run.json")["exit_code"] == 0);

  r = run({"--out", tmp / "t", "space", "--model", "t3", "--radius", "10"});
  REQUIRE(r.code == 0);
  CHECK(read(tmp / "t/space.json")["summary"]["points"] == 3070);
  CHECK(read(tmp / "t/space.json")["summary"]["degree_bound"] == 3);

  r = run({"--out", tmp / "again", "space", "--manifest", tmp / "t/space.json"});
  REQUIRE(r.code == 0);
  CHECK(slurp(tmp / "again/points.csv") == slurp(tmp / "t/points.csv"));

  CHECK(run({"--out", tmp / "bad", "space", "--model", "nope"}).code == 2);
}

TEST_CASE("walk build and verification") {
  TempDir tmp;
  auto r = run({"--out", tmp / "w", "build", "walk", "--n", "2000"});
  REQUIRE(r.code == 0);
  const auto rep = read(tmp / "w/report.json");
  for (const auto& c : rep["checks"]) CHECK(c["pass"] == true);

  r = run({"--out", tmp / "v", "verify", tmp / "w/walk.json", "--checks", "total,fibers:max=3,adjacent,walk_bound"});
  CHECK(r.code == 0);
  r = run({"--out", tmp / "v2", "verify", tmp / "w/walk.json", "--checks", "fibers:max=2"});
  CHECK(r.code == 4);
  r = run({"--out", tmp / "v3", "verify", tmp / "w/walk.json", "--checks", "no_such_check"});
  CHECK(r.code == 2);

  r = run({"--out", tmp / "g", "analyze", "distortion", "--map", tmp / "w/walk.json", "--anchored", "0"});
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp / "g/distortion.json"));
  CHECK(fs::exists(tmp / "g/distortion.csv"));
}

TEST_CASE("cover pipeline on a small tiling") {
  TempDir tmp;
  REQUIRE(run({"--out", tmp / "t", "build", "tiling", "--r", "1", "--window", "ball:6"}).code == 0);
  const auto d = read(tmp / "t/decomp.json");
  CHECK(d["kind"] == "decomposition");
  CHECK(run({"--out", tmp / "v", "verify", tmp / "t/decomp.json", "--checks", "coverage,disjointness,colours:max=2"}).code == 0);
  CHECK(run({"--out", tmp / "a", "build", "amplify", "--decomp", tmp / "t/decomp.json", "--n", "1"}).code == 0);
  CHECK(run({"--out", tmp / "n", "build", "nerve", "--cover", tmp / "t/decomp.json"}).code == 0);
  // graph balls about the origin reach the window boundary at once
  CHECK(run({"--out", tmp / "gr", "analyze", "growth", "--space", tmp / "t/decomp.json", "--r-max", "5"}).code == 5);
  REQUIRE(run({"--out", tmp / "z", "space", "--model", "z", "--range", "100"}).code == 0);
  REQUIRE(run({"--out", tmp / "zg", "analyze", "growth", "--space", tmp / "z/space.json", "--r-max", "20"}).code == 0);
  CHECK(std::abs(read(tmp / "zg/growth.json")["fitted_exponent"].get<double>() - 1) < 0.1);

  // a malformed file is a schema error
  std::ofstream(tmp / "broken.json") << "{\"version\": 1, \"kind\": \"decomposition\"}";
  CHECK(run({"--out", tmp / "x", "verify", tmp / "broken.json", "--checks", "coverage"}).code == 2);
}

TEST_CASE("runs reproduce byte for byte") {
  TempDir tmp;
  REQUIRE(run({"--out", tmp / "a", "build", "walk", "--n", "500"}).code == 0);
  REQUIRE(run({"--out", tmp / "b", "build", "walk", "--n", "500"}).code == 0);
  CHECK(slurp(tmp / "a/walk.json") == slurp(tmp / "b/walk.json"));
  CHECK(slurp(tmp / "a/report.json") == slurp(tmp / "b/report.json"));

  auto r = run({"report", tmp / "a/run.json", "--rerun"});
  CHECK(r.code == 0);
  CHECK(r.out.find("reproduced") != std::string::npos);

  REQUIRE(run({"--out", tmp / "v", "verify", tmp / "a/walk.json", "--checks", "fibers:max=3"}).code == 0);
  CHECK(run({"report", tmp / "v/run.json", "--rerun"}).code == 0);
  // a modified input no longer reproduces
  std::ofstream(tmp / "a/walk.json", std::ios::app) << " ";
  CHECK(run({"report", tmp / "v/run.json", "--rerun"}).code == 4);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"build", "walk", "--n", "x"}).code == 2);
}
