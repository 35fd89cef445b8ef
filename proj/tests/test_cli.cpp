#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "quarticlab/commands.hpp"
#include "quarticlab/rng.hpp"

using namespace qlab;

namespace {

std::string fixture(const char* name) { return std::string(QLAB_DATA_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto p = std::filesystem::temp_directory_path() / ("quarticlab_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "quarticlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

RunConfig config(std::vector<std::string> command) {
  RunConfig c;
  c.command = std::move(command);
  return c;
}

}  // namespace

TEST_CASE("cube octad fixture parses to the 8 cube vertices") {
  const auto octad = octad_from_json(load_json_file(fixture("cube_octad.json")));
  CHECK(octad.size() == 8);
  const PrimeField f(101);
  CHECK(octad.same_set(cube_octad<Fp>(f)));
  CHECK(base_locus(net_from_json(load_json_file(fixture("cube_net.json")))).same_set(octad));
}

TEST_CASE("net and octad round trip through JSON") {
  const PrimeField f(101);
  const auto net = cube_net<Fp>(f);
  const auto back = net_from_json(parse_json_text(dump(net_to_json(net))));
  for (int i = 0; i < 3; ++i) CHECK(back[i] == net[i]);

  SplitMix64 rng(5);
  const auto no = random_general_octad<Fp>(f, rng, true);
  CHECK(octad_from_json(octad_to_json(no.octad)) == no.octad);
  const auto net2 = net_from_json(net_to_json(no.net));
  for (int i = 0; i < 3; ++i) CHECK(net2[i] == no.net[i]);
}

TEST_CASE("forms and plane points round trip") {
  const PrimeField f(499);
  const auto x = SparseForm<Fp>::variable(f, 3, 0), y = SparseForm<Fp>::variable(f, 3, 1);
  const auto g = x * x * x * x + f.from_int(-3) * x * y * y * y;
  const auto back = form_from_json(parse_json_text(dump(form_to_json(g))));
  CHECK(back == g);

  std::vector<ProjPoint<Fp>> pts;
  for (int i = 0; i < 7; ++i) pts.push_back(ProjPoint<Fp>::from_ints(f, {1, i, i * i}));
  CHECK(plane_points_from_json(plane_points_to_json(pts)) == pts);
}

TEST_CASE("malformed datasets name the offending field or position") {
  SUBCASE("syntax error carries line and column") {
    try {
      parse_json_text("{\n  \"kind\": \"octad\",\n  \"prime\": 101,,\n}");
      FAIL("no error");
    } catch (const DatasetError& e) {
      CHECK(e.where() == "line 3, column 16");
    }
  }
  SUBCASE("bad element path") {
    auto doc = load_json_file(fixture("cube_octad.json"));
    doc["points"][3][1] = "x7";
    try {
      octad_from_json(doc);
      FAIL("no error");
    } catch (const DatasetError& e) {
      CHECK(e.where() == "points[3][1]");
    }
  }
  SUBCASE("wrong point count, missing fields, bad prime") {
    auto doc = load_json_file(fixture("cube_octad.json"));
    doc["points"].erase(0);
    CHECK_THROWS_AS(octad_from_json(doc), DatasetError);
    CHECK_THROWS_AS(net_from_json(parse_json_text("{\"kind\": \"net\", \"prime\": 101}")), DatasetError);
    CHECK_THROWS_AS(dataset_prime(parse_json_text("{\"prime\": 100}")), DatasetError);
    CHECK_THROWS_AS(dataset_prime(parse_json_text("{\"prime\": 3}")), DatasetError);
  }
  SUBCASE("dependent net matrices") {
    auto doc = load_json_file(fixture("cube_net.json"));
    doc["matrices"][2] = doc["matrices"][1];
    try {
      net_from_json(doc);
      FAIL("no error");
    } catch (const DatasetError& e) {
      CHECK(e.where() == "matrices");
    }
  }
}

TEST_CASE("report survives a JSON round trip") {
  auto rep = execute(config({"octad", "build"}));
  rep.timings.emplace_back("extra", 1.5);
  const auto back = Report::from_json(parse_json_text(dump(rep.to_json(true))));
  CHECK(back == rep);
  CHECK(back.passed());
  CHECK(back.config["seed"] == 42);
  CHECK(back.config["prime"] == 101);
  CHECK_THROWS_AS(Report::from_json(parse_json_text("{\"command\": 1}")), DatasetError);
}

TEST_CASE("weyl counts and theta aronhold report the known numbers") {
  const auto w = execute(config({"weyl", "counts"}));
  CHECK(w.passed());
  CHECK(w.results["positive_roots"] == 63);
  CHECK(w.results["lines"] == 56);
  CHECK(w.results["weyl_order"] == 2903040);
  CHECK(w.results["center_size"] == 2);
  CHECK(w.results["index"] == 72);
  const auto t = execute(config({"theta", "aronhold"}));
  CHECK(t.results["count"] == 288);
}

TEST_CASE("exit codes") {
  const auto out = std::filesystem::temp_directory_path() / "quarticlab_test_report.json";
  CHECK(run_args({"weyl", "counts", "--out", out.string()}) == 0);
  CHECK(Report::from_json(load_json_file(out.string())).results["lines"] == 56);

  CHECK(run_args({"frobnicate"}) == 2);
  CHECK(run_args({"weyl"}) == 2);
  CHECK(run_args({"octad", "build", "--prime", "100"}) == 2);
  CHECK(run_args({"tangency", "--samples", "0"}) == 2);
  const auto bad = temp_file("bad.json", "{\"kind\": \"octad\", \"prime\": 101, \"points\": [[1, 2]]}");
  CHECK(run_args({"octad", "build", "--input", bad.string(), "--out", out.string()}) == 2);
  CHECK(run_args({"octad", "build", "--input", "/nonexistent/file.json"}) == 2);

  // the cube's Hessian contains lines, so the bitangent checks fail honestly
  CHECK(run_args({"bitangents", "--input", fixture("cube_octad.json"), "--out", out.string()}) == 1);
  const auto rep = Report::from_json(load_json_file(out.string()));
  CHECK_FALSE(rep.passed());
  CHECK(rep.checks[0].detail.find("component") != std::string::npos);
  std::filesystem::remove(out);
  std::filesystem::remove(bad);
}

TEST_CASE("seeded commands replay identically") {
  auto c = config({"octad", "from-plane"});
  c.seed = 9;
  CHECK(dump(execute(c).to_json(false)) == dump(execute(c).to_json(false)));
  c.seed = 10;
  const auto other = execute(c);
  c.seed = 9;
  CHECK(dump(other.to_json(false)) != dump(execute(c).to_json(false)));
}
