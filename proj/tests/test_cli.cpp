#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccn/cli.hpp"
#include "ccn/monoid.hpp"

using ccn::Json;
namespace fs = std::filesystem;

namespace {

const std::string data = CCN_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ccn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& name) { return data + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ccn_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("verify power_2 passes") {
  const Result r = run({"--trials", "2000", "verify", path("single_type.network.json"), path("power_2.oracle.json")});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["components"][0]["admissibility"]["ok"] == true);
  CHECK(j["components"][0]["basis"]["ok"] == true);
}

TEST_CASE("verify broken merge names the property with a witness") {
  const Result r = run({"--trials", "2000", "verify", path("free_parallel.network.json"), path("broken_merge.oracle.json")});
  CHECK(r.code == 1);
  const Json j = Json::parse(r.out);
  const Json& adm = j["components"][0]["admissibility"];
  CHECK(adm["merge"]["ok"] == false);
  CHECK(adm["permutation"]["ok"] == true);
  CHECK(adm["zero_removal"]["ok"] == true);
  REQUIRE(adm["counterexamples"].size() > 0);
  CHECK(adm["counterexamples"][0]["property"] == "merge");
  CHECK(adm["counterexamples"][0]["input"].contains("merged"));
  bool named = false;
  for (const auto& v : j["violations"]) named |= v.get<std::string>().find("merge") != std::string::npos;
  CHECK(named);
}

TEST_CASE("verify the two-type example") {
  const Result r = run({"--trials", "1000", "verify", path("two_type.network.json"), path("two_type.oracle.json")});
  CHECK(r.code == 0);
}

TEST_CASE("malformed input exits 2") {
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << "{\"types\": [";
  CHECK(run({"verify", bad.string(), path("power_2.oracle.json")}).code == 2);
  CHECK(run({"verify", path("single_type.network.json"), bad.string()}).code == 2);
  CHECK(run({"verify", path("single_type.network.json"), path("missing.json")}).code == 2);
  CHECK(run({"verify", path("single_type.network.json")}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  // the oracle expects additive weights, the network declares multisets
  CHECK(run({"--trials", "10", "verify", path("free_parallel.network.json"), path("power_2.oracle.json")}).code == 2);
}

TEST_CASE("decompose power_2") {
  const Result r = run({"decompose", path("power_2.oracle.json"), "--points", path("power_2.points.json")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const Json& p = j["points"][0];
  CHECK(p["by_k"][0]["k"] == Json::parse("[1]"));
  CHECK(p["by_k"][0]["vals"] == Json::parse("[4.0, 9.0]"));
  CHECK(p["by_k"][1]["k"] == Json::parse("[2]"));
  CHECK(p["by_k"][1]["vals"] == Json::parse("[12.0]"));
  CHECK(p["oracle"] == 25.0);
  CHECK(j["orders"]["coupling_orders"][0]["gamma"] == 2);
  CHECK(j["orders"]["locally_maximal"] == Json::parse("[[2]]"));
  const Json& empty = j["points"][1];
  CHECK(empty["components"].empty());
  CHECK(empty["f0"] == 0.0);
  CHECK(empty["oracle"] == 0.0);
}

TEST_CASE("decompose to basis") {
  const Result r = run({"decompose", path("power_2.oracle.json"), "--points", path("power_2.points.json"), "--to", "basis",
                        "--bound", "2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["points"][0]["by_k"][0]["vals"] == Json::parse("[0.0, 0.0]"));
  CHECK(j["points"][0]["by_k"][1]["vals"] == Json::parse("[12.0]"));
  CHECK(j["points"][0]["direct_vs_coupling"].get<double>() <= 1e-9);

  const Result multi = run({"decompose", path("nested.oracle.json"), "--points", path("two_type.points.json"), "--to",
                            "basis", "--bound", "2,4"});
  REQUIRE(multi.code == 0);
  for (const auto& p : Json::parse(multi.out)["points"]) CHECK(p["direct_vs_coupling"].get<double>() <= 1e-9);
}

TEST_CASE("decompose basis needs a finite bound") {
  const Result inf = run({"decompose", path("exponential.oracle.json"), "--points", path("power_2.points.json"), "--to",
                          "basis", "--bound", "3"});
  CHECK(inf.code == 2);
  CHECK(inf.err.find("finite support bound required") != std::string::npos);
  const Result missing = run({"decompose", path("power_2.oracle.json"), "--points", path("power_2.points.json"), "--to", "basis"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("finite support bound required") != std::string::npos);
  CHECK(run({"decompose", path("power_2.oracle.json"), "--points", path("power_2.points.json"), "--to", "basis", "--bound", "1"})
            .code == 2);
  const Result coupling = run({"decompose", path("exponential.oracle.json"), "--points", path("power_2.points.json")});
  CHECK(coupling.code == 0);
}

TEST_CASE("stirling tables") {
  const Result r = run({"stirling", "--kind", "1", "--max", "5"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["rows"][5] == Json::parse("[0,24,50,35,10,1]"));
  const Json r1 = Json::parse(run({"stirling", "--kind", "r1", "--r", "2", "--max", "4"}).out);
  CHECK(r1["rows"][2] == Json::parse("[0,0,1]"));
  const Json s2 = Json::parse(run({"stirling", "--kind", "2", "--max", "4"}).out);
  CHECK(s2["rows"][4] == Json::parse("[0,1,7,6,1]"));
  CHECK(run({"stirling", "--max", "65"}).code == 2);
  CHECK(run({"stirling", "--kind", "3"}).code == 2);
}

TEST_CASE("stirling rows beyond 64 bits stay exact") {
  const Result r = run({"stirling", "--kind", "1", "--max", "64"});
  REQUIRE(r.code == 0);
  // 63! as the last row's k = 1 entry
  CHECK(r.out.find("[0,1982608315404440064116146708361898137544773690227268628106279599612729753600000000000000,") !=
        std::string::npos);
}

TEST_CASE("stirling check") {
  const Result r = run({"stirling", "--max", "12", "--check"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["check"]["ok"] == true);
  CHECK(j["check"]["identities"].size() >= 20);
}

TEST_CASE("simulate") {
  const Result zero = run({"simulate", path("edge_merging_b.network.json"), path("decay.oracle.json"),
                           path("edge_merging_b.x0.json"), "--dt", "0.1", "--steps", "3"});
  CHECK(zero.code == 2);  // one oracle for a two-type network

  const fs::path zero_oracle = scratch("zero.oracle.json");
  std::ofstream(zero_oracle) << R"({"type_index":1,"family":"polynomial_multi","params":{"coeffs":[]},"f0":"zero"})";
  const Result flat = run({"simulate", path("decay.network.json"), zero_oracle.string(), path("decay.x0.json"), "--dt",
                           "0.5", "--steps", "4"});
  REQUIRE(flat.code == 0);
  for (const auto& s : Json::parse(flat.out)) CHECK(s[0][0] == 1.0);

  const Result decay = run({"simulate", path("decay.network.json"), path("decay.oracle.json"), path("decay.x0.json"),
                            "--dt", "0.1", "--steps", "10"});
  REQUIRE(decay.code == 0);
  const Json traj = Json::parse(decay.out);
  CHECK(traj.size() == 11);
  CHECK(std::abs(traj[10][0][0].get<double>() - std::exp(-1.0)) < 1e-6);

  CHECK(run({"simulate", path("decay.network.json"), path("decay.oracle.json"), path("decay.x0.json"), "--dt", "0"}).code == 2);
  CHECK(run({"simulate", path("decay.network.json"), path("decay.oracle.json"), path("decay.x0.json"), "--dt", "-1"}).code == 2);

  const fs::path blow = scratch("blow.oracle.json");
  std::ofstream(blow) << R"({"type_index":1,"family":"polynomial_multi","params":{"coeffs":[]},"f0":"linear:900"})";
  const Result div = run({"simulate", path("decay.network.json"), blow.string(), path("decay.x0.json"), "--dt", "1",
                          "--steps", "500"});
  CHECK(div.code == 1);
  CHECK(Json::parse(div.out)["step"].get<int>() > 0);
  CHECK(div.err.find("step") != std::string::npos);
}

TEST_CASE("simulate the edge-merging pair") {
  const auto final_c = [](const std::string& net, const std::string& x0) {
    const Result r = run({"simulate", path(net), path("edge_merging.oracle.json"), path(x0), "--dt", "0.05", "--steps", "20"});
    REQUIRE(r.code == 0);
    return Json::parse(r.out).back()[0][0].get<double>();
  };
  CHECK(std::abs(final_c("edge_merging_a.network.json", "edge_merging_a.x0.json") -
                 final_c("edge_merging_b.network.json", "edge_merging_b.x0.json")) <= 1e-9);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args{"--seed", "17", "--trials", "300", "verify", path("two_type.network.json"),
                                      path("two_type.oracle.json")};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> bad{"--seed", "3", "--trials", "300", "verify", path("free_parallel.network.json"),
                                     path("broken_merge.oracle.json")};
  CHECK(run(bad).out == run(bad).out);
}

TEST_CASE("--out writes the report to a file") {
  const fs::path out = scratch("table.json");
  fs::remove(out);
  const Result r = run({"--out", out.string(), "stirling", "--max", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  const Json j = Json::parse(f);
  CHECK(j["rows"][3] == Json::parse("[0,2,3,1]"));
}
