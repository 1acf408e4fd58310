#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "tightgap/cli.hpp"

using namespace tightgap;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("usage errors exit 3") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"verify", "bogus"}).code == kExitUsage);
  CHECK(run({"verify", "horn-hard", "--heuristic", "random"}).code == kExitUsage);
  CHECK(run({"constants", "delta"}).code == kExitUsage);
  CHECK(run({"hardness", "maxcut"}).code == kExitUsage);
  CHECK(run({"plot-theta2", "--grid", "1"}).code == kExitUsage);
  CHECK(run({"simulate", "XOR(0.1,0.2;0.3)"}).code == kExitUsage);
  CHECK(run({"simulate", "OR(0,0,-1)", "--samples", "10"}).code == kExitUsage);
  CHECK(run({"constants", "beta", "--precision", "64"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("verify") {
  Run r = run({"verify", "horn-hard"});
  CHECK(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["status"] == "Verified");
  CHECK(j["heuristic"] == "widest");
  CHECK(j["schema_version"] == 1);

  r = run({"verify", "horn-hard", "--max-boxes", "5"});
  CHECK(r.code == kExitFailed);
  CHECK(json::parse(r.out)["status"] == "Aborted");
}

TEST_CASE("constants") {
  Run r = run({"constants", "beta", "--tol", "1e-12"});
  CHECK(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["lo"].get<double>() <= 0.9401656724814047);
  CHECK(j["hi"].get<double>() >= 0.9401656724814047);
  CHECK(run({"constants", "beta", "--tol", "1e-30"}).code == kExitFailed);
}

TEST_CASE("environment and flag precedence") {
  setenv("TIGHTGAP_PRECISION", "64", 1);
  CHECK(run({"constants", "beta"}).code == kExitUsage);
  CHECK(run({"constants", "beta", "--precision", "53"}).code == kExitOk);
  unsetenv("TIGHTGAP_PRECISION");
  setenv("TIGHTGAP_WORKERS", "1", 1);
  CHECK(run({"constants", "beta"}).code == kExitOk);
  unsetenv("TIGHTGAP_WORKERS");
}

TEST_CASE("hardness") {
  Run r = run({"hardness", "horn", "--skip-verify"});
  CHECK(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(!j.contains("certificate"));
  const double expect[] = {0.0858, 0.0858, 0.1737, 0.4831, 0.0858, 0.0858};
  const char* names[] = {"p1", "p2", "p3", "p4", "p5", "p6"};
  for (int k = 0; k < 6; ++k) {
    double lo = j["weights"][names[k]][0], hi = j["weights"][names[k]][1];
    CHECK(std::fabs((lo + hi) / 2 - expect[k]) <= 5e-4);
  }

  r = run({"hardness", "horn"});
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out)["certificate"]["verified"] == true);
}

TEST_CASE("plot-theta2 csv and manifest") {
  auto dir = std::filesystem::temp_directory_path() / "tightgap_cli_test";
  std::filesystem::create_directories(dir);
  auto csv = dir / "theta2.csv";
  Run r = run({"plot-theta2", "--grid", "3", "--out", csv.string()});
  REQUIRE(r.code == kExitOk);
  std::string body = slurp(csv);
  std::istringstream in(body);
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau1,tau2,prob");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    rows.push_back(v);
  }
  REQUIRE(rows.size() == 9);
  // Corner (0,0) is both variables true: p1 + p2 + p3 + p4.
  Run h = run({"hardness", "horn", "--skip-verify"});
  json w = json::parse(h.out)["weights"];
  double sum4 = 0;
  for (const char* n : {"p1", "p2", "p3", "p4"}) sum4 += (w[n][0].get<double>() + w[n][1].get<double>()) / 2;
  CHECK(rows[0][2] == doctest::Approx(sum4).epsilon(1e-9));

  json m = json::parse(slurp(csv.string() + ".manifest.json"));
  CHECK(m["command"] == "plot-theta2");
  CHECK(m["precision_bits"] == 53);
  CHECK(m["outputs"][0]["sha256"] == sha256_hex(body));
  std::filesystem::remove_all(dir);
}

TEST_CASE("simulate") {
  Run r = run({"simulate", "OR(0,0,-1)", "--beta", "0.94", "--samples", "1000000", "--seed", "3"});
  CHECK(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["estimate"].get<double>() == 1.0);

  r = run({"simulate", "theta2", "--samples", "200000"});
  CHECK(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(std::fabs(j["z_score"].get<double>()) <= 4);

  // Same seed, same output.
  CHECK(run({"simulate", "IMPOR(-0.2,0.3;0.1)", "--t1", "0.1", "--t2", "-0.2", "--seed", "9"}).out ==
        run({"simulate", "IMPOR(-0.2,0.3;0.1)", "--t1", "0.1", "--t2", "-0.2", "--seed", "9"}).out);
}
