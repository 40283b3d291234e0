#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jdl_cli/cli.hpp"

using jdl::cli::run_cli;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Drops wall-time fields so reports can be compared byte for byte.
std::string without_wall_time(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.find("\"wall_ms\"") == std::string::npos) out += line + "\n";
  return out;
}
}  // namespace

TEST_CASE("dualpair suite on triv-gpd") {
  const auto r = run({"run", "--suite", "dualpair", "--example", "triv-gpd", "--seed", "42"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["seed"] == 42);
  REQUIRE(j["entries"].size() == 1);
  const auto& checks = j["entries"][0]["checks"];
  CHECK(checks.size() == 7);
  for (const auto& c : checks) CHECK(c["status"] == "pass");
  for (const char* key : {"id", "anchor", "status", "max_residual", "worst_point", "samples", "tolerance", "wall_ms"})
    CHECK(checks[0].contains(key));
}

TEST_CASE("expected failures exit 0") {
  const auto r = run({"run", "--suite", "dualpair", "--example", "broken-orth", "--samples", "30"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"status\": \"fail\"") != std::string::npos);
}

TEST_CASE("a verdict mismatch exits 1") {
  const char* path = "cli_mismatch.yaml";
  {
    std::ofstream f(path);
    f << "examples:\n  - id: wrong\n    charts:\n      M: {vars: [q, p, u], box: [[-1, 1], [-1, 1], [-1, 1]]}\n"
         "      R: {vars: [x], box: [[-1, 1]]}\n    contact: {chart: M, theta: [p, 0, 1]}\n"
         "    pairs: {zero: {chart: R}}\n"
         "    dual_pair:\n      leg1: {target: zero, map: [q]}\n      leg2: {target: point}\n";
  }
  const auto r = run({"run", "--config", path, "--example", "wrong", "--suite", "dualpair", "--samples", "20"});
  CHECK(r.code == 1);
  CHECK(r.err.find("wrong/curvature-orthogonality") != std::string::npos);
  std::remove(path);
}

TEST_CASE("config errors exit 2") {
  CHECK(run({"run", "--suite", "nope"}).code == 2);
  CHECK(run({"run", "--example", "nope"}).code == 2);
  CHECK(run({"run", "--samples", "0"}).code == 2);
  CHECK(run({"run", "--tol", "-1"}).code == 2);
  CHECK(run({"run", "--jet-order", "5"}).code == 2);
  CHECK(run({"run", "--format", "xml"}).code == 2);
  CHECK(run({"run", "--samples", "many"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"run", "--config", "/nonexistent.yaml"}).code == 2);
  CHECK(run({"describe", "nope"}).code == 2);
}

TEST_CASE("list, describe and text output") {
  const auto l = run({"list"});
  CHECK(l.code == 0);
  CHECK(l.out.find("hopf") != std::string::npos);
  const auto d = run({"describe", "broken-orth"});
  CHECK(d.code == 0);
  CHECK(d.out.find("curvature-orthogonality=fail") != std::string::npos);
  const auto t = run({"run", "--suite", "jacobi", "--example", "broken-jacobi-pair", "--format", "text"});
  CHECK(t.code == 0);
  CHECK(t.out.find("(expected fail)") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from wall time") {
  const std::vector<std::string> args{"run", "--suite", "all", "--example", "hopf", "--example", "triv-gpd",
                                      "--samples", "20", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(without_wall_time(a.out) == without_wall_time(b.out));
  auto c = args;
  c.back() = "8";
  CHECK(without_wall_time(run(c).out) != without_wall_time(a.out));
}

TEST_CASE("trace csv and report file") {
  const char* csv = "cli_trace.csv";
  const char* rep = "cli_report.json";
  const auto r = run({"run", "--suite", "leaves", "--example", "lie-poisson-so3", "--samples", "10", "--trace-csv", csv,
                      "--out", rep});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "step,x0,x1,x2,rank,f0");
  std::ifstream g(rep);
  CHECK(nlohmann::json::parse(g)["entries"][0]["example"] == "lie-poisson-so3");
  std::remove(csv);
  std::remove(rep);
}
