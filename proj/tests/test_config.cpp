#include <doctest.h>

#include <string>

#include "jdl/errors.hpp"
#include "jdl/suite.hpp"
#include "jdl_cli/config.hpp"

using namespace jdl;
using jdl::cli::parse_config;

namespace {
const char* kTriv = R"(examples:
  - id: t
    charts:
      M: {vars: [q, p, u], box: [[-1, 1], [-1, 1], [-1, 1]]}
      R: {vars: [x], box: [[-1, 1]]}
    contact: {chart: M, theta: [p, 0, 1]}
    pairs:
      zero: {chart: R}
    dual_pair:
      leg1: {target: zero, map: [q]}
      leg2: {target: point}
    expected:
      curvature-orthogonality: fail
)";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "c.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("a config example matches the catalog control it copies") {
  const auto es = parse_config(kTriv);
  REQUIRE(es.size() == 1);
  const CatalogEntry& e = es[0];
  CHECK(e.kind == EntryKind::DualPair);
  CHECK(e.dual_pairs.size() == 1);
  CHECK(e.dual_pairs[0].leg2.target.dim() == 0);
  SuiteOptions o;
  o.samples = 20;
  const auto mine = run_suite("dualpair", e, o);
  const auto theirs = run_suite("dualpair", catalog::get("broken-orth"), o);
  REQUIRE(mine.size() == theirs.size());
  for (std::size_t i = 0; i < mine.size(); ++i) {
    CHECK(mine[i].id == theirs[i].id);
    CHECK(mine[i].status == theirs[i].status);
  }
  CHECK(e.expected_status("curvature-orthogonality") == Status::Fail);
}

TEST_CASE("Pi keys and ordering") {
  const auto es = parse_config(R"y(examples:
  - id: p
    charts:
      P: {vars: [a, b], box: [[-1, 1], [-pi/4, pi/4]]}
    pairs:
      J: {chart: P, Pi: {"b a": "exp(a)"}}
)y");
  const JacobiPair& J = es[0].pairs[0];
  CHECK(value_at(J.Pi.at({0, 1}), {0.0, 0.0}) == doctest::Approx(-1.0));
  CHECK(J.chart.box[1].hi == doctest::Approx(0.7853981633974483));
}

TEST_CASE("config errors name line and column") {
  CHECK(error_of("examples: [\n") .find("c.yaml:2:1") != std::string::npos);
  const std::string bad_expr = R"y(examples:
  - id: b
    charts:
      M: {vars: [x, y, z], box: [[-1, 1], [-1, 1], [-1, 1]]}
    contact: {chart: M, theta: [-y, 0, "1 + q"]}
)y";
  CHECK(error_of(bad_expr).find("c.yaml:5:45: unknown variable 'q'") != std::string::npos);
  CHECK(error_of("examples:\n  - id: b\n    charts: {}\n    colour: red\n").find("c.yaml:4:5: unknown key 'colour'") !=
        std::string::npos);
  CHECK(error_of("examples:\n  - id: b\n    charts:\n      M: {vars: [x], box: [[1, -1]]}\n    pairs: {J: {chart: M}}\n")
            .find("lo < hi") != std::string::npos);
  CHECK(error_of("examples:\n  - id: b\n    charts:\n      M: {vars: [x, y, z], box: [[-1, 1], [-1, 1], [-1, 1]]}\n"
                 "    contact: {chart: M, theta: [0, 1]}\n")
            .find("theta needs 3 entries") != std::string::npos);
  CHECK(error_of("examples:\n  - id: b\n    charts:\n      M: {vars: [x], box: [[-1, 1]]}\n"
                 "    pairs: {J: {chart: N}}\n")
            .find("unknown chart 'N'") != std::string::npos);
  CHECK_FALSE(error_of(kTriv + std::string("  - id: t\n    charts: {}\n")).empty());
}
