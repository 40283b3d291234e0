#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jdl/chart.hpp"
#include "jdl_cli/expr.hpp"

using namespace jdl;
using jdl::cli::ExpressionError;
using jdl::cli::parse_constant;
using jdl::cli::parse_expression;

namespace {
const std::vector<std::string> xyz{"x", "y", "z"};

double at(const std::string& s, const Coords& p) { return value_at(parse_expression(s, xyz), p); }

int error_column(const std::string& s) {
  try {
    parse_expression(s, xyz);
  } catch (const ExpressionError& e) {
    return e.column();
  }
  return -1;
}
}  // namespace

TEST_CASE("expressions evaluate like the hand-written functions") {
  const Coords p{0.3, -0.7, 1.1};
  const double x = p[0], y = p[1], z = p[2];
  CHECK(at("x + y * z", p) == doctest::Approx(x + y * z).epsilon(1e-15));
  CHECK(at("(x + y) * z", p) == doctest::Approx((x + y) * z).epsilon(1e-15));
  CHECK(at("-x^2", p) == doctest::Approx(-x * x).epsilon(1e-15));
  CHECK(at("y^3", p) == doctest::Approx(y * y * y).epsilon(1e-15));
  CHECK(at("y^-2", p) == doctest::Approx(1 / (y * y)).epsilon(1e-15));
  CHECK(at("pow(z, 0.5)", p) == doctest::Approx(std::sqrt(z)).epsilon(1e-14));
  CHECK(at("z^x", p) == doctest::Approx(std::pow(z, x)).epsilon(1e-14));
  CHECK(at("exp(x) * sin(y) / cos(z)", p) == doctest::Approx(std::exp(x) * std::sin(y) / std::cos(z)).epsilon(1e-14));
  CHECK(at("log(z) + sqrt(z)", p) == doctest::Approx(std::log(z) + std::sqrt(z)).epsilon(1e-14));
  CHECK(at("atan2(y, x)", p) == doctest::Approx(std::atan2(y, x)).epsilon(1e-14));
  CHECK(at("2 × x ÷ 4 − y", p) == doctest::Approx(x / 2 - y).epsilon(1e-15));
  CHECK(at("1.5e-1 * .5", p) == doctest::Approx(0.075).epsilon(1e-15));
  CHECK(at("x - y - z", p) == doctest::Approx(x - y - z).epsilon(1e-15));
  CHECK(at("x / y / z", p) == doctest::Approx(x / y / z).epsilon(1e-15));
}

TEST_CASE("derivatives come from the jet kernel") {
  const Field f = parse_expression("x * exp(y) + z^2", xyz);
  const Coords p{0.2, 0.4, -0.5};
  const auto g = jet_at(f, p, 1).grad();
  CHECK(g(0) == doctest::Approx(std::exp(0.4)));
  CHECK(g(1) == doctest::Approx(0.2 * std::exp(0.4)));
  CHECK(g(2) == doctest::Approx(-1.0));
}

TEST_CASE("constants") {
  CHECK(parse_constant("2^3^2") == 512);
  CHECK(parse_constant("-pi / 4") == doctest::Approx(-std::numbers::pi / 4));
  CHECK(parse_constant("e") == doctest::Approx(std::numbers::e));
  CHECK(value_at(parse_expression("e", {"e"}), {3.0}) == 3.0);
  CHECK(parse_constant("pow(2, 10)") == 1024);
}

TEST_CASE("errors carry the column") {
  CHECK(error_column("x + w") == 5);
  CHECK(error_column("x +* y") == 4);
  CHECK(error_column("sin(x") == 6);
  CHECK(error_column("foo(x)") == 1);
  CHECK(error_column("atan2(x)") == 1);
  CHECK(error_column("x $ y") == 3);
  CHECK(error_column("") == 1);
  CHECK(error_column("x y") == 3);
  CHECK(error_column("x / 0") == 3);
  CHECK(error_column("log(0) + x") == 1);
  CHECK(error_column("1e") == 2);
}
