#include <doctest.h>

#include <cmath>
#include <random>

#include "jdl/jets.hpp"
#include "support.hpp"

using namespace jdl;
using jdl::testing::fd_partial;
using jdl::testing::fd_second;

namespace {
Field x() { return coord(0); }
Field y() { return coord(1); }
}  // namespace

TEST_CASE("jet_lift of x^2 y at (2,3)") {
  ScalarFieldSpec f{2, x() * x() * y(), {}};
  Jet j = jet_lift(f, {2.0, 3.0}, 2);
  CHECK(j.value() == doctest::Approx(12.0));
  CHECK(j.d(0) == doctest::Approx(12.0));
  CHECK(j.d(1) == doctest::Approx(4.0));
  CHECK(j.d(0, 0) == doctest::Approx(6.0));
  CHECK(j.d(0, 1) == doctest::Approx(4.0));
  CHECK(j.d(1, 0) == doctest::Approx(4.0));
  CHECK(j.d(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("constant and identity jets") {
  ScalarFieldSpec one{3, constant(1.0), {}};
  Jet j = jet_lift(one, {0.3, -2.0, 5.0}, 2);
  CHECK(j.value() == 1.0);
  CHECK(j.grad().norm() == 0.0);
  CHECK(j.hess().norm() == 0.0);

  ScalarFieldSpec id{1, x(), {}};
  Jet k = jet_lift(id, {5.0}, 2);
  CHECK(k.value() == 5.0);
  CHECK(k.d(0) == 1.0);
  CHECK(k.d(0, 0) == 0.0);
}

TEST_CASE("jet_lift rejects bad orders and domains") {
  ScalarFieldSpec f{1, x(), [](const Coords& p) { return p[0] > 0; }};
  CHECK_THROWS_AS(jet_lift(f, {1.0}, 0), OrderUnsupported);
  CHECK_THROWS_AS(jet_lift(f, {1.0}, 4), OrderUnsupported);
  CHECK_THROWS_AS(jet_lift(f, {-1.0}, 2), DomainViolation);
  CHECK_NOTHROW(jet_lift(f, {1.0}, 3));
}

TEST_CASE("elementary functions raise DomainViolation instead of NaN") {
  auto v = variables({-1.0, 0.0}, 2);
  CHECK_THROWS_AS(log(v[0]), DomainViolation);
  CHECK_THROWS_AS(sqrt(v[0]), DomainViolation);
  CHECK_THROWS_AS(sqrt(v[1]), DomainViolation);
  CHECK_THROWS_AS(1.0 / v[1], DomainViolation);
  CHECK_THROWS_AS(pow(v[0], 0.5), DomainViolation);
  CHECK_THROWS_AS(atan2(v[1], v[1]), DomainViolation);
  CHECK_NOTHROW(pow(v[0], 3.0));
}

TEST_CASE("jet_compose: (x+y)^2 at (1,2)") {
  ScalarFieldSpec g{1, x() * x(), {}};
  auto v = variables({1.0, 2.0}, 2);
  std::vector<Jet> F{v[0] + v[1]};
  Jet j = jet_compose(g, F);
  CHECK(j.value() == doctest::Approx(9.0));
  CHECK(j.d(0) == doctest::Approx(6.0));
  CHECK(j.d(1) == doctest::Approx(6.0));
  CHECK(j.d(0, 0) == doctest::Approx(2.0));
  CHECK(j.d(0, 1) == doctest::Approx(2.0));
  CHECK(j.d(1, 1) == doctest::Approx(2.0));

  ScalarFieldSpec idg{1, x(), {}};
  CHECK(jet_compose(idg, F).coeffs() == F[0].coeffs());
  ScalarFieldSpec c{1, constant(2.5), {}};
  Jet cj = jet_compose(c, F);
  CHECK(cj.value() == 2.5);
  CHECK(cj.grad().norm() == 0.0);

  ScalarFieldSpec two{2, x() * y(), {}};
  CHECK_THROWS_AS(jet_compose(two, F), DimensionMismatch);
  std::vector<Jet> mixed{v[0], Jet::variable(2, 1, 1, 2.0)};
  CHECK_THROWS_AS(jet_compose(two, mixed), DimensionMismatch);
}

TEST_CASE("property: jets match central finite differences on random fields") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 4;
    Field f = jdl::testing::random_smooth(rng, dim);
    Coords p = jdl::testing::random_point(rng, dim, -0.8, 0.8);
    Jet j = jet_at(f, p, 2);
    auto fv = [&](const Coords& q) { return value_at(f, q); };
    for (int i = 0; i < dim; ++i) {
      const double g = fd_partial(fv, p, i);
      CHECK(std::abs(j.d(i) - g) <= 1e-5 * std::max(1.0, std::abs(g)));
      for (int k = 0; k < dim; ++k) {
        const double h = fd_second(fv, p, i, k);
        CHECK(std::abs(j.d(i, k) - h) <= 1e-5 * std::max(1.0, std::abs(h)) + 1e-5);
      }
    }
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("property: order 1 and order 2 agree on value and gradient") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    Field f = jdl::testing::random_smooth(rng, 3);
    Coords p = jdl::testing::random_point(rng, 3, -0.8, 0.8);
    Jet a = jet_at(f, p, 1), b = jet_at(f, p, 2);
    CHECK(a.value() == b.value());
    CHECK((a.grad() - b.grad()).norm() == 0.0);
  }
}

TEST_CASE("property: product rule is exact for polynomials") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    Field f = jdl::testing::random_polynomial(rng, 3, 3);
    Field g = jdl::testing::random_polynomial(rng, 3, 3);
    Coords p = jdl::testing::random_point(rng, 3);
    Jet fg = jet_at(f * g, p, 2);
    Jet jf = jet_at(f, p, 2), jg = jet_at(g, p, 2);
    Jet prod = jf * jg;
    // Hand product rule as the oracle.
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(fg.d(i) - (jf.d(i) * jg.value() + jf.value() * jg.d(i))) < 1e-12);
      for (int k = 0; k < 3; ++k) {
        const double want = jf.d(i, k) * jg.value() + jf.d(i) * jg.d(k) + jf.d(k) * jg.d(i) +
                            jf.value() * jg.d(i, k);
        CHECK(std::abs(fg.d(i, k) - want) < 1e-12);
        CHECK(std::abs(prod.d(i, k) - fg.d(i, k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("property: composition is associative") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    Field h = jdl::testing::random_smooth(rng, 1);
    Field g = jdl::testing::random_smooth(rng, 1);
    Field F = jdl::testing::random_polynomial(rng, 2, 2);
    Coords p = jdl::testing::random_point(rng, 2, -0.5, 0.5);
    auto v = variables(p, 3);
    std::vector<Jet> Fj{F(v)};
    std::vector<Jet> hj{h(Fj)};
    Jet nested = g(hj);
    Field gh([g, h](std::span<const Jet> xs) {
      std::vector<Jet> inner{h(xs)};
      return g(inner);
    });
    Jet direct = gh(Fj);
    for (std::size_t k = 0; k < direct.coeffs().size(); ++k)
      CHECK(std::abs(direct.coeffs()[k] - nested.coeffs()[k]) < 1e-12);
  }
}

TEST_CASE("hessian storage is exactly symmetric and order-3 data is right") {
  Field f = sin(x() * y()) * exp(y());
  Jet j = jet_at(f, {0.4, -0.3}, 3);
  Eigen::MatrixXd h = j.hess();
  CHECK((h - h.transpose()).norm() == 0.0);
  // d^3/dx^2 dy of sin(xy) e^y, hand formula.
  const double X = 0.4, Y = -0.3, s = std::sin(X * Y), c = std::cos(X * Y);
  const double fxx = -Y * Y * s * std::exp(Y);
  const double fxxy = (-2 * Y * s - Y * Y * X * c) * std::exp(Y) + fxx;
  CHECK(j.d(0, 0, 1) == doctest::Approx(fxxy).epsilon(1e-12));
  CHECK(j.d(1, 0, 0) == doctest::Approx(fxxy).epsilon(1e-12));
}

TEST_CASE("atan2 follows the branch of the base point") {
  auto v = variables({-1.0, 1e-3}, 2);
  Jet a = atan2(v[1], v[0]);
  CHECK(a.value() == doctest::Approx(std::atan2(1e-3, -1.0)));
  // d atan2(y,x)/dx = -y/(x^2+y^2)
  CHECK(a.d(0) == doctest::Approx(-1e-3 / (1.0 + 1e-6)));
  CHECK(a.d(1) == doctest::Approx(-1.0 / (1.0 + 1e-6)));
}

TEST_CASE("derived fields give exact derivatives of derivatives") {
  Field f = x() * x() * x() * y();
  Field fx = partial_field(f, 0);  // 3 x^2 y
  Jet j = jet_at(fx, {2.0, 5.0}, 2);
  CHECK(j.value() == doctest::Approx(60.0));
  CHECK(j.d(0) == doctest::Approx(60.0));
  CHECK(j.d(1) == doctest::Approx(12.0));
  CHECK(j.d(0, 0) == doctest::Approx(30.0));
  CHECK(j.d(0, 1) == doctest::Approx(12.0));
  // Composition through a derived field.
  auto v = variables({1.0}, 2);
  std::vector<Jet> F{v[0] * v[0], v[0] + 1.0};  // (t^2, t+1) at t=1 -> (1, 2)
  Jet c = fx(F);  // 3 t^4 (t+1)
  CHECK(c.value() == doctest::Approx(6.0));
  CHECK(c.d(0) == doctest::Approx(12.0 * 2 + 3.0));
  CHECK(c.d(0, 0) == doctest::Approx(36.0 * 2 + 24.0));
}

TEST_CASE("linear solve with jet coefficients") {
  auto v = variables({0.5, 3.0}, 2);
  // [[x, 1],[1, y]] z = [1, 0]
  std::vector<Jet> A{v[0], Jet::like(v[0], 1.0), Jet::like(v[0], 1.0), v[1]};
  std::vector<Jet> b{Jet::like(v[0], 1.0), Jet::like(v[0], 0.0)};
  auto z = solve_linear(A, b);
  // z0 = y/(xy-1)
  Jet want = v[1] / (v[0] * v[1] - 1.0);
  for (std::size_t k = 0; k < want.coeffs().size(); ++k)
    CHECK(z[0].coeffs()[k] == doctest::Approx(want.coeffs()[k]).epsilon(1e-12));
  std::vector<Jet> S{v[0], v[0], v[0], v[0]};
  CHECK_THROWS_AS(solve_linear(S, b), SingularSystem);
}
