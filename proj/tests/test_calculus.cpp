#include <doctest.h>

#include <cmath>
#include <random>

#include "jdl/calculus.hpp"
#include "support.hpp"

using namespace jdl;

namespace {
Field X0() { return coord(0); }
Field X1() { return coord(1); }
Field X2() { return coord(2); }
Field zero() { return {}; }

// darboux3: theta = dz - y dx on (x, y, z).
KForm theta3() { return one_form({-X1(), zero(), constant(1.0)}); }
Multivector pi3() {
  Multivector A = vector_field({constant(1.0), zero(), X1()});
  Multivector B = vector_field({zero(), constant(1.0), zero()});
  return wedge(A, B);
}
Multivector reeb3() { return vector_field({zero(), zero(), constant(1.0)}); }

Multivector random_vf(std::mt19937_64& rng, int n, int deg) {
  std::vector<Field> c;
  for (int i = 0; i < n; ++i) c.push_back(jdl::testing::random_polynomial(rng, n, deg));
  return vector_field(c);
}
Multivector random_bv(std::mt19937_64& rng, int n, int deg) {
  Multivector P = AltField::zero(AltKind::Multivector, n, 2);
  for (auto& c : P.comp) c = jdl::testing::random_polynomial(rng, n, deg);
  return P;
}
KForm random_form(std::mt19937_64& rng, int n, int k) {
  KForm w = AltField::zero(AltKind::Form, n, k);
  for (auto& c : w.comp) c = jdl::testing::random_smooth(rng, n);
  return w;
}
}  // namespace

TEST_CASE("exterior derivative examples") {
  KForm xdy = one_form({zero(), X0()});
  CHECK(evaluate(exterior_d(xdy), {0.3, 0.4}).at({0, 1}) == doctest::Approx(1.0));
  Field f = X0() * X0() * X1();
  CHECK(evaluate(exterior_d(differential(2, f)), {1.5, -0.5}).max_abs() < 1e-12);
  auto dth = evaluate(exterior_d(theta3()), {0.2, 0.7, -1.0});
  CHECK(dth.at({0, 1}) == doctest::Approx(1.0));
  CHECK(dth.at({1, 0}) == doctest::Approx(-1.0));
  CHECK(dth.at({0, 2}) == 0.0);
}

TEST_CASE("lie bracket examples") {
  Multivector dx = vector_field({constant(1.0), zero()});
  Multivector dy = vector_field({zero(), constant(1.0)});
  CHECK(evaluate(lie_bracket(dx, dy), {0.1, 0.2}).max_abs() == 0.0);
  Multivector xdy = vector_field({zero(), X0()});
  auto b = evaluate(lie_bracket(xdy, dx), {0.3, 0.9}).vec();
  CHECK(b(0) == doctest::Approx(0.0));
  CHECK(b(1) == doctest::Approx(-1.0));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    Multivector X = random_vf(rng, 3, 3);
    CHECK(evaluate(lie_bracket(X, X), jdl::testing::random_point(rng, 3)).max_abs() < 1e-12);
  }
}

TEST_CASE("darboux3 pins the Schouten normalization") {
  Multivector P = pi3();
  Coords p{0.3, -0.8, 1.1};
  auto pv = evaluate(P, p);
  CHECK(pv.at({0, 1}) == doctest::Approx(1.0));
  CHECK(pv.at({1, 2}) == doctest::Approx(-p[1]));
  CHECK(pv.at({0, 2}) == doctest::Approx(0.0));
  auto lhs = evaluate(schouten(P, P), p);
  auto rhs = evaluate(2.0 * wedge(reeb3(), P), p);
  CHECK(lhs.at({0, 1, 2}) == doctest::Approx(2.0));
  CHECK((lhs - rhs).max_abs() < 1e-12);
  CHECK(evaluate(schouten(reeb3(), P), p).max_abs() < 1e-12);
  // (2,1) is minus (1,2).
  CHECK((evaluate(schouten(P, reeb3()), p) - (-1.0) * evaluate(schouten(reeb3(), P), p)).max_abs() < 1e-14);
  CHECK(evaluate(schouten(bivector(2, {{zero(), constant(1.0)}}), bivector(2, {{zero(), constant(1.0)}})), {0.1, 0.2}).max_abs() == 0.0);
}

TEST_CASE("so(3)* Lie-Poisson bivector is Poisson") {
  Multivector P = bivector(3, {{zero(), X2(), -X1()}, {zero(), zero(), X0()}});
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t)
    CHECK(evaluate(schouten(P, P), jdl::testing::random_point(rng, 3)).max_abs() < 1e-12);
  CHECK_THROWS_AS(schouten(P, schouten(P, P)), DegreeUnsupported);
}

TEST_CASE("interior, pullback and Lie derivative examples") {
  Coords p{0.4, 0.5, -0.6};
  CHECK(value_at(interior(reeb3(), theta3()).comp[0], p) == doctest::Approx(1.0));
  CHECK(evaluate(lie_derivative(reeb3(), theta3()), p).max_abs() < 1e-14);
  // Unit map q -> (q, 0, 0) into (q, p, u) with du + p dq.
  Chart Q = euclidean("Q", 1), G = euclidean("G", 3);
  SmoothMap unit{"unit", Q, G, {X0(), constant(0.0), constant(0.0)}};
  KForm w = one_form({X1(), zero(), constant(1.0)});
  CHECK(evaluate(pullback_form(unit, w), {0.3}).max_abs() == 0.0);
}

TEST_CASE("property: d squared vanishes") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 3;
    const int k = n == 2 ? 0 : t % 2;
    KForm w = random_form(rng, n, k);
    auto r = evaluate(exterior_d(exterior_d(w)), jdl::testing::random_point(rng, n, -0.7, 0.7));
    CHECK(r.max_abs() < 1e-10);
  }
}

TEST_CASE("property: pullback commutes with d") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 2, n = 3;
    Chart S = euclidean("S", m, 2.0), T = euclidean("T", n, 50.0);
    SmoothMap F{"F", S, T, {}};
    for (int i = 0; i < n; ++i) F.components.push_back(jdl::testing::random_smooth(rng, m));
    KForm w = random_form(rng, n, t % 2);
    Coords p = jdl::testing::random_point(rng, m, -0.6, 0.6);
    auto a = evaluate(exterior_d(pullback_form(F, w)), p);
    auto b = evaluate(pullback_form(F, exterior_d(w)), p);
    CHECK((a - b).max_abs() < 1e-9 * std::max(1.0, b.max_abs()));
  }
}

TEST_CASE("property: Cartan formula agrees with the coordinate Lie derivative on 1-forms") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    Multivector X = random_vf(rng, 3, 2);
    KForm a = random_form(rng, 3, 1);
    Coords p = jdl::testing::random_point(rng, 3, -0.7, 0.7);
    // (L_X a)_i = X^l d_l a_i + a_l d_i X^l
    auto L = evaluate(lie_derivative(X, a), p).vec();
    for (int i = 0; i < 3; ++i) {
      double want = 0;
      for (int l = 0; l < 3; ++l)
        want += value_at(X.comp[l], p) * gradient_at(a.comp[i], p)(l) +
                value_at(a.comp[l], p) * gradient_at(X.comp[l], p)(i);
      CHECK(L(i) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: graded Jacobi identities of the Schouten bracket") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 15; ++t) {
    const int n = 3 + t % 2;
    Coords p = jdl::testing::random_point(rng, n);
    Multivector X = random_vf(rng, n, 2), Y = random_vf(rng, n, 2), Z = random_vf(rng, n, 2);
    auto j1 = evaluate(lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
                           lie_bracket(Z, lie_bracket(X, Y)),
                       p);
    CHECK(j1.max_abs() < 1e-10);
    // [X,[Y,P]] - [Y,[X,P]] = [[X,Y],P]
    Multivector P = random_bv(rng, n, 2);
    auto j2 = evaluate(schouten(X, schouten(Y, P)) - schouten(Y, schouten(X, P)) -
                           schouten(lie_bracket(X, Y), P),
                       p);
    CHECK(j2.max_abs() < 1e-10);
    // [X,[P,P]] = 2 [[X,P],P]
    auto j3 = evaluate(lie_derivative_mv(X, schouten(P, P)) - 2.0 * schouten(schouten(X, P), P), p);
    CHECK(j3.max_abs() < 1e-9);
  }
  // Constant-coefficient multivectors: every bracket is zero.
  Multivector C = bivector(3, {{zero(), constant(0.3), constant(-1.2)}, {zero(), zero(), constant(2.0)}});
  Multivector V = vector_field({constant(1.0), constant(-2.0), constant(0.5)});
  CHECK(evaluate(schouten(C, C), {0.1, 0.2, 0.3}).max_abs() == 0.0);
  CHECK(evaluate(schouten(V, C), {0.1, 0.2, 0.3}).max_abs() == 0.0);
}

TEST_CASE("wedge and evaluation conventions") {
  Multivector A = vector_field({constant(2.0), constant(3.0)});
  Multivector B = vector_field({constant(5.0), constant(7.0)});
  CHECK(evaluate(wedge(A, B), {0, 0}).at({0, 1}) == doctest::Approx(2 * 7 - 3 * 5));
  KForm a = one_form({constant(1.0), constant(0.0)}), b = one_form({constant(0.0), constant(1.0)});
  KForm ab = wedge(a, b);
  CHECK(value_at(eval_form(ab, {A, B}), {0, 0}) == doctest::Approx(2 * 7 - 3 * 5));
  Multivector P = wedge(A, B);
  CHECK(value_at(eval_multivector(P, {a, b}), {0, 0}) == doctest::Approx(2 * 7 - 3 * 5));
  // Pi^sharp alpha = Pi(alpha, .)
  auto s = evaluate(contract(a, P), {0, 0}).vec();
  CHECK(s(1) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(interior(a, ab), DimensionMismatch);
}
