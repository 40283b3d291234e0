#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jdl/linalg.hpp"

using namespace jdl;

namespace {
Eigen::VectorXd e(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

Eigen::MatrixXd random_antisym(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  return A - A.transpose();
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) A(i, j) = g(rng);
  return A;
}
}  // namespace

TEST_CASE("sum, intersect, annihilator on coordinate subspaces") {
  auto s = sum(span_of({e(3, 0)}, 3), span_of({e(3, 1)}, 3));
  CHECK(s.dim() == 2);
  auto i = intersect(span_of({e(3, 0), e(3, 1)}, 3), span_of({e(3, 1), e(3, 2)}, 3));
  CHECK(i.dim() == 1);
  CHECK(subspace_equal(i, span_of({e(3, 1)}, 3)).equal);
  auto a = annihilator(span_of({e(3, 0)}, 3));
  CHECK(subspace_equal(a, span_of({e(3, 1), e(3, 2)}, 3)).equal);
  CHECK(span_of({Eigen::Vector3d::Zero()}, 3).dim() == 0);
  CHECK_THROWS_AS(sum(whole_space(2), whole_space(3)), DimensionMismatch);
}

TEST_CASE("basis is orthonormal") {
  std::mt19937_64 rng(1);
  auto U = span_of(random_matrix(rng, 6, 3));
  CHECK((U.basis.transpose() * U.basis - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("orthogonal complements wrt a form") {
  BilinearForm w{2, Eigen::Matrix2d{{0, 1}, {-1, 0}}};
  auto L = span_of({e(2, 0)}, 2);
  CHECK(subspace_equal(orth_complement_wrt(w, L, whole_space(2)), L).equal);
  CHECK(orth_complement_wrt(w, whole_space(2), whole_space(2)).dim() == 0);

  // Fibre of the trivial groupoid: coordinates (q, p, u), within = span{dp, dq - p du}.
  const double p = 0.7;
  Eigen::Vector3d dp(0, 1, 0), dq(1, 0, -p);
  auto within = span_of({dp, dq}, 3);
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  // B(dp, dq - p du) = -1 after restriction; realize it with an ambient form.
  B(1, 0) = -1;
  B(0, 1) = 1;
  BilinearForm c{3, B};
  CHECK(c(dp, dq) == doctest::Approx(-1.0));
  auto P = span_of({dp}, 3);
  CHECK(subspace_equal(orth_complement_wrt(c, P, within), P).equal);

  auto out = span_of({Eigen::Vector3d(0, 0, 1)}, 3);
  CHECK_THROWS_AS(orth_complement_wrt(c, out, within), NotContained);
}

TEST_CASE("subspace_equal angles") {
  auto a = span_of({e(2, 0)}, 2);
  auto r = subspace_equal(a, a);
  CHECK(r.equal);
  CHECK(r.max_angle == doctest::Approx(0.0));
  r = subspace_equal(a, span_of({e(2, 1)}, 2));
  CHECK(!r.equal);
  CHECK(r.max_angle == doctest::Approx(std::numbers::pi / 2));
  Eigen::Vector2d tilted(1.0, 1e-9);
  CHECK(subspace_equal(a, span_of({tilted}, 2)).equal);
}

TEST_CASE("property: complement dimension and double complement") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const int n = 6;
    const int w = 2 * (1 + t % 3);  // even so a generic antisymmetric form is nondegenerate
    auto within = span_of(random_matrix(rng, n, w));
    BilinearForm B{n, random_antisym(rng, n)};
    const int k = 1 + t % w;
    auto U = span_of(within.basis * random_matrix(rng, w, k));
    auto C = orth_complement_wrt(B, U, within);
    CHECK(C.dim() == w - U.dim());
    auto CC = orth_complement_wrt(B, C, within);
    CHECK(subspace_equal(CC, U).equal);
  }
}
