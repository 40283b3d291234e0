#include <doctest.h>

#include <cmath>
#include <random>

#include "jdl/homogenize.hpp"
#include "support.hpp"

using namespace jdl;

namespace {
Field zero() { return {}; }
Field c(double v) { return constant(v); }
Field x(int i) { return coord(i); }

ContactStructure darboux3() {
  return make_contact(euclidean("darboux3", 3), one_form({-x(1), zero(), c(1)}));
}
ContactStructure triv() { return make_contact(euclidean("triv", 3), one_form({x(1), zero(), c(1)})); }

JacobiPair darboux_pair() {
  Chart ch = euclidean("darboux3", 3);
  return make_jacobi_pair(ch, wedge(vector_field({c(1), zero(), x(1)}), vector_field({zero(), c(1), zero()})),
                          vector_field({zero(), zero(), c(1)}));
}

DualPairLeg proj_leg(const Chart& src, int k) {
  Chart line = euclidean("R", 1);
  return {zero_pair(line), ConformalMap{SmoothMap{"proj", src, line, {coord(k)}}, c(1)}, {}};
}

std::vector<Coords> pts(const Chart& ch, int n = 10) { return sample_points(ch, n, 9); }
}  // namespace

TEST_CASE("slit charts avoid the zero section") {
  Chart S = slit_chart(euclidean("R2", 2));
  CHECK(S.dim == 3);
  int neg = 0;
  for (const auto& p : sample_points(S, 200, 1)) {
    CHECK(std::abs(p[2]) >= 0.5);
    CHECK(std::abs(p[2]) <= 2.0);
    neg += p[2] < 0;
  }
  CHECK(neg > 20);
  CHECK(neg < 180);
}

TEST_CASE("Poissonization of darboux3") {
  auto J = darboux_pair();
  auto H = poissonize(J);
  for (const auto& p : pts(H.chart)) {
    const double s = p[3];
    Eigen::Matrix4d want = Eigen::Matrix4d::Zero();
    want(0, 1) = 1 / s;
    want(2, 1) = p[1] / s;
    want(3, 2) = 1;
    want = (want - want.transpose()).eval();
    CHECK((matrix_at(H.P, p) - want).norm() < 1e-13);
  }
  auto ps = pts(H.chart);
  CHECK(check_poissonization(J, H, ps).passed());
  CHECK(check_bivector_homogeneity(H, ps).passed());
  CHECK(check_jacobi_pair(make_jacobi_pair(H.chart, H.P, AltField::zero(AltKind::Multivector, 4, 1)), ps, 1e-9)
            .passed());
  auto back = dehomogenize(H);
  for (const auto& q : pts(J.chart)) {
    CHECK((matrix_at(back.Pi, q) - matrix_at(J.Pi, q)).norm() < 1e-10);
    CHECK((vector_at(back.E, q) - vector_at(J.E, q)).norm() < 1e-10);
  }
}

TEST_CASE("Poissonization of trivial and Poisson pairs") {
  Chart r2 = euclidean("R2", 2);
  auto Z = poissonize(zero_pair(r2));
  for (const auto& p : pts(Z.chart)) CHECK(matrix_at(Z.P, p).norm() == 0.0);
  auto Pp = make_jacobi_pair(r2, bivector(2, {{zero(), x(0) * x(1) + 1.0}}), vector_field({zero(), zero()}));
  auto H = poissonize(Pp);
  auto ps = pts(H.chart);
  auto PH = make_jacobi_pair(H.chart, H.P, AltField::zero(AltKind::Multivector, 3, 1));
  for (const auto& p : ps) {
    CHECK(matrix_at(H.P, p)(0, 1) == doctest::Approx((p[0] * p[1] + 1) / p[2]));
    CHECK(evaluate(schouten(H.P, H.P), p).max_abs() < 1e-12);
  }
  CHECK(check_jacobi_pair(PH, ps, 1e-10).passed());
}

TEST_CASE("wrong closed form is rejected by the oracle") {
  auto J = darboux_pair();
  auto H = poissonize(J);
  H.P.set({2, 3}, c(1));  // flips the sign of d_s ^ E
  CHECK(check_poissonization(J, H, pts(H.chart)).status == Status::Fail);
}

TEST_CASE("symplectization") {
  auto D = darboux3();
  auto S = symplectize(D);
  for (const auto& p : pts(S.chart)) {
    const double s = p[3];
    // ds ^ dz - y ds ^ dx - s dy ^ dx
    Eigen::Matrix4d want = Eigen::Matrix4d::Zero();
    want(3, 2) = 1;
    want(3, 0) = -p[1];
    want(1, 0) = -s;
    want = (want - want.transpose()).eval();
    CHECK((matrix_at(S.omega, p) - want).norm() < 1e-13);
  }
  CHECK(check_symplectization(S, pts(S.chart)).passed());
  auto T = symplectize(triv());
  for (const auto& p : pts(T.chart)) {
    Eigen::Matrix4d want = Eigen::Matrix4d::Zero();
    want(3, 2) = 1;
    want(3, 0) = p[1];
    want(1, 0) = p[3];
    want = (want - want.transpose()).eval();
    CHECK((matrix_at(T.omega, p) - want).norm() < 1e-13);
  }
  CHECK(check_symplectization(T, pts(T.chart)).passed());

  auto base = pts(D.chart, 6);
  CHECK(check_symplectization_consistency(D, base).passed());
  CHECK(check_symplectization_consistency(triv(), base).passed());
  CHECK(check_symplectization_consistency(make_contact(D.chart, 3.0 * D.theta), base).passed());
}

TEST_CASE("homogenized maps") {
  Chart r3 = euclidean("R3", 3);
  Chart r1 = euclidean("R1", 1);
  ConformalMap phi{SmoothMap{"q", r3, r1, {x(0)}}, exp(0.2 * x(1))};
  auto F = homogenize_map(phi);
  Coords p{0.1, 0.5, -0.3, 1.5};
  auto q = F(p);
  CHECK(q[0] == doctest::Approx(0.1));
  CHECK(q[1] == doctest::Approx(std::exp(0.1) * 1.5));
  CHECK(check_map_equivariance(phi, pts(slit_chart(r3))).passed());
  auto G = homogenize_map(ConformalMap{identity_map(r3), 2.0 + x(0)});
  auto g = G(p);
  CHECK(g[3] == doctest::Approx(2.1 * 1.5));
  CHECK_THROWS_AS(homogenize_map(ConformalMap{identity_map(r3), zero()}), ZeroConformalFactor);

  // Jacobi morphism downstairs gives a Poisson map upstairs.
  auto J = darboux_pair();
  ConformalMap pz{SmoothMap{"z-free", J.chart, r1, {x(0)}}, c(1)};
  Chart line = euclidean("R", 1);
  auto ZJ = zero_pair(line);
  auto tri = make_jacobi_pair(euclidean("triv", 3),
                              wedge(vector_field({zero(), c(1), zero()}), vector_field({c(1), zero(), -x(1)})),
                              vector_field({zero(), zero(), c(1)}));
  ConformalMap s_leg{SmoothMap{"s", tri.chart, line, {x(0)}}, c(1)};
  auto H1 = poissonize(tri);
  auto H2 = poissonize(ZJ);
  auto Ft = homogenize_map(s_leg);
  auto P1 = make_jacobi_pair(H1.chart, H1.P, AltField::zero(AltKind::Multivector, 4, 1));
  auto P2 = make_jacobi_pair(H2.chart, H2.P, AltField::zero(AltKind::Multivector, 2, 1));
  auto r = check_jacobi_morphism(P1, P2, ConformalMap{Ft, c(1)}, default_test_functions(2), pts(H1.chart), 1e-8);
  CHECK(r.passed());
}

TEST_CASE("homogeneous symplectic dual pairs") {
  auto T = triv();
  DualPairSpec dp{"triv-gpd", T, proj_leg(T.chart, 0), proj_leg(T.chart, 0)};
  auto base = pts(T.chart);
  auto r = check_homogeneous_sdp_equivalence(dp, base);
  INFO(r.note);
  CHECK(r.passed());
  auto broken = dp;
  broken.leg2 = proj_leg(T.chart, 1);
  auto rb = check_homogeneous_sdp_equivalence(broken, base);
  INFO(rb.note);
  CHECK(rb.status == Status::Fail);
  CHECK(rb.note.find("disagreements with base verdict: 0") != std::string::npos);
  CHECK(rb.note.find("slice disagreements: 0") != std::string::npos);
}
