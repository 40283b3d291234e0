#include <doctest.h>

#include <cmath>
#include <random>

#include "jdl/contact.hpp"
#include "support.hpp"

using namespace jdl;

namespace {
Field zero() { return {}; }
Field c(double v) { return constant(v); }
Field x(int i) { return coord(i); }

// dz - y dx on (x, y, z).
ContactStructure darboux3() {
  return make_contact(euclidean("darboux3", 3), one_form({-x(1), zero(), c(1)}));
}

// du + p dq on (q, p, u).
ContactStructure triv_contact() {
  return make_contact(euclidean("triv", 3), one_form({x(1), zero(), c(1)}));
}

// cos z dx + sin z dy, a contact form with nonconstant Reeb field.
ContactStructure twisted() {
  return make_contact(euclidean("twisted", 3), one_form({cos(x(2)), sin(x(2)), zero()}));
}

// dz - y1 dx1 - y2 dx2 + 0.2 sin(x1) dy2 on (x1, y1, x2, y2, z).
ContactStructure bent5() {
  return make_contact(euclidean("bent5", 5),
                      one_form({-x(1), zero(), -x(3), 0.2 * sin(x(0)), c(1)}));
}

std::vector<Coords> pts(const Chart& ch, int n = 20, std::uint64_t seed = 3) {
  return sample_points(ch, n, seed);
}

// Conformally symplectic: omega = e^h omega0, eta = -dh on R^4.
LcsStructure lcs4(double sign = 1.0) {
  Chart ch = euclidean("lcs4", 4);
  Field h = 0.3 * x(0) + 0.2 * sin(x(3));
  KForm omega0 = wedge(one_form({c(1), zero(), zero(), zero()}), one_form({zero(), c(1), zero(), zero()})) +
                 wedge(one_form({zero(), zero(), c(1), zero()}), one_form({zero(), zero(), zero(), c(1)}));
  KForm eta = (-sign) * differential(4, h);
  return make_lcs(ch, eta, exp(h) * omega0);
}
}  // namespace

TEST_CASE("contact volume") {
  auto C = darboux3();
  CHECK(value_at(contact_volume(C), {0.2, -0.5, 0.7}) == doctest::Approx(1.0));
  CHECK(check_contact(C, pts(C.chart, 50)).passed());
  CHECK(check_contact(twisted(), pts(C.chart, 50)).passed());
  CHECK(check_contact(bent5(), pts(bent5().chart, 50)).passed());

  auto flat = make_contact(C.chart, one_form({zero(), zero(), c(1)}));
  auto r = check_contact(flat, pts(C.chart));
  CHECK(r.status == Status::Fail);

  auto even = make_contact(euclidean("R2", 2), one_form({zero(), c(1)}));
  CHECK_THROWS_AS(check_contact(even, pts(even.chart)), EvenDimension);
}

TEST_CASE("Reeb fields") {
  Coords p{0.3, -0.6, 0.2};
  auto C = darboux3();
  CHECK((reeb(C, p) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);
  CHECK((vector_at(reeb(C), p) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-13);
  auto T = triv_contact();
  CHECK((vector_at(reeb(T), p) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-13);

  auto C2 = make_contact(C.chart, 2.0 * C.theta);
  CHECK((vector_at(reeb(C2), p) - Eigen::Vector3d(0, 0, 0.5)).norm() < 1e-13);

  // theta(E) = 1 and i_E dtheta = 0 on a less trivial form.
  auto W = twisted();
  for (const auto& q : pts(W.chart)) {
    Eigen::VectorXd E = reeb(W, q);
    CHECK(covector_at(W.theta, q).dot(E) == doctest::Approx(1.0));
    CHECK((dtheta_matrix(W, q).transpose() * E).norm() < 1e-12);
    CHECK((vector_at(reeb(W), q) - E).norm() < 1e-12);
  }
}

TEST_CASE("curvature form") {
  auto C = darboux3();
  auto cv = curvature_form(C, {0, 0, 0});
  CHECK(cv.H.dim() == 2);
  Eigen::Vector3d ex(1, 0, 0), ey(0, 1, 0);
  CHECK(cv.c(ex, ey) == doctest::Approx(-1.0));
  CHECK(cv.c(ey, ex) == doctest::Approx(1.0));
  CHECK(cv.c.antisymmetry_residual() < 1e-14);

  auto deg = make_contact(C.chart, one_form({-x(1) * x(1), zero(), c(1)}));
  CHECK_THROWS_AS(curvature_form(deg, {0.1, 0.0, 0.2}), DegenerateCurvature);
  CHECK_NOTHROW(curvature_form(deg, {0.1, 0.5, 0.2}));
}

TEST_CASE("contact Hamiltonian fields on darboux3") {
  auto C = darboux3();
  for (const auto& p : pts(C.chart, 10)) {
    Eigen::Vector3d want(0, 1, p[0]);
    CHECK((vector_at(contact_hamiltonian_field(C, x(0)), p) - want).norm() < 1e-13);
    CHECK((contact_hamiltonian_vf(C, x(0), p) - want).norm() < 1e-12);
    CHECK((vector_at(contact_hamiltonian_field(C, x(1)), p) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-13);
  }
}

TEST_CASE("contact Hamiltonian properties on random functions") {
  std::mt19937_64 rng(11);
  for (auto C : {twisted(), bent5(), triv_contact()}) {
    const int n = C.dim();
    Multivector E = reeb(C);
    for (int trial = 0; trial < 4; ++trial) {
      Field f = testing::random_smooth(rng, n);
      Multivector X = contact_hamiltonian_field(C, f);
      KForm LX = lie_derivative(X, C.theta);
      Field Ef = directional(E, f);
      for (const auto& p : pts(C.chart, 6, 100 + trial)) {
        // Both routes agree.
        CHECK((vector_at(X, p) - contact_hamiltonian_vf(C, f, p)).norm() < 1e-9);
        // theta(X_f) = f.
        CHECK(covector_at(C.theta, p).dot(vector_at(X, p)) == doctest::Approx(value_at(f, p)).epsilon(1e-10));
        // X_f is a contact field: L_X theta = E(f) theta.
        Eigen::VectorXd L = covector_at(LX, p);
        Eigen::VectorXd th = covector_at(C.theta, p);
        CHECK((L - value_at(Ef, p) * th).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("contact structures give Jacobi pairs") {
  auto ps = pts(euclidean("c", 3), 10, 21);
  {
    auto J = contact_to_jacobi(darboux3(), ps);
    for (const auto& p : ps) {
      Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
      P(0, 1) = 1; P(1, 2) = -p[1];  // (dx + y dz) ^ dy
      P = P - P.transpose().eval();
      CHECK((matrix_at(J.Pi, p) - P).norm() < 1e-12);
      CHECK((vector_at(J.E, p) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
    }
    CHECK(check_jacobi_pair(J, ps, 1e-10).passed());
  }
  {
    auto J = contact_to_jacobi(triv_contact(), ps);
    for (const auto& p : ps) {
      // dp ^ (dq - p du)
      Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
      P(1, 0) = 1; P(1, 2) = -p[1];
      P = P - P.transpose().eval();
      CHECK((matrix_at(J.Pi, p) - P).norm() < 1e-12);
      CHECK((vector_at(J.E, p) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
    }
    CHECK(check_jacobi_pair(J, ps, 1e-10).passed());
  }
  {
    auto T = twisted();
    auto J = contact_to_jacobi(T, ps);
    CHECK(check_jacobi_pair(J, ps, 1e-9).passed());
    std::mt19937_64 rng(5);
    Field f = testing::random_smooth(rng, 3), g = testing::random_smooth(rng, 3);
    for (const auto& p : ps)
      CHECK(jacobi_bracket(J, f, g, p) == doctest::Approx(value_at(contact_bracket(T, f, g), p)).epsilon(1e-9));
  }
}

TEST_CASE("l.c.s. on the plane") {
  Chart r2 = euclidean("R2", 2);
  auto L = make_lcs(r2, one_form({zero(), zero()}), two_form(2, {{zero(), c(1)}}));
  Coords p{0.4, -0.1};
  CHECK(lcs_bracket(L, x(0), x(1), p) == doctest::Approx(1.0));
  CHECK((lcs_hamiltonian_vf(L, x(0), p) - Eigen::Vector2d(0, -1)).norm() < 1e-14);
  CHECK((lcs_hamiltonian_vf(L, x(1), p) - Eigen::Vector2d(1, 0)).norm() < 1e-14);
  auto r = check_lcs(L, pts(r2));
  CHECK(r.passed());
  CHECK(r.note.find("degenerate-dimension") != std::string::npos);

  auto ex = make_lcs(r2, one_form({c(1), zero()}), two_form(2, {{zero(), exp(x(0))}}));
  CHECK(check_lcs(ex, pts(r2)).passed());

  auto bad = make_lcs(r2, one_form({zero(), zero()}), two_form(2, {{zero(), x(0)}}));
  CHECK_FALSE(check_lcs(bad, {{0.0, 0.3}}).passed());
  CHECK_THROWS_AS(lcs_hamiltonian_vf(bad, x(0), {0.0, 0.3}), SingularOmega);
}

TEST_CASE("l.c.s. in dimension four") {
  auto L = lcs4();
  auto ps = pts(L.chart, 15);
  CHECK(check_lcs(L, ps).passed());
  auto wrong = check_lcs(lcs4(-1.0), ps);
  CHECK(wrong.status == Status::Fail);
  CHECK(wrong.max_residual > 1e-3);

  std::mt19937_64 rng(9);
  Field f = testing::random_smooth(rng, 4), g = testing::random_smooth(rng, 4);
  Multivector Xf = lcs_hamiltonian_field(L, f);
  for (const auto& p : ps) CHECK((vector_at(Xf, p) - lcs_hamiltonian_vf(L, f, p)).norm() < 1e-10);

  auto J = lcs_to_jacobi(L, ps);
  CHECK(check_jacobi_pair(J, ps, 1e-9).passed());
  for (const auto& p : ps) {
    Eigen::MatrixXd O = matrix_at(L.omega, p);
    Eigen::MatrixXd Oi = O.inverse();
    CHECK((matrix_at(J.Pi, p) + Oi).norm() < 1e-10);
    CHECK((vector_at(J.E, p) - Oi * covector_at(L.eta, p)).norm() < 1e-10);
    // The Jacobi Hamiltonian field is the negative of the l.c.s. one.
    CHECK((hamiltonian_vf(J, f, p) + lcs_hamiltonian_vf(L, f, p)).norm() < 1e-10);
    CHECK(jacobi_bracket(J, f, g, p) == doctest::Approx(lcs_bracket(L, f, g, p)).epsilon(1e-9));
    auto back = jacobi_to_lcs_at(J, p);
    CHECK((back.omega - O).norm() < 1e-10);
    CHECK((back.eta - covector_at(L.eta, p)).norm() < 1e-10);
  }
}

TEST_CASE("property: l.c.s. bracket satisfies the Jacobi identity") {
  auto L = lcs4();
  auto br = lcs_oracle(L);
  std::mt19937_64 rng(17);
  Field f = testing::random_polynomial(rng, 4, 2), g = testing::random_smooth(rng, 4),
        h = testing::random_polynomial(rng, 4, 2);
  Field jac = jacobiator(br, f, g, h);
  for (const auto& p : pts(L.chart, 5, 8)) CHECK(std::abs(value_at(jac, p)) < 1e-9);
  // With the opposite connection sign the identity fails, so the structure check
  // rejects that pair.
  CHECK_FALSE(check_lcs(lcs4(-1.0), pts(L.chart, 5)).passed());
}
