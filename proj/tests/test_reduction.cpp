#include <doctest.h>

#include <cmath>

#include "jdl/leaves.hpp"
#include "jdl/reduction.hpp"

using namespace jdl;

namespace {
Field zero() { return {}; }
Field c(double v) { return constant(v); }
Field x(int i) { return coord(i); }

ContactStructure darboux3() {
  return make_contact(euclidean("darboux3", 3), one_form({-x(1), zero(), c(1)}));
}

GroupActionSpec rtrans() {
  return {"rtrans", abelian(1), {vector_field({zero(), zero(), c(1)})},
          {[](const Coords& p, double t) { return Coords{p[0], p[1], p[2] + t}; }}};
}

SliceChart rtrans_slice(const Chart& M) {
  Chart S = euclidean("z=0", 2);
  return {S, {"embed", S, M, {x(0), x(1), zero()}}, {"project", M, S, {x(0), x(1)}}};
}

// (q, p, u) with theta = du + p dq; aff(1) acts by cotangent lifts of
// q -> e^{-a} q + b.
ContactStructure aff1_model() {
  Chart M("aff1-model", {{-1, 1}, {0.5, 1.5}, {-1, 1}});
  return make_contact(M, one_form({x(1), zero(), c(1)}));
}

GroupActionSpec aff1_action() {
  return {"aff1-action",
          aff1(),
          {vector_field({-x(0), x(1), zero()}), vector_field({c(1), zero(), zero()})},
          {[](const Coords& p, double t) { return Coords{p[0] * std::exp(-t), p[1] * std::exp(t), p[2]}; },
           [](const Coords& p, double t) { return Coords{p[0] + t, p[1], p[2]}; }}};
}

SliceChart aff1_slice(const Chart& M) {
  Chart S = euclidean("u", 1);
  return {S, {"embed", S, M, {zero(), c(1), x(0)}}, {"project", M, S, {x(2)}}};
}

std::vector<Coords> pts(const Chart& ch, int n = 10) { return sample_points(ch, n, 31); }
}  // namespace

TEST_CASE("contact actions") {
  auto C = darboux3();
  auto ps = pts(C.chart);
  auto A = rtrans();
  CHECK(check_action_axiom(A, ps).passed());
  CHECK(check_contact_action_group(C, A, ps).passed());
  CHECK(check_orbit_transversality(C, A, ps).passed());

  GroupActionSpec dy{"dy", abelian(1), {vector_field({zero(), c(1), zero()})}, {}};
  CHECK(check_contact_action_group(C, dy, ps).status == Status::Fail);
  CHECK(check_orbit_transversality(C, dy, ps).status == Status::Fail);

  auto M = aff1_model();
  auto B = aff1_action();
  auto ms = pts(M.chart);
  CHECK(check_action_axiom(B, ms).passed());
  CHECK(check_contact_action_group(M, B, ms).passed());
  CHECK(check_orbit_transversality(M, B, ms).passed());

  // Swapping the generators breaks the bracket relations.
  auto swapped = B;
  std::swap(swapped.generators[0], swapped.generators[1]);
  CHECK(check_action_axiom(swapped, ms).status == Status::Fail);
}

TEST_CASE("moment maps") {
  auto C = darboux3();
  auto m = moment_map(C, rtrans(), {0.1, 0.2, 0.3});
  CHECK(m.chart_index == 1);
  CHECK(m.affine.size() == 0);
  CHECK(m.covector(0) == doctest::Approx(1.0));

  auto M = aff1_model();
  auto B = aff1_action();
  auto v = moment_map(M, B, {0.3, 1.2, 0.0});
  CHECK(v.covector(0) == doctest::Approx(-0.36));
  CHECK(v.covector(1) == doctest::Approx(1.2));
  CHECK(v.chart_index == 2);
  CHECK(v.affine(0) == doctest::Approx(-0.3));
  const SmoothMap J = moment_chart_map(M, B, M.chart, 2);
  for (const auto& p : pts(M.chart, 5)) CHECK(numerical_rank(tangent_map(J, p)) == 1);

  GroupActionSpec dy{"dy", abelian(1), {vector_field({zero(), c(1), zero()})}, {}};
  CHECK_THROWS_AS(moment_map(C, dy, {0.1, 0.2, 0.3}), ZeroMomentCovector);

  CHECK(check_moment_equivariance(C, rtrans(), pts(euclidean("in", 3, 0.5))).passed());
  auto inner = sample_points(Chart("in", {{-0.5, 0.5}, {0.8, 1.2}, {-0.5, 0.5}}), 10, 3);
  CHECK(check_moment_equivariance(M, B, inner).passed());
  // Same check with integrated flows.
  auto integrated = B;
  integrated.flows.clear();
  CHECK(check_moment_equivariance(M, integrated, inner).passed());
}

TEST_CASE("local freeness equivalence") {
  auto C = darboux3();
  auto ps = pts(C.chart);
  auto r = check_locally_free(C, rtrans(), ps);
  CHECK(r.passed());
  CHECK(r.note.find("locally free at 10/10") != std::string::npos);

  // Contact Hamiltonian field of (x^2 + y^2)/2 vanishes on the z-axis.
  GroupActionSpec rot{"rot", abelian(1), {contact_hamiltonian_field(C, 0.5 * (x(0) * x(0) + x(1) * x(1)))}, {}};
  auto seeds = ps;
  seeds.push_back({0, 0, 0});
  seeds.push_back({0, 0, 0.5});
  auto f = check_locally_free(C, rot, seeds);
  CHECK(f.passed());
  CHECK(f.note.find("locally free at 10/12") != std::string::npos);

  auto M = aff1_model();
  CHECK(check_locally_free(M, aff1_action(), pts(M.chart)).passed());
}

TEST_CASE("quotients on slices") {
  auto C = darboux3();
  auto S = rtrans_slice(C.chart);
  CHECK(check_slice(rtrans(), S, pts(S.chart)).passed());
  auto Q = quotient_jacobi(C, rtrans(), S);
  for (const auto& p : pts(S.chart, 4)) {
    CHECK(matrix_at(Q.Pi, p)(0, 1) == doctest::Approx(1.0));
    CHECK(vector_at(Q.E, p).norm() < 1e-12);
  }
  CHECK(check_jacobi_pair(Q, pts(S.chart), 1e-8).passed());

  auto M = aff1_model();
  auto T = aff1_slice(M.chart);
  CHECK(check_slice(aff1_action(), T, pts(T.chart)).passed());
  auto Qa = quotient_jacobi(M, aff1_action(), T);
  CHECK(std::abs(vector_at(Qa.E, {0.2})(0)) > 0.5);

  // Trivial group: the contact pair itself.
  GroupActionSpec none{"none", abelian(0), {}, {}};
  auto Q0 = quotient_jacobi(C, none, S);
  CHECK(Q0.dim() == 3);

  // A projection that is not constant along orbits.
  SliceChart bad = S;
  bad.project = {"project", C.chart, S.chart, {x(0) + x(2) * x(2), x(1)}};
  CHECK_THROWS_AS(quotient_jacobi(C, rtrans(), bad), NonInvariantBracket);
}

TEST_CASE("reduction dual pairs") {
  auto C = darboux3();
  auto dp = reduction_dual_pair(C, rtrans(), rtrans_slice(C.chart));
  auto ps = pts(C.chart);
  auto v = verify_dual_pair(dp, ps);
  for (const auto& r : v.all()) CHECK_MESSAGE(r.passed(), r.id << " " << r.note);
  CHECK(check_rank_relation(dp, ps).passed());
  auto leaves = classify_reduced_leaves(dp, rtrans(), ps);
  CHECK(leaves.passed());
  CHECK(leaves.note.find("leaf dim 2 (lcs)") != std::string::npos);

  auto M = aff1_model();
  auto da = reduction_dual_pair(M, aff1_action(), aff1_slice(M.chart));
  CHECK(da.leg2.target.dim() == 1);
  auto ms = pts(M.chart);
  auto va = verify_dual_pair(da, ms);
  for (const auto& r : va.all()) CHECK_MESSAGE(r.passed(), r.id << " " << r.note);
  auto rank = check_rank_relation(da, ms);
  CHECK(rank.passed());
  CHECK(rank.note.find("ranks at first sample: 1, 1") != std::string::npos);
  auto la = classify_reduced_leaves(da, aff1_action(), ms);
  CHECK(la.passed());
  CHECK(la.note.find("leaf dim 1 (contact)") != std::string::npos);
}
