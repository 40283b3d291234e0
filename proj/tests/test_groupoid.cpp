#include <doctest.h>

#include <cmath>

#include "jdl/groupoid.hpp"
#include "jdl/leaves.hpp"

using namespace jdl;

namespace {
Field zero() { return {}; }
Field c(double v) { return constant(v); }
Field x(int i) { return coord(i); }

// T*R^d x R with theta = du + p.dq, s = t = q, fiberwise addition.
GroupoidSpec triv_gpd(int d, double p_scale = 1.0) {
  const int n = 2 * d + 1;
  GroupoidSpec G;
  G.name = "triv";
  G.total = euclidean("T*R^d x R", n);
  G.base = euclidean("R^d", d);
  std::vector<Field> q, th(n), m(n), inv(n), unit(n);
  for (int i = 0; i < d; ++i) {
    q.push_back(x(i));
    th[i] = x(d + i);
    m[i] = x(i);
    m[d + i] = x(d + i) + p_scale * x(n + d + i);
    inv[i] = x(i);
    inv[d + i] = -x(d + i);
    unit[i] = x(i);
  }
  th[2 * d] = c(1);
  m[2 * d] = x(2 * d) + x(n + 2 * d);
  inv[2 * d] = -x(2 * d);
  G.s = {"s", G.total, G.base, q};
  G.t = {"t", G.total, G.base, q};
  G.m = {"m", pair_chart(G.total), G.total, m};
  G.i = {"i", G.total, G.total, inv};
  G.u = {"u", G.base, G.total, unit};
  G.theta = make_contact(G.total, one_form(th));
  G.arrow_into = [d](const Coords& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-0.4, 0.4);
    Coords h = b;
    for (int i = 0; i <= d; ++i) h.push_back(U(rng));
    return h;
  };
  return G;
}
}  // namespace

TEST_CASE("triv-gpd axioms and multiplicativity") {
  auto G = triv_gpd(1);
  auto pairs = composable_pairs(G, 12, 3);
  CHECK(pairs.size() == 12);
  CHECK(check_groupoid_axioms(G, pairs).passed());
  auto r = check_multiplicativity(G, pairs);
  CHECK(r.passed());
  CHECK(r.max_residual < 1e-14);
  CHECK(check_units_legendrian(G, sample_points(G.base, 8, 1)).passed());

  auto bent = triv_gpd(1, 2.0);
  CHECK(check_multiplicativity(bent, pairs).status == Status::Fail);

  auto bad = pairs;
  bad[0].second[0] += 0.1;
  CHECK_THROWS_AS(check_multiplicativity(G, bad), NonComposableSample);
}

TEST_CASE("base Jacobi structure of triv-gpd") {
  auto G = triv_gpd(1);
  auto pts = sample_points(G.total, 10, 5);
  auto J0 = base_jacobi(G, pts);
  for (const auto& p : sample_points(G.base, 5, 2)) CHECK(vector_at(J0.E, p).norm() < 1e-12);

  // du + 2p dq is still multiplicative for fiberwise addition; a cubic term is not.
  auto scaled = G;
  scaled.theta = make_contact(G.total, one_form({2.0 * x(1), zero(), c(1)}));
  CHECK(check_multiplicativity(scaled, composable_pairs(G, 6, 2)).passed());
  auto broken = G;
  broken.theta = make_contact(G.total, one_form({x(1) + x(1) * x(1) * x(1), zero(), c(1)}));
  CHECK_THROWS_AS(base_jacobi(broken, pts), OracleMismatch);
}

TEST_CASE("source and target form a full dual pair") {
  for (int d : {1, 2}) {
    auto G = triv_gpd(d);
    auto pts = sample_points(G.total, 10, 11);
    auto v = verify_source_target_dual_pair(G, pts);
    for (const auto& r : v.pair.all()) CHECK_MESSAGE(r.passed(), r.id << " " << r.note);
    CHECK(v.rank.passed());
    CHECK(v.corollary.passed());
    CHECK(v.summary.passed());
    // The leaf correspondence is the identity on Q.
    CHECK(verify_leaf_correspondence(v.spec, pts).passed());
  }
}

TEST_CASE("self-action Hamiltonian identity") {
  auto G = triv_gpd(1);
  auto r = check_self_action_hamiltonian(G, {x(0), x(0) * x(0), sin(x(0))}, composable_pairs(G, 8, 4));
  CHECK(r.passed());
}

TEST_CASE("Legendrian bisections of triv-gpd") {
  auto G = triv_gpd(1);
  const Chart& Q = G.base;
  // Points with room for p + c inside the chart.
  std::vector<Coords> pts;
  for (const auto& p : sample_points(G.total, 10, 8)) pts.push_back({p[0], 0.5 * p[1], 0.5 * p[2]});

  CHECK(check_legendrian_bisection(G, G.u, pts).passed());
  const double k = 0.3;
  SmoothMap shift{"Sigma_c", Q, G.total, {x(0), c(k), -k * x(0)}};
  auto r = check_legendrian_bisection(G, shift, pts);
  CHECK(r.passed());
  CHECK(r.max_residual < 1e-13);

  SmoothMap slanted{"Sigma", Q, G.total, {x(0), zero(), x(0)}};
  CHECK(check_legendrian_bisection(G, slanted, pts).status == Status::HypothesisNotMet);

  SmoothMap off{"off", Q, G.total, {x(0) + 0.1, zero(), zero()}};
  CHECK_THROWS_AS(check_legendrian_bisection(G, off, pts), NotABisection);
}
