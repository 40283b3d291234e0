#include "jdl/groupoid.hpp"

#include <cmath>
#include <string>

#include "jdl/calculus.hpp"
#include "jdl/errors.hpp"
#include "jdl/linalg.hpp"

namespace jdl {

namespace {

Coords concat(const Coords& a, const Coords& b) {
  Coords out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

ArrowPair split(const Coords& gh) {
  const auto half = static_cast<std::ptrdiff_t>(gh.size() / 2);
  return {Coords(gh.begin(), gh.begin() + half), Coords(gh.begin() + half, gh.end())};
}

double dist(const Coords& a, const Coords& b) {
  double r = 0;
  for (std::size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
  return r;
}

Coords product(const GroupoidSpec& G, const Coords& g, const Coords& h) { return G.m(concat(g, h)); }

std::vector<Coords> joined(const std::vector<ArrowPair>& pairs) {
  std::vector<Coords> out;
  out.reserve(pairs.size());
  for (const auto& [g, h] : pairs) out.push_back(concat(g, h));
  return out;
}

void require_composable(const GroupoidSpec& G, const std::vector<ArrowPair>& pairs, double tol) {
  for (const auto& [g, h] : pairs)
    if (dist(G.s(g), G.t(h)) > tol) throw NonComposableSample("sampled pair has s(g) != t(h)");
}

// Basis of T_(g,h) G^(2) inside T G x T G.
Eigen::MatrixXd composable_tangent(const GroupoidSpec& G, const Coords& g, const Coords& h) {
  const Eigen::MatrixXd Ts = tangent_map(G.s, g);
  const Eigen::MatrixXd Tt = tangent_map(G.t, h);
  Eigen::MatrixXd M(Ts.rows(), Ts.cols() + Tt.cols());
  M << Ts, -Tt;
  return null_space(M);
}

double exp_f(const GroupoidSpec& G, const Coords& g) { return G.f_mult ? std::exp(value_at(G.f_mult, g)) : 1.0; }

}  // namespace

Chart pair_chart(const Chart& total) {
  std::vector<Interval> box = total.box;
  box.insert(box.end(), total.box.begin(), total.box.end());
  return Chart(total.name + "^2", box);
}

std::vector<ArrowPair> composable_pairs(const GroupoidSpec& G, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ArrowPair> out;
  const auto gs = sample_points(G.total, 4 * n, seed);
  for (const auto& g : gs) {
    if (static_cast<int>(out.size()) == n) break;
    for (int tries = 0; tries < 20; ++tries) {
      Coords h = G.arrow_into(G.s(g), rng);
      if (G.total.contains(h) && G.total.contains(product(G, g, h))) {
        out.emplace_back(g, std::move(h));
        break;
      }
    }
  }
  if (static_cast<int>(out.size()) < n) throw SamplingExhausted("not enough composable pairs inside the chart");
  return out;
}

CheckReport check_groupoid_axioms(const GroupoidSpec& G, const std::vector<ArrowPair>& pairs, double tol) {
  require_composable(G, pairs, 1e-9);
  return run_residual_check(
      "groupoid-axioms", "units, s and t of products, associativity, inverses", joined(pairs), tol,
      [&](const Coords& gh) {
        const auto [g, h] = split(gh);
        const Coords x = G.s(g), y = G.t(g);
        double r = std::max(dist(G.s(G.u(x)), x), dist(G.t(G.u(x)), x));
        const Coords p = product(G, g, h);
        r = std::max({r, dist(G.s(p), G.s(h)), dist(G.t(p), y)});
        r = std::max({r, dist(product(G, G.u(y), g), g), dist(product(G, g, G.u(x)), g)});
        const Coords gi = G.i(g);
        r = std::max({r, dist(product(G, g, gi), G.u(y)), dist(product(G, gi, g), G.u(x))});
        const Coords k = G.i(h);
        r = std::max(r, dist(product(G, p, k), product(G, g, product(G, h, k))));
        return r;
      });
}

CheckReport check_multiplicativity(const GroupoidSpec& G, const std::vector<ArrowPair>& pairs, double tol) {
  require_composable(G, pairs, 1e-9);
  return run_residual_check(
      "multiplicativity", "m^* theta = pr1^* theta + e^{pr1^* f} pr2^* theta, m^* f = pr1^* f + pr2^* f",
      joined(pairs), tol, [&](const Coords& gh) {
        const auto [g, h] = split(gh);
        const Coords p = G.m(gh);
        const Eigen::MatrixXd K = composable_tangent(G, g, h);
        const Eigen::VectorXd lhs = tangent_map(G.m, gh).transpose() * covector_at(G.theta.theta, p);
        Eigen::VectorXd rhs(lhs.size());
        rhs << covector_at(G.theta.theta, g), exp_f(G, g) * covector_at(G.theta.theta, h);
        double r = (K.transpose() * (lhs - rhs)).cwiseAbs().maxCoeff();
        if (G.f_mult)
          r = std::max(r, std::abs(value_at(G.f_mult, p) - value_at(G.f_mult, g) - value_at(G.f_mult, h)));
        return r;
      });
}

CheckReport check_units_legendrian(const GroupoidSpec& G, const std::vector<Coords>& base_pts, double tol) {
  return run_residual_check("units-legendrian", "u^* theta = 0", base_pts, tol, [&](const Coords& x) {
    const Eigen::VectorXd v = tangent_map(G.u, x).transpose() * covector_at(G.theta.theta, G.u(x));
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  });
}

JacobiPair base_jacobi(const GroupoidSpec& G, const std::vector<Coords>& pts, double tol) {
  const auto pre = check_multiplicativity(G, composable_pairs(G, 8, 7), 1e-8);
  if (!pre.passed())
    throw OracleMismatch("theta is not multiplicative (residual " + std::to_string(pre.max_residual) + ")");

  const int b = G.base.dim;
  std::vector<Field> probes{constant(1.0)};
  for (int k = 0; k < b; ++k) probes.push_back(coord(k));
  std::vector<Field> brackets;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j)
      brackets.push_back(contact_bracket(G.theta, pullback(G.t, probes[i]), pullback(G.t, probes[j])));
  double worst = 0;
  for (const auto& p : pts) {
    const Eigen::MatrixXd K = null_space(tangent_map(G.t, p));
    for (const auto& br : brackets)
      if (br && K.cols()) worst = std::max(worst, (K.transpose() * gradient_at(br, p)).cwiseAbs().maxCoeff());
  }
  if (worst > tol) throw NotBasic("bracket of t-pullbacks varies along t-fibers by " + std::to_string(worst));

  const BracketOracle oracle = [&G](const Field& f, const Field& g) {
    return pullback(G.u, contact_bracket(G.theta, pullback(G.t, f), pullback(G.t, g)));
  };
  std::vector<Coords> base_pts;
  for (const auto& p : pts) base_pts.push_back(G.t(p));
  return extract_pair_from_bracket(oracle, G.base, base_pts, tol);
}

JacobiPair negated(const JacobiPair& J) { return make_jacobi_pair(J.chart, -1.0 * J.Pi, -1.0 * J.E); }

DualPairSpec source_target_pair(const GroupoidSpec& G, const std::vector<Coords>& pts) {
  const JacobiPair J0 = base_jacobi(G, pts);
  const Field a = G.f_mult ? -exp(G.f_mult) : constant(-1.0);
  return {G.name + " s/t", G.theta, {negated(J0), ConformalMap{G.s, a}, {}}, {J0, ConformalMap{G.t, constant(1.0)}, {}}};
}

SourceTargetVerdict verify_source_target_dual_pair(const GroupoidSpec& G, const std::vector<Coords>& pts,
                                                   double tol) {
  SourceTargetVerdict v;
  v.spec = source_target_pair(G, pts);
  v.pair = verify_dual_pair(v.spec, pts, tol);
  v.rank = check_rank_relation(v.spec, pts);
  v.corollary = check_corollary_decomposition(v.spec, pts);
  auto parts = v.pair.all();
  parts.push_back(v.rank);
  parts.push_back(v.corollary);
  v.summary = combine("source-target-dual-pair", "s and t form a full contact dual pair", parts);
  return v;
}

CheckReport check_self_action_hamiltonian(const GroupoidSpec& G, const std::vector<Field>& base_functions,
                                          const std::vector<ArrowPair>& pairs, double tol) {
  require_composable(G, pairs, 1e-9);
  std::vector<Field> lifted;
  for (const auto& l : base_functions) lifted.push_back(pullback(G.t, l));
  const int n = G.total.dim;
  return run_residual_check(
      "self-action-hamiltonian", "T m (X_{t^* l}, 0) = X_{t^* l} at the product", joined(pairs), tol,
      [&](const Coords& gh) {
        const auto [g, h] = split(gh);
        const Coords p = G.m(gh);
        const Eigen::MatrixXd Tm = tangent_map(G.m, gh);
        const Eigen::MatrixXd Ts = tangent_map(G.s, g);
        double r = 0;
        for (const auto& f : lifted) {
          const Eigen::VectorXd X = contact_hamiltonian_vf(G.theta, f, g);
          r = std::max(r, (Ts * X).norm());
          r = std::max(r, (Tm.leftCols(n) * X - contact_hamiltonian_vf(G.theta, f, p)).cwiseAbs().maxCoeff());
        }
        return r;
      });
}

CheckReport check_legendrian_bisection(const GroupoidSpec& G, const SmoothMap& sigma, const std::vector<Coords>& pts,
                                       double tol) {
  const std::string id = "legendrian-bisection";
  const std::string anchor = "r_Sigma^* theta = theta for a Legendrian bisection Sigma";
  const SmoothMap tsig = compose(G.t, sigma);
  std::vector<Coords> base_pts;
  for (const auto& p : pts) base_pts.push_back(G.s(p));
  for (const auto& x : base_pts) {
    if (dist(G.s(sigma(x)), x) > 1e-9) throw NotABisection("s o Sigma is not the identity");
    const Eigen::MatrixXd T = tangent_map(tsig, x);
    if (numerical_rank(T) < G.base.dim) throw NotABisection("t o Sigma is not a local diffeomorphism");
  }
  const auto leg = run_residual_check(id, anchor, base_pts, tol, [&](const Coords& x) {
    const Eigen::VectorXd v = tangent_map(sigma, x).transpose() * covector_at(G.theta.theta, sigma(x));
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  });
  if (!leg.passed()) {
    auto r = hypothesis_not_met(id, anchor, "Sigma is not Legendrian (|Sigma^* theta| = " +
                                                std::to_string(leg.max_residual) + ")");
    r.samples = leg.samples;
    r.worst_point = leg.worst_point;
    return r;
  }

  const int n = G.total.dim;
  return run_residual_check(id, anchor, pts, tol, [&](const Coords& g) {
    const Coords x = G.s(g);
    // y = (t o Sigma)^{-1}(x) by Newton from x.
    Eigen::VectorXd y = to_vector(x);
    for (int it = 0; it < 50; ++it) {
      const Eigen::VectorXd res = to_vector(tsig(to_coords(y))) - to_vector(x);
      if (res.norm() < 1e-14) break;
      y -= tangent_map(tsig, to_coords(y)).fullPivLu().solve(res);
    }
    const Coords yc = to_coords(y);
    const Coords h = sigma(yc);
    const Coords gh = concat(g, h);
    const Eigen::MatrixXd Tm = tangent_map(G.m, gh);
    const Eigen::MatrixXd Tpsi = tangent_map(tsig, yc).fullPivLu().inverse();
    const Eigen::MatrixXd Tr = Tm.leftCols(n) + Tm.rightCols(n) * tangent_map(sigma, yc) * Tpsi * tangent_map(G.s, g);
    const Eigen::VectorXd d =
        Tr.transpose() * covector_at(G.theta.theta, G.m(gh)) - covector_at(G.theta.theta, g);
    return d.cwiseAbs().maxCoeff();
  });
}

}  // namespace jdl
