#include "jdl/reduction.hpp"

#include <cmath>
#include <string>

#include "jdl/calculus.hpp"
#include "jdl/errors.hpp"
#include "jdl/leaves.hpp"
#include "jdl/linalg.hpp"

namespace jdl {

namespace {

Eigen::MatrixXd generator_matrix(const GroupActionSpec& A, const Coords& p) {
  Eigen::MatrixXd Z(static_cast<int>(p.size()), A.group_dim());
  for (int a = 0; a < A.group_dim(); ++a) Z.col(a) = vector_at(A.generators[a], p);
  return Z;
}

Eigen::MatrixXd horizontal(const ContactStructure& C, const Coords& p) {
  return kernel(Eigen::MatrixXd(covector_at(C.theta, p).transpose())).basis;
}

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m(a.rows(), a.cols() + b.cols());
  m << a, b;
  return m;
}

void require_generators(const GroupActionSpec& A) {
  if (static_cast<int>(A.generators.size()) != A.group_dim())
    throw DimensionMismatch("action needs one generator per Lie algebra basis vector");
}

Eigen::VectorXd moment_covector(const std::vector<Field>& v, const Coords& p) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  for (std::size_t a = 0; a < v.size(); ++a) out(static_cast<int>(a)) = value_at(v[a], p);
  return out;
}

Coords flow_rk4(const Multivector& X, Coords p, double t, int steps) {
  Eigen::VectorXd y = to_vector(p);
  const double h = t / steps;
  auto f = [&](const Eigen::VectorXd& z) { return vector_at(X, to_coords(z)); };
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = f(y), k2 = f(y + 0.5 * h * k1), k3 = f(y + 0.5 * h * k2), k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return to_coords(y);
}

Eigen::VectorXd linear_rk4(const Eigen::MatrixXd& M, Eigen::VectorXd v, double t, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = M * v, k2 = M * (v + 0.5 * h * k1), k3 = M * (v + 0.5 * h * k2),
                          k4 = M * (v + h * k3);
    v += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return v;
}

// Distance between the lines spanned by a and b.
double ray_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ua = a.normalized(), ub = b.normalized();
  return std::min((ua - ub).norm(), (ua + ub).norm());
}

}  // namespace

CheckReport check_action_axiom(const GroupActionSpec& A, const std::vector<Coords>& pts, double tol) {
  require_generators(A);
  const int g = A.group_dim();
  std::vector<Multivector> defects;
  for (int a = 0; a < g; ++a)
    for (int b = a + 1; b < g; ++b) {
      Multivector d = lie_bracket(A.generators[a], A.generators[b]);
      for (int k = 0; k < g; ++k)
        if (A.algebra(k, a, b) != 0.0) d = d - A.algebra(k, a, b) * A.generators[k];
      defects.push_back(d);
    }
  return run_residual_check("action-axiom", "[zeta_a, zeta_b] = c^k_ab zeta_k", pts, tol, [&](const Coords& p) {
    double r = 0;
    for (const auto& d : defects) r = std::max(r, vector_at(d, p).cwiseAbs().maxCoeff());
    return r;
  });
}

CheckReport check_contact_action_group(const ContactStructure& C, const GroupActionSpec& A,
                                       const std::vector<Coords>& pts, double tol) {
  require_generators(A);
  std::vector<KForm> L;
  for (const auto& z : A.generators) L.push_back(lie_derivative(z, C.theta));
  return run_residual_check("contact-action", "L_{zeta_a} theta is proportional to theta", pts, tol,
                            [&](const Coords& p) {
                              const Eigen::VectorXd th = covector_at(C.theta, p);
                              double r = 0;
                              for (const auto& l : L) {
                                Eigen::MatrixXd M(2, th.size());
                                M.row(0) = th.transpose();
                                M.row(1) = covector_at(l, p).transpose();
                                Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
                                r = std::max(r, svd.singularValues()(1));
                              }
                              return r;
                            });
}

CheckReport check_orbit_transversality(const ContactStructure& C, const GroupActionSpec& A,
                                       const std::vector<Coords>& pts, double tol) {
  require_generators(A);
  const int n = C.dim();
  return run_margin_check("orbit-transversality", "H + span{zeta_a} = TM", pts, tol, [&](const Coords& p) {
    const Eigen::MatrixXd M = hcat(horizontal(C, p), generator_matrix(A, p));
    if (M.cols() < n) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(n - 1);
  });
}

std::vector<Field> moment_components(const ContactStructure& C, const GroupActionSpec& A) {
  require_generators(A);
  std::vector<Field> v;
  for (const auto& z : A.generators) {
    Field f = eval_form(C.theta, {z});
    v.push_back(f ? f : constant(0.0));
  }
  return v;
}

MomentValue moment_map(const ContactStructure& C, const GroupActionSpec& A, const Coords& p) {
  MomentValue m;
  m.covector = moment_covector(moment_components(C, A), p);
  const int g = A.group_dim();
  if (g == 0 || m.covector.cwiseAbs().maxCoeff() < 1e-12)
    throw ZeroMomentCovector("theta(zeta) vanishes at the point");
  int kk = 0;
  m.covector.cwiseAbs().maxCoeff(&kk);
  m.chart_index = kk + 1;
  m.affine.resize(g - 1);
  for (int i = 0, j = 0; i < g; ++i)
    if (i != kk) m.affine(j++) = m.covector(i) / m.covector(kk);
  return m;
}

SmoothMap moment_chart_map(const ContactStructure& C, const GroupActionSpec& A, const Chart& M, int k) {
  const auto v = moment_components(C, A);
  const Chart P = projective_chart(A.algebra, k);
  std::vector<Field> comps;
  for (int i = 0; i < A.group_dim(); ++i)
    if (i != k - 1) comps.push_back(v[i] / v[k - 1]);
  return {"J~", M, P, comps};
}

CheckReport check_moment_equivariance(const ContactStructure& C, const GroupActionSpec& A,
                                      const std::vector<Coords>& pts, double eps, double tol) {
  const auto v = moment_components(C, A);
  const int g = A.group_dim();
  constexpr int kSteps = 100;
  return run_residual_check(
      "moment-equivariance", "moment rays follow the coadjoint flow along generator flows", pts, tol,
      [&](const Coords& p) {
        const Eigen::VectorXd v0 = moment_covector(v, p);
        if (v0.norm() < 1e-12) throw ZeroMomentCovector("theta(zeta) vanishes at the point");
        double r = 0;
        for (int b = 0; b < g; ++b) {
          const Coords q = static_cast<int>(A.flows.size()) > b && A.flows[b]
                               ? A.flows[b](p, eps)
                               : flow_rk4(A.generators[b], p, eps, kSteps);
          // dv_a/dt = theta([zeta_b, zeta_a]) = c^k_ba v_k, up to a multiple of v.
          Eigen::MatrixXd Mb(g, g);
          for (int a = 0; a < g; ++a)
            for (int k = 0; k < g; ++k) Mb(a, k) = A.algebra(k, b, a);
          r = std::max(r, ray_distance(moment_covector(v, q), linear_rk4(Mb, v0, eps, kSteps)));
        }
        return r;
      });
}

CheckReport check_locally_free(const ContactStructure& C, const GroupActionSpec& A, const std::vector<Coords>& pts) {
  const int n = C.dim();
  const int g = A.group_dim();
  const auto v = moment_components(C, A);
  std::vector<SmoothMap> charts;
  for (int k = 1; k <= g; ++k) charts.push_back(moment_chart_map(C, A, C.chart, k));
  auto sides = [&](const Coords& p) {
    const bool lf = numerical_rank(generator_matrix(A, p)) == g;
    const Eigen::VectorXd cov = moment_covector(v, p);
    bool right = false;
    if (g > 0 && cov.cwiseAbs().maxCoeff() > 1e-10) {
      int kk = 0;
      cov.cwiseAbs().maxCoeff(&kk);
      Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n);
      bool sub = true;
      if (g > 1) {
        const Eigen::MatrixXd TJ = tangent_map(charts[kk], p);
        sub = numerical_rank(TJ) == g - 1;
        K = null_space(TJ);
      }
      right = sub && numerical_rank(hcat(horizontal(C, p), K)) == n;
    }
    return std::pair{lf, right};
  };
  CheckReport r = run_predicate_check(
      "locally-free", "locally free <=> J submersion with ker TJ transverse to H", pts,
      [&](const Coords& p) {
        const auto [lf, right] = sides(p);
        return lf == right;
      });
  int count = 0;
  for (const auto& p : pts) count += sides(p).first;
  r.note = (r.note.empty() ? "" : r.note + "; ") + "locally free at " + std::to_string(count) + "/" +
           std::to_string(pts.size()) + " samples";
  return r;
}

CheckReport check_slice(const GroupActionSpec& A, const SliceChart& S, const std::vector<Coords>& slice_pts,
                        double tol) {
  require_generators(A);
  return run_residual_check("slice", "slice transverse to orbits, project o embed = id, T project zeta = 0",
                            slice_pts, tol, [&](const Coords& x) {
                              const Coords y = S.embed(x);
                              const Coords back = S.project(y);
                              double r = 0;
                              for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(back[i] - x[i]));
                              const Eigen::MatrixXd Z = generator_matrix(A, y);
                              const int n = static_cast<int>(y.size());
                              if (numerical_rank(hcat(Z, tangent_map(S.embed, x))) < n) r = std::max(r, 1.0);
                              if (Z.cols())
                                r = std::max(r, (tangent_map(S.project, y) * Z).cwiseAbs().maxCoeff());
                              return r;
                            });
}

JacobiPair quotient_jacobi(const ContactStructure& C, const GroupActionSpec& A, const SliceChart& S, double tol) {
  require_generators(A);
  if (A.group_dim() == 0) return contact_to_jacobi(C, sample_points(C.chart, 8, 0x51ce));
  const auto pts = sample_points(S.chart, 8, 0x51ce);
  const int d = S.chart.dim;
  std::vector<Field> probes{constant(1.0)};
  for (int k = 0; k < d; ++k) probes.push_back(coord(k));
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const Field br = contact_bracket(C, pullback(S.project, probes[i]), pullback(S.project, probes[j]));
      if (!br) continue;
      for (const auto& x : pts) {
        const Coords y = S.embed(x);
        const double scale = std::max(1.0, std::abs(value_at(br, y)));
        const double drift = (generator_matrix(A, y).transpose() * gradient_at(br, y)).cwiseAbs().maxCoeff();
        if (drift > tol * scale)
          throw NonInvariantBracket("bracket of invariant extensions varies along orbits by " +
                                    std::to_string(drift));
      }
    }
  const BracketOracle oracle = [&C, &S](const Field& f, const Field& g) {
    return pullback(S.embed, contact_bracket(C, pullback(S.project, f), pullback(S.project, g)));
  };
  return extract_pair_from_bracket(oracle, S.chart, pts, tol);
}

DualPairSpec reduction_dual_pair(const ContactStructure& C, const GroupActionSpec& A, const SliceChart& S,
                                 int chart_index) {
  const int g = A.group_dim();
  if (g == 0) throw DimensionMismatch("reduction by the trivial group has no moment leg");
  const auto v = moment_components(C, A);
  DualPairSpec dp;
  dp.name = A.name + " reduction";
  dp.source = C;
  dp.leg1 = {quotient_jacobi(C, A, S), ConformalMap{S.project, constant(1.0)}, {}};
  int k = chart_index;
  if (k == 0) k = moment_map(C, A, S.embed(sample_points(S.chart, 1, 0x51ce).front())).chart_index;
  const Chart P = projective_chart(A.algebra, k);
  const JacobiPair target =
      extract_pair_from_bracket(projectivized_oracle(A.algebra, k), P, sample_points(P, 8, 0x51ce));
  dp.leg2 = {target, ConformalMap{moment_chart_map(C, A, C.chart, k), v[k - 1]}, {}};
  return dp;
}

CheckReport classify_reduced_leaves(const DualPairSpec& reduced, const GroupActionSpec& A,
                                    const std::vector<Coords>& seeds) {
  const int n = reduced.source.dim();
  const int g = A.group_dim();
  auto dims = [&](const Coords& p) {
    const int leaf = characteristic_subspace(reduced.leg1.target, reduced.leg1.phi.map(p)).dim();
    const int orbit = reduced.leg2.target.dim() == 0
                          ? 0
                          : characteristic_subspace(reduced.leg2.target, reduced.leg2.phi.map(p)).dim();
    return std::pair{leaf, orbit};
  };
  CheckReport r = run_predicate_check(
      "reduced-leaves", "quotient leaf = J^{-1}(O)/G, contact iff dim O is odd", seeds, [&](const Coords& p) {
        const auto [leaf, orbit] = dims(p);
        return leaf == n - 2 * g + 1 + orbit && parity_of(leaf) == parity_of(orbit);
      });
  if (!seeds.empty()) {
    const auto [leaf, orbit] = dims(seeds[0]);
    r.note = (r.note.empty() ? "" : r.note + "; ") + "first seed: leaf dim " + std::to_string(leaf) + " (" +
             to_string(parity_of(leaf)) + "), orbit dim " + std::to_string(orbit);
  }
  return r;
}

}  // namespace jdl
