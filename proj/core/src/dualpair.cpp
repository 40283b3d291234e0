#include "jdl/dualpair.hpp"

#include <cmath>
#include <string>

#include "jdl/linalg.hpp"

namespace jdl {

std::vector<Field> leg_frames(const DualPairLeg& leg) {
  if (!leg.frames.empty()) return leg.frames;
  std::vector<Field> f{constant(1.0)};
  for (int k = 0; k < leg.target.dim(); ++k) f.push_back(coord(k));
  return f;
}

Eigen::MatrixXd ker_tangent(const SmoothMap& F, const Coords& p) {
  const int n = static_cast<int>(p.size());
  if (F.target.dim == 0) return Eigen::MatrixXd::Identity(n, n);
  return null_space(tangent_map(F, p));
}

Eigen::MatrixXd ker_tangent(const ConformalMap& phi, const Coords& p) { return ker_tangent(phi.map, p); }

namespace {

Eigen::MatrixXd horizontal(const ContactStructure& C, const Coords& p) {
  return kernel(Eigen::MatrixXd(covector_at(C.theta, p).transpose())).basis;
}

std::vector<Field> pulled_frames(const DualPairLeg& leg) {
  std::vector<Field> out;
  for (const auto& f : leg_frames(leg)) out.push_back(leg.phi.pull(f));
  return out;
}

double image_norm(const ConformalMap& phi, const Eigen::VectorXd& v, const Coords& p) {
  if (phi.map.target.dim == 0) return 0.0;
  return (tangent_map(phi.map, p) * v).norm();
}

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m(a.rows(), a.cols() + b.cols());
  m << a, b;
  return m;
}

}  // namespace

CheckReport check_legs(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  const JacobiPair J = contact_to_jacobi(dp.source, pts);
  auto r1 = check_jacobi_morphism(J, dp.leg1.target, dp.leg1.phi, leg_frames(dp.leg1), pts, tol);
  auto r2 = check_jacobi_morphism(J, dp.leg2.target, dp.leg2.phi, leg_frames(dp.leg2), pts, tol);
  r1.id = "leg1";
  r2.id = "leg2";
  return combine("legs", "both legs are Jacobi morphisms", {r1, r2});
}

CheckReport check_transversality(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  const int n = dp.source.dim();
  return run_margin_check("transversality", "H + ker T phi_i = TM for i = 1, 2", pts, tol,
                          [&](const Coords& p) {
                            const Eigen::MatrixXd H = horizontal(dp.source, p);
                            double m = 1.0;
                            for (const auto* leg : {&dp.leg1, &dp.leg2}) {
                              const Eigen::MatrixXd M = hcat(H, ker_tangent(leg->phi, p));
                              if (M.cols() < n) return 0.0;
                              Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
                              m = std::min(m, svd.singularValues()(n - 1));
                            }
                            return m;
                          });
}

CheckReport check_commutation(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  const auto P1 = pulled_frames(dp.leg1);
  const auto P2 = pulled_frames(dp.leg2);
  std::vector<Field> brackets;
  for (const auto& f : P1)
    for (const auto& g : P2) brackets.push_back(contact_bracket(dp.source, f, g));
  return run_residual_check(
      "commutation", "{a1 phi1^* f, a2 phi2^* g} = 0, X_{a1} in ker T phi2, X_{a2} in ker T phi1", pts, tol,
      [&](const Coords& p) {
        double r = 0;
        for (const auto& b : brackets) r = std::max(r, std::abs(value_at(b, p)));
        const Eigen::VectorXd X1 = contact_hamiltonian_vf(dp.source, dp.leg1.phi.factor, p);
        const Eigen::VectorXd X2 = contact_hamiltonian_vf(dp.source, dp.leg2.phi.factor, p);
        r = std::max(r, image_norm(dp.leg2.phi, X1, p));
        r = std::max(r, image_norm(dp.leg1.phi, X2, p));
        return r;
      });
}

CheckReport check_curvature_orthogonality(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  return run_residual_check("curvature-orthogonality", "H_1 and H_2 are c-orthogonal complements in H", pts,
                            tol, [&](const Coords& p) {
                              const Curvature cv = curvature_form(dp.source, p);
                              const Subspace H1 = intersect(cv.H, span_of(ker_tangent(dp.leg1.phi, p)));
                              const Subspace H2 = intersect(cv.H, span_of(ker_tangent(dp.leg2.phi, p)));
                              return subspace_equal(orth_complement_wrt(cv.c, H1, cv.H), H2).max_angle;
                            });
}

bool DualPairVerdict::definition_holds() const {
  return transversality.passed() && commutation.passed() && curvature.passed();
}

std::vector<CheckReport> DualPairVerdict::all() const {
  return {legs, transversality, commutation, curvature, varpi, equivalence};
}

DualPairVerdict verify_dual_pair(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  DualPairVerdict v;
  v.legs = check_legs(dp, pts, tol);
  v.transversality = check_transversality(dp, pts, tol);
  v.commutation = check_commutation(dp, pts, tol);
  v.curvature = check_curvature_orthogonality(dp, pts);
  v.varpi = check_varpi_orthogonality(dp.source, dp.leg1.phi, dp.leg2.phi, pts);

  CheckReport& e = v.equivalence;
  e.id = "equivalence";
  e.anchor = "three-condition verdict equals varpi-orthogonality verdict";
  e.metric = "verdict";
  e.samples = static_cast<int>(pts.size());
  e.point_pass.assign(pts.size(), 1);
  int disagreements = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto at = [i](const CheckReport& r) { return i < r.point_pass.size() && r.point_pass[i]; };
    const bool def = at(v.transversality) && at(v.commutation) && at(v.curvature);
    if (def != at(v.varpi)) {
      e.point_pass[i] = 0;
      if (disagreements++ == 0) e.worst_point = pts[i];
    }
  }
  e.max_residual = disagreements;
  e.status = disagreements == 0 ? Status::Pass : Status::Fail;
  e.wall_ms = v.transversality.wall_ms + v.commutation.wall_ms + v.curvature.wall_ms + v.varpi.wall_ms;
  return v;
}

CheckReport check_rank_relation(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  if (pts.empty()) return skipped("rank-relation", "1 + rank T phi1 + rank T phi2 = dim M", "no sample points");
  const int n = dp.source.dim();
  auto rank_of = [](const ConformalMap& phi, const Coords& p) {
    return phi.map.target.dim == 0 ? 0 : numerical_rank(tangent_map(phi.map, p));
  };
  const int r10 = rank_of(dp.leg1.phi, pts[0]);
  const int r20 = rank_of(dp.leg2.phi, pts[0]);
  const auto P1 = pulled_frames(dp.leg1);
  const auto P2 = pulled_frames(dp.leg2);
  auto ham_span = [&](const std::vector<Field>& fs, const Coords& p) {
    std::vector<Eigen::VectorXd> v;
    for (const auto& f : fs) v.push_back(contact_hamiltonian_vf(dp.source, f, p));
    return span_of(v, n);
  };
  CheckReport r = run_residual_check(
      "rank-relation", "1 + rank T phi1 + rank T phi2 = dim M, ker T phi_i = span X_{a_j phi_j^* g}", pts, tol,
      [&](const Coords& p) {
        const int r1 = rank_of(dp.leg1.phi, p);
        const int r2 = rank_of(dp.leg2.phi, p);
        double res = std::abs(1 + r1 + r2 - n) + std::abs(r1 - r10) + std::abs(r2 - r20);
        res += subspace_equal(span_of(ker_tangent(dp.leg1.phi, p)), ham_span(P2, p)).max_angle;
        res += subspace_equal(span_of(ker_tangent(dp.leg2.phi, p)), ham_span(P1, p)).max_angle;
        return res;
      });
  r.note = (r.note.empty() ? "" : r.note + "; ") + "ranks at first sample: " + std::to_string(r10) + ", " +
           std::to_string(r20);
  return r;
}

CheckReport check_corollary_decomposition(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  return run_residual_check(
      "corollary-decomposition", "ker T phi_i = <X_{a_j}> + H_j^perp, direct", pts, tol, [&](const Coords& p) {
        const Curvature cv = curvature_form(dp.source, p);
        double res = 0;
        for (const auto& [li, lj] : {std::pair{&dp.leg1, &dp.leg2}, std::pair{&dp.leg2, &dp.leg1}}) {
          const Subspace Ki = span_of(ker_tangent(li->phi, p));
          const Subspace Hj = intersect(cv.H, span_of(ker_tangent(lj->phi, p)));
          const Subspace perp = orth_complement_wrt(cv.c, Hj, cv.H);
          const Eigen::VectorXd Xa = contact_hamiltonian_vf(dp.source, lj->phi.factor, p);
          const Subspace S = span_of(hcat(Xa, perp.basis));
          // Direct sum: X_{a_j} is nonzero and off H_j^perp.
          if (S.dim() != 1 + perp.dim() || Ki.dim() != S.dim()) {
            res = std::max(res, 1.0);
            continue;
          }
          res = std::max(res, subspace_equal(S, Ki).max_angle);
        }
        return res;
      });
}

CheckReport centralizer_membership(const DualPairSpec& dp, const Field& lambda, const std::vector<Coords>& pts,
                                   double tol) {
  const std::string id = "centralizer-membership";
  const std::string anchor = "j1 lambda annihilates ker D Phi2 when lambda commutes with leg-1 frames";
  std::vector<Field> brackets;
  for (const auto& f : pulled_frames(dp.leg1)) brackets.push_back(contact_bracket(dp.source, lambda, f));
  auto hyp = run_residual_check(id, anchor, pts, tol, [&](const Coords& p) {
    double r = 0;
    for (const auto& b : brackets) r = std::max(r, std::abs(value_at(b, p)));
    return r;
  });
  if (!hyp.passed()) {
    auto r = hypothesis_not_met(id, anchor,
                                "lambda does not commute with the leg-1 frames (max bracket " +
                                    std::to_string(hyp.max_residual) + ")");
    r.samples = hyp.samples;
    r.worst_point = hyp.worst_point;
    return r;
  }
  auto r = run_residual_check(id, anchor, pts, tol, [&](const Coords& p) {
    const Subspace K = ker_DPhi(dp.leg2.phi, p);
    if (K.dim() == 0) return 0.0;
    return (K.basis.transpose() * jet1(lambda, p).vec()).norm();
  });
  r.note = (r.note.empty() ? "" : r.note + "; ") + "pointwise surrogate, not a function-space centralizer check";
  return r;
}

}  // namespace jdl
