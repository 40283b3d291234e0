#include "jdl/leaves.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <string>

#include "jdl/calculus.hpp"
#include "jdl/errors.hpp"

namespace jdl {

Subspace characteristic_subspace(const JacobiPair& J, const Coords& p) {
  const int n = J.dim();
  std::vector<Eigen::VectorXd> v;
  if (n == 0) return zero_subspace(0);
  v.push_back(vector_at(J.E, p));
  for (int k = 0; k < n; ++k) v.push_back(hamiltonian_vf(J, coord(k), p));
  return span_of(v, n);
}

const char* to_string(LeafParity p) { return p == LeafParity::Contact ? "contact" : "lcs"; }

namespace {

Eigen::VectorXd rk4(const Multivector& X, const Eigen::VectorXd& y, double h) {
  auto f = [&](const Eigen::VectorXd& z) { return vector_at(X, to_coords(z)); };
  const Eigen::VectorXd k1 = f(y);
  const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
  const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
  const Eigen::VectorXd k4 = f(y + h * k3);
  return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

Multivector random_field(const JacobiPair& J, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const int n = J.dim();
  Field f = constant(nd(rng));
  for (int k = 0; k < n; ++k) f = f + nd(rng) * coord(k);
  return hamiltonian_vf(J, f);
}

}  // namespace

LeafProbe leaf_trace(const JacobiPair& J, const Coords& p0, const TraceOptions& opt) {
  LeafProbe probe;
  probe.seed = p0;
  probe.dimension = characteristic_subspace(J, p0).dim();
  probe.parity = parity_of(probe.dimension);
  auto record = [&](int step, const Coords& p) {
    const int r = characteristic_subspace(J, p).dim();
    probe.steps.push_back(step);
    probe.points.push_back(p);
    probe.ranks.push_back(r);
    if (r != probe.dimension) probe.rank_constant = false;
  };
  record(0, p0);

  std::mt19937_64 rng(opt.seed);
  Eigen::VectorXd y = to_vector(p0);
  Multivector X = random_field(J, rng);
  const int every = std::max(1, opt.record_every);
  for (int step = 1; step <= opt.steps; ++step) {
    if (opt.segment > 0 && (step - 1) % opt.segment == 0 && step > 1) X = random_field(J, rng);
    Eigen::VectorXd full, halves;
    int redraws = 0;
    for (;;) {
      full = rk4(X, y, opt.dt);
      halves = rk4(X, rk4(X, y, 0.5 * opt.dt), 0.5 * opt.dt);
      if (J.chart.contains(to_coords(full)) && J.chart.contains(to_coords(halves))) break;
      if (++redraws > opt.max_redraws)
        throw StepOutOfDomain("leaf trace left the chart at step " + std::to_string(step));
      X = random_field(J, rng);
    }
    probe.step_error = std::max(probe.step_error, (full - halves).cwiseAbs().maxCoeff());
    y = full;
    if (step % every == 0 || step == opt.steps) record(step, to_coords(y));
  }
  return probe;
}

void write_trace_csv(std::ostream& os, const LeafProbe& probe, const std::vector<Field>& extra) {
  const std::size_t n = probe.seed.size();
  os << "step";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i;
  os << ",rank";
  for (std::size_t k = 0; k < extra.size(); ++k) os << ",f" << k;
  os << "\n" << std::setprecision(17);
  for (std::size_t r = 0; r < probe.points.size(); ++r) {
    os << probe.steps[r];
    for (double v : probe.points[r]) os << "," << v;
    os << "," << probe.ranks[r];
    for (const auto& f : extra) os << "," << value_at(f, probe.points[r]);
    os << "\n";
  }
}

namespace {

// D Phi on derivations (X, g): (T phi X, X(a)/a + g).
Eigen::MatrixXd dphi_matrix(const ConformalMap& phi, const Coords& p) {
  const int n = static_cast<int>(p.size());
  const int m = phi.map.target.dim;
  const double a = value_at(phi.factor, p);
  if (std::abs(a) < 1e-14) throw ZeroConformalFactor("conformal factor vanishes at the point");
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m + 1, n + 1);
  if (m > 0) D.topLeftCorner(m, n) = tangent_map(phi.map, p);
  if (phi.factor) D.block(m, 0, 1, n) = gradient_at(phi.factor, p).transpose() / a;
  D(m, n) = 1.0;
  return D;
}

// {v : M v in V}.
Subspace preimage(const Eigen::MatrixXd& M, const Subspace& V) {
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(M.rows(), M.rows()) - V.projector();
  return kernel(Q * M);
}

double angle(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return 1.0 + std::abs(a.dim() - b.dim());
  return subspace_equal(a, b).max_angle;
}

}  // namespace

CheckReport check_pullback_distribution(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol) {
  const int n = dp.source.dim();
  return run_residual_check(
      "pullback-distribution",
      "(D Phi_i)^{-1}(im J_i^sharp) = ker D Phi_i + (ker D Phi_i)^perp; ker T phi1 + ker T phi2 = (T phi_i)^{-1}(C_i)",
      pts, tol, [&](const Coords& p) {
        const BilinearForm vp = varpi_from_theta(dp.source, p);
        const Subspace D = sum(span_of(ker_tangent(dp.leg1.phi, p)), span_of(ker_tangent(dp.leg2.phi, p)));
        double r = 0;
        for (const auto* leg : {&dp.leg1, &dp.leg2}) {
          const Coords q = leg->phi.map(p);
          const int m = leg->target.dim();
          const Subspace im = m == 0 ? zero_subspace(1) : image(jacobi_sharp(leg->target, q));
          const Subspace K = ker_DPhi(leg->phi, p);
          const Subspace rhs = sum(K, orth_complement_wrt(vp, K, whole_space(n + 1)));
          r = std::max(r, angle(preimage(dphi_matrix(leg->phi, p), im), rhs));

          const Subspace tpre = m == 0 ? whole_space(n)
                                       : preimage(tangent_map(leg->phi.map, p), characteristic_subspace(leg->target, q));
          r = std::max(r, angle(D, tpre));
        }
        return r;
      });
}

CheckReport verify_leaf_correspondence(const DualPairSpec& dp, const std::vector<Coords>& seeds) {
  auto codim_and_dim = [](const DualPairLeg& leg, const Coords& p) {
    const int m = leg.target.dim();
    const int d = m == 0 ? 0 : characteristic_subspace(leg.target, leg.phi.map(p)).dim();
    return std::pair{m - d, d};
  };
  CheckReport r = run_predicate_check("leaf-correspondence", "codim C_1 = codim C_2 and leaf parities agree", seeds,
                                      [&](const Coords& p) {
                                        const auto [c1, d1] = codim_and_dim(dp.leg1, p);
                                        const auto [c2, d2] = codim_and_dim(dp.leg2, p);
                                        return c1 == c2 && parity_of(d1) == parity_of(d2);
                                      });
  if (!seeds.empty()) {
    const auto [c1, d1] = codim_and_dim(dp.leg1, seeds[0]);
    const auto [c2, d2] = codim_and_dim(dp.leg2, seeds[0]);
    r.note = (r.note.empty() ? "" : r.note + "; ") + "first seed: leaf dims " + std::to_string(d1) + ", " +
             std::to_string(d2) + ", codims " + std::to_string(c1) + ", " + std::to_string(c2);
  }
  return r;
}

namespace {

struct LegOnLeaf {
  SmoothMap F;  // phi_i o iota
  Field a;      // a_i o iota
  int m = 0;
};

LegOnLeaf restrict_leg(const DualPairLeg& leg, const SmoothMap& iota) {
  return {compose(leg.phi.map, iota), pullback(iota, leg.phi.factor), leg.target.dim()};
}

Eigen::MatrixXd tangent_or_empty(const LegOnLeaf& L, const Coords& x) {
  if (L.m == 0) return Eigen::MatrixXd::Zero(0, static_cast<int>(x.size()));
  return tangent_map(L.F, x);
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& T, int k) {
  if (T.rows() == 0) return Eigen::MatrixXd::Identity(k, k);
  return null_space(T);
}

}  // namespace

CheckReport verify_leaf_relation_contact(const DualPairSpec& dp, const SmoothMap& iota, const KForm& theta1,
                                         const KForm& theta2, const std::vector<Coords>& pts, double tol) {
  const LegOnLeaf L1 = restrict_leg(dp.leg1, iota);
  const LegOnLeaf L2 = restrict_leg(dp.leg2, iota);
  if (!pts.empty()) {
    const int d1 = L1.m == 0 ? 0 : characteristic_subspace(dp.leg1.target, L1.F(pts[0])).dim();
    const int d2 = L2.m == 0 ? 0 : characteristic_subspace(dp.leg2.target, L2.F(pts[0])).dim();
    // A point target carries no leaf structure and is allowed on either side.
    if (d1 % 2 == 0 && d2 % 2 == 0 && L1.m > 0 && L2.m > 0)
      throw DimensionMismatch("both target leaves are even-dimensional; use the l.c.s. relation");
  }
  return run_residual_check(
      "leaf-relation-contact", "iota^* theta = a1 (phi1 iota)^* theta1 + a2 (phi2 iota)^* theta2", pts, tol,
      [&](const Coords& x) {
        const Eigen::MatrixXd Ti = tangent_map(iota, x);
        Eigen::VectorXd r = Ti.transpose() * covector_at(dp.source.theta, iota(x));
        for (const auto& [L, th] : {std::pair{&L1, &theta1}, std::pair{&L2, &theta2}}) {
          if (L->m == 0) continue;
          r -= value_at(L->a, x) * (tangent_map(L->F, x).transpose() * covector_at(*th, L->F(x)));
        }
        return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
      });
}

namespace {

Eigen::VectorXd assemble_eta(const LegOnLeaf& L1, const LegOnLeaf& L2, const LeafLcs& s1, const LeafLcs& s2,
                             const Coords& x, double tol) {
  const int k = static_cast<int>(x.size());
  auto prescription = [&](const LegOnLeaf& L, const LeafLcs& s) {
    const double a = value_at(L.a, x);
    if (std::abs(a) < 1e-14) throw ZeroConformalFactor("conformal factor vanishes on the leaf");
    Eigen::VectorXd b = L.a ? Eigen::VectorXd(-gradient_at(L.a, x) / a) : Eigen::VectorXd::Zero(k);
    if (L.m > 0) b += tangent_map(L.F, x).transpose() * covector_at(s.eta, L.F(x));
    return b;
  };
  // Leg-1 data on ker T(phi2 iota), leg-2 data on ker T(phi1 iota).
  const Eigen::MatrixXd K2 = kernel_basis(tangent_or_empty(L2, x), k);
  const Eigen::MatrixXd K1 = kernel_basis(tangent_or_empty(L1, x), k);
  const Eigen::VectorXd b1 = prescription(L1, s1);
  const Eigen::VectorXd b2 = prescription(L2, s2);
  Eigen::MatrixXd A(K2.cols() + K1.cols(), k);
  Eigen::VectorXd rhs(A.rows());
  A << K2.transpose(), K1.transpose();
  rhs << K2.transpose() * b1, K1.transpose() * b2;
  if (numerical_rank(A) < k) throw DimensionMismatch("ker T phi1 + ker T phi2 does not span the leaf");
  const Eigen::VectorXd eta = A.colPivHouseholderQr().solve(rhs);
  const double miss = (A * eta - rhs).cwiseAbs().maxCoeff();
  if (miss > tol * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
    throw InconsistentConnection("the two prescriptions for eta disagree by " + std::to_string(miss));
  return eta;
}

Eigen::MatrixXd wedge11(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a * b.transpose() - b * a.transpose();
}

}  // namespace

Eigen::VectorXd leaf_eta(const DualPairSpec& dp, const SmoothMap& iota, const LeafLcs& s1, const LeafLcs& s2,
                         const Coords& x, double tol) {
  return assemble_eta(restrict_leg(dp.leg1, iota), restrict_leg(dp.leg2, iota), s1, s2, x, tol);
}

CheckReport verify_leaf_relation_lcs(const DualPairSpec& dp, const SmoothMap& iota, const LeafLcs& s1,
                                     const LeafLcs& s2, const std::vector<Coords>& pts, double tol) {
  const LegOnLeaf L1 = restrict_leg(dp.leg1, iota);
  const LegOnLeaf L2 = restrict_leg(dp.leg2, iota);
  const int k = iota.source.dim;
  // Well-posedness first, so an inconsistent connection surfaces as an error.
  for (const auto& x : pts) assemble_eta(L1, L2, s1, s2, x, tol);

  const KForm theta_s = pullback_form(iota, dp.source.theta);
  const bool has2 = k >= 2;
  const KForm dtheta_s = has2 ? exterior_d(theta_s) : KForm{};
  constexpr double h = 1e-5;
  return run_residual_check(
      "leaf-relation-lcs", "d eta = 0, d(iota^* theta) - iota^* theta ^ eta = a1 phi1^* omega1 + a2 phi2^* omega2",
      pts, tol, [&](const Coords& x) {
        const Eigen::VectorXd eta = assemble_eta(L1, L2, s1, s2, x, tol);
        const Eigen::VectorXd th = covector_at(theta_s, x);
        Eigen::MatrixXd lhs = has2 ? matrix_at(dtheta_s, x) : Eigen::MatrixXd::Zero(k, k);
        lhs -= wedge11(th, eta);
        for (const auto& [L, s] : {std::pair{&L1, &s1}, std::pair{&L2, &s2}}) {
          if (L->m < 2) continue;
          const Eigen::MatrixXd T = tangent_map(L->F, x);
          lhs -= value_at(L->a, x) * (T.transpose() * matrix_at(s->omega, L->F(x)) * T);
        }
        double r = k ? lhs.cwiseAbs().maxCoeff() : 0.0;
        // d eta by central differences.
        Eigen::MatrixXd G(k, k);
        for (int i = 0; i < k; ++i) {
          Coords xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          G.row(i) = (assemble_eta(L1, L2, s1, s2, xp, tol) - assemble_eta(L1, L2, s1, s2, xm, tol)).transpose() /
                     (2 * h);
        }
        if (k) r = std::max(r, (G - G.transpose()).cwiseAbs().maxCoeff());
        return r;
      });
}

}  // namespace jdl
