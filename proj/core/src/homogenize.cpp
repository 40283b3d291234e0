#include "jdl/homogenize.hpp"

#include <array>
#include <cmath>
#include <string>

#include "jdl/linalg.hpp"

namespace jdl {

namespace {

constexpr double kFiberHalfWidth = 2.0;
constexpr double kFiberGap = 0.5;

SmoothMap projection_to_base(const Chart& slit, const Chart& base) {
  std::vector<Field> comps;
  for (int i = 0; i < base.dim; ++i) comps.push_back(coord(i));
  return {"pi", slit, base, comps};
}

SmoothMap unit_section(const Chart& base, const Chart& slit) {
  std::vector<Field> comps;
  for (int i = 0; i < base.dim; ++i) comps.push_back(coord(i));
  comps.push_back(constant(1.0));
  return {"s=1", base, slit, comps};
}

Coords scale_fiber(Coords p, double t) {
  p.back() *= t;
  return p;
}

Eigen::MatrixXd fiber_scaling(int dim, double t) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(dim, dim);
  T(dim - 1, dim - 1) = t;
  return T;
}

JacobiPair as_poisson(const Chart& chart, const Multivector& P) {
  return make_jacobi_pair(chart, P, AltField::zero(AltKind::Multivector, chart.dim, 1));
}

}  // namespace

Chart slit_chart(const Chart& base) {
  std::vector<Interval> box = base.box;
  box.push_back({-kFiberHalfWidth, kFiberHalfWidth});
  auto base_excluded = base.excluded;
  const int n = base.dim;
  return Chart(base.name + "~", box, [base_excluded, n](const Coords& p, double margin) {
    if (std::abs(p[n]) < kFiberGap) return true;
    if (!base_excluded) return false;
    return base_excluded(Coords(p.begin(), p.begin() + n), margin);
  });
}

Coords lift_point(const Coords& x, double s) {
  Coords p = x;
  p.push_back(s);
  return p;
}

HomogeneousBivector poissonize(const JacobiPair& J) {
  const int n = J.dim();
  HomogeneousBivector H{J.chart, slit_chart(J.chart), AltField::zero(AltKind::Multivector, n + 1, 2)};
  const SmoothMap pi = projection_to_base(H.chart, J.chart);
  const Field sinv = 1.0 / coord(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Field c = J.Pi.at({i, j});
      if (c) H.P.set({i, j}, sinv * pullback(pi, c));
    }
    // d_s ^ E has (s, i) entry E^i.
    if (J.E.comp[i]) H.P.set({i, n}, -pullback(pi, J.E.comp[i]));
  }
  const auto pts = sample_points(H.chart, 8, 0x5eed);
  const auto r = check_poissonization(J, H, pts);
  if (!r.passed())
    throw OracleMismatch("Poissonization closed form disagrees with the defining bracket (residual " +
                         std::to_string(r.max_residual) + ")");
  return H;
}

CheckReport check_poissonization(const JacobiPair& J, const HomogeneousBivector& H, const std::vector<Coords>& pts,
                                 double tol) {
  const int n = J.dim();
  const SmoothMap pi = projection_to_base(H.chart, J.chart);
  const JacobiPair P = as_poisson(H.chart, H.P);
  const Field s = coord(n);
  const auto fs = default_test_functions(n);
  std::vector<std::pair<Field, Field>> terms;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      terms.push_back({jacobi_bracket(P, s * pullback(pi, fs[i]), s * pullback(pi, fs[j])),
                       mul_or(s, pullback(pi, jacobi_bracket(J, fs[i], fs[j])))});
  return run_residual_check("poissonization", "{s f o pi, s g o pi}_P = s {f, g} o pi", pts, tol,
                            [&](const Coords& p) {
                              double r = 0;
                              for (const auto& [a, b] : terms)
                                r = std::max(r, std::abs(value_at(a, p) - value_at(b, p)));
                              return r;
                            });
}

CheckReport check_bivector_homogeneity(const HomogeneousBivector& H, const std::vector<Coords>& pts, double tol) {
  const int m = H.chart.dim;
  return run_residual_check("bivector-homogeneity", "h_t^* P = t^{-1} P", pts, tol, [&](const Coords& p) {
    const Eigen::MatrixXd P0 = matrix_at(H.P, p);
    double r = 0;
    for (double t : {2.0, 1.0 / 3.0, -1.0}) {
      const Eigen::MatrixXd Ti = fiber_scaling(m, 1.0 / t);
      const Eigen::MatrixXd Pt = Ti * matrix_at(H.P, scale_fiber(p, t)) * Ti.transpose();
      r = std::max(r, (Pt - P0 / t).cwiseAbs().maxCoeff());
    }
    return r;
  });
}

JacobiPair dehomogenize(const HomogeneousBivector& H) {
  const int n = H.base.dim;
  const SmoothMap sec = unit_section(H.base, H.chart);
  Multivector Pi = AltField::zero(AltKind::Multivector, n, 2);
  Multivector E = AltField::zero(AltKind::Multivector, n, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) Pi.set({i, j}, pullback(sec, H.P.at({i, j})));
    const Field c = H.P.at({i, n});
    if (c) E.comp[i] = -pullback(sec, c);
  }
  return make_jacobi_pair(H.base, Pi, E);
}

Symplectization symplectize(const ContactStructure& C) {
  const int n = C.dim();
  Symplectization S{C.chart, slit_chart(C.chart), {}};
  const SmoothMap pi = projection_to_base(S.chart, C.chart);
  std::vector<Field> lifted;
  for (int i = 0; i < n; ++i) lifted.push_back(mul_or(coord(n), pullback(pi, C.theta.comp[i])));
  lifted.emplace_back();
  S.omega = exterior_d(one_form(lifted));
  return S;
}

CheckReport check_symplectization(const Symplectization& S, const std::vector<Coords>& pts, double tol) {
  const int m = S.chart.dim;
  const bool has3 = m > 3;
  const KForm d = has3 ? exterior_d(S.omega) : KForm{};
  return run_residual_check("symplectization", "d omega~ = 0, omega~ nondegenerate, h_t^* omega~ = t omega~", pts,
                            tol, [&](const Coords& p) {
                              const Eigen::MatrixXd O = matrix_at(S.omega, p);
                              Eigen::JacobiSVD<Eigen::MatrixXd> svd(O);
                              const auto& sv = svd.singularValues();
                              if (sv(m - 1) <= 1e-10 * std::max(1.0, sv(0)))
                                throw SingularOmega("symplectization is degenerate at a sample");
                              double r = has3 ? evaluate(d, p).max_abs() : 0.0;
                              for (double t : {2.0, -1.0}) {
                                const Eigen::MatrixXd T = fiber_scaling(m, t);
                                const Eigen::MatrixXd Ot = T.transpose() * matrix_at(S.omega, scale_fiber(p, t)) * T;
                                r = std::max(r, (Ot - t * O).cwiseAbs().maxCoeff());
                              }
                              return r;
                            });
}

CheckReport check_symplectization_consistency(const ContactStructure& C, const std::vector<Coords>& base_pts,
                                              double tol) {
  const Symplectization S = symplectize(C);
  const HomogeneousBivector H = poissonize(contact_to_jacobi(C, base_pts));
  std::vector<Coords> lifted;
  for (const auto& x : base_pts)
    for (double s : {1.0, 2.0, -1.0}) lifted.push_back(lift_point(x, s));
  return run_residual_check("symplectization-consistency", "-omega~^{-1} = poissonization of the contact pair",
                            lifted, tol, [&](const Coords& p) {
                              const Eigen::MatrixXd O = matrix_at(S.omega, p);
                              Eigen::FullPivLU<Eigen::MatrixXd> lu(O);
                              if (!lu.isInvertible()) throw SingularOmega("symplectization is degenerate");
                              return (-lu.inverse() - matrix_at(H.P, p)).cwiseAbs().maxCoeff();
                            });
}

SmoothMap homogenize_map(const ConformalMap& phi) {
  if (!phi.factor) throw ZeroConformalFactor("conformal factor is identically zero");
  const Chart src = slit_chart(phi.map.source);
  const Chart tgt = slit_chart(phi.map.target);
  const SmoothMap pi = projection_to_base(src, phi.map.source);
  std::vector<Field> comps;
  for (const auto& c : phi.map.components) comps.push_back(pullback(pi, c));
  comps.push_back(pullback(pi, phi.factor) * coord(phi.map.source.dim));
  return {phi.map.name + "~", src, tgt, comps};
}

CheckReport check_map_equivariance(const ConformalMap& phi, const std::vector<Coords>& pts, double tol) {
  const SmoothMap F = homogenize_map(phi);
  return run_residual_check("map-equivariance", "Phi~ o h_t = h_t o Phi~", pts, tol, [&](const Coords& p) {
    double r = 0;
    const Coords base = F(p);
    for (double t : {2.0, -1.0, 1.0 / 3.0}) {
      const Coords a = F(scale_fiber(p, t));
      const Coords b = scale_fiber(base, t);
      for (std::size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
    }
    return r;
  });
}

CheckReport check_homogeneous_sdp_equivalence(const DualPairSpec& dp, const std::vector<Coords>& base_pts,
                                              double tol) {
  const Symplectization S = symplectize(dp.source);
  const SmoothMap F1 = homogenize_map(dp.leg1.phi);
  const SmoothMap F2 = homogenize_map(dp.leg2.phi);
  const int m = S.chart.dim;
  auto kernel_of = [](const SmoothMap& F, const Coords& p) { return span_of(null_space(tangent_map(F, p))); };
  const std::array<double, 3> slices{1.0, 2.0, -1.0};
  std::vector<CheckReport> parts;
  for (double s : slices) {
    std::vector<Coords> lifted;
    for (const auto& x : base_pts) lifted.push_back(lift_point(x, s));
    auto r = run_residual_check("sdp-slice", "ker T Phi~1 = (ker T Phi~2)^perp", lifted, tol, [&](const Coords& p) {
      const BilinearForm B{m, matrix_at(S.omega, p)};
      const Subspace K1 = kernel_of(F1, p);
      const Subspace K2 = kernel_of(F2, p);
      return subspace_equal(K1, orth_complement_wrt(B, K2, whole_space(m))).max_angle;
    });
    r.id += " s=" + std::to_string(static_cast<int>(s));
    parts.push_back(r);
  }
  CheckReport out = combine("homogeneous-sdp", "homogeneous symplectic dual pair upstairs", parts);
  out.note.clear();

  const DualPairVerdict base = verify_dual_pair(dp, base_pts);
  int slice_mismatch = 0, base_mismatch = 0;
  for (std::size_t i = 0; i < base_pts.size(); ++i) {
    const bool up = parts[0].point_pass[i];
    for (const auto& r : parts)
      if (static_cast<bool>(r.point_pass[i]) != up) ++slice_mismatch;
    auto at = [i](const CheckReport& r) { return i < r.point_pass.size() && r.point_pass[i]; };
    const bool down = at(base.transversality) && at(base.commutation) && at(base.curvature);
    if (down != up) ++base_mismatch;
  }
  out.note = "slice disagreements: " + std::to_string(slice_mismatch) +
             "; disagreements with base verdict: " + std::to_string(base_mismatch);
  if (slice_mismatch + base_mismatch > 0) out.status = Status::Fail;
  return out;
}

}  // namespace jdl
