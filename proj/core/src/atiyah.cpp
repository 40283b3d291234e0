#include "jdl/atiyah.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace jdl {

Eigen::VectorXd Derivation::vec() const {
  Eigen::VectorXd v(X.size() + 1);
  v << X, g;
  return v;
}

Derivation Derivation::from_vec(const Coords& p, const Eigen::VectorXd& v) {
  return {p, v.head(v.size() - 1), v(v.size() - 1)};
}

Derivation Derivation::identity(const Coords& p) {
  return {p, Eigen::VectorXd::Zero(static_cast<int>(p.size())), 1.0};
}

double Derivation::apply(const Field& f) const {
  if (!f) return 0.0;
  return X.dot(gradient_at(f, p)) + g * value_at(f, p);
}

Eigen::VectorXd JetElement::vec() const {
  Eigen::VectorXd v(alpha.size() + 1);
  v << alpha, c;
  return v;
}

JetElement jet1(const Field& f, const Coords& p) {
  if (!f) return {p, Eigen::VectorXd::Zero(static_cast<int>(p.size())), 0.0};
  return {p, gradient_at(f, p), value_at(f, p)};
}

double pairing(const Derivation& d, const JetElement& j) { return d.X.dot(j.alpha) + d.g * j.c; }

DerivationField der_bracket(const DerivationField& a, const DerivationField& b) {
  return {lie_bracket(a.X, b.X), sub_or(directional(a.X, b.g), directional(b.X, a.g))};
}

Derivation evaluate(const DerivationField& d, const Coords& p) {
  return {p, vector_at(d.X, p), value_at(d.g, p)};
}

AtiyahForm AtiyahForm::zero(int n, int degree) {
  AtiyahForm w;
  w.n = n;
  w.degree = degree;
  w.comp.resize(degree <= n + 1 ? multi_indices(n + 1, degree).size() : 0);
  return w;
}

Field AtiyahForm::at(MultiIndex idx) const {
  const int s = sort_with_sign(idx);
  if (s == 0 || comp.empty()) return {};
  const Field& f = comp[multi_index_position(n + 1, idx)];
  return s > 0 ? f : (f ? -f : Field{});
}

double AtiyahForm::at(MultiIndex idx, const Coords& p) const { return value_at(at(std::move(idx)), p); }

Eigen::MatrixXd AtiyahForm::matrix(const Coords& p) const {
  if (degree != 2) throw DegreeUnsupported("matrix() needs an Atiyah 2-form");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const auto& idx = multi_indices(n + 1, 2);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const double v = value_at(comp[c], p);
    M(idx[c][0], idx[c][1]) = v;
    M(idx[c][1], idx[c][0]) = -v;
  }
  return M;
}

double AtiyahForm::max_abs(const Coords& p) const {
  double m = 0;
  for (const auto& f : comp) m = std::max(m, std::abs(value_at(f, p)));
  return m;
}

AtiyahForm operator-(const AtiyahForm& a, const AtiyahForm& b) {
  if (a.n != b.n || a.degree != b.degree) throw DimensionMismatch("Atiyah form shapes differ");
  AtiyahForm r = a;
  for (std::size_t i = 0; i < r.comp.size(); ++i) r.comp[i] = sub_or(a.comp[i], b.comp[i]);
  return r;
}

AtiyahForm theta_sigma(const ContactStructure& C) {
  AtiyahForm w = AtiyahForm::zero(C.dim(), 1);
  for (int i = 0; i < C.dim(); ++i) w.comp[i] = C.theta.comp[i];
  return w;
}

namespace {

// Action of the frame derivation i on a function.
Field frame_apply(int i, int n, const Field& f) {
  if (!f) return {};
  return i == n ? f : partial_field(f, i);
}

}  // namespace

AtiyahForm atiyah_d(const AtiyahForm& w) {
  AtiyahForm r = AtiyahForm::zero(w.n, w.degree + 1);
  if (w.degree + 1 > w.n + 1) return r;
  // The frame brackets vanish, so only the derivative terms survive.
  const auto& idx = multi_indices(w.n + 1, w.degree + 1);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    Field acc;
    for (int s = 0; s <= w.degree; ++s) {
      MultiIndex rest = idx[c];
      const int i = rest[s];
      rest.erase(rest.begin() + s);
      Field t = frame_apply(i, w.n, w.at(rest));
      acc = (s % 2 == 0) ? add_or(acc, t) : sub_or(acc, t);
    }
    r.comp[c] = acc;
  }
  return r;
}

AtiyahForm iota_one(const AtiyahForm& w) {
  if (w.degree == 0) return AtiyahForm::zero(w.n, 0);
  if (w.comp.empty()) return AtiyahForm::zero(w.n, w.degree - 1);
  AtiyahForm r = AtiyahForm::zero(w.n, w.degree - 1);
  const auto& idx = multi_indices(w.n + 1, w.degree - 1);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    MultiIndex full{w.n};
    full.insert(full.end(), idx[c].begin(), idx[c].end());
    r.comp[c] = w.at(full);
  }
  return r;
}

AtiyahForm varpi_form(const ContactStructure& C) { return atiyah_d(theta_sigma(C)); }

BilinearForm varpi_from_theta(const ContactStructure& C, const Coords& p) {
  return {C.dim() + 1, varpi_form(C).matrix(p)};
}

BilinearForm jacobi_bidiff(const JacobiPair& J, const Coords& p) {
  const int n = J.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
  M.topLeftCorner(n, n) = matrix_at(J.Pi, p);
  const Eigen::VectorXd E = vector_at(J.E, p);
  M.topRightCorner(n, 1) = -E;
  M.bottomLeftCorner(1, n) = E.transpose();
  return {n + 1, M};
}

Eigen::MatrixXd jacobi_sharp(const JacobiPair& J, const Coords& p) {
  return jacobi_bidiff(J, p).matrix.transpose();
}

Eigen::MatrixXd varpi_flat(const BilinearForm& varpi) { return varpi.matrix.transpose(); }

CheckReport check_sharp_inverse(const ContactStructure& C, const JacobiPair& J,
                                const std::vector<Coords>& pts, double tol) {
  const AtiyahForm vp = varpi_form(C);
  const int m = C.dim() + 1;
  return run_residual_check("sharp-inverse", "varpi^flat o J^sharp = -id on first jets", pts, tol,
                            [&](const Coords& p) {
                              Eigen::MatrixXd P = varpi_flat({m, vp.matrix(p)}) * jacobi_sharp(J, p);
                              return (P + Eigen::MatrixXd::Identity(m, m)).norm();
                            });
}

CheckReport check_sharp_inverse(const ContactStructure& C, const std::vector<Coords>& pts, double tol) {
  return check_sharp_inverse(C, contact_to_jacobi(C, pts), pts, tol);
}

namespace {

double factor_at(const ConformalMap& phi, const Coords& p, Eigen::VectorXd* grad) {
  const double a = value_at(phi.factor, p);
  if (std::abs(a) < 1e-14) throw ZeroConformalFactor("conformal factor vanishes at the point");
  if (grad) *grad = phi.factor ? gradient_at(phi.factor, p) : Eigen::VectorXd::Zero(static_cast<int>(p.size()));
  return a;
}

}  // namespace

Derivation gauge_pushforward(const ConformalMap& phi, const Derivation& d) {
  Eigen::VectorXd da;
  const double a = factor_at(phi, d.p, &da);
  const Eigen::MatrixXd T = tangent_map(phi.map, d.p);
  return {phi.map(d.p), T * d.X, d.g + d.X.dot(da) / a};
}

Subspace ker_DPhi(const ConformalMap& phi, const Coords& p) {
  Eigen::VectorXd da;
  const double a = factor_at(phi, p, &da);
  const int n = static_cast<int>(p.size());
  const Eigen::MatrixXd T = tangent_map(phi.map, p);
  Eigen::MatrixXd K = T.rows() == 0 ? Eigen::MatrixXd::Identity(n, n) : null_space(T);
  Eigen::MatrixXd B(n + 1, K.cols());
  B.topRows(n) = K;
  B.bottomRows(1) = -(da.transpose() * K) / a;
  return span_of(B);
}

Derivation hamiltonian_derivation(const JacobiPair& J, const Field& f, const Coords& p) {
  const Eigen::VectorXd E = vector_at(J.E, p);
  const double Ef = f ? E.dot(gradient_at(f, p)) : 0.0;
  return {p, hamiltonian_vf(J, f, p), -Ef};
}

Derivation hamiltonian_derivation(const ContactStructure& C, const Field& f, const Coords& p) {
  const Eigen::VectorXd E = reeb(C, p);
  const double Ef = f ? E.dot(gradient_at(f, p)) : 0.0;
  return {p, contact_hamiltonian_vf(C, f, p), -Ef};
}

CheckReport check_varpi_orthogonality(const ContactStructure& C, const ConformalMap& phi1,
                                      const ConformalMap& phi2, const std::vector<Coords>& pts,
                                      double tol) {
  const AtiyahForm vp = varpi_form(C);
  const int m = C.dim() + 1;
  return run_residual_check("varpi-orthogonality", "(ker D Phi1)^perp = ker D Phi2 w.r.t. varpi", pts, tol,
                            [&](const Coords& p) {
                              const BilinearForm B{m, vp.matrix(p)};
                              const Subspace K1 = ker_DPhi(phi1, p);
                              const Subspace K2 = ker_DPhi(phi2, p);
                              return subspace_equal(orth_complement_wrt(B, K1, whole_space(m)), K2).max_angle;
                            });
}

CheckReport check_technical_lemma(const ContactStructure& C, const ConformalMap& phi,
                                  const std::vector<Coords>& pts, double tol) {
  const AtiyahForm vp = varpi_form(C);
  const int m = C.dim() + 1;
  std::vector<Field> pulled{phi.pull(constant(1.0))};
  for (int k = 0; k < phi.map.target.dim; ++k) pulled.push_back(phi.pull(coord(k)));
  return run_residual_check(
      "technical-lemma", "(ker D Phi)^o = span j1(Phi^* l), (ker D Phi)^perp = span Delta_{Phi^* l}", pts, tol,
      [&](const Coords& p) {
        const Subspace K = ker_DPhi(phi, p);
        std::vector<Eigen::VectorXd> jets, hams;
        for (const auto& f : pulled) {
          jets.push_back(jet1(f, p).vec());
          hams.push_back(hamiltonian_derivation(C, f, p).vec());
        }
        const BilinearForm B{m, vp.matrix(p)};
        const double a1 = subspace_equal(annihilator(K), span_of(jets, m)).max_angle;
        const double a2 = subspace_equal(orth_complement_wrt(B, K, whole_space(m)), span_of(hams, m)).max_angle;
        return std::max(a1, a2);
      });
}

CheckReport check_contracting_homotopy(const std::vector<AtiyahForm>& forms, const std::vector<Coords>& pts,
                                       double tol) {
  std::vector<AtiyahForm> defects;
  defects.reserve(forms.size());
  for (const auto& w : forms) {
    AtiyahForm L = iota_one(atiyah_d(w));
    if (w.degree > 0) {
      const AtiyahForm di = atiyah_d(iota_one(w));
      for (std::size_t c = 0; c < L.comp.size(); ++c) L.comp[c] = add_or(L.comp[c], di.comp[c]);
    }
    defects.push_back(L - w);
  }
  return run_residual_check("contracting-homotopy", "d_D iota_1 + iota_1 d_D = id", pts, tol,
                            [&](const Coords& p) {
                              double r = 0;
                              for (const auto& d : defects) r = std::max(r, d.max_abs(p));
                              return r;
                            });
}

CheckReport check_unit_orthogonal(const ContactStructure& C, const std::vector<Coords>& pts, double tol) {
  const int n = C.dim();
  return run_residual_check("unit-orthogonal", "<1>^perp = sigma^{-1}(H)", pts, tol, [&](const Coords& p) {
    const BilinearForm B = varpi_from_theta(C, p);
    Eigen::VectorXd one = Eigen::VectorXd::Zero(n + 1);
    one(n) = 1.0;
    const Subspace perp = orth_complement_wrt(B, span_of(Eigen::MatrixXd(one)), whole_space(n + 1));
    // sigma^{-1}(H) = {(X, g) : theta(X) = 0}.
    Eigen::MatrixXd row = Eigen::MatrixXd::Zero(1, n + 1);
    row.leftCols(n) = covector_at(C.theta, p).transpose();
    const Subspace pre = kernel(row);
    if (perp.dim() != pre.dim()) return 1.0;
    return subspace_equal(perp, pre).max_angle;
  });
}

}  // namespace jdl
