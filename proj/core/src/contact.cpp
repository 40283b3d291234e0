#include "jdl/contact.hpp"

#include <cmath>
#include <string>

namespace jdl {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

Jet zero_like(const Jet& ref, int order) {
  return Jet::constant(ref.dim(), order, 0.0);
}

// Antisymmetric matrix of a 2-form from order-(K+1) jets of its components.
std::vector<Jet> omega_matrix(std::span<const Jet> comps, int n, int K) {
  std::vector<Jet> M(n * n, zero_like(comps[0], K));
  const auto& idx = multi_indices(n, 2);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const int i = idx[c][0], j = idx[c][1];
    M[i * n + j] = comps[c].truncate(K);
    M[j * n + i] = -M[i * n + j];
  }
  return M;
}

}  // namespace

ContactStructure make_contact(const Chart& chart, KForm theta) {
  require(theta.kind == AltKind::Form && theta.degree == 1 && theta.dim == chart.dim,
          "theta must be a 1-form on the chart");
  return {chart, std::move(theta)};
}

LcsStructure make_lcs(const Chart& chart, KForm eta, KForm omega) {
  require(eta.kind == AltKind::Form && eta.degree == 1 && eta.dim == chart.dim, "eta must be a 1-form");
  require(omega.kind == AltKind::Form && omega.degree == 2 && omega.dim == chart.dim,
          "omega must be a 2-form");
  return {chart, std::move(eta), std::move(omega)};
}

Field contact_volume(const ContactStructure& C) {
  const int n = C.half_dim();
  KForm dth = exterior_d(C.theta);
  KForm top = C.theta;
  for (int k = 0; k < n; ++k) top = wedge(top, dth);
  return top.comp.empty() ? Field{} : top.comp[0];
}

CheckReport check_contact(const ContactStructure& C, const std::vector<Coords>& pts, double tol) {
  if (C.dim() % 2 == 0)
    throw EvenDimension("contact structures need an odd-dimensional chart, got " + std::to_string(C.dim()));
  const Field vol = contact_volume(C);
  return run_margin_check("contact", "theta ^ (dtheta)^n is a volume form", pts, tol,
                          [&](const Coords& p) { return std::abs(value_at(vol, p)); });
}

Multivector contact_hamiltonian_field(const ContactStructure& C, const Field& f) {
  const int N = C.dim();
  std::vector<Field> deps = C.theta.comp;
  deps.push_back(f);
  auto body = [N](std::span<const Jet> l, int K) {
    const int M = N + 1;
    const Jet z = zero_like(l[0], K);
    std::vector<Jet> A(M * M, z), b(M, z);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j)
        if (i != j) A[i * M + j] = l[i].partial(j) - l[j].partial(i);  // -W_ij
      A[i * M + N] = l[i].truncate(K);
      A[N * M + i] = l[i].truncate(K);
      b[i] = -l[N].partial(i);
    }
    b[N] = l[N].truncate(K);
    auto x = solve_linear(std::move(A), std::move(b));
    x.resize(N);
    return x;
  };
  return vector_field(derived_vector(deps, body, N));
}

Multivector reeb(const ContactStructure& C) { return contact_hamiltonian_field(C, constant(1.0)); }

Eigen::MatrixXd dtheta_matrix(const ContactStructure& C, const Coords& p) {
  const int N = C.dim();
  Eigen::MatrixXd G(N, N);  // G(j, i) = d_i theta_j
  for (int j = 0; j < N; ++j) G.row(j) = gradient_at(C.theta.comp[j], p).transpose();
  return G.transpose() - G;
}

namespace {

Eigen::VectorXd reeb_point(const Eigen::VectorXd& th, const Eigen::MatrixXd& W) {
  const int N = static_cast<int>(th.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
  A.topLeftCorner(N, N) = -W;
  A.topRightCorner(N, 1) = th;
  A.bottomLeftCorner(1, N) = th.transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N + 1);
  b(N) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularSystem("Reeb system is singular (contact condition fails)");
  return lu.solve(b).head(N);
}

}  // namespace

Eigen::VectorXd reeb(const ContactStructure& C, const Coords& p) {
  return reeb_point(covector_at(C.theta, p), dtheta_matrix(C, p));
}

Curvature curvature_form(const ContactStructure& C, const Coords& p) {
  const Eigen::VectorXd th = covector_at(C.theta, p);
  if (th.norm() < 1e-14) throw DegenerateCurvature("theta vanishes at the point");
  Eigen::MatrixXd row = th.transpose();
  Subspace H = kernel(row);
  const Eigen::MatrixXd W = dtheta_matrix(C, p);
  Eigen::MatrixXd c = -(H.basis.transpose() * W * H.basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-10 * std::max(1.0, sv(0)))
    throw DegenerateCurvature("curvature form is degenerate on ker theta");
  return {H, BilinearForm{H.ambient, H.basis * c * H.basis.transpose()}};
}

Eigen::VectorXd contact_hamiltonian_vf(const ContactStructure& C, const Field& f, const Coords& p) {
  const Eigen::VectorXd th = covector_at(C.theta, p);
  const Eigen::MatrixXd W = dtheta_matrix(C, p);
  Subspace H = kernel(Eigen::MatrixXd(th.transpose()));
  const Eigen::MatrixXd& B = H.basis;
  Eigen::MatrixXd c = -(B.transpose() * W * B);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(c.transpose());
  if (!lu.isInvertible()) throw SingularSystem("curvature form is degenerate at the point");
  // c(Y, Z) = df(Z) for all Z in H.
  Eigen::VectorXd y = lu.solve(B.transpose() * gradient_at(f, p));
  return value_at(f, p) * reeb_point(th, W) + B * y;
}

Field contact_bracket(const ContactStructure& C, const Field& f, const Field& g) {
  if (!f || !g) return {};
  Multivector Xf = contact_hamiltonian_field(C, f);
  Multivector E = reeb(C);
  return sub_or(directional(Xf, g), mul_or(g, directional(E, f)));
}

BracketOracle contact_oracle(const ContactStructure& C) {
  Multivector E = reeb(C);
  return [C, E](const Field& f, const Field& g) -> Field {
    if (!f || !g) return {};
    Multivector Xf = contact_hamiltonian_field(C, f);
    return sub_or(directional(Xf, g), mul_or(g, directional(E, f)));
  };
}

JacobiPair contact_to_jacobi(const ContactStructure& C, const std::vector<Coords>& pts) {
  if (C.dim() % 2 == 0) throw EvenDimension("contact_to_jacobi on an even-dimensional chart");
  return extract_pair_from_bracket(contact_oracle(C), C.chart, pts);
}

CheckReport check_lcs(const LcsStructure& L, const std::vector<Coords>& pts, double tol) {
  const int n = L.chart.dim;
  if (n % 2 != 0) throw DimensionMismatch("l.c.s. structures need an even-dimensional chart");
  const KForm deta = exterior_d(L.eta);
  const bool has3 = n >= 3;
  const KForm conf = has3 ? exterior_d(L.omega) + wedge(L.omega, L.eta) : KForm{};
  CheckReport r = run_residual_check(
      "lcs", "eta closed, omega nondegenerate, d omega + omega ^ eta = 0", pts, tol, [&](const Coords& p) {
        Eigen::MatrixXd O = matrix_at(L.omega, p);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(O);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 1e-10 * std::max(1.0, sv(0)))
          throw SingularOmega("omega is degenerate at a sample");
        double res = evaluate(deta, p).max_abs();
        if (has3) res = std::max(res, evaluate(conf, p).max_abs());
        return res;
      });
  if (!has3 && r.passed())
    r.note = "degenerate-dimension pass: every 3-form vanishes in dimension 2";
  return r;
}

Multivector lcs_hamiltonian_field(const LcsStructure& L, const Field& f) {
  const int n = L.chart.dim;
  const int nw = static_cast<int>(L.omega.comp.size());
  std::vector<Field> deps = L.omega.comp;
  deps.insert(deps.end(), L.eta.comp.begin(), L.eta.comp.end());
  deps.push_back(f);
  auto body = [n, nw](std::span<const Jet> l, int K) {
    std::vector<Jet> O = omega_matrix(l.subspan(0, nw), n, K);
    for (auto& o : O) o = -o;  // omega^flat = -Omega
    const Jet& F = l[nw + n];
    std::vector<Jet> b;
    b.reserve(n);
    for (int i = 0; i < n; ++i) b.push_back(F.partial(i) + F.truncate(K) * l[nw + i].truncate(K));
    try {
      return solve_linear(std::move(O), std::move(b));
    } catch (const SingularSystem&) {
      throw SingularOmega("omega is degenerate at the point");
    }
  };
  return vector_field(derived_vector(deps, body, n));
}

Eigen::VectorXd lcs_hamiltonian_vf(const LcsStructure& L, const Field& f, const Coords& p) {
  Eigen::MatrixXd O = matrix_at(L.omega, p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(-O);
  if (!lu.isInvertible()) throw SingularOmega("omega is degenerate at the point");
  Eigen::VectorXd a = gradient_at(f, p) + value_at(f, p) * covector_at(L.eta, p);
  return lu.solve(a);
}

Field lcs_bracket(const LcsStructure& L, const Field& f, const Field& g) {
  if (!f || !g) return {};
  return eval_form(L.omega, {lcs_hamiltonian_field(L, f), lcs_hamiltonian_field(L, g)});
}

double lcs_bracket(const LcsStructure& L, const Field& f, const Field& g, const Coords& p) {
  return value_at(lcs_bracket(L, f, g), p);
}

BracketOracle lcs_oracle(const LcsStructure& L) {
  return [L](const Field& f, const Field& g) { return lcs_bracket(L, f, g); };
}

JacobiPair lcs_to_jacobi(const LcsStructure& L, const std::vector<Coords>& pts) {
  return extract_pair_from_bracket(lcs_oracle(L), L.chart, pts);
}

LcsValue jacobi_to_lcs_at(const JacobiPair& J, const Coords& p) {
  Eigen::MatrixXd P = matrix_at(J.Pi, p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(P);
  if (!lu.isInvertible()) throw SingularOmega("Pi is not invertible; the pair is not transitive here");
  Eigen::MatrixXd O = -lu.inverse();
  Eigen::VectorXd E = vector_at(J.E, p);
  return {O * E, O};
}

}  // namespace jdl
