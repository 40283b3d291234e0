#include "jdl/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jdl {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

Field sum_fields(const std::vector<Field>& fs) {
  Field acc;
  for (const auto& f : fs) acc = add_or(acc, f);
  return acc;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

JacobiPair make_jacobi_pair(const Chart& chart, Multivector Pi, Multivector E) {
  require(Pi.kind == AltKind::Multivector && Pi.degree == 2 && Pi.dim == chart.dim,
          "Pi must be a bivector on the chart");
  require(E.kind == AltKind::Multivector && E.degree == 1 && E.dim == chart.dim,
          "E must be a vector field on the chart");
  return {chart, std::move(Pi), std::move(E)};
}

JacobiPair zero_pair(const Chart& chart) {
  return make_jacobi_pair(chart, AltField::zero(AltKind::Multivector, chart.dim, 2),
                   AltField::zero(AltKind::Multivector, chart.dim, 1));
}

Field ConformalMap::pull(const Field& f) const { return mul_or(factor, pullback(map, f)); }

void LieAlgebraData::set_bracket(int i, int j, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != dim) throw DimensionMismatch("bracket vector length");
  for (int k = 0; k < dim; ++k) {
    c[(k * dim + i) * dim + j] = v[k];
    c[(k * dim + j) * dim + i] = -v[k];
  }
}

double LieAlgebraData::jacobi_residual() const {
  // sum_cyc [[e_i, e_j], e_l] = sum_cyc sum_m c^m_ij c^k_ml
  double worst = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l)
        for (int k = 0; k < dim; ++k) {
          double s = 0;
          for (int m = 0; m < dim; ++m)
            s += (*this)(m, i, j) * (*this)(k, m, l) + (*this)(m, j, l) * (*this)(k, m, i) +
                 (*this)(m, l, i) * (*this)(k, m, j);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

LieAlgebraData make_lie_algebra(std::string name, int dim) {
  return {std::move(name), dim, std::vector<double>(static_cast<std::size_t>(dim) * dim * dim, 0.0)};
}

LieAlgebraData so3() {
  auto g = make_lie_algebra("so3", 3);
  g.set_bracket(0, 1, {0, 0, 1});
  g.set_bracket(1, 2, {1, 0, 0});
  g.set_bracket(2, 0, {0, 1, 0});
  return g;
}

LieAlgebraData aff1() {
  auto g = make_lie_algebra("aff1", 2);
  g.set_bracket(0, 1, {0, 1});
  return g;
}

LieAlgebraData abelian(int dim) { return make_lie_algebra("abelian" + std::to_string(dim), dim); }

namespace {

struct IntegrabilityFields {
  Multivector lhs;  // [[Pi,Pi]] - 2 E^Pi
  Multivector ep;   // [[E,Pi]]
};

IntegrabilityFields integrability(const JacobiPair& J) {
  return {schouten(J.Pi, J.Pi) - 2.0 * wedge(J.E, J.Pi), schouten(J.E, J.Pi)};
}

double integrability_residual(const IntegrabilityFields& F, const Coords& p) {
  return std::max(evaluate(F.lhs, p).max_abs(), evaluate(F.ep, p).max_abs());
}

}  // namespace

double jacobi_pair_residual(const JacobiPair& J, const Coords& p) {
  return integrability_residual(integrability(J), p);
}

CheckReport check_jacobi_pair(const JacobiPair& J, const std::vector<Coords>& pts, double tol) {
  if (J.dim() == 0) {
    CheckReport r = run_residual_check("jacobi_pair", "[[Pi,Pi]]=2E^Pi and [[E,Pi]]=0", pts, tol,
                                       [](const Coords&) { return 0.0; });
    r.note = "point chart";
    return r;
  }
  const auto F = integrability(J);
  return run_residual_check("jacobi_pair", "[[Pi,Pi]]=2E^Pi and [[E,Pi]]=0", pts, tol,
                            [&](const Coords& p) { return integrability_residual(F, p); });
}

CheckReport certify(JacobiPair& J, const std::vector<Coords>& pts, double tol) {
  CheckReport r = check_jacobi_pair(J, pts, tol);
  J.certified_residual = r.max_residual;
  return r;
}

Field jacobi_bracket(const JacobiPair& J, const Field& f, const Field& g) {
  const int n = J.dim();
  if (n == 0 || !f || !g) return {};
  KForm df = differential(n, f), dg = differential(n, g);
  Field pi = n >= 2 ? eval_multivector(J.Pi, {df, dg}) : Field{};
  Field ef = mul_or(f, directional(J.E, g));
  Field eg = mul_or(g, directional(J.E, f));
  return sub_or(add_or(pi, ef), eg);
}

double jacobi_bracket(const JacobiPair& J, const Field& f, const Field& g, const Coords& p) {
  return value_at(jacobi_bracket(J, f, g), p);
}

BracketOracle bracket_oracle(const JacobiPair& J) {
  return [J](const Field& f, const Field& g) { return jacobi_bracket(J, f, g); };
}

Multivector hamiltonian_vf(const JacobiPair& J, const Field& f) {
  const int n = J.dim();
  if (n == 0 || !f) return AltField::zero(AltKind::Multivector, n, 1);
  Multivector X = f * J.E;
  if (n >= 2) X = contract(differential(n, f), J.Pi) + X;
  return X;
}

Eigen::VectorXd hamiltonian_vf(const JacobiPair& J, const Field& f, const Coords& p) {
  return vector_at(hamiltonian_vf(J, f), p);
}

Field jacobiator(const BracketOracle& br, const Field& f, const Field& g, const Field& h) {
  return sum_fields({br(f, br(g, h)), br(g, br(h, f)), br(h, br(f, g))});
}

std::vector<Field> default_test_functions(int dim) {
  std::vector<Field> fs{constant(1.0)};
  for (int i = 0; i < dim; ++i) fs.push_back(coord(i));
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) fs.push_back(coord(i) * coord(j));
  return fs;
}

CheckReport check_jacobi_morphism(const JacobiPair& J1, const JacobiPair& J2, const ConformalMap& phi,
                                  const std::vector<Field>& test_fns, const std::vector<Coords>& pts,
                                  double tol) {
  require(phi.map.source.dim == J1.dim() && phi.map.target.dim == J2.dim(),
          "morphism map does not connect the two charts");
  struct Term {
    Field lhs, rhs;
  };
  std::vector<Term> brackets;
  for (std::size_t i = 0; i < test_fns.size(); ++i)
    for (std::size_t j = i + 1; j < test_fns.size(); ++j) {
      const Field &f = test_fns[i], &g = test_fns[j];
      brackets.push_back({jacobi_bracket(J1, phi.pull(f), phi.pull(g)),
                          mul_or(phi.factor, pullback(phi.map, jacobi_bracket(J2, f, g)))});
    }
  struct Push {
    Multivector src;  // X^1 of a phi*g
    Multivector tgt;  // X^2 of g
  };
  std::vector<Push> pushes;
  for (const auto& g : test_fns) pushes.push_back({hamiltonian_vf(J1, phi.pull(g)), hamiltonian_vf(J2, g)});

  return run_residual_check(
      "jacobi_morphism", "{a phi*f, a phi*g}_1 = a phi*{f,g}_2; T phi X_{a phi*g} = X_g o phi", pts, tol,
      [&](const Coords& p) {
        const double a = value_at(phi.factor, p);
        if (!(std::abs(a) > 1e-9)) throw ZeroConformalFactor("conformal factor vanishes at a sample");
        double worst = 0;
        for (const auto& t : brackets) worst = std::max(worst, std::abs(value_at(t.lhs, p) - value_at(t.rhs, p)));
        const Coords q = phi.map(p);
        Eigen::MatrixXd T(J2.dim(), J1.dim());
        auto js = map_jets(phi.map, p, 1);
        for (int r = 0; r < J2.dim(); ++r) T.row(r) = js[r].grad().transpose();
        for (const auto& s : pushes) {
          if (J2.dim() == 0) break;
          Eigen::VectorXd d = T * vector_at(s.src, p) - vector_at(s.tgt, q);
          worst = std::max(worst, d.cwiseAbs().maxCoeff());
        }
        return worst;
      });
}

JacobiPair lie_poisson(const LieAlgebraData& g) {
  const int n = g.dim;
  Chart chart(g.name + "*", std::vector<Interval>(n, Interval{-2.0, 2.0}));
  Multivector Pi = AltField::zero(AltKind::Multivector, n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Field acc;
      for (int k = 0; k < n; ++k)
        if (g(k, i, j) != 0.0) acc = add_or(acc, g(k, i, j) * coord(k));
      Pi.set({i, j}, acc);
    }
  return make_jacobi_pair(chart, Pi, AltField::zero(AltKind::Multivector, n, 1));
}

namespace {

void check_chart_index(const LieAlgebraData& g, int k) {
  if (k < 1 || k > g.dim)
    throw ChartIndexInvalid("affine chart index " + std::to_string(k) + " outside 1.." +
                            std::to_string(g.dim));
}

// w-chart -> g*, inserting mu_k = 1.
SmoothMap slice_map(const LieAlgebraData& g, int k, const Chart& w_chart) {
  Chart gstar(g.name + "*", std::vector<Interval>(g.dim, Interval{-2.0, 2.0}));
  SmoothMap s{"slice", w_chart, gstar, {}};
  int w = 0;
  for (int i = 0; i < g.dim; ++i) s.components.push_back(i == k - 1 ? constant(1.0) : coord(w++));
  return s;
}

}  // namespace

Chart projective_chart(const LieAlgebraData& g, int k, double half_width) {
  check_chart_index(g, k);
  return Chart("P(" + g.name + "*)_" + std::to_string(k),
               std::vector<Interval>(g.dim - 1, Interval{-half_width, half_width}));
}

Field homogeneous_extension(const LieAlgebraData& g, int k, const Field& b) {
  check_chart_index(g, k);
  if (!b) return {};
  const int kk = k - 1, n = g.dim;
  return Field([b, kk, n](std::span<const Jet> mu) {
    std::vector<Jet> w;
    w.reserve(n - 1);
    for (int i = 0; i < n; ++i)
      if (i != kk) w.push_back(mu[i] / mu[kk]);
    if (w.empty()) return mu[kk] * b(w).value();
    return mu[kk] * b(w);
  });
}

BracketOracle projectivized_oracle(const LieAlgebraData& g, int k) {
  check_chart_index(g, k);
  const JacobiPair lp = lie_poisson(g);
  const SmoothMap s = slice_map(g, k, projective_chart(g, k));
  return [g, k, lp, s](const Field& b1, const Field& b2) {
    Field br = jacobi_bracket(lp, homogeneous_extension(g, k, b1), homogeneous_extension(g, k, b2));
    return pullback(s, br);
  };
}

double projectivized_bracket(const LieAlgebraData& g, int k, const Field& b1, const Field& b2,
                             const Coords& p) {
  return value_at(projectivized_oracle(g, k)(b1, b2), p);
}

JacobiPair extract_pair_from_bracket(const BracketOracle& oracle, const Chart& chart,
                                     const std::vector<Coords>& pts, double tol) {
  const int n = chart.dim;
  if (n == 0) return zero_pair(chart);
  const Field one = constant(1.0);
  Multivector E = AltField::zero(AltKind::Multivector, n, 1);
  for (int i = 0; i < n; ++i) E.comp[i] = oracle(one, coord(i));
  Multivector Pi = AltField::zero(AltKind::Multivector, n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Field v = oracle(coord(i), coord(j));
      v = sub_or(v, mul_or(coord(i), E.comp[j]));
      v = add_or(v, mul_or(coord(j), E.comp[i]));
      Pi.set({i, j}, v);
    }
  JacobiPair J = make_jacobi_pair(chart, Pi, E);

  // Nonlinear probes: a first-order bilinear antisymmetric oracle is fixed by
  // its values on coordinates, so any mismatch here exposes a bad oracle.
  Field s = coord(0);
  for (int i = 1; i < n; ++i) s = s + (0.5 + 0.25 * i) * coord(i);
  const Field f = sin(s) + coord(0) * coord(n - 1);
  const Field h = exp(0.3 * s) + coord(n - 1) * coord(n - 1);
  struct Probe {
    Field got, want;
  };
  std::vector<Probe> probes{{oracle(f, h), jacobi_bracket(J, f, h)},
                            {oracle(one, f), jacobi_bracket(J, one, f)},
                            {oracle(h, f), jacobi_bracket(J, h, f)}};
  for (const auto& p : pts) {
    for (const auto& pr : probes) {
      const double a = value_at(pr.got, p), b = value_at(pr.want, p);
      if (!(rel_gap(a, b) <= tol))
        throw InconsistentOracle("oracle disagrees with its first-order reconstruction by " +
                                 std::to_string(std::abs(a - b)));
    }
  }
  return J;
}

JacobiPair conformal_change(const JacobiPair& J, const Field& c, const std::vector<Coords>& pts,
                            double tol) {
  for (const auto& p : pts)
    if (!(std::abs(value_at(c, p)) > 1e-9))
      throw ZeroConformalFactor("conformal change by a function vanishing at a sample");
  BracketOracle br = [J, c](const Field& f, const Field& g) {
    Field b = jacobi_bracket(J, mul_or(c, f), mul_or(c, g));
    return b ? b / c : Field{};
  };
  return extract_pair_from_bracket(br, J.chart, pts, tol);
}

}  // namespace jdl
