#include "jdl/calculus.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace jdl {

namespace {

void combos(int n, int k, int start, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combos(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

Field negate(const Field& f) { return f ? -f : Field{}; }

bool all_empty(const std::vector<Field>& fs) {
  return std::none_of(fs.begin(), fs.end(), [](const Field& f) { return static_cast<bool>(f); });
}

// derived() that stays empty when every dependency is zero.
Field derive(std::vector<Field> deps, DerivedBody body) {
  if (all_empty(deps)) return {};
  return derived(std::move(deps), std::move(body));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

void require_vector(const Multivector& X, const char* op) {
  require(X.kind == AltKind::Multivector && X.degree == 1, std::string(op) + ": expected a vector field");
}

}  // namespace

const std::vector<MultiIndex>& multi_indices(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k});
  if (it != cache.end()) return it->second;
  std::vector<MultiIndex> out;
  if (k >= 0 && k <= n) {
    MultiIndex cur;
    combos(n, k, 0, cur, out);
  }
  return cache.emplace(std::make_pair(n, k), std::move(out)).first->second;
}

int multi_index_position(int n, const MultiIndex& idx) {
  const auto& all = multi_indices(n, static_cast<int>(idx.size()));
  auto it = std::lower_bound(all.begin(), all.end(), idx);
  if (it == all.end() || *it != idx) return -1;
  return static_cast<int>(it - all.begin());
}

int sort_with_sign(MultiIndex& idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

AltField AltField::zero(AltKind kind, int dim, int degree) {
  AltField a;
  a.kind = kind;
  a.dim = dim;
  a.degree = degree;
  a.comp.resize(multi_indices(dim, degree).size());
  return a;
}

Field AltField::at(MultiIndex idx) const {
  const int s = sort_with_sign(idx);
  if (s == 0) return {};
  for (int i : idx)
    if (i < 0 || i >= dim) throw DimensionMismatch("component index out of range");
  const Field& f = comp[multi_index_position(dim, idx)];
  return s > 0 ? f : negate(f);
}

void AltField::set(MultiIndex idx, const Field& f) {
  const int s = sort_with_sign(idx);
  if (s == 0) throw DimensionMismatch("repeated index in alternating component");
  comp[multi_index_position(dim, idx)] = s > 0 ? f : negate(f);
}

KForm scalar_form(int dim, const Field& f) {
  KForm w = AltField::zero(AltKind::Form, dim, 0);
  w.comp[0] = f;
  return w;
}

KForm one_form(std::vector<Field> coeffs) {
  KForm w = AltField::zero(AltKind::Form, static_cast<int>(coeffs.size()), 1);
  w.comp = std::move(coeffs);
  return w;
}

Multivector vector_field(std::vector<Field> coeffs) {
  Multivector X = AltField::zero(AltKind::Multivector, static_cast<int>(coeffs.size()), 1);
  X.comp = std::move(coeffs);
  return X;
}

Multivector bivector(int dim, const std::vector<std::vector<Field>>& upper) {
  Multivector P = AltField::zero(AltKind::Multivector, dim, 2);
  for (int i = 0; i < dim && i < static_cast<int>(upper.size()); ++i)
    for (int j = i + 1; j < dim && j < static_cast<int>(upper[i].size()); ++j)
      P.set({i, j}, upper[i][j]);
  return P;
}

KForm two_form(int dim, const std::vector<std::vector<Field>>& upper) {
  KForm w = bivector(dim, upper);
  w.kind = AltKind::Form;
  return w;
}

KForm differential(int dim, const Field& f) { return exterior_d(scalar_form(dim, f)); }

double AltValue::at(MultiIndex idx) const {
  const int s = sort_with_sign(idx);
  if (s == 0) return 0.0;
  return s * comp[multi_index_position(dim, idx)];
}

double AltValue::max_abs() const {
  double m = 0;
  for (double c : comp) m = std::max(m, std::abs(c));
  return m;
}

Eigen::VectorXd AltValue::vec() const {
  if (degree != 1) throw DegreeUnsupported("vec() needs degree 1");
  return Eigen::Map<const Eigen::VectorXd>(comp.data(), static_cast<Eigen::Index>(comp.size()));
}

Eigen::MatrixXd AltValue::matrix() const {
  if (degree != 2) throw DegreeUnsupported("matrix() needs degree 2");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  const auto& idx = multi_indices(dim, 2);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    M(idx[k][0], idx[k][1]) = comp[k];
    M(idx[k][1], idx[k][0]) = -comp[k];
  }
  return M;
}

AltValue evaluate(const AltField& a, const Coords& p) {
  AltValue v{a.kind, a.dim, a.degree, std::vector<double>(a.comp.size(), 0.0)};
  for (std::size_t k = 0; k < a.comp.size(); ++k)
    if (a.comp[k]) v.comp[k] = value_at(a.comp[k], p);
  return v;
}

AltValue operator-(const AltValue& a, const AltValue& b) {
  AltValue r = a;
  for (std::size_t k = 0; k < r.comp.size(); ++k) r.comp[k] -= b.comp[k];
  return r;
}

AltValue operator*(double s, const AltValue& a) {
  AltValue r = a;
  for (auto& c : r.comp) c *= s;
  return r;
}

AltField operator+(const AltField& a, const AltField& b) {
  require(a.kind == b.kind && a.dim == b.dim && a.degree == b.degree, "adding unlike objects");
  AltField r = a;
  for (std::size_t k = 0; k < r.comp.size(); ++k) r.comp[k] = add_or(a.comp[k], b.comp[k]);
  return r;
}

AltField operator-(const AltField& a, const AltField& b) {
  require(a.kind == b.kind && a.dim == b.dim && a.degree == b.degree, "subtracting unlike objects");
  AltField r = a;
  for (std::size_t k = 0; k < r.comp.size(); ++k) r.comp[k] = sub_or(a.comp[k], b.comp[k]);
  return r;
}

AltField operator*(const Field& f, const AltField& a) {
  AltField r = a;
  for (auto& c : r.comp) c = mul_or(f, c);
  return r;
}

AltField operator*(double s, const AltField& a) {
  AltField r = a;
  for (auto& c : r.comp)
    if (c) c = s * c;
  return r;
}

KForm exterior_d(const KForm& w) {
  require(w.kind == AltKind::Form, "exterior_d expects a form");
  const int n = w.dim, k = w.degree;
  if (k >= n) throw DegreeUnsupported("exterior_d of a top-degree form");
  KForm r = AltField::zero(AltKind::Form, n, k + 1);
  const auto& idx = multi_indices(n, k + 1);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const MultiIndex& I = idx[c];
    std::vector<Field> deps;
    for (int j = 0; j <= k; ++j) {
      MultiIndex rest = I;
      rest.erase(rest.begin() + j);
      deps.push_back(w.comp[multi_index_position(n, rest)]);
    }
    r.comp[c] = derive(deps, [I](std::span<const Jet> l, int) {
      Jet s = Jet::like(l[0].partial(0), 0.0);
      for (std::size_t j = 0; j < l.size(); ++j) {
        Jet t = l[j].partial(I[j]);
        if (j % 2) s -= t;
        else s += t;
      }
      return s;
    });
  }
  return r;
}

AltField wedge(const AltField& a, const AltField& b) {
  require(a.dim == b.dim, "wedge of objects on different charts");
  if (a.degree > 0 && b.degree > 0) require(a.kind == b.kind, "wedge of a form with a multivector");
  const int n = a.dim, ka = a.degree, kb = b.degree;
  AltField r = AltField::zero(ka > 0 ? a.kind : b.kind, n, ka + kb);
  const auto& idx = multi_indices(n, ka + kb);
  const auto& pick = multi_indices(ka + kb, ka);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const MultiIndex& I = idx[c];
    Field acc;
    for (const auto& pos : pick) {
      MultiIndex J, L, perm;
      std::vector<bool> in(ka + kb, false);
      for (int q : pos) in[q] = true;
      for (int q = 0; q < ka + kb; ++q) (in[q] ? J : L).push_back(I[q]);
      perm = J;
      perm.insert(perm.end(), L.begin(), L.end());
      const int s = sort_with_sign(perm);
      Field t = mul_or(a.comp[multi_index_position(n, J)], b.comp[multi_index_position(n, L)]);
      if (!t) continue;
      acc = s > 0 ? add_or(acc, t) : sub_or(acc, t);
    }
    r.comp[c] = acc;
  }
  return r;
}

KForm interior(const Multivector& X, const KForm& w) {
  require_vector(X, "interior");
  require(w.kind == AltKind::Form && w.dim == X.dim, "interior: expected a form on the same chart");
  if (w.degree == 0) throw DegreeUnsupported("interior of a 0-form");
  const int n = w.dim;
  KForm r = AltField::zero(AltKind::Form, n, w.degree - 1);
  const auto& idx = multi_indices(n, w.degree - 1);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    Field acc;
    for (int l = 0; l < n; ++l) {
      MultiIndex lI{l};
      lI.insert(lI.end(), idx[c].begin(), idx[c].end());
      acc = add_or(acc, mul_or(X.comp[l], w.at(lI)));
    }
    r.comp[c] = acc;
  }
  return r;
}

Multivector contract(const KForm& alpha, const Multivector& P) {
  require(alpha.kind == AltKind::Form && alpha.degree == 1, "contract: expected a 1-form");
  require(P.kind == AltKind::Multivector && P.dim == alpha.dim, "contract: expected a multivector");
  if (P.degree == 0) throw DegreeUnsupported("contract into a function");
  const int n = P.dim;
  Multivector r = AltField::zero(AltKind::Multivector, n, P.degree - 1);
  const auto& idx = multi_indices(n, P.degree - 1);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    Field acc;
    for (int a = 0; a < n; ++a) {
      MultiIndex aJ{a};
      aJ.insert(aJ.end(), idx[c].begin(), idx[c].end());
      acc = add_or(acc, mul_or(alpha.comp[a], P.at(aJ)));
    }
    r.comp[c] = acc;
  }
  return r;
}

Field eval_form(const KForm& w, const std::vector<Multivector>& Xs) {
  require(static_cast<int>(Xs.size()) == w.degree, "eval_form: wrong number of vector fields");
  KForm cur = w;
  for (const auto& X : Xs) cur = interior(X, cur);
  return cur.comp[0];
}

Field eval_multivector(const Multivector& P, const std::vector<KForm>& alphas) {
  require(static_cast<int>(alphas.size()) == P.degree, "eval_multivector: wrong number of 1-forms");
  Multivector cur = P;
  for (const auto& a : alphas) cur = contract(a, cur);
  return cur.comp[0];
}

Field directional(const Multivector& X, const Field& f) {
  require_vector(X, "directional");
  if (!f) return {};
  const int n = X.dim;
  std::vector<Field> deps{f};
  deps.insert(deps.end(), X.comp.begin(), X.comp.end());
  if (all_empty(X.comp)) return {};
  return derived(deps, [n](std::span<const Jet> l, int K) {
    Jet s = Jet::like(l[0].partial(0), 0.0);
    for (int i = 0; i < n; ++i) s += l[1 + i].truncate(K) * l[0].partial(i);
    return s;
  });
}

Multivector lie_bracket(const Multivector& X, const Multivector& Y) {
  require_vector(X, "lie_bracket");
  require_vector(Y, "lie_bracket");
  require(X.dim == Y.dim, "lie_bracket: different charts");
  const int n = X.dim;
  Multivector r = AltField::zero(AltKind::Multivector, n, 1);
  for (int i = 0; i < n; ++i) {
    std::vector<Field> deps = X.comp;
    deps.insert(deps.end(), Y.comp.begin(), Y.comp.end());
    if (!X.comp[i] && !Y.comp[i]) {
      // Both i-components vanish; the bracket component does too.
      continue;
    }
    r.comp[i] = derive(deps, [n, i](std::span<const Jet> l, int K) {
      Jet s = Jet::like(l[0].partial(0), 0.0);
      for (int m = 0; m < n; ++m) {
        s += l[m].truncate(K) * l[n + i].partial(m);
        s -= l[n + m].truncate(K) * l[i].partial(m);
      }
      return s;
    });
  }
  return r;
}

KForm lie_derivative(const Multivector& X, const KForm& w) {
  require_vector(X, "lie_derivative");
  if (w.degree == 0) return scalar_form(w.dim, directional(X, w.comp[0]));
  KForm a = w.degree < w.dim ? interior(X, exterior_d(w)) : AltField::zero(AltKind::Form, w.dim, w.degree);
  return a + exterior_d(interior(X, w));
}

Multivector lie_derivative_mv(const Multivector& X, const Multivector& P) {
  require_vector(X, "lie_derivative_mv");
  require(P.kind == AltKind::Multivector && P.dim == X.dim, "lie_derivative_mv: expected a multivector");
  if (P.degree == 0) {
    Multivector r = P;
    r.comp[0] = directional(X, P.comp[0]);
    return r;
  }
  const int n = P.dim, m = P.degree;
  Multivector r = AltField::zero(AltKind::Multivector, n, m);
  const auto& idx = multi_indices(n, m);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const MultiIndex& I = idx[c];
    // deps: X^0..X^{n-1}, P^I, then P^{I with slot r replaced by l} for r, l.
    std::vector<Field> deps = X.comp;
    deps.push_back(P.comp[c]);
    for (int s = 0; s < m; ++s)
      for (int l = 0; l < n; ++l) {
        MultiIndex J = I;
        J[s] = l;
        deps.push_back(P.at(J));
      }
    r.comp[c] = derive(deps, [n, m, I](std::span<const Jet> d, int K) {
      Jet s = Jet::like(d[0].partial(0), 0.0);
      for (int l = 0; l < n; ++l) s += d[l].truncate(K) * d[n].partial(l);
      for (int q = 0; q < m; ++q)
        for (int l = 0; l < n; ++l) s -= d[n + 1 + q * n + l].truncate(K) * d[I[q]].partial(l);
      return s;
    });
  }
  return r;
}

namespace {

// [[P,Q]]^{ijk} = -sum_cyc sum_l (P^{il} d_l Q^{jk} + Q^{il} d_l P^{jk}).
Multivector schouten22(const Multivector& P, const Multivector& Q) {
  const int n = P.dim;
  Multivector r = AltField::zero(AltKind::Multivector, n, 3);
  const auto& idx = multi_indices(n, 3);
  const auto& pairs = multi_indices(n, 2);
  std::vector<Field> deps = P.comp;
  deps.insert(deps.end(), Q.comp.begin(), Q.comp.end());
  if (all_empty(deps)) return r;
  const int np = static_cast<int>(pairs.size());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const MultiIndex I = idx[c];
    r.comp[c] = derived(deps, [n, np, I](std::span<const Jet> d, int K) {
      auto comp = [&](int off, int a, int b) -> Jet {
        MultiIndex ab{a, b};
        const int s = sort_with_sign(ab);
        if (s == 0) return Jet::like(d[0], 0.0);
        Jet j = d[off + multi_index_position(n, ab)];
        return s > 0 ? j : -j;
      };
      Jet s = Jet::like(d[0].partial(0), 0.0);
      for (int cyc = 0; cyc < 3; ++cyc) {
        const int i = I[cyc], j = I[(cyc + 1) % 3], k = I[(cyc + 2) % 3];
        for (int l = 0; l < n; ++l) {
          s -= comp(0, i, l).truncate(K) * comp(np, j, k).partial(l);
          s -= comp(np, i, l).truncate(K) * comp(0, j, k).partial(l);
        }
      }
      return s;
    });
  }
  return r;
}

}  // namespace

Multivector schouten(const Multivector& P, const Multivector& Q) {
  require(P.kind == AltKind::Multivector && Q.kind == AltKind::Multivector,
          "schouten expects multivectors");
  require(P.dim == Q.dim, "schouten: different charts");
  const int a = P.degree, b = Q.degree;
  if (a == 1 && b == 1) return lie_bracket(P, Q);
  if (a == 1 && b == 2) return lie_derivative_mv(P, Q);
  if (a == 2 && b == 1) return -1.0 * lie_derivative_mv(Q, P);
  if (a == 2 && b == 2) return schouten22(P, Q);
  throw DegreeUnsupported("schouten bracket of degrees " + std::to_string(a) + " and " +
                          std::to_string(b));
}

KForm pullback_form(const SmoothMap& F, const KForm& w) {
  require(w.kind == AltKind::Form, "pullback_form expects a form");
  const int m = F.source.dim, n = F.target.dim, k = w.degree;
  require(w.dim == n && static_cast<int>(F.components.size()) == n,
          "pullback_form: form does not live on the map's target");
  KForm r = AltField::zero(AltKind::Form, m, k);
  if (k == 0) {
    r.comp[0] = pullback(F, w.comp[0]);
    return r;
  }
  if (k > 3) throw DegreeUnsupported("pullback of forms above degree 3");
  const auto& src = multi_indices(m, k);
  const auto& tgt = multi_indices(n, k);
  std::vector<std::pair<MultiIndex, Field>> terms;
  for (std::size_t t = 0; t < tgt.size(); ++t)
    if (w.comp[t]) terms.emplace_back(tgt[t], w.comp[t]);
  if (terms.empty()) return r;
  for (std::size_t c = 0; c < src.size(); ++c) {
    const MultiIndex I = src[c];
    r.comp[c] = derived(F.components, [terms, I, k](std::span<const Jet> Fl, int K) {
      Jet s = Jet::like(Fl[0].partial(0), 0.0);
      for (const auto& [J, wJ] : terms) {
        auto D = [&](int r_, int s_) { return Fl[J[r_]].partial(I[s_]); };
        Jet det;
        if (k == 1) {
          det = D(0, 0);
        } else if (k == 2) {
          det = D(0, 0) * D(1, 1) - D(0, 1) * D(1, 0);
        } else {
          det = D(0, 0) * (D(1, 1) * D(2, 2) - D(1, 2) * D(2, 1)) -
                D(0, 1) * (D(1, 0) * D(2, 2) - D(1, 2) * D(2, 0)) +
                D(0, 2) * (D(1, 0) * D(2, 1) - D(1, 1) * D(2, 0));
        }
        s += wJ(Fl).truncate(K) * det;
      }
      return s;
    });
  }
  return r;
}

Eigen::VectorXd pushforward(const SmoothMap& F, const Multivector& X, const Coords& p) {
  require_vector(X, "pushforward");
  return tangent_map(F, p) * vector_at(X, p);
}

Eigen::VectorXd vector_at(const Multivector& X, const Coords& p) {
  require_vector(X, "vector_at");
  return evaluate(X, p).vec();
}

Eigen::VectorXd covector_at(const KForm& a, const Coords& p) {
  require(a.kind == AltKind::Form && a.degree == 1, "covector_at: expected a 1-form");
  return evaluate(a, p).vec();
}

Eigen::MatrixXd matrix_at(const AltField& a, const Coords& p) { return evaluate(a, p).matrix(); }

Eigen::VectorXd gradient_at(const Field& f, const Coords& p) {
  if (!f) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.size()));
  return jet_at(f, p, 1).grad();
}

}  // namespace jdl
