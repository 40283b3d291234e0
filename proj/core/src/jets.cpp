#include "jdl/jets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace jdl {
namespace detail {

struct PartialTerm {
  int src, dst;
  double mult;
};

struct JetLayout {
  int dim = 0;
  int order = 0;
  int size = 0;
  std::vector<std::uint8_t> exps;  // size * dim
  std::vector<int> deg;
  std::vector<int> parent, parent_var;
  std::vector<int> var_idx;
  std::vector<int> idx2;  // dim*dim, order >= 2
  std::vector<int> idx3;  // dim^3, order >= 3
  std::vector<std::array<int, 3>> mul;  // (a, b, c): x^a x^b -> x^c
  std::vector<std::vector<PartialTerm>> partial;  // into layout(dim, order-1)
  const JetLayout* lower = nullptr;
};

namespace {

void enumerate(int dim, int order, JetLayout& L) {
  // Degree-by-degree, nondecreasing index tuples in lexicographic order.
  std::map<std::vector<std::uint8_t>, int> index;
  std::vector<std::uint8_t> e(dim, 0);
  auto push = [&](const std::vector<std::uint8_t>& ex, int d) {
    index[ex] = L.size;
    L.exps.insert(L.exps.end(), ex.begin(), ex.end());
    L.deg.push_back(d);
    ++L.size;
  };
  push(e, 0);
  for (int d = 1; d <= order; ++d) {
    std::vector<int> t(d, 0);
    while (true) {
      std::fill(e.begin(), e.end(), 0);
      for (int v : t) ++e[v];
      push(e, d);
      int k = d - 1;
      while (k >= 0 && t[k] == dim - 1) --k;
      if (k < 0) break;
      ++t[k];
      for (int j = k + 1; j < d; ++j) t[j] = t[k];
    }
  }

  auto ex_of = [&](int m) {
    return std::vector<std::uint8_t>(L.exps.begin() + m * dim, L.exps.begin() + (m + 1) * dim);
  };
  L.parent.assign(L.size, -1);
  L.parent_var.assign(L.size, -1);
  for (int m = 1; m < L.size; ++m) {
    auto ex = ex_of(m);
    int v = 0;
    while (ex[v] == 0) ++v;
    --ex[v];
    L.parent[m] = index.at(ex);
    L.parent_var[m] = v;
  }
  L.var_idx.resize(dim);
  for (int i = 0; i < dim; ++i) {
    std::vector<std::uint8_t> ex(dim, 0);
    ex[i] = 1;
    L.var_idx[i] = order >= 1 ? index.at(ex) : -1;
  }
  if (order >= 2) {
    L.idx2.assign(dim * dim, -1);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        std::vector<std::uint8_t> ex(dim, 0);
        ++ex[i];
        ++ex[j];
        L.idx2[i * dim + j] = index.at(ex);
      }
  }
  if (order >= 3) {
    L.idx3.assign(dim * dim * dim, -1);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          std::vector<std::uint8_t> ex(dim, 0);
          ++ex[i];
          ++ex[j];
          ++ex[k];
          L.idx3[(i * dim + j) * dim + k] = index.at(ex);
        }
  }
  for (int a = 0; a < L.size; ++a)
    for (int b = 0; b < L.size; ++b) {
      if (L.deg[a] + L.deg[b] > order) continue;
      auto ex = ex_of(a);
      for (int v = 0; v < dim; ++v) ex[v] += L.exps[b * dim + v];
      L.mul.push_back({a, b, index.at(ex)});
    }
  if (order >= 1) {
    // The lower layout is a prefix of this one, so indices carry over.
    L.partial.resize(dim);
    for (int i = 0; i < dim; ++i)
      for (int m = 0; m < L.size; ++m) {
        int ei = L.exps[m * dim + i];
        if (ei == 0) continue;
        auto ex = ex_of(m);
        --ex[i];
        L.partial[i].push_back({m, index.at(ex), static_cast<double>(ei)});
      }
  }
}

struct LayoutCache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> layouts;
};

LayoutCache& cache() {
  static LayoutCache c;
  return c;
}

}  // namespace

const JetLayout* jet_layout(int dim, int order) {
  if (dim < 0) throw DimensionMismatch("negative jet dimension");
  if (order < 0 || order > kMaxJetOrder)
    throw OrderUnsupported("jet order " + std::to_string(order) + " exceeds kernel limit");
  thread_local std::map<std::pair<int, int>, const JetLayout*> local;
  auto key = std::make_pair(dim, order);
  if (auto it = local.find(key); it != local.end()) return it->second;
  const JetLayout* lo = order >= 1 ? jet_layout(dim, order - 1) : nullptr;
  auto& c = cache();
  const JetLayout* out = nullptr;
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto& slot = c.layouts[key];
    if (!slot) {
      auto L = std::make_unique<JetLayout>();
      L->dim = dim;
      L->order = order;
      L->lower = lo;
      enumerate(dim, order, *L);
      slot = std::move(L);
    }
    out = slot.get();
  }
  local[key] = out;
  return out;
}

}  // namespace detail

using detail::jet_layout;

Jet Jet::constant(int dim, int order, double c) {
  const auto* L = jet_layout(dim, order);
  std::vector<double> v(L->size, 0.0);
  v[0] = c;
  return Jet(L, std::move(v));
}

Jet Jet::variable(int dim, int order, int i, double x0) {
  if (i < 0 || i >= dim) throw DimensionMismatch("variable index out of range");
  Jet j = constant(dim, order, x0);
  if (order >= 1) j.c_[j.lay_->var_idx[i]] = 1.0;
  return j;
}

Jet Jet::like(const Jet& ref, double c) {
  std::vector<double> v(ref.lay_->size, 0.0);
  v[0] = c;
  return Jet(ref.lay_, std::move(v));
}

int Jet::dim() const { return lay_ ? lay_->dim : 0; }
int Jet::order() const { return lay_ ? lay_->order : -1; }

double Jet::d(int i) const {
  if (lay_->order < 1) throw OrderUnsupported("gradient of an order-0 jet");
  return c_[lay_->var_idx[i]];
}

double Jet::d(int i, int j) const {
  if (lay_->order < 2) throw OrderUnsupported("Hessian of a jet below order 2");
  double v = c_[lay_->idx2[i * lay_->dim + j]];
  return i == j ? 2.0 * v : v;
}

double Jet::d(int i, int j, int k) const {
  if (lay_->order < 3) throw OrderUnsupported("third derivative of a jet below order 3");
  const int n = lay_->dim;
  double v = c_[lay_->idx3[(i * n + j) * n + k]];
  if (i == j && j == k) return 6.0 * v;
  if (i == j || j == k || i == k) return 2.0 * v;
  return v;
}

Eigen::VectorXd Jet::grad() const {
  Eigen::VectorXd g(dim());
  for (int i = 0; i < dim(); ++i) g[i] = d(i);
  return g;
}

Eigen::MatrixXd Jet::hess() const {
  const int n = dim();
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) h(i, j) = h(j, i) = d(i, j);
  return h;
}

Jet Jet::partial(int i) const {
  if (lay_->order < 1) throw OrderUnsupported("partial derivative of an order-0 jet");
  if (i < 0 || i >= lay_->dim) throw DimensionMismatch("partial index out of range");
  const auto* lo = lay_->lower;
  std::vector<double> v(lo->size, 0.0);
  for (const auto& t : lay_->partial[i]) v[t.dst] += t.mult * c_[t.src];
  return Jet(lo, std::move(v));
}

Jet Jet::truncate(int order) const {
  if (order > lay_->order) throw OrderUnsupported("cannot raise jet order by truncation");
  if (order == lay_->order) return *this;
  const auto* L = jet_layout(lay_->dim, order);
  return Jet(L, std::vector<double>(c_.begin(), c_.begin() + L->size));
}

void Jet::require_same(const Jet& o) const {
  if (lay_ != o.lay_)
    throw DimensionMismatch("jets differ in dimension or order (" + std::to_string(dim()) + "/" +
                            std::to_string(order()) + " vs " + std::to_string(o.dim()) + "/" +
                            std::to_string(o.order()) + ")");
}

Jet& Jet::operator+=(const Jet& o) {
  require_same(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  require_same(o);
  if (lay_->order == 0) {
    c_[0] *= o.c_[0];
    return *this;
  }
  std::vector<double> r(c_.size(), 0.0);
  for (const auto& [a, b, c] : lay_->mul) r[c] += c_[a] * o.c_[b];
  c_ = std::move(r);
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this *= (1.0 / o);
  return *this;
}

Jet& Jet::operator*=(double a) {
  for (auto& v : c_) v *= a;
  return *this;
}

Jet& Jet::operator/=(double a) {
  if (a == 0.0) throw DomainViolation("division by zero");
  for (auto& v : c_) v /= a;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet Jet::apply_series(const double* tc) const {
  const int K = lay_->order;
  Jet delta = *this;
  delta.c_[0] = 0.0;
  Jet r = like(*this, tc[K]);
  for (int k = K - 1; k >= 0; --k) {
    r *= delta;
    r.c_[0] += tc[k];
  }
  return r;
}

Jet Jet::substitute(std::span<const Jet> xs) const {
  if (static_cast<int>(xs.size()) != lay_->dim)
    throw DimensionMismatch("substitute: expected " + std::to_string(lay_->dim) + " jets");
  if (xs.empty()) return *this;
  std::vector<Jet> delta(xs.begin(), xs.end());
  for (auto& d : delta) d.c_[0] = 0.0;
  for (std::size_t i = 1; i < delta.size(); ++i) delta[0].require_same(delta[i]);
  if (delta[0].order() > lay_->order) {
    // Terms above our order are unknown; the caller must not ask for them.
    throw OrderUnsupported("substitute: target order exceeds source order");
  }
  std::vector<Jet> mono(lay_->size);
  mono[0] = like(delta[0], 1.0);
  Jet r = like(delta[0], c_[0]);
  const int K = delta[0].order();
  for (int m = 1; m < lay_->size; ++m) {
    if (lay_->deg[m] > K) break;
    mono[m] = mono[lay_->parent[m]] * delta[lay_->parent_var[m]];
    if (c_[m] != 0.0) {
      Jet t = mono[m];
      t *= c_[m];
      r += t;
    }
  }
  return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(const Jet& a, const Jet& b) {
  Jet r = a;
  r *= b;
  return r;
}
Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }
Jet operator+(Jet a, double b) { return a += b; }
Jet operator+(double a, Jet b) { return b += a; }
Jet operator-(Jet a, double b) { return a -= b; }
Jet operator-(double a, const Jet& b) {
  Jet r = -b;
  r += a;
  return r;
}
Jet operator*(Jet a, double b) { return a *= b; }
Jet operator*(double a, Jet b) { return b *= a; }
Jet operator/(Jet a, double b) { return a /= b; }

namespace {

double fact(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string num(double v) { return std::to_string(v); }

}  // namespace

Jet operator/(double a, const Jet& b) {
  const double v = b.value();
  if (v == 0.0) throw DomainViolation("division by zero");
  double tc[kMaxJetOrder + 1];
  double p = 1.0 / v;
  for (int k = 0; k <= b.order(); ++k) {
    tc[k] = a * ((k % 2) ? -p : p);
    p /= v;
  }
  return b.apply_series(tc);
}

Jet exp(const Jet& u) {
  double tc[kMaxJetOrder + 1];
  const double e = std::exp(u.value());
  for (int k = 0; k <= u.order(); ++k) tc[k] = e / fact(k);
  return u.apply_series(tc);
}

Jet log(const Jet& u) {
  const double v = u.value();
  if (!(v > 0.0)) throw DomainViolation("log of non-positive value " + num(v));
  double tc[kMaxJetOrder + 1];
  tc[0] = std::log(v);
  double p = v;
  for (int k = 1; k <= u.order(); ++k) {
    tc[k] = ((k % 2) ? 1.0 : -1.0) / (k * p);
    p *= v;
  }
  return u.apply_series(tc);
}

Jet sin(const Jet& u) {
  double tc[kMaxJetOrder + 1];
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const double cyc[4] = {s, c, -s, -c};
  for (int k = 0; k <= u.order(); ++k) tc[k] = cyc[k % 4] / fact(k);
  return u.apply_series(tc);
}

Jet cos(const Jet& u) {
  double tc[kMaxJetOrder + 1];
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const double cyc[4] = {c, -s, -c, s};
  for (int k = 0; k <= u.order(); ++k) tc[k] = cyc[k % 4] / fact(k);
  return u.apply_series(tc);
}

Jet pow(const Jet& u, double r) {
  const double v = u.value();
  const bool integral = std::floor(r) == r && std::abs(r) <= 64.0;
  if (integral) {
    // Repeated squaring keeps negative bases and zero bases valid.
    int n = static_cast<int>(std::abs(r));
    Jet base = r < 0 ? 1.0 / u : u;
    Jet acc = Jet::like(u, 1.0);
    while (n > 0) {
      if (n & 1) acc *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return acc;
  }
  if (v < 0.0) throw DomainViolation("non-integer power of negative value " + num(v));
  if (v == 0.0) {
    if (u.order() == 0 && r > 0.0) return Jet::like(u, 0.0);
    throw DomainViolation("non-integer power is not differentiable at 0");
  }
  double tc[kMaxJetOrder + 1];
  double coef = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    tc[k] = coef * std::pow(v, r - k);
    coef *= (r - k) / (k + 1);
  }
  return u.apply_series(tc);
}

Jet sqrt(const Jet& u) { return pow(u, 0.5); }

Jet square(const Jet& u) { return u * u; }

Jet atan(const Jet& u) {
  // d/dt atan(v + t) = 1 / (a + b t + t^2) with a = 1 + v^2, b = 2 v.
  const double v = u.value();
  const double a = 1.0 + v * v, b = 2.0 * v;
  double s[kMaxJetOrder + 1];
  s[0] = 1.0 / a;
  if (u.order() >= 1) s[1] = -b * s[0] / a;
  for (int k = 2; k < u.order(); ++k) s[k] = -(b * s[k - 1] + s[k - 2]) / a;
  double tc[kMaxJetOrder + 1];
  tc[0] = std::atan(v);
  for (int k = 1; k <= u.order(); ++k) tc[k] = s[k - 1] / k;
  return u.apply_series(tc);
}

Jet atan2(const Jet& y, const Jet& x) {
  const double y0 = y.value(), x0 = x.value();
  if (x0 == 0.0 && y0 == 0.0) throw DomainViolation("atan2 at the origin");
  // Rotate so the argument of atan starts at zero.
  Jet num_ = x0 * y - y0 * x;
  Jet den = x0 * x + y0 * y;
  Jet r = atan(num_ / den);
  r += std::atan2(y0, x0) - r.value();
  return r;
}

Jet pow(const Jet& u, const Jet& v) { return exp(v * log(u)); }

Jet pow(double a, const Jet& v) {
  if (!(a > 0.0)) throw DomainViolation("pow with non-positive base " + num(a));
  return exp(v * std::log(a));
}

// ---- Fields ----

Field coord(int i) {
  return Field([i](std::span<const Jet> xs) {
    if (i >= static_cast<int>(xs.size())) throw DimensionMismatch("coordinate index out of range");
    return xs[i];
  });
}

Field constant(double c) {
  return Field([c](std::span<const Jet> xs) {
    // On a point chart there are no coordinates; the value is all there is.
    if (xs.empty()) return Jet::constant(0, 0, c);
    return Jet::like(xs[0], c);
  });
}

#define JDL_FIELD_BINOP(op)                                                              \
  Field operator op(const Field& a, const Field& b) {                                    \
    return Field([a, b](std::span<const Jet> xs) { return a(xs) op b(xs); });            \
  }                                                                                      \
  Field operator op(const Field& a, double b) {                                          \
    return Field([a, b](std::span<const Jet> xs) { return a(xs) op b; });                \
  }                                                                                      \
  Field operator op(double a, const Field& b) {                                          \
    return Field([a, b](std::span<const Jet> xs) { return a op b(xs); });                \
  }
JDL_FIELD_BINOP(+)
JDL_FIELD_BINOP(-)
JDL_FIELD_BINOP(*)
JDL_FIELD_BINOP(/)
#undef JDL_FIELD_BINOP

Field operator-(const Field& a) {
  return Field([a](std::span<const Jet> xs) { return -a(xs); });
}

#define JDL_FIELD_UNARY(fn)                                                     \
  Field fn(const Field& u) {                                                    \
    return Field([u](std::span<const Jet> xs) { return fn(u(xs)); });           \
  }
JDL_FIELD_UNARY(exp)
JDL_FIELD_UNARY(log)
JDL_FIELD_UNARY(sin)
JDL_FIELD_UNARY(cos)
JDL_FIELD_UNARY(sqrt)
#undef JDL_FIELD_UNARY

Field atan2(const Field& y, const Field& x) {
  return Field([y, x](std::span<const Jet> xs) { return atan2(y(xs), x(xs)); });
}

Field pow(const Field& u, double r) {
  return Field([u, r](std::span<const Jet> xs) { return pow(u(xs), r); });
}

Field pow(const Field& u, const Field& v) {
  return Field([u, v](std::span<const Jet> xs) { return pow(u(xs), v(xs)); });
}

Field add_or(const Field& a, const Field& b) {
  if (!a) return b;
  if (!b) return a;
  return a + b;
}

Field sub_or(const Field& a, const Field& b) {
  if (!b) return a;
  if (!a) return -b;
  return a - b;
}

Field mul_or(const Field& a, const Field& b) {
  if (!a || !b) return {};
  return a * b;
}

std::vector<Jet> variables(const Coords& p, int order) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(n, order, i, p[i]));
  return xs;
}

Jet jet_at(const Field& f, const Coords& p, int order) {
  if (!f) return Jet::constant(static_cast<int>(p.size()), order, 0.0);
  return f(variables(p, order));
}

double value_at(const Field& f, const Coords& p) {
  if (!f) return 0.0;
  return f(variables(p, 0)).value();
}

Coords values(std::span<const Jet> xs) {
  Coords p(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) p[i] = xs[i].value();
  return p;
}

bool is_identity(std::span<const Jet> xs) {
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    if (xs[i].dim() != n) return false;
    const auto& c = xs[i].coeffs();
    const int K = xs[i].order();
    const int vi = K >= 1 ? 1 + i : -1;  // degree-1 monomials follow the constant
    for (std::size_t m = 1; m < c.size(); ++m) {
      const double want = static_cast<int>(m) == vi ? 1.0 : 0.0;
      if (c[m] != want) return false;
    }
  }
  return true;
}

namespace {

// Recent lifts of one derived field. Sub-expressions such as the partials of a
// bracket ask for the same (point, order) many times over.
template <class V>
struct Memo {
  struct Entry {
    Coords p;
    int order;
    V value;
  };
  static constexpr std::size_t kSlots = 8;
  std::mutex mu;
  std::vector<Entry> entries;
  std::size_t next = 0;

  bool find(const Coords& p, int order, V& out) {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& e : entries)
      if (e.order == order && e.p == p) {
        out = e.value;
        return true;
      }
    return false;
  }
  void store(const Coords& p, int order, const V& v) {
    std::lock_guard<std::mutex> lock(mu);
    if (entries.size() < kSlots) {
      entries.push_back({p, order, v});
    } else {
      entries[next] = {p, order, v};
      next = (next + 1) % kSlots;
    }
  }
};

std::vector<Jet> lift_all(const std::vector<Field>& deps, const Coords& p, int order) {
  const auto vars = variables(p, order);
  std::vector<Jet> lifted;
  lifted.reserve(deps.size());
  for (const auto& f : deps)
    lifted.push_back(f ? f(vars) : (vars.empty() ? Jet::constant(0, order, 0.0) : Jet::like(vars[0], 0.0)));
  return lifted;
}

}  // namespace

Field derived(std::vector<Field> deps, DerivedBody body, int extra) {
  auto memo = std::make_shared<Memo<Jet>>();
  return Field([deps = std::move(deps), body = std::move(body), extra, memo](std::span<const Jet> xs) {
    if (xs.empty()) throw DimensionMismatch("derived field evaluated without coordinates");
    const int K = xs[0].order();
    const Coords p = values(xs);
    Jet r;
    if (!memo->find(p, K, r)) {
      r = body(lift_all(deps, p, K + extra), K);
      memo->store(p, K, r);
    }
    if (is_identity(xs)) return r;
    return r.substitute(xs);
  });
}

std::vector<Field> derived_vector(std::vector<Field> deps, DerivedVectorBody body, int count,
                                  int extra) {
  struct Shared {
    std::vector<Field> deps;
    DerivedVectorBody body;
    int extra;
    Memo<std::vector<Jet>> memo;
  };
  auto sh = std::make_shared<Shared>();
  sh->deps = std::move(deps);
  sh->body = std::move(body);
  sh->extra = extra;
  std::vector<Field> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.emplace_back([sh, i](std::span<const Jet> xs) {
      if (xs.empty()) throw DimensionMismatch("derived field evaluated without coordinates");
      const int K = xs[0].order();
      const Coords p = values(xs);
      std::vector<Jet> r;
      if (!sh->memo.find(p, K, r)) {
        r = sh->body(lift_all(sh->deps, p, K + sh->extra), K);
        sh->memo.store(p, K, r);
      }
      if (is_identity(xs)) return r[i];
      return r[i].substitute(xs);
    });
  }
  return out;
}

Field partial_field(const Field& f, int i) {
  return derived({f}, [i](std::span<const Jet> l, int) { return l[0].partial(i); });
}

Jet jet_lift(const ScalarFieldSpec& f, const Coords& p, int order) {
  if (order < 1 || order > kMaxPublicOrder)
    throw OrderUnsupported("jet_lift supports orders 1..3, got " + std::to_string(order));
  if (static_cast<int>(p.size()) != f.dim) throw DimensionMismatch("point dimension");
  if (f.domain && !f.domain(p)) throw DomainViolation("point outside the field's domain");
  return jet_at(f.eval, p, order);
}

Jet jet_compose(const ScalarFieldSpec& g, std::span<const Jet> F) {
  if (static_cast<int>(F.size()) != g.dim)
    throw DimensionMismatch("jet_compose: g expects " + std::to_string(g.dim) + " inputs");
  for (std::size_t i = 1; i < F.size(); ++i)
    if (F[i].dim() != F[0].dim() || F[i].order() != F[0].order())
      throw DimensionMismatch("jet_compose: component jets differ in dim/order");
  if (g.domain && !F.empty() && !g.domain(values(F)))
    throw DomainViolation("jet_compose: image point outside g's domain");
  return g.eval(F);
}

std::vector<Jet> solve_linear(std::vector<Jet> A, std::vector<Jet> b) {
  const int n = static_cast<int>(b.size());
  if (static_cast<int>(A.size()) != n * n) throw DimensionMismatch("solve_linear shape");
  double scale = 0.0;
  for (const auto& a : A) scale = std::max(scale, std::abs(a.value()));
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(A[r * n + k].value()) > std::abs(A[piv * n + k].value())) piv = r;
    if (!(std::abs(A[piv * n + k].value()) > 1e-12 * std::max(scale, 1e-300)))
      throw SingularSystem("pivot vanishes in column " + std::to_string(k));
    if (piv != k) {
      for (int c = 0; c < n; ++c) std::swap(A[k * n + c], A[piv * n + c]);
      std::swap(b[k], b[piv]);
    }
    const Jet inv = 1.0 / A[k * n + k];
    for (int r = k + 1; r < n; ++r) {
      if (A[r * n + k].value() == 0.0 && A[r * n + k].order() == 0) continue;
      const Jet f = A[r * n + k] * inv;
      for (int c = k; c < n; ++c) A[r * n + c] -= f * A[k * n + c];
      b[r] -= f * b[k];
    }
  }
  std::vector<Jet> x(n);
  for (int k = n - 1; k >= 0; --k) {
    Jet s = b[k];
    for (int c = k + 1; c < n; ++c) s -= A[k * n + c] * x[c];
    x[k] = s / A[k * n + k];
  }
  return x;
}

}  // namespace jdl
