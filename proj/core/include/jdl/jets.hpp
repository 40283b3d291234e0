#pragma once

// Truncated multivariate Taylor jets.
//
// A Jet of order K in n variables stores the Taylor polynomial of a scalar at
// a base point in the monomial basis (coefficient of dx^a is d^a f / a!).
// Monomials are enumerated by degree, then lexicographically, so the layout of
// order K is a prefix of the layout of order K+1 and truncation is a resize.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "jdl/errors.hpp"

namespace jdl {

using Coords = std::vector<double>;

// Public entry points accept orders 1..3. Derived fields lift their inputs one
// or two orders higher, so the kernel itself supports up to this order.
inline constexpr int kMaxPublicOrder = 3;
inline constexpr int kMaxJetOrder = 7;

namespace detail {
struct JetLayout;
const JetLayout* jet_layout(int dim, int order);
}  // namespace detail

class Jet {
 public:
  Jet() = default;

  static Jet constant(int dim, int order, double c);
  static Jet variable(int dim, int order, int i, double x0);
  // Constant with the same shape as `ref`.
  static Jet like(const Jet& ref, double c);

  int dim() const;
  int order() const;
  bool valid() const { return lay_ != nullptr; }

  double value() const { return c_[0]; }
  double d(int i) const;
  double d(int i, int j) const;
  double d(int i, int j, int k) const;
  Eigen::VectorXd grad() const;
  Eigen::MatrixXd hess() const;

  // d/dx_i, one order lower.
  Jet partial(int i) const;
  Jet truncate(int order) const;

  const std::vector<double>& coeffs() const { return c_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double a) { c_[0] += a; return *this; }
  Jet& operator-=(double a) { c_[0] -= a; return *this; }
  Jet& operator*=(double a);
  Jet& operator/=(double a);
  Jet operator-() const;

  // Taylor coefficients tc[k] = f^(k)(value)/k!, k = 0..order.
  Jet apply_series(const double* tc) const;
  // Evaluate this jet, read as a polynomial in dx = xs - value(xs), on jets xs.
  Jet substitute(std::span<const Jet> xs) const;

 private:
  Jet(const detail::JetLayout* lay, std::vector<double> c) : lay_(lay), c_(std::move(c)) {}
  void require_same(const Jet& o) const;

  const detail::JetLayout* lay_ = nullptr;
  std::vector<double> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double b);
Jet operator+(double a, Jet b);
Jet operator-(Jet a, double b);
Jet operator-(double a, const Jet& b);
Jet operator*(Jet a, double b);
Jet operator*(double a, Jet b);
Jet operator/(Jet a, double b);
Jet operator/(double a, const Jet& b);

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sqrt(const Jet& u);
Jet atan(const Jet& u);
Jet atan2(const Jet& y, const Jet& x);
Jet pow(const Jet& u, double r);
Jet pow(const Jet& u, const Jet& v);
Jet pow(double a, const Jet& v);
Jet square(const Jet& u);

// A scalar field on a chart, evaluable on any family of coordinate jets.
// Calling it on identity jets at p yields the Taylor data at p; calling it on
// other jets is composition.
class Field {
 public:
  using Fn = std::function<Jet(std::span<const Jet>)>;

  Field() = default;
  template <class F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, Field> &&
             std::is_invocable_r_v<Jet, F, std::span<const Jet>>)
  Field(F f) : fn_(std::make_shared<const Fn>(std::move(f))) {}

  Jet operator()(std::span<const Jet> xs) const { return (*fn_)(xs); }
  Jet operator()(const std::vector<Jet>& xs) const { return (*fn_)(std::span<const Jet>(xs)); }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  // Shared and immutable: copies are cheap and expression trees are not duplicated.
  std::shared_ptr<const Fn> fn_;
};

Field coord(int i);
Field constant(double c);
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator-(const Field& a);
Field operator+(const Field& a, double b);
Field operator+(double a, const Field& b);
Field operator-(const Field& a, double b);
Field operator-(double a, const Field& b);
Field operator*(const Field& a, double b);
Field operator*(double a, const Field& b);
Field operator/(const Field& a, double b);
Field operator/(double a, const Field& b);
Field exp(const Field& u);
Field log(const Field& u);
Field sin(const Field& u);
Field cos(const Field& u);
Field sqrt(const Field& u);
Field atan2(const Field& y, const Field& x);
Field pow(const Field& u, double r);
Field pow(const Field& u, const Field& v);
// Zero-safe: an empty Field reads as the zero function.
Field add_or(const Field& a, const Field& b);
Field sub_or(const Field& a, const Field& b);
Field mul_or(const Field& a, const Field& b);

// Identity jets x_i at p.
std::vector<Jet> variables(const Coords& p, int order);
Jet jet_at(const Field& f, const Coords& p, int order);
double value_at(const Field& f, const Coords& p);  // empty Field reads as 0
Coords values(std::span<const Jet> xs);
bool is_identity(std::span<const Jet> xs);

// A field built from the Taylor data of other fields at the base point. `body`
// receives the dependencies lifted at order K + extra (in the chart's own
// coordinates) and must return an order-K jet; the result is then composed
// with whatever jets the field was called on. Derivatives of derived fields
// are therefore exact up to the jet order.
using DerivedBody = std::function<Jet(std::span<const Jet> lifted, int order)>;
Field derived(std::vector<Field> deps, DerivedBody body, int extra = 1);

// Several fields sharing one computation (e.g. the solution of a linear system
// with jet coefficients). body returns `count` order-K jets.
using DerivedVectorBody = std::function<std::vector<Jet>(std::span<const Jet> lifted, int order)>;
std::vector<Field> derived_vector(std::vector<Field> deps, DerivedVectorBody body, int count,
                                  int extra = 1);

// d f / d x_i as a field.
Field partial_field(const Field& f, int i);

// A scalar field with a dimension and an optional domain predicate.
struct ScalarFieldSpec {
  int dim = 0;
  Field eval;
  std::function<bool(const Coords&)> domain;
};

Jet jet_lift(const ScalarFieldSpec& f, const Coords& p, int order);
Jet jet_compose(const ScalarFieldSpec& g, std::span<const Jet> F);

// Gaussian elimination with partial pivoting on values. A is row-major n x n.
std::vector<Jet> solve_linear(std::vector<Jet> A, std::vector<Jet> b);

}  // namespace jdl
