#pragma once

// Exterior and bracket calculus on a chart. Every operation returns fields, so
// results can be fed back into further operations without losing exactness.
//
// Components of a degree-k object are stored for strictly increasing index
// tuples in lexicographic order; other orderings follow by sign. An empty
// Field component means zero.

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "jdl/chart.hpp"
#include "jdl/jets.hpp"

namespace jdl {

using MultiIndex = std::vector<int>;

// Increasing k-tuples of {0..n-1}, lexicographic.
const std::vector<MultiIndex>& multi_indices(int n, int k);
// Position of an increasing tuple, or -1.
int multi_index_position(int n, const MultiIndex& idx);
// Sorts idx; returns the permutation sign, or 0 if an index repeats.
int sort_with_sign(MultiIndex& idx);

enum class AltKind { Form, Multivector };

struct AltField {
  AltKind kind = AltKind::Form;
  int dim = 0;
  int degree = 0;
  std::vector<Field> comp;

  static AltField zero(AltKind kind, int dim, int degree);
  int size() const { return static_cast<int>(comp.size()); }
  // Component for an arbitrary index tuple (signed); empty Field if zero.
  Field at(MultiIndex idx) const;
  void set(MultiIndex idx, const Field& f);
};

using KForm = AltField;
using Multivector = AltField;

KForm scalar_form(int dim, const Field& f);
KForm one_form(std::vector<Field> coeffs);
Multivector vector_field(std::vector<Field> coeffs);
// Bivector from an antisymmetric family P(i,j), i<j.
Multivector bivector(int dim, const std::vector<std::vector<Field>>& upper);
KForm two_form(int dim, const std::vector<std::vector<Field>>& upper);
// d f as a 1-form.
KForm differential(int dim, const Field& f);

struct AltValue {
  AltKind kind = AltKind::Form;
  int dim = 0;
  int degree = 0;
  std::vector<double> comp;

  double at(MultiIndex idx) const;
  double max_abs() const;
  Eigen::VectorXd vec() const;     // degree 1
  Eigen::MatrixXd matrix() const;  // degree 2, antisymmetric
};

AltValue evaluate(const AltField& a, const Coords& p);
AltValue operator-(const AltValue& a, const AltValue& b);
AltValue operator*(double s, const AltValue& a);

AltField operator+(const AltField& a, const AltField& b);
AltField operator-(const AltField& a, const AltField& b);
AltField operator*(const Field& f, const AltField& a);
AltField operator*(double s, const AltField& a);

KForm exterior_d(const KForm& w);
AltField wedge(const AltField& a, const AltField& b);
// i_X w for a vector field X and a form w.
KForm interior(const Multivector& X, const KForm& w);
// i_alpha P for a 1-form alpha and a multivector P: (i_alpha P)^J = alpha_a P^{aJ}.
Multivector contract(const KForm& alpha, const Multivector& P);
// Evaluate a form on vector fields / a multivector on 1-forms.
Field eval_form(const KForm& w, const std::vector<Multivector>& Xs);
Field eval_multivector(const Multivector& P, const std::vector<KForm>& alphas);

// X(f).
Field directional(const Multivector& X, const Field& f);
Multivector lie_bracket(const Multivector& X, const Multivector& Y);
KForm lie_derivative(const Multivector& X, const KForm& w);  // Cartan
Multivector lie_derivative_mv(const Multivector& X, const Multivector& P);
// Schouten-Nijenhuis bracket for degree pairs (1,1), (1,2), (2,1), (2,2).
Multivector schouten(const Multivector& P, const Multivector& Q);

KForm pullback_form(const SmoothMap& F, const KForm& w);
// T_pF X(p).
Eigen::VectorXd pushforward(const SmoothMap& F, const Multivector& X, const Coords& p);

// Pointwise helpers.
Eigen::VectorXd vector_at(const Multivector& X, const Coords& p);
Eigen::VectorXd covector_at(const KForm& a, const Coords& p);
Eigen::MatrixXd matrix_at(const AltField& a, const Coords& p);  // degree-2 objects
Eigen::VectorXd gradient_at(const Field& f, const Coords& p);

}  // namespace jdl
