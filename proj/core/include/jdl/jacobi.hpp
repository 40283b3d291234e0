#pragma once

// Jacobi pairs (Pi, E) on charts, their brackets and morphisms.
//
// Conventions: Pi^sharp(alpha) = Pi(alpha, .), X_f = Pi^sharp df + f E and
// {f, g} = Pi(df, dg) + f E(g) - g E(f).

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jdl/calculus.hpp"
#include "jdl/chart.hpp"
#include "jdl/report.hpp"

namespace jdl {

struct JacobiPair {
  Chart chart;
  Multivector Pi;
  Multivector E;
  // Largest integrability residual seen by certify(); negative if never certified.
  double certified_residual = -1;

  int dim() const { return chart.dim; }
};

JacobiPair make_jacobi_pair(const Chart& chart, Multivector Pi, Multivector E);
JacobiPair zero_pair(const Chart& chart);

struct ConformalMap {
  SmoothMap map;  // phi
  Field factor;   // a

  // a * (f o phi)
  Field pull(const Field& f) const;
};

struct LieAlgebraData {
  std::string name;
  int dim = 0;
  std::vector<double> c;  // c[(k * dim + i) * dim + j] = c^k_ij

  double operator()(int k, int i, int j) const { return c[(k * dim + i) * dim + j]; }
  // Sets [e_i, e_j] = sum_k v_k e_k (and the antisymmetric partner).
  void set_bracket(int i, int j, const std::vector<double>& v);
  double jacobi_residual() const;
};

LieAlgebraData make_lie_algebra(std::string name, int dim);
LieAlgebraData so3();
LieAlgebraData aff1();
LieAlgebraData abelian(int dim);

// A bracket on functions of a chart, returned as a field.
using BracketOracle = std::function<Field(const Field&, const Field&)>;

// Integrability residual max(|[[Pi,Pi]] - 2 E^Pi|, |[[E,Pi]]|) at p.
double jacobi_pair_residual(const JacobiPair& J, const Coords& p);
CheckReport check_jacobi_pair(const JacobiPair& J, const std::vector<Coords>& pts, double tol);
// Runs check_jacobi_pair and records the residual on J.
CheckReport certify(JacobiPair& J, const std::vector<Coords>& pts, double tol);

Field jacobi_bracket(const JacobiPair& J, const Field& f, const Field& g);
double jacobi_bracket(const JacobiPair& J, const Field& f, const Field& g, const Coords& p);
BracketOracle bracket_oracle(const JacobiPair& J);

Multivector hamiltonian_vf(const JacobiPair& J, const Field& f);
Eigen::VectorXd hamiltonian_vf(const JacobiPair& J, const Field& f, const Coords& p);

// {f,{g,h}} + cyclic as a field.
Field jacobiator(const BracketOracle& br, const Field& f, const Field& g, const Field& h);

// Test functions on J2's chart default to 1, the coordinates and their
// pairwise products.
std::vector<Field> default_test_functions(int dim);

CheckReport check_jacobi_morphism(const JacobiPair& J1, const JacobiPair& J2, const ConformalMap& phi,
                                  const std::vector<Field>& test_fns, const std::vector<Coords>& pts,
                                  double tol);

JacobiPair lie_poisson(const LieAlgebraData& g);

// Affine chart k (1-based) of P(g*): coordinates w = (mu_i / mu_k)_{i != k}.
Chart projective_chart(const LieAlgebraData& g, int k, double half_width = 2.0);
BracketOracle projectivized_oracle(const LieAlgebraData& g, int k);
double projectivized_bracket(const LieAlgebraData& g, int k, const Field& b1, const Field& b2,
                             const Coords& p);
// Degree-1 homogeneous extension B(mu) = mu_k b(mu / mu_k) on g*.
Field homogeneous_extension(const LieAlgebraData& g, int k, const Field& b);

// Recovers (Pi, E) from a first-order bracket: E^i = {1, x_i},
// Pi^ij = {x_i, x_j} - x_i E^j + x_j E^i. The recovered pair is compared with
// the oracle on a few nonlinear test pairs at pts; mismatch raises
// InconsistentOracle.
JacobiPair extract_pair_from_bracket(const BracketOracle& oracle, const Chart& chart,
                                     const std::vector<Coords>& pts, double tol = 1e-8);

// The pair J' with {c f, c g}_J = c {f, g}_J'.
JacobiPair conformal_change(const JacobiPair& J, const Field& c, const std::vector<Coords>& pts,
                            double tol = 1e-8);

}  // namespace jdl
