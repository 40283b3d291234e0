#pragma once

// Coorientable contact structures (a contact 1-form theta) and locally
// conformal symplectic pairs (eta, omega), with their Jacobi dictionaries.
//
// Contact: X_f is the unique field with theta(X_f) = f and
// i_{X_f} dtheta = E(f) theta - df; {f, g} = X_f(g) - g E(f).
// l.c.s. (d omega + omega ^ eta = 0): X_f = omega^sharp(df + f eta) with
// omega^flat X = i_X omega, and {f, g} = omega(X_f, X_g). The sign in
// df + f eta is the one for which this bracket satisfies the Jacobi identity.

#include <vector>

#include <Eigen/Dense>

#include "jdl/calculus.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/linalg.hpp"
#include "jdl/report.hpp"

namespace jdl {

inline constexpr double kDefaultVolumeTol = 1e-8;

struct ContactStructure {
  Chart chart;
  KForm theta;

  int dim() const { return chart.dim; }
  int half_dim() const { return (chart.dim - 1) / 2; }
};

struct LcsStructure {
  Chart chart;
  KForm eta;
  KForm omega;
};

ContactStructure make_contact(const Chart& chart, KForm theta);
LcsStructure make_lcs(const Chart& chart, KForm eta, KForm omega);

// Top coefficient of theta ^ (dtheta)^n as a field.
Field contact_volume(const ContactStructure& C);
CheckReport check_contact(const ContactStructure& C, const std::vector<Coords>& pts,
                          double tol = kDefaultVolumeTol);

Multivector reeb(const ContactStructure& C);
Eigen::VectorXd reeb(const ContactStructure& C, const Coords& p);

struct Curvature {
  Subspace H;       // ker theta_p
  BilinearForm c;   // -dtheta_p restricted to H, in the basis H.basis
};
Curvature curvature_form(const ContactStructure& C, const Coords& p);

// Smooth route: solves the (2n+2)-dimensional bordered system with jet
// coefficients, so derivatives of X_f are exact.
Multivector contact_hamiltonian_field(const ContactStructure& C, const Field& f);
// Pointwise route through the curvature form: f E + c^sharp(df|_H).
Eigen::VectorXd contact_hamiltonian_vf(const ContactStructure& C, const Field& f, const Coords& p);

Field contact_bracket(const ContactStructure& C, const Field& f, const Field& g);
BracketOracle contact_oracle(const ContactStructure& C);
JacobiPair contact_to_jacobi(const ContactStructure& C, const std::vector<Coords>& pts);

// dtheta as a matrix W_ij = d_i theta_j - d_j theta_i at p.
Eigen::MatrixXd dtheta_matrix(const ContactStructure& C, const Coords& p);

// l.c.s. side.
CheckReport check_lcs(const LcsStructure& L, const std::vector<Coords>& pts, double tol = 1e-8);
Multivector lcs_hamiltonian_field(const LcsStructure& L, const Field& f);
Eigen::VectorXd lcs_hamiltonian_vf(const LcsStructure& L, const Field& f, const Coords& p);
Field lcs_bracket(const LcsStructure& L, const Field& f, const Field& g);
double lcs_bracket(const LcsStructure& L, const Field& f, const Field& g, const Coords& p);
BracketOracle lcs_oracle(const LcsStructure& L);
// Even transitive dictionary: Pi = -Omega^{-1}, E = Omega^{-1} eta (matrices).
// The Jacobi Hamiltonian field of f is minus the l.c.s. one.
JacobiPair lcs_to_jacobi(const LcsStructure& L, const std::vector<Coords>& pts);

// Inverse dictionary at a point of a transitive even-dimensional pair:
// Omega = -Pi^{-1}, eta = Omega E.
struct LcsValue {
  Eigen::VectorXd eta;
  Eigen::MatrixXd omega;
};
LcsValue jacobi_to_lcs_at(const JacobiPair& J, const Coords& p);

}  // namespace jdl
