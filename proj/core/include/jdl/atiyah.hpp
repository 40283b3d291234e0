#pragma once

// The gauge algebroid of the trivial line bundle, D = TM + R. A derivation
// (X, g) acts by f -> X(f) + g f; coordinates are (X^0..X^{n-1}, g), so the
// identity derivation is the last basis vector. First jets (alpha, c) pair
// with derivations by alpha(X) + g c.
//
// varpi = d_D(theta o sigma) on the constant frame {(d_i, 0), 1}. With this
// sign varpi^flat o J^sharp = -id on first jets.

#include <vector>

#include <Eigen/Dense>

#include "jdl/contact.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/linalg.hpp"
#include "jdl/report.hpp"

namespace jdl {

struct Derivation {
  Coords p;
  Eigen::VectorXd X;
  double g = 0;

  int dim() const { return static_cast<int>(X.size()); }
  Eigen::VectorXd vec() const;
  static Derivation from_vec(const Coords& p, const Eigen::VectorXd& v);
  static Derivation identity(const Coords& p);
  // X(f) + g f at p.
  double apply(const Field& f) const;
};

struct JetElement {
  Coords p;
  Eigen::VectorXd alpha;
  double c = 0;

  Eigen::VectorXd vec() const;
};

JetElement jet1(const Field& f, const Coords& p);
double pairing(const Derivation& d, const JetElement& j);

// Derivations with field coefficients, for brackets.
struct DerivationField {
  Multivector X;
  Field g;
};
DerivationField der_bracket(const DerivationField& a, const DerivationField& b);
Derivation evaluate(const DerivationField& d, const Coords& p);

// L-valued Atiyah forms on the constant frame, components indexed by
// increasing tuples of {0..n} (n = the identity derivation).
struct AtiyahForm {
  int n = 0;  // chart dimension
  int degree = 0;
  std::vector<Field> comp;

  static AtiyahForm zero(int n, int degree);
  Field at(MultiIndex idx) const;
  double at(MultiIndex idx, const Coords& p) const;
  Eigen::MatrixXd matrix(const Coords& p) const;  // degree 2
  double max_abs(const Coords& p) const;
};

AtiyahForm operator-(const AtiyahForm& a, const AtiyahForm& b);

AtiyahForm theta_sigma(const ContactStructure& C);
AtiyahForm atiyah_d(const AtiyahForm& w);
AtiyahForm iota_one(const AtiyahForm& w);

AtiyahForm varpi_form(const ContactStructure& C);
BilinearForm varpi_from_theta(const ContactStructure& C, const Coords& p);

// J((alpha, c), (beta, e)) = Pi(alpha, beta) + c beta(E) - e alpha(E).
BilinearForm jacobi_bidiff(const JacobiPair& J, const Coords& p);
// J^sharp as a matrix from jet to derivation coordinates.
Eigen::MatrixXd jacobi_sharp(const JacobiPair& J, const Coords& p);
// varpi^flat as a matrix from derivation to jet coordinates.
Eigen::MatrixXd varpi_flat(const BilinearForm& varpi);

// Residual ||varpi^flat J^sharp + I|| at every sample, with J from the
// contact dictionary.
CheckReport check_sharp_inverse(const ContactStructure& C, const JacobiPair& J,
                                const std::vector<Coords>& pts, double tol = 1e-9);
CheckReport check_sharp_inverse(const ContactStructure& C, const std::vector<Coords>& pts,
                                double tol = 1e-9);

// D Phi (X, g) = (T phi X, g + X(a) / a).
Derivation gauge_pushforward(const ConformalMap& phi, const Derivation& d);
Subspace ker_DPhi(const ConformalMap& phi, const Coords& p);

// (X_f, -E(f)).
Derivation hamiltonian_derivation(const JacobiPair& J, const Field& f, const Coords& p);
// Same, computed through the contact route.
Derivation hamiltonian_derivation(const ContactStructure& C, const Field& f, const Coords& p);

// (ker D Phi1)^perp = ker D Phi2 with respect to varpi.
CheckReport check_varpi_orthogonality(const ContactStructure& C, const ConformalMap& phi1,
                                      const ConformalMap& phi2, const std::vector<Coords>& pts,
                                      double tol = 1e-7);

// (ker D Phi)^o = span j1(Phi^* l) and (ker D Phi)^perp = span Delta_{Phi^* l}
// for l in {1, target coordinates}. Valid for submersions.
CheckReport check_technical_lemma(const ContactStructure& C, const ConformalMap& phi,
                                  const std::vector<Coords>& pts, double tol = 1e-7);

// <1>^perp = sigma^{-1}(H) with respect to varpi.
CheckReport check_unit_orthogonal(const ContactStructure& C, const std::vector<Coords>& pts, double tol = 1e-9);

// (d_D iota_1 + iota_1 d_D) w - w on the frame.
CheckReport check_contracting_homotopy(const std::vector<AtiyahForm>& forms,
                                       const std::vector<Coords>& pts, double tol = 1e-9);

}  // namespace jdl
