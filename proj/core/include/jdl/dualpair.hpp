#pragma once

// Contact dual pairs M1 <- (M, theta) -> M2 with conformal legs, checked
// pointwise: transversality, Jacobi commutation, c-orthogonality of
// H_i = H cap ker T phi_i, and the equivalent varpi-orthogonality of the
// kernels of D Phi_i.

#include <string>
#include <vector>

#include "jdl/atiyah.hpp"
#include "jdl/contact.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/report.hpp"

namespace jdl {

struct DualPairLeg {
  JacobiPair target;
  ConformalMap phi;
  // Target test functions; empty means the coordinates and 1.
  std::vector<Field> frames;
};

struct DualPairSpec {
  std::string name;
  ContactStructure source;
  DualPairLeg leg1;
  DualPairLeg leg2;
};

// Orthonormal basis of ker T phi at p (everything when the target is a point).
Eigen::MatrixXd ker_tangent(const SmoothMap& F, const Coords& p);
Eigen::MatrixXd ker_tangent(const ConformalMap& phi, const Coords& p);

// Frames of a leg with the default filled in.
std::vector<Field> leg_frames(const DualPairLeg& leg);

// Both legs as Jacobi morphisms out of the contact dictionary of the source.
CheckReport check_legs(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol = 1e-8);

// Margin: smallest singular value of the combined orthonormal bases of H and
// ker T phi_i, over both legs.
CheckReport check_transversality(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol = 1e-8);
CheckReport check_commutation(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol = 1e-8);
CheckReport check_curvature_orthogonality(const DualPairSpec& dp, const std::vector<Coords>& pts,
                                          double tol = 1e-7);

struct DualPairVerdict {
  CheckReport legs;
  CheckReport transversality;
  CheckReport commutation;
  CheckReport curvature;
  CheckReport varpi;
  // Per-point agreement of the three-condition verdict with the varpi verdict.
  CheckReport equivalence;

  bool definition_holds() const;
  std::vector<CheckReport> all() const;
};

DualPairVerdict verify_dual_pair(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol = 1e-8);

// 1 + rank T phi1 + rank T phi2 = dim M with constant ranks, and
// ker T phi_i = span{X_{a_j phi_j^* g}} for the other leg's frames.
CheckReport check_rank_relation(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol = 1e-7);

// ker T phi_i = <X_{a_j}> + H_j^perp (direct), for both orderings.
CheckReport check_corollary_decomposition(const DualPairSpec& dp, const std::vector<Coords>& pts,
                                          double tol = 1e-7);

// Pointwise surrogate for the centralizer statement: if lambda commutes with
// a1 phi1^* f for all frames f, then j1 lambda annihilates ker D Phi2. This is
// not a check of the function-space centralizers themselves.
CheckReport centralizer_membership(const DualPairSpec& dp, const Field& lambda, const std::vector<Coords>& pts,
                                   double tol = 1e-8);

}  // namespace jdl
