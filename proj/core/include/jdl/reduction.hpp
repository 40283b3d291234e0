#pragma once

// Lie group actions on contact manifolds: contactomorphism and transversality
// checks, the projective moment map, local freeness, quotients on slices and
// the reduction dual pair M/G <- M -> P(g*).

#include <functional>
#include <string>
#include <vector>

#include "jdl/contact.hpp"
#include "jdl/dualpair.hpp"
#include "jdl/groupoid.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/report.hpp"

namespace jdl {

using Flow = std::function<Coords(const Coords& p, double t)>;

struct GroupActionSpec {
  std::string name;
  LieAlgebraData algebra;
  std::vector<Multivector> generators;  // zeta_a, one per basis vector
  std::vector<Flow> flows;              // optional closed forms; empty means integrate

  int group_dim() const { return algebra.dim; }
};

// [zeta_a, zeta_b] = c^k_ab zeta_k.
CheckReport check_action_axiom(const GroupActionSpec& A, const std::vector<Coords>& pts, double tol = 1e-8);

// L_{zeta_a} theta proportional to theta: second singular value of
// [theta; L_zeta theta], per generator.
CheckReport check_contact_action_group(const ContactStructure& C, const GroupActionSpec& A,
                                       const std::vector<Coords>& pts, double tol = 1e-8);

// Margin: smallest singular value of [H | zeta_1 .. zeta_k] at rank dim M.
CheckReport check_orbit_transversality(const ContactStructure& C, const GroupActionSpec& A,
                                       const std::vector<Coords>& pts, double tol = 1e-8);

// theta(zeta_a) as fields.
std::vector<Field> moment_components(const ContactStructure& C, const GroupActionSpec& A);

struct MomentValue {
  Eigen::VectorXd covector;  // (theta_p(zeta_a(p)))_a
  int chart_index = 0;       // 1-based chart of P(g*) with the largest |component|
  Eigen::VectorXd affine;    // coordinates in that chart
};

// Throws ZeroMomentCovector when the covector vanishes.
MomentValue moment_map(const ContactStructure& C, const GroupActionSpec& A, const Coords& p);

// M -> affine chart k of P(g*), w_i = theta(zeta_i) / theta(zeta_k).
SmoothMap moment_chart_map(const ContactStructure& C, const GroupActionSpec& A, const Chart& M, int k);

// Along the flow of zeta_b for time eps the moment covector follows
// dv/dt = ad-dual action; rays are compared.
CheckReport check_moment_equivariance(const ContactStructure& C, const GroupActionSpec& A,
                                      const std::vector<Coords>& pts, double eps = 0.1, double tol = 1e-7);

// Per point: locally free <=> (moment map is a submersion and ker TJ + H = TM).
// A map to a point is a rank-0 submersion with ker TJ = TM.
CheckReport check_locally_free(const ContactStructure& C, const GroupActionSpec& A, const std::vector<Coords>& pts);

struct SliceChart {
  Chart chart;
  SmoothMap embed;    // slice -> M
  SmoothMap project;  // M -> slice, constant along orbits, project o embed = id
};

// Slice transversality, project o embed = id and T project zeta_a = 0.
CheckReport check_slice(const GroupActionSpec& A, const SliceChart& S, const std::vector<Coords>& slice_pts,
                        double tol = 1e-8);

// Brackets of invariant extensions, restricted to the slice. Throws
// NonInvariantBracket when an upstairs bracket varies along orbits.
// For a trivial group this is contact_to_jacobi(C).
JacobiPair quotient_jacobi(const ContactStructure& C, const GroupActionSpec& A, const SliceChart& S,
                           double tol = 1e-8);

// Leg 1: slice projection, a = 1, onto the quotient pair. Leg 2: moment map
// into chart k of P(g*) (a point when dim g = 1) with a = theta(zeta_k),
// onto the projectivized Lie-Poisson pair. k = 0 picks the chart from the
// moment map at the first slice sample.
DualPairSpec reduction_dual_pair(const ContactStructure& C, const GroupActionSpec& A, const SliceChart& S,
                                 int chart_index = 0);

// Per seed in M: quotient leaf dimension = dim M - 2 dim G + 1 + dim O, with O
// the characteristic leaf through the moment image, and parity of the
// quotient leaf = parity of dim O.
CheckReport classify_reduced_leaves(const DualPairSpec& reduced, const GroupActionSpec& A,
                                    const std::vector<Coords>& seeds);

}  // namespace jdl
