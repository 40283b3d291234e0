#pragma once

// Poissonization and symplectization over the trivial principal R^x-bundle
// M x R^x, with the fiber coordinate s appended last. h_t(x, s) = (x, t s).
//
// Closed forms: P = s^{-1} Pi + d_s ^ E, omega~ = d(s pi^* theta),
// Phi~(x, s) = (phi(x), a(x) s).

#include <vector>

#include "jdl/contact.hpp"
#include "jdl/dualpair.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/report.hpp"

namespace jdl {

// M x R^x with |s| < 0.5 excluded and |s| <= 2.
Chart slit_chart(const Chart& base);
// Lifts (x) to (x, s).
Coords lift_point(const Coords& x, double s);

struct HomogeneousBivector {
  Chart base;
  Chart chart;  // slit_chart(base)
  Multivector P;
};

// Throws OracleMismatch if the closed form disagrees with the defining bracket
// on the sampled slit chart.
HomogeneousBivector poissonize(const JacobiPair& J);
// {s f o pi, s g o pi}_P - s {f, g}_J o pi on test functions.
CheckReport check_poissonization(const JacobiPair& J, const HomogeneousBivector& H, const std::vector<Coords>& pts,
                                 double tol = 1e-9);
// h_t^* P - t^{-1} P for t in {2, 1/3, -1}.
CheckReport check_bivector_homogeneity(const HomogeneousBivector& H, const std::vector<Coords>& pts,
                                       double tol = 1e-9);
// Reads (Pi, E) back on the s = 1 slice.
JacobiPair dehomogenize(const HomogeneousBivector& H);

struct Symplectization {
  Chart base;
  Chart chart;
  KForm omega;
};

Symplectization symplectize(const ContactStructure& C);
// d omega~ = 0, nondegeneracy and h_t^* omega~ = t omega~.
CheckReport check_symplectization(const Symplectization& S, const std::vector<Coords>& pts, double tol = 1e-10);
// -omega~^{-1} against poissonize(contact_to_jacobi(C)) at lifted points.
CheckReport check_symplectization_consistency(const ContactStructure& C, const std::vector<Coords>& base_pts,
                                              double tol = 1e-8);

SmoothMap homogenize_map(const ConformalMap& phi);
// Phi~ o h_t = h_t o Phi~.
CheckReport check_map_equivariance(const ConformalMap& phi, const std::vector<Coords>& pts, double tol = 1e-12);

// ker T Phi~1 = (ker T Phi~2)^perp w.r.t. omega~ at (x, s), s in {1, 2, -1}.
// The report notes whether the verdict agrees with the base dual-pair
// verdict pointwise and across s-slices.
CheckReport check_homogeneous_sdp_equivalence(const DualPairSpec& dp, const std::vector<Coords>& base_pts,
                                              double tol = 1e-7);

}  // namespace jdl
