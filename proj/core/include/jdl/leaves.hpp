#pragma once

// Characteristic distributions of Jacobi pairs, numerical leaf traces, and
// the leaf correspondence checks for contact dual pairs.

#include <cstdint>
#include <ostream>
#include <vector>

#include "jdl/atiyah.hpp"
#include "jdl/dualpair.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/linalg.hpp"
#include "jdl/report.hpp"

namespace jdl {

// span{X_f : f in {1, x_1, ..., x_n}} at p.
Subspace characteristic_subspace(const JacobiPair& J, const Coords& p);

enum class LeafParity { Contact, Lcs };
const char* to_string(LeafParity p);
inline LeafParity parity_of(int dim) { return dim % 2 ? LeafParity::Contact : LeafParity::Lcs; }

struct TraceOptions {
  int steps = 1000;
  double dt = 1e-3;
  // A new random combination of frame functions is drawn this often.
  int segment = 100;
  std::uint64_t seed = 1;
  // Record every k-th step (the endpoints are always kept).
  int record_every = 10;
  // Redraws allowed when a step would leave the chart.
  int max_redraws = 20;
};

struct LeafProbe {
  Coords seed;
  std::vector<int> steps;       // recorded step numbers
  std::vector<Coords> points;   // recorded points
  std::vector<int> ranks;       // characteristic rank at each recorded point
  int dimension = 0;            // rank at the seed
  bool rank_constant = true;
  LeafParity parity = LeafParity::Lcs;
  // Largest difference between one RK4 step and two half steps.
  double step_error = 0;
};

// RK4 along Hamiltonian fields of random combinations of 1 and the
// coordinates. Throws StepOutOfDomain when no redraw keeps the trace inside
// the chart.
LeafProbe leaf_trace(const JacobiPair& J, const Coords& p0, const TraceOptions& opt = {});

// CSV: step, x0..x{n-1}, rank, then one column per extra function.
void write_trace_csv(std::ostream& os, const LeafProbe& probe, const std::vector<Field>& extra = {});

// (D Phi_i)^{-1}(im J_i^sharp) = ker D Phi_i + (ker D Phi_i)^perp, and
// ker T phi1 + ker T phi2 = (T phi_i)^{-1}(C_i), for i = 1, 2.
CheckReport check_pullback_distribution(const DualPairSpec& dp, const std::vector<Coords>& pts, double tol = 1e-7);

// Per seed: codim C_1 = codim C_2 and the parities of C_1, C_2 agree.
CheckReport verify_leaf_correspondence(const DualPairSpec& dp, const std::vector<Coords>& seeds);

// A leaf S through the source, given as a parametrization iota: U -> M.
// Forms on the targets are ambient forms whose restrictions to the leaves
// S_i are the leaf structures.
// iota^* theta = a1 (phi1 iota)^* theta1 + a2 (phi2 iota)^* theta2.
// Throws DimensionMismatch when both S_1 and S_2 are even-dimensional.
CheckReport verify_leaf_relation_contact(const DualPairSpec& dp, const SmoothMap& iota, const KForm& theta1,
                                         const KForm& theta2, const std::vector<Coords>& pts, double tol = 1e-8);

struct LeafLcs {
  KForm eta;
  KForm omega;
};

// eta on S is fixed by eta = -a1^{-1} da1 + phi1^* eta1 on ker T phi2 and
// eta = -a2^{-1} da2 + phi2^* eta2 on ker T phi1. Then d eta = 0 (finite
// differences) and d(iota^* theta) - iota^* theta ^ eta = a1 phi1^* omega1 +
// a2 phi2^* omega2. Throws InconsistentConnection when the two prescriptions
// disagree on the overlap.
CheckReport verify_leaf_relation_lcs(const DualPairSpec& dp, const SmoothMap& iota, const LeafLcs& s1,
                                     const LeafLcs& s2, const std::vector<Coords>& pts, double tol = 1e-7);

// The assembled eta at a leaf parameter point.
Eigen::VectorXd leaf_eta(const DualPairSpec& dp, const SmoothMap& iota, const LeafLcs& s1, const LeafLcs& s2,
                         const Coords& x, double tol = 1e-7);

}  // namespace jdl
