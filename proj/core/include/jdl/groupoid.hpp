#pragma once

// Contact groupoids given in charts: structure maps, a multiplicative
// contact form theta with m^* theta = pr1^* theta + e^{pr1^* f} pr2^* theta,
// the induced Jacobi pair on the base, and the source/target dual pair.

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "jdl/contact.hpp"
#include "jdl/dualpair.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/report.hpp"

namespace jdl {

struct GroupoidSpec {
  std::string name;
  Chart total;
  Chart base;
  SmoothMap s, t;  // total -> base
  SmoothMap m;     // pairs (g, h) in total x total -> total, defined when s(g) = t(h)
  SmoothMap i;     // total -> total
  SmoothMap u;     // base -> total
  ContactStructure theta;
  Field f_mult;    // empty for strict groupoids
  // An arrow with t(h) = x, drawn at random inside the chart.
  std::function<Coords(const Coords& x, std::mt19937_64& rng)> arrow_into;
};

// total x total, for building m.
Chart pair_chart(const Chart& total);

using ArrowPair = std::pair<Coords, Coords>;

// Deterministic composable pairs: g from the chart, h = arrow_into(s(g)).
// Pairs whose product leaves the chart are redrawn.
std::vector<ArrowPair> composable_pairs(const GroupoidSpec& G, int n, std::uint64_t seed);

// Units, source/target of products, associativity and inverses.
// Throws NonComposableSample if a supplied pair has s(g) != t(h).
CheckReport check_groupoid_axioms(const GroupoidSpec& G, const std::vector<ArrowPair>& pairs, double tol = 1e-9);

// 1-form residual on T(G^(2)) at each pair, plus m^* f = pr1^* f + pr2^* f.
CheckReport check_multiplicativity(const GroupoidSpec& G, const std::vector<ArrowPair>& pairs, double tol = 1e-9);

// u^* theta = 0.
CheckReport check_units_legendrian(const GroupoidSpec& G, const std::vector<Coords>& base_pts, double tol = 1e-10);

// {f, g}_0 read off from {t^* f, t^* g} along the units. Throws NotBasic when
// the upstairs bracket varies along t-fibers, and OracleMismatch when theta
// fails the multiplicativity precheck.
JacobiPair base_jacobi(const GroupoidSpec& G, const std::vector<Coords>& pts, double tol = 1e-8);

// (-Pi, -E).
JacobiPair negated(const JacobiPair& J);

// Legs (s, -e^f) onto the negated base pair and (t, 1) onto the base pair.
DualPairSpec source_target_pair(const GroupoidSpec& G, const std::vector<Coords>& pts);

struct SourceTargetVerdict {
  DualPairSpec spec;
  DualPairVerdict pair;
  CheckReport rank;
  CheckReport corollary;
  CheckReport summary;
};

SourceTargetVerdict verify_source_target_dual_pair(const GroupoidSpec& G, const std::vector<Coords>& pts,
                                                   double tol = 1e-8);

// Self-action witness: T m (X_{t^* l}(g), 0) = X_{t^* l}(g h), with
// X_{t^* l}(g) in ker T s so that (X, 0) is tangent to the composable pairs.
CheckReport check_self_action_hamiltonian(const GroupoidSpec& G, const std::vector<Field>& base_functions,
                                          const std::vector<ArrowPair>& pairs, double tol = 1e-8);

// Sigma: base -> total with s o Sigma = id. Checks Sigma^* theta = 0
// (HypothesisNotMet otherwise), then r_Sigma^* theta = theta at pts, where
// r_Sigma(g) = g Sigma((t o Sigma)^{-1}(s(g))). Throws NotABisection when
// s o Sigma != id or t o Sigma is singular.
CheckReport check_legendrian_bisection(const GroupoidSpec& G, const SmoothMap& sigma, const std::vector<Coords>& pts,
                                       double tol = 1e-8);

}  // namespace jdl
