#pragma once

// Built-in named examples, including negative controls, with the verdicts
// each check is expected to return on them.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jdl/contact.hpp"
#include "jdl/dualpair.hpp"
#include "jdl/groupoid.hpp"
#include "jdl/jacobi.hpp"
#include "jdl/leaves.hpp"
#include "jdl/reduction.hpp"
#include "jdl/report.hpp"

namespace jdl {

enum class EntryKind { Contact, JacobiPair, DualPair, Groupoid, Action, Homogeneous };
const char* to_string(EntryKind k);

// A Jacobi morphism between two charts of the same structure.
struct ChartTransition {
  std::size_t from = 0;  // index into pairs
  std::size_t to = 0;
  ConformalMap map;      // its source chart is the overlap that gets sampled
};

// An even leaf through the source of dual_pairs[pair], with the l.c.s. data
// of the corresponding target leaves.
struct LcsLeafData {
  std::size_t pair = 0;
  SmoothMap iota;
  LeafLcs s1, s2;
};

// actions[i] acts on contacts[i]; its reduction dual pair is dual_pairs[i].
struct ActionData {
  GroupActionSpec action;
  SliceChart slice;
  Chart equivariance_region;  // where flows for time 0.1 stay defined
};

// Leaf traces on pairs[pair], seeded inside `seeds`.
struct TraceData {
  std::size_t pair = 0;
  Chart seeds;
  std::vector<Field> casimirs;
};

struct ExpectedVerdict {
  std::string check;
  Status status = Status::Pass;
};

struct CatalogEntry {
  std::string id;
  EntryKind kind = EntryKind::Contact;
  std::string summary;
  std::string notes;

  std::vector<ContactStructure> contacts;  // one per chart
  std::vector<JacobiPair> pairs;
  std::vector<ChartTransition> transitions;
  std::vector<TraceData> traces;
  std::vector<DualPairSpec> dual_pairs;
  std::vector<LcsLeafData> lcs_leaves;
  std::optional<GroupoidSpec> groupoid;
  std::vector<Field> groupoid_functions;  // base functions for the self-action check
  std::optional<SmoothMap> bisection;
  std::vector<ActionData> actions;

  // Checks not listed are expected to pass.
  std::vector<ExpectedVerdict> expected;
  Status expected_status(const std::string& check) const;
};

namespace catalog {

// Throws UnknownId.
const CatalogEntry& get(const std::string& id);
std::vector<std::string> list();

}  // namespace catalog

// Hopf fibration pieces, exposed for tests. eps = +1 or -1 picks the
// stereographic chart w in R^3 of S^3 in C^2 = (x1, y1, x2, y2).
SmoothMap hopf_sphere_map(int eps);        // w -> S^3
Multivector hopf_generator(int eps);       // the S^1 generator in w
SmoothMap hopf_projection(int eps);        // w -> z1 / z2 in C = R^2
Coords hopf_flow(int eps, const Coords& w, double t);

}  // namespace jdl
