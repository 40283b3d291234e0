#pragma once

// Check suites over catalog entries and expected-verdict matching.

#include <cstdint>
#include <string>
#include <vector>

#include "jdl/catalog.hpp"
#include "jdl/report.hpp"

namespace jdl {

struct SuiteOptions {
  int samples = 100;
  std::uint64_t seed = 42;
  // Scales every check's own tolerance by tol / 1e-8.
  double tol = 1e-8;
  // Accepted for interface stability; jets are exact at every order used.
  int jet_order = 2;
  int trace_seeds = 4;
};

// contact, jacobi, atiyah, dualpair, homogenize, leaves, reduction, groupoid.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);  // also accepts "all"

// Checks an entry has no payload for are omitted. Throws ConfigError for an
// unknown suite name.
std::vector<CheckReport> run_suite(const std::string& suite, const CatalogEntry& e, const SuiteOptions& opt);

// Checks whose status differs from the entry's expectation. Skipped checks
// never count as mismatches.
std::vector<std::string> verdict_mismatches(const CatalogEntry& e, const std::vector<CheckReport>& reports);

}  // namespace jdl
