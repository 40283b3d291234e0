#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jdl/catalog.hpp"
#include "jdl/suite.hpp"

namespace jdl::cli {

inline constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kMismatch = 1, kConfigError = 2 };

struct RunConfig {
  std::string suite = "all";
  std::vector<std::string> examples;  // empty: every catalog and config entry
  int samples = 100;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int jet_order = 2;
  std::string out;  // empty: stdout
  std::string format = "json";
  std::string trace_csv;
  std::string config_path;
};

// Throws ConfigError.
void validate(const RunConfig& c);

struct EntryResult {
  const CatalogEntry* entry = nullptr;
  std::vector<CheckReport> checks;
  std::vector<std::string> mismatches;
};

nlohmann::ordered_json report_json(const RunConfig& c, const std::vector<EntryResult>& results);
void write_text(std::ostream& os, const std::vector<EntryResult>& results);

// argv-style entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jdl::cli
