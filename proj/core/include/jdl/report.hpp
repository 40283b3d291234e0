#pragma once

// Check reports and the pointwise check runner.

#include <functional>
#include <string>
#include <vector>

#include "jdl/jets.hpp"

namespace jdl {

enum class Status { Pass, Fail, HypothesisNotMet, Skipped };

const char* to_string(Status s);

struct CheckReport {
  std::string id;
  std::string anchor;
  Status status = Status::Skipped;
  // "residual": pass iff max_residual < tolerance.
  // "margin": max_residual holds the smallest margin; pass iff it exceeds tolerance.
  // "verdict": per-point boolean agreement; max_residual counts disagreements.
  std::string metric = "residual";
  double max_residual = 0;
  Coords worst_point;
  int samples = 0;
  double tolerance = 0;
  double wall_ms = 0;
  std::string note;
  std::vector<char> point_pass;  // per sample point, in sample order

  bool passed() const { return status == Status::Pass; }
};

// Number of workers: JDL_THREADS if set (>= 1), otherwise hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n). Results must be written to index-addressed
// storage; the schedule is not deterministic but the output then is.
void parallel_for(int n, const std::function<void(int)>& body);

struct PointOutcome {
  double value = 0;
  std::string note;  // set when evaluation threw
};

// Evaluates `residual` at every point (in parallel) and assembles a report.
// Library errors at a point count as an infinite residual and are noted.
CheckReport run_residual_check(std::string id, std::string anchor, const std::vector<Coords>& pts,
                               double tol, const std::function<double(const Coords&)>& residual);

// Same, but the quantity must stay above tol (e.g. a volume coefficient).
CheckReport run_margin_check(std::string id, std::string anchor, const std::vector<Coords>& pts,
                             double tol, const std::function<double(const Coords&)>& margin);

// Per-point boolean predicate; passes iff it holds everywhere.
CheckReport run_predicate_check(std::string id, std::string anchor, const std::vector<Coords>& pts,
                                const std::function<bool(const Coords&)>& pred);

std::vector<PointOutcome> evaluate_points(const std::vector<Coords>& pts,
                                          const std::function<double(const Coords&)>& f);

CheckReport skipped(std::string id, std::string anchor, std::string why);
CheckReport hypothesis_not_met(std::string id, std::string anchor, std::string why);

// Folds several reports into one: worst residual, conjunction of verdicts.
CheckReport combine(std::string id, std::string anchor, const std::vector<CheckReport>& parts);

}  // namespace jdl
