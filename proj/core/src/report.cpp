#include "jdl/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace jdl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

std::string first_note(const std::vector<PointOutcome>& out) {
  for (const auto& o : out)
    if (!o.note.empty()) return o.note;
  return {};
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::HypothesisNotMet: return "hypothesis-not-met";
    case Status::Skipped: return "skipped";
  }
  return "unknown";
}

int worker_count() {
  if (const char* env = std::getenv("JDL_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int w = std::min(worker_count(), n);
  if (w <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (int i = next++; i < n && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  for (int t = 1; t < w; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<PointOutcome> evaluate_points(const std::vector<Coords>& pts,
                                          const std::function<double(const Coords&)>& f) {
  std::vector<PointOutcome> out(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    try {
      out[i].value = sanitize(f(pts[i]));
    } catch (const Error& e) {
      out[i].value = std::numeric_limits<double>::quiet_NaN();
      out[i].note = e.what();
    }
  });
  return out;
}

CheckReport run_residual_check(std::string id, std::string anchor, const std::vector<Coords>& pts,
                               double tol, const std::function<double(const Coords&)>& residual) {
  const auto t0 = Clock::now();
  CheckReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.tolerance = tol;
  r.samples = static_cast<int>(pts.size());
  auto out = evaluate_points(pts, residual);
  r.point_pass.resize(pts.size());
  int worst = -1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = std::isnan(out[i].value) ? std::numeric_limits<double>::infinity() : out[i].value;
    r.point_pass[i] = v < tol;
    if (worst < 0 || v > r.max_residual) {
      r.max_residual = v;
      worst = static_cast<int>(i);
    }
  }
  if (worst >= 0) r.worst_point = pts[worst];
  r.status = (!pts.empty() && r.max_residual < tol) ? Status::Pass : Status::Fail;
  r.note = first_note(out);
  r.wall_ms = ms_since(t0);
  return r;
}

CheckReport run_margin_check(std::string id, std::string anchor, const std::vector<Coords>& pts,
                             double tol, const std::function<double(const Coords&)>& margin) {
  const auto t0 = Clock::now();
  CheckReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.metric = "margin";
  r.tolerance = tol;
  r.samples = static_cast<int>(pts.size());
  auto out = evaluate_points(pts, margin);
  r.point_pass.resize(pts.size());
  int worst = -1;
  r.max_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = std::isnan(out[i].value) ? -std::numeric_limits<double>::infinity() : out[i].value;
    r.point_pass[i] = v > tol;
    if (worst < 0 || v < r.max_residual) {
      r.max_residual = v;
      worst = static_cast<int>(i);
    }
  }
  if (worst >= 0) r.worst_point = pts[worst];
  r.status = (!pts.empty() && r.max_residual > tol) ? Status::Pass : Status::Fail;
  r.note = first_note(out);
  r.wall_ms = ms_since(t0);
  return r;
}

CheckReport run_predicate_check(std::string id, std::string anchor, const std::vector<Coords>& pts,
                                const std::function<bool(const Coords&)>& pred) {
  const auto t0 = Clock::now();
  CheckReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.metric = "verdict";
  r.tolerance = 0.5;
  r.samples = static_cast<int>(pts.size());
  auto out = evaluate_points(pts, [&](const Coords& p) { return pred(p) ? 0.0 : 1.0; });
  r.point_pass.resize(pts.size());
  int bad = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool ok = out[i].value == 0.0;
    r.point_pass[i] = ok;
    if (!ok) {
      if (bad == 0) r.worst_point = pts[i];
      ++bad;
    }
  }
  r.max_residual = bad;
  r.status = (!pts.empty() && bad == 0) ? Status::Pass : Status::Fail;
  r.note = first_note(out);
  r.wall_ms = ms_since(t0);
  return r;
}

CheckReport skipped(std::string id, std::string anchor, std::string why) {
  CheckReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.status = Status::Skipped;
  r.note = std::move(why);
  return r;
}

CheckReport hypothesis_not_met(std::string id, std::string anchor, std::string why) {
  CheckReport r = skipped(std::move(id), std::move(anchor), std::move(why));
  r.status = Status::HypothesisNotMet;
  return r;
}

CheckReport combine(std::string id, std::string anchor, const std::vector<CheckReport>& parts) {
  CheckReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.status = Status::Pass;
  bool any = false;
  for (const auto& p : parts) {
    if (p.status == Status::Skipped) continue;
    any = true;
    r.wall_ms += p.wall_ms;
    r.samples = std::max(r.samples, p.samples);
    r.tolerance = std::max(r.tolerance, p.tolerance);
    if (p.metric == "residual" && (r.worst_point.empty() || p.max_residual > r.max_residual)) {
      r.max_residual = p.max_residual;
      r.worst_point = p.worst_point;
    }
    if (p.status != Status::Pass) {
      if (r.status == Status::Pass) r.status = p.status;
      if (!r.note.empty()) r.note += "; ";
      r.note += p.id + " " + to_string(p.status);
      if (!p.note.empty()) r.note += " (" + p.note + ")";
    }
    if (r.point_pass.empty()) {
      r.point_pass = p.point_pass;
    } else if (p.point_pass.size() == r.point_pass.size()) {
      for (std::size_t i = 0; i < r.point_pass.size(); ++i)
        r.point_pass[i] = r.point_pass[i] && p.point_pass[i];
    }
  }
  if (!any) r.status = Status::Skipped;
  return r;
}

}  // namespace jdl
