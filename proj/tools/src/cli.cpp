#include "jdl_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "jdl/errors.hpp"
#include "jdl/leaves.hpp"
#include "jdl_cli/config.hpp"

#ifndef JDL_VERSION
#define JDL_VERSION "0.0.0"
#endif

namespace jdl::cli {

namespace {

struct Registry {
  std::vector<CatalogEntry> user;

  const CatalogEntry& get(const std::string& id) const {
    for (const auto& e : user)
      if (e.id == id) return e;
    return catalog::get(id);
  }
  std::vector<std::string> ids() const {
    std::vector<std::string> out = catalog::list();
    for (const auto& e : user) out.push_back(e.id);
    return out;
  }
};

Registry load_registry(const std::string& config_path) {
  Registry r;
  if (config_path.empty()) return r;
  r.user = load_config(config_path);
  const auto builtin = catalog::list();
  for (const auto& e : r.user)
    if (std::find(builtin.begin(), builtin.end(), e.id) != builtin.end())
      throw ConfigError(config_path + ": example id '" + e.id + "' shadows a catalog entry");
  return r;
}

nlohmann::ordered_json check_json(const CheckReport& r, Status expected) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["anchor"] = r.anchor;
  j["status"] = to_string(r.status);
  j["expected"] = to_string(expected);
  j["metric"] = r.metric;
  // Infinite residuals (a check that could not be evaluated) become null.
  j["max_residual"] = std::isfinite(r.max_residual) ? nlohmann::ordered_json(r.max_residual) : nlohmann::ordered_json();
  j["worst_point"] = r.worst_point;
  j["samples"] = r.samples;
  j["tolerance"] = r.tolerance;
  j["wall_ms"] = r.wall_ms;
  j["note"] = r.note;
  return j;
}

// Leaf trace of the first selected example with a Jacobi pair or contact form.
void write_trace(const std::string& path, const RunConfig& c, const std::vector<EntryResult>& results) {
  for (const auto& res : results) {
    const CatalogEntry& e = *res.entry;
    JacobiPair J;
    std::vector<Field> extra;
    Chart seeds;
    if (!e.traces.empty()) {
      J = e.pairs[e.traces.front().pair];
      extra = e.traces.front().casimirs;
      seeds = e.traces.front().seeds;
    } else if (!e.pairs.empty()) {
      J = e.pairs.front();
      seeds = J.chart;
    } else if (!e.contacts.empty()) {
      J = contact_to_jacobi(e.contacts.front(), sample_points(e.contacts.front().chart, 8, c.seed));
      seeds = J.chart;
    } else {
      continue;
    }
    TraceOptions o;
    o.seed = c.seed;
    const LeafProbe probe = leaf_trace(J, sample_points(seeds, 1, c.seed).front(), o);
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write trace file '" + path + "'");
    write_trace_csv(os, probe, extra);
    return;
  }
  throw ConfigError("--trace-csv: no selected example has a Jacobi pair or contact form");
}

int cmd_list(const Registry& reg, std::ostream& out) {
  for (const auto& id : reg.ids()) {
    const auto& e = reg.get(id);
    out << std::left << std::setw(20) << id << std::setw(13) << to_string(e.kind) << e.summary << "\n";
  }
  return kOk;
}

int cmd_describe(const Registry& reg, const std::string& id, std::ostream& out) {
  const CatalogEntry& e = reg.get(id);
  out << "id:       " << e.id << "\n"
      << "kind:     " << to_string(e.kind) << "\n"
      << "summary:  " << e.summary << "\n"
      << "notes:    " << e.notes << "\n"
      << "payload:  " << e.contacts.size() << " contact chart(s), " << e.pairs.size() << " Jacobi pair(s), "
      << e.transitions.size() << " transition(s), " << e.dual_pairs.size() << " dual pair(s), "
      << e.actions.size() << " action(s), " << e.lcs_leaves.size() << " leaf patch(es)"
      << (e.groupoid ? ", groupoid" : "") << "\n";
  for (const auto& C : e.contacts) out << "  contact chart " << C.chart.name << " (dim " << C.dim() << ")\n";
  for (const auto& dp : e.dual_pairs)
    out << "  dual pair " << dp.name << ": dim " << dp.source.dim() << " -> " << dp.leg1.target.dim() << ", "
        << dp.leg2.target.dim() << "\n";
  out << "expected: ";
  if (e.expected.empty()) out << "all checks pass";
  for (std::size_t i = 0; i < e.expected.size(); ++i)
    out << (i ? ", " : "") << e.expected[i].check << "=" << to_string(e.expected[i].status);
  out << "\n";
  return kOk;
}

}  // namespace

void validate(const RunConfig& c) {
  if (!is_suite(c.suite)) throw ConfigError("unknown suite '" + c.suite + "'");
  if (c.samples < 1) throw ConfigError("--samples must be at least 1");
  if (!(c.tol > 0) || !std::isfinite(c.tol)) throw ConfigError("--tol must be a positive number");
  if (c.jet_order != 2 && c.jet_order != 3) throw ConfigError("--jet-order must be 2 or 3");
  if (c.format != "json" && c.format != "text") throw ConfigError("--format must be json or text");
}

nlohmann::ordered_json report_json(const RunConfig& c, const std::vector<EntryResult>& results) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = JDL_VERSION;
  j["seed"] = c.seed;
  j["config"] = {{"suite", c.suite},   {"examples", c.examples}, {"samples", c.samples},
                 {"seed", c.seed},     {"tol", c.tol},           {"jet_order", c.jet_order},
                 {"format", c.format}, {"config", c.config_path}};
  j["entries"] = nlohmann::ordered_json::array();
  bool ok = true;
  for (const auto& r : results) {
    nlohmann::ordered_json e;
    e["example"] = r.entry->id;
    e["kind"] = to_string(r.entry->kind);
    e["checks"] = nlohmann::ordered_json::array();
    for (const auto& ch : r.checks) e["checks"].push_back(check_json(ch, r.entry->expected_status(ch.id)));
    e["mismatches"] = r.mismatches;
    ok = ok && r.mismatches.empty();
    j["entries"].push_back(std::move(e));
  }
  j["verdicts_match"] = ok;
  return j;
}

void write_text(std::ostream& os, const std::vector<EntryResult>& results) {
  for (const auto& r : results) {
    os << r.entry->id << "\n";
    for (const auto& ch : r.checks) {
      const Status want = r.entry->expected_status(ch.id);
      os << "  " << std::left << std::setw(30) << ch.id << std::setw(20) << to_string(ch.status)
         << std::setw(9) << ch.metric << std::right << std::setw(11) << std::setprecision(3) << ch.max_residual
         << "  tol " << std::setprecision(2) << ch.tolerance;
      if (ch.status != Status::Skipped && ch.status != want) os << "  MISMATCH (expected " << to_string(want) << ")";
      else if (want != Status::Pass) os << "  (expected " << to_string(want) << ")";
      if (!ch.note.empty()) os << "  " << ch.note;
      os << "\n";
    }
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for contact and Jacobi dual pairs", "jdl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", JDL_VERSION);
  std::string config_path;

  auto* list = app.add_subcommand("list", "List catalog ids");
  list->add_option("--config", config_path, "YAML file with user examples");

  std::string describe_id;
  auto* describe = app.add_subcommand("describe", "Show a catalog entry");
  describe->add_option("id", describe_id, "Entry id")->required();
  describe->add_option("--config", config_path, "YAML file with user examples");

  RunConfig c;
  auto* run = app.add_subcommand("run", "Run check suites");
  run->add_option("--suite", c.suite, "contact, jacobi, atiyah, dualpair, homogenize, leaves, reduction, groupoid or all");
  run->add_option("--example", c.examples, "Entry id (repeatable; default all)");
  run->add_option("--samples", c.samples, "Sample points per chart");
  run->add_option("--seed", c.seed, "Sampling seed");
  run->add_option("--tol", c.tol, "Tolerance scale; 1e-8 keeps every check's default");
  run->add_option("--jet-order", c.jet_order, "2 or 3");
  run->add_option("--out", c.out, "Report path (default stdout)");
  run->add_option("--format", c.format, "json or text");
  run->add_option("--trace-csv", c.trace_csv, "Write a leaf trace of the first example");
  run->add_option("--config", config_path, "YAML file with user examples");

  std::vector<std::string> argv{"jdl"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> raw;
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const Registry reg = load_registry(config_path);
    if (*list) return cmd_list(reg, out);
    if (*describe) return cmd_describe(reg, describe_id, out);

    c.config_path = config_path;
    validate(c);
    std::vector<std::string> ids = c.examples.empty() ? reg.ids() : c.examples;
    std::vector<EntryResult> results;
    for (const auto& id : ids) results.push_back({&reg.get(id), {}, {}});

    SuiteOptions opt;
    opt.samples = c.samples;
    opt.seed = c.seed;
    opt.tol = c.tol;
    opt.jet_order = c.jet_order;
    bool ok = true;
    for (auto& r : results) {
      r.checks = run_suite(c.suite, *r.entry, opt);
      r.mismatches = verdict_mismatches(*r.entry, r.checks);
      ok = ok && r.mismatches.empty();
      for (const auto& m : r.mismatches) err << "mismatch: " << m << "\n";
    }
    if (!c.trace_csv.empty()) write_trace(c.trace_csv, c, results);

    std::unique_ptr<std::ofstream> file;
    if (!c.out.empty()) {
      file = std::make_unique<std::ofstream>(c.out);
      if (!*file) throw ConfigError("cannot write report '" + c.out + "'");
    }
    std::ostream& os = file ? *file : out;
    if (c.format == "json")
      os << report_json(c, results).dump(2) << "\n";
    else
      write_text(os, results);
    return ok ? kOk : kMismatch;
  } catch (const ConfigError& e) {
    err << "jdl: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnknownId& e) {
    err << "jdl: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace jdl::cli
