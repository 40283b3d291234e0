#include "jdl/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "jdl/atiyah.hpp"
#include "jdl/errors.hpp"
#include "jdl/homogenize.hpp"

namespace jdl {

namespace {

using Reports = std::vector<CheckReport>;

// Library errors become a failing report instead of aborting the suite.
CheckReport guarded(const std::string& id, const std::function<CheckReport()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    CheckReport r = body();
    r.id = id;
    return r;
  } catch (const Error& err) {
    CheckReport r;
    r.id = id;
    r.status = Status::Fail;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.note = err.what();
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
}

// One report per id, in order of first appearance; parts from several charts
// are folded together.
Reports merge(const Reports& all) {
  std::vector<std::string> order;
  std::map<std::string, Reports> by_id;
  for (const auto& r : all) {
    if (!by_id.count(r.id)) order.push_back(r.id);
    by_id[r.id].push_back(r);
  }
  Reports out;
  for (const auto& id : order) {
    const Reports& parts = by_id[id];
    if (parts.size() == 1) {
      out.push_back(parts.front());
      continue;
    }
    CheckReport r = combine(id, parts.front().anchor, parts);
    r.metric = parts.front().metric;
    if (r.metric != "residual") {
      r.max_residual = r.metric == "margin" ? std::numeric_limits<double>::infinity() : 0.0;
      for (const auto& p : parts) {
        if (r.metric == "margin" && p.max_residual < r.max_residual) {
          r.max_residual = p.max_residual;
          r.worst_point = p.worst_point;
        }
        if (r.metric == "verdict") r.max_residual += p.max_residual;
      }
    }
    r.point_pass.clear();
    for (const auto& p : parts) r.point_pass.insert(r.point_pass.end(), p.point_pass.begin(), p.point_pass.end());
    if (r.status == Status::Pass) {
      for (std::size_t k = 0; k < parts.size(); ++k)
        if (!parts[k].note.empty()) r.note += (r.note.empty() ? "" : "; ") + ("[" + std::to_string(k) + "] " + parts[k].note);
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct Runner {
  const CatalogEntry& e;
  const SuiteOptions& opt;
  double scale() const { return opt.tol / 1e-8; }
  double tol(double base) const { return base * scale(); }
  std::vector<Coords> pts(const Chart& ch) const { return sample_points(ch, opt.samples, opt.seed); }
  std::vector<Coords> seeds(const Chart& ch) const {
    return sample_points(ch, std::min(opt.samples, 20), opt.seed);
  }

  Reports contact() const {
    Reports out;
    for (const auto& C : e.contacts) {
      const auto ps = pts(C.chart);
      out.push_back(guarded("contact", [&] { return check_contact(C, ps, tol(1e-8)); }));
      out.push_back(guarded("contact-dictionary", [&] {
        const JacobiPair J = contact_to_jacobi(C, seeds(C.chart));
        std::vector<Field> fns = default_test_functions(C.dim());
        fns.push_back(sin(coord(0)) * coord(C.dim() - 1) + exp(0.5 * coord(1)));
        return run_residual_check("contact-dictionary", "X_f from theta equals Pi^# df + f E from (Pi, E)", ps,
                                  tol(1e-9), [&](const Coords& p) {
                                    double worst = 0;
                                    for (const auto& f : fns)
                                      worst = std::max(worst, (contact_hamiltonian_vf(C, f, p) -
                                                               hamiltonian_vf(J, f, p)).cwiseAbs().maxCoeff());
                                    return worst;
                                  });
      }));
    }
    return out;
  }

  Reports jacobi() const {
    Reports out;
    for (const auto& J : e.pairs)
      out.push_back(guarded("jacobi-pair", [&] { return check_jacobi_pair(J, pts(J.chart), tol(1e-10)); }));
    for (const auto& t : e.transitions)
      out.push_back(guarded("chart-transition", [&] {
        const JacobiPair& J2 = e.pairs[t.to];
        return check_jacobi_morphism(e.pairs[t.from], J2, t.map, default_test_functions(J2.dim()),
                                     pts(t.map.map.source), tol(1e-9));
      }));
    for (const auto& C : e.contacts)
      out.push_back(guarded("contact-jacobi-pair", [&] {
        return check_jacobi_pair(contact_to_jacobi(C, seeds(C.chart)), pts(C.chart), tol(1e-10));
      }));
    return out;
  }

  Reports atiyah() const {
    Reports out;
    for (std::size_t i = 0; i < e.contacts.size(); ++i) {
      const ContactStructure& C = e.contacts[i];
      const auto ps = pts(C.chart);
      out.push_back(guarded("sharp-inverse", [&] { return check_sharp_inverse(C, ps, tol(1e-9)); }));
      out.push_back(guarded("technical-lemma", [&] {
        std::vector<CheckReport> parts{
            check_technical_lemma(C, ConformalMap{identity_map(C.chart), constant(1.0)}, ps, tol(1e-9))};
        if (i < e.dual_pairs.size() && e.dual_pairs[i].source.chart.name == C.chart.name) {
          parts.push_back(check_technical_lemma(C, e.dual_pairs[i].leg1.phi, ps, tol(1e-9)));
          parts.push_back(check_technical_lemma(C, e.dual_pairs[i].leg2.phi, ps, tol(1e-9)));
        }
        return combine("technical-lemma", parts.front().anchor, parts);
      }));
      out.push_back(guarded("contracting-homotopy", [&] {
        return check_contracting_homotopy({theta_sigma(C), varpi_form(C)}, ps, tol(1e-9));
      }));
      out.push_back(guarded("unit-orthogonal", [&] { return check_unit_orthogonal(C, ps, tol(1e-9)); }));
    }
    return out;
  }

  static Reports dual_pair_reports(const DualPairSpec& dp, const std::vector<Coords>& ps, double t8, double t7) {
    const DualPairVerdict v = verify_dual_pair(dp, ps, t8);
    Reports out = v.all();
    out.push_back(check_rank_relation(dp, ps, t7));
    return out;
  }

  Reports dualpair() const {
    Reports out;
    for (const auto& dp : e.dual_pairs) {
      const auto ps = pts(dp.source.chart);
      try {
        for (auto& r : dual_pair_reports(dp, ps, tol(1e-8), tol(1e-7))) out.push_back(std::move(r));
      } catch (const Error& err) {
        out.push_back(guarded("dual-pair", [&]() -> CheckReport { throw err; }));
      }
    }
    return out;
  }

  Reports homogenize() const {
    Reports out;
    for (const auto& C : e.contacts) {
      out.push_back(guarded("symplectization", [&] {
        const Symplectization S = symplectize(C);
        return check_symplectization(S, pts(S.chart), tol(1e-10));
      }));
      out.push_back(guarded("symplectization-consistency",
                            [&] { return check_symplectization_consistency(C, seeds(C.chart), tol(1e-8)); }));
    }
    for (const auto& J : e.pairs) {
      const Chart slit = slit_chart(J.chart);
      out.push_back(guarded("poissonization", [&] {
        return check_poissonization(J, poissonize(J), pts(slit), tol(1e-9));
      }));
      out.push_back(guarded("bivector-homogeneity", [&] {
        return check_bivector_homogeneity(poissonize(J), pts(slit), tol(1e-9));
      }));
    }
    for (const auto& dp : e.dual_pairs) {
      out.push_back(guarded("homogeneous-sdp", [&] {
        return check_homogeneous_sdp_equivalence(dp, pts(dp.source.chart), tol(1e-7));
      }));
      out.push_back(guarded("map-equivariance", [&] {
        const auto lifted = pts(slit_chart(dp.source.chart));
        return combine("map-equivariance", "Phi~ o h_t = h_t o Phi~",
                       {check_map_equivariance(dp.leg1.phi, lifted, tol(1e-12)),
                        check_map_equivariance(dp.leg2.phi, lifted, tol(1e-12))});
      }));
    }
    return out;
  }

  Reports leaves() const {
    Reports out;
    for (const auto& dp : e.dual_pairs) {
      out.push_back(guarded("pullback-distribution",
                            [&] { return check_pullback_distribution(dp, pts(dp.source.chart), tol(1e-7)); }));
      out.push_back(guarded("leaf-correspondence",
                            [&] { return verify_leaf_correspondence(dp, seeds(dp.source.chart)); }));
    }
    for (const auto& l : e.lcs_leaves)
      out.push_back(guarded("leaf-relation-lcs", [&] {
        return verify_leaf_relation_lcs(e.dual_pairs[l.pair], l.iota, l.s1, l.s2, pts(l.iota.source), tol(1e-7));
      }));
    for (const auto& t : e.traces)
      out.push_back(guarded("leaf-trace", [&] {
        const JacobiPair& J = e.pairs[t.pair];
        const auto starts = sample_points(t.seeds, opt.trace_seeds, opt.seed);
        return run_residual_check(
            "leaf-trace", "Casimirs constant and characteristic rank constant along traced leaves", starts,
            tol(1e-6), [&](const Coords& p0) {
              TraceOptions o;
              o.seed = opt.seed;
              const LeafProbe probe = leaf_trace(J, p0, o);
              if (!probe.rank_constant) return std::numeric_limits<double>::infinity();
              double drift = 0;
              for (const auto& f : t.casimirs) {
                const double f0 = value_at(f, p0);
                for (const auto& q : probe.points) drift = std::max(drift, std::abs(value_at(f, q) - f0));
              }
              return drift;
            });
      }));
    return out;
  }

  Reports reduction() const {
    Reports out;
    for (std::size_t i = 0; i < e.actions.size(); ++i) {
      const ActionData& a = e.actions[i];
      const ContactStructure& C = e.contacts[i];
      const DualPairSpec& dp = e.dual_pairs[i];
      const auto ps = pts(C.chart);
      const auto sp = pts(a.slice.chart);
      out.push_back(guarded("action-axiom", [&] { return check_action_axiom(a.action, ps, tol(1e-8)); }));
      out.push_back(guarded("contact-action", [&] { return check_contact_action_group(C, a.action, ps, tol(1e-8)); }));
      out.push_back(
          guarded("orbit-transversality", [&] { return check_orbit_transversality(C, a.action, ps, tol(1e-8)); }));
      out.push_back(guarded("locally-free", [&] { return check_locally_free(C, a.action, ps); }));
      out.push_back(guarded("slice", [&] { return check_slice(a.action, a.slice, sp, tol(1e-8)); }));
      out.push_back(guarded("moment-equivariance", [&] {
        return check_moment_equivariance(C, a.action, pts(a.equivariance_region), 0.1, tol(1e-7));
      }));
      out.push_back(guarded("quotient-jacobi", [&] { return check_jacobi_pair(dp.leg1.target, sp, tol(1e-10)); }));
      out.push_back(guarded("reduction-dual-pair", [&] {
        const Reports parts = dual_pair_reports(dp, ps, tol(1e-8), tol(1e-7));
        return combine("reduction-dual-pair", "M/G <- M -> P(g*) is a full contact dual pair", parts);
      }));
      out.push_back(guarded("reduced-leaves", [&] { return classify_reduced_leaves(dp, a.action, seeds(C.chart)); }));
    }
    return out;
  }

  Reports groupoid() const {
    Reports out;
    if (!e.groupoid) return out;
    const GroupoidSpec& G = *e.groupoid;
    std::vector<ArrowPair> pairs;
    try {
      pairs = composable_pairs(G, opt.samples, opt.seed);
    } catch (const Error& err) {
      out.push_back(guarded("groupoid-axioms", [&]() -> CheckReport { throw err; }));
      return out;
    }
    out.push_back(guarded("groupoid-axioms", [&] { return check_groupoid_axioms(G, pairs, tol(1e-9)); }));
    out.push_back(guarded("multiplicativity", [&] { return check_multiplicativity(G, pairs, tol(1e-9)); }));
    out.push_back(guarded("units-legendrian", [&] { return check_units_legendrian(G, pts(G.base), tol(1e-10)); }));
    out.push_back(guarded("source-target-dual-pair", [&] {
      return verify_source_target_dual_pair(G, pts(G.total), tol(1e-8)).summary;
    }));
    out.push_back(guarded("self-action-hamiltonian", [&] {
      return check_self_action_hamiltonian(G, e.groupoid_functions, pairs, tol(1e-8));
    }));
    if (e.bisection)
      out.push_back(guarded("legendrian-bisection",
                            [&] { return check_legendrian_bisection(G, *e.bisection, pts(G.total), tol(1e-8)); }));
    return out;
  }
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"contact",    "jacobi", "atiyah",    "dualpair",
                                              "homogenize", "leaves", "reduction", "groupoid"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return name == "all" || std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<CheckReport> run_suite(const std::string& suite, const CatalogEntry& e, const SuiteOptions& opt) {
  if (!is_suite(suite)) throw ConfigError("unknown suite '" + suite + "'");
  const Runner run{e, opt};
  if (suite == "all") {
    Reports out;
    for (const auto& s : suite_names())
      for (auto& r : run_suite(s, e, opt)) out.push_back(std::move(r));
    return out;
  }
  Reports raw;
  if (suite == "contact") raw = run.contact();
  if (suite == "jacobi") raw = run.jacobi();
  if (suite == "atiyah") raw = run.atiyah();
  if (suite == "dualpair") raw = run.dualpair();
  if (suite == "homogenize") raw = run.homogenize();
  if (suite == "leaves") raw = run.leaves();
  if (suite == "reduction") raw = run.reduction();
  if (suite == "groupoid") raw = run.groupoid();
  return merge(raw);
}

std::vector<std::string> verdict_mismatches(const CatalogEntry& e, const std::vector<CheckReport>& reports) {
  std::vector<std::string> out;
  for (const auto& r : reports) {
    if (r.status == Status::Skipped) continue;
    const Status want = e.expected_status(r.id);
    if (r.status != want)
      out.push_back(e.id + "/" + r.id + ": got " + to_string(r.status) + ", expected " + to_string(want));
  }
  return out;
}

}  // namespace jdl
