#include "jdl/catalog.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "jdl/errors.hpp"

namespace jdl {

namespace {

Field zero() { return {}; }
Field c(double v) { return constant(v); }
Field x(int i) { return coord(i); }

constexpr std::uint64_t kBuildSeed = 0xca7a;

std::vector<Coords> build_pts(const Chart& ch, int n = 8) { return sample_points(ch, n, kBuildSeed); }

KForm zero_form(int dim, int degree) { return AltField::zero(AltKind::Form, dim, degree); }
LeafLcs trivial_lcs(int dim) { return {zero_form(dim, 1), zero_form(dim, 2)}; }

JacobiPair zero_line_pair(const std::string& name, int dim) { return zero_pair(euclidean(name, dim)); }

// theta = dz - sum y_i dx_i on (x1, y1, ..., xn, yn, z).
ContactStructure darboux(int n) {
  const int dim = 2 * n + 1;
  std::vector<Field> th(dim);
  for (int i = 0; i < n; ++i) th[2 * i] = -x(2 * i + 1);
  th[dim - 1] = c(1);
  return make_contact(euclidean("darboux" + std::to_string(dim), dim), one_form(th));
}

ContactStructure triv_contact() { return make_contact(euclidean("T*R x R", 3), one_form({x(1), zero(), c(1)})); }

// T*R^d x R with theta = du + p.dq, s = t = q, fiberwise addition of (p, u).
GroupoidSpec triv_groupoid(int d) {
  const int n = 2 * d + 1;
  GroupoidSpec G;
  G.name = d == 1 ? "triv-gpd" : "triv-gpd-" + std::to_string(d);
  G.total = euclidean("T*R^" + std::to_string(d) + " x R", n);
  G.base = euclidean("R^" + std::to_string(d), d);
  std::vector<Field> q, th(n), m(n), inv(n), unit(n);
  for (int i = 0; i < d; ++i) {
    q.push_back(x(i));
    th[i] = x(d + i);
    m[i] = x(i);
    m[d + i] = x(d + i) + x(n + d + i);
    inv[i] = x(i);
    inv[d + i] = -x(d + i);
    unit[i] = x(i);
  }
  th[2 * d] = c(1);
  m[2 * d] = x(2 * d) + x(n + 2 * d);
  inv[2 * d] = -x(2 * d);
  G.s = {"s", G.total, G.base, q};
  G.t = {"t", G.total, G.base, q};
  G.m = {"m", pair_chart(G.total), G.total, m};
  G.i = {"i", G.total, G.total, inv};
  G.u = {"u", G.base, G.total, unit};
  G.theta = make_contact(G.total, one_form(th));
  G.arrow_into = [d](const Coords& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-0.4, 0.4);
    Coords h = b;
    for (int i = 0; i <= d; ++i) h.push_back(U(rng));
    return h;
  };
  return G;
}

CatalogEntry triv_gpd_entry(int d) {
  CatalogEntry e;
  GroupoidSpec G = triv_groupoid(d);
  e.id = G.name;
  e.kind = EntryKind::Groupoid;
  e.summary = (d == 1 ? std::string("T*R") : "T*R^" + std::to_string(d)) + " x R with du + p dq, s = t = q, strict";
  e.notes =
      "Bundle of abelian groups (p, u) over q. m^* theta = pr1^* theta + pr2^* theta holds exactly since "
      "theta is linear in the fiber. Base Jacobi structure is zero. Source/target legs (s, -1) and (t, 1). "
      "varpi((d_q, 0), (d_p, 0)) = -1 by hand. Bisection q -> (q, h'(q), -h(q)) with h = 0.3 sin q is "
      "Legendrian since its pullback of theta is -h' dq + h' dq.";
  const auto pts = build_pts(G.total);
  e.contacts = {G.theta};
  e.pairs = {base_jacobi(G, pts)};
  e.dual_pairs = {source_target_pair(G, pts)};
  std::vector<Field> leaf{c(0.3)};
  if (d == 2) leaf.push_back(c(-0.2));
  for (int i = 0; i <= d; ++i) leaf.push_back(x(i));
  e.lcs_leaves = {{0, SmoothMap{"q-leaf", euclidean("S", d + 1), G.total, leaf}, trivial_lcs(d), trivial_lcs(d)}};
  if (d == 1) {
    e.bisection = SmoothMap{"sigma", G.base, G.total, {x(0), 0.3 * cos(x(0)), -0.3 * sin(x(0))}};
    e.groupoid_functions = {x(0), x(0) * x(0), sin(x(0))};
  } else {
    e.groupoid_functions = {x(0), x(1), x(0) * x(1)};
  }
  e.groupoid = std::move(G);
  return e;
}

CatalogEntry contact_entry(const std::string& id, ContactStructure C, std::string summary, std::string notes) {
  CatalogEntry e;
  e.id = id;
  e.kind = EntryKind::Contact;
  e.summary = std::move(summary);
  e.notes = std::move(notes);
  e.contacts = {std::move(C)};
  return e;
}

// Projective charts k = 1, 2 of g and the transition from chart 1 to chart 2
// on a = w_1 > 0: w' = (1/a, w_2/a, ...), with factor a.
CatalogEntry projective_entry(const std::string& id, const LieAlgebraData& g, std::string summary) {
  CatalogEntry e;
  e.id = id;
  e.kind = EntryKind::Homogeneous;
  e.summary = std::move(summary);
  e.notes =
      "Chart k of P(g*) is mu_k = 1. A function b on chart k extends as mu_k b(mu / mu_k), so the bracket "
      "is read off from the Lie-Poisson bracket of the extensions. On mu_1, mu_2 != 0 the chart-2 "
      "coordinates are (1/a, w/a) with a the first chart-1 coordinate, and extensions agree up to the "
      "factor a, which makes the transition a conformal Jacobi morphism.";
  for (int k = 1; k <= 2; ++k) {
    const Chart P = projective_chart(g, k);
    e.pairs.push_back(extract_pair_from_bracket(projectivized_oracle(g, k), P, build_pts(P)));
  }
  const int m = g.dim - 1;
  std::vector<Interval> box(m, Interval{-1.0, 1.0});
  box[0] = {0.6, 2.0};
  Chart overlap(id + " overlap", box);
  std::vector<Field> tau{1.0 / x(0)};
  for (int i = 1; i < m; ++i) tau.push_back(x(i) / x(0));
  e.transitions.push_back({0, 1, ConformalMap{SmoothMap{"tau12", overlap, e.pairs[1].chart, tau}, x(0)}});
  return e;
}

CatalogEntry lie_poisson_entry(const std::string& id, const LieAlgebraData& g, std::string summary) {
  CatalogEntry e;
  e.id = id;
  e.kind = EntryKind::JacobiPair;
  e.summary = std::move(summary);
  e.notes = "Linear Poisson structure Pi = c^k_ij x_k d_i ^ d_j, E = 0.";
  e.pairs = {lie_poisson(g)};
  return e;
}

DualPairLeg coordinate_leg(const Chart& src, std::vector<int> keep, JacobiPair target, Field a = c(1)) {
  std::vector<Field> comps;
  for (int k : keep) comps.push_back(x(k));
  SmoothMap phi{"proj", src, target.chart, comps};
  return {std::move(target), ConformalMap{std::move(phi), std::move(a)}, {}};
}

DualPairLeg point_leg(const Chart& src, Field a = c(1)) {
  const JacobiPair P = zero_pair(euclidean("pt", 0));
  return {P, ConformalMap{SmoothMap{"pt", src, P.chart, {}}, std::move(a)}, {}};
}

// Checks equivalent to, or implied by, the three defining conditions fail
// along with any of them.
constexpr const char* kDerived =
    " varpi-orthogonality, the rank relation, the homogeneous symplectic pair and the leaf correspondence "
    "are equivalent to or consequences of the definition and fail with it.";

std::vector<ExpectedVerdict> with_derived(std::vector<ExpectedVerdict> v) {
  for (const char* id : {"varpi-orthogonality", "rank-relation", "homogeneous-sdp", "leaf-correspondence"})
    v.push_back({id, Status::Fail});
  return v;
}

CatalogEntry broken_entry(const std::string& id, DualPairLeg leg2, std::string summary, std::string notes,
                          std::vector<ExpectedVerdict> expected) {
  CatalogEntry e;
  const ContactStructure T = triv_contact();
  e.id = id;
  e.kind = EntryKind::DualPair;
  e.summary = std::move(summary);
  e.notes = std::move(notes);
  e.contacts = {T};
  e.dual_pairs = {{id, T, coordinate_leg(T.chart, {0}, zero_line_pair("R", 1)), std::move(leg2)}};
  e.expected = std::move(expected);
  return e;
}

CatalogEntry rtrans_entry() {
  CatalogEntry e;
  const ContactStructure C = darboux(1);
  e.id = "rtrans";
  e.kind = EntryKind::Action;
  e.summary = "R acting on darboux3 by z-translation";
  e.notes =
      "zeta = d_z is the Reeb field, theta(zeta) = 1, so the moment map goes to a point with factor 1. "
      "Slice z = 0 with projection (x, y); the quotient is R^2 with {x, y} = 1.";
  Chart S = euclidean("z=0", 2);
  ActionData a{{"rtrans", abelian(1), {vector_field({zero(), zero(), c(1)})},
                {[](const Coords& p, double t) { return Coords{p[0], p[1], p[2] + t}; }}},
               {S, {"embed", S, C.chart, {x(0), x(1), zero()}}, {"project", C.chart, S, {x(0), x(1)}}},
               euclidean("inner", 3, 0.5)};
  e.contacts = {C};
  e.dual_pairs = {reduction_dual_pair(C, a.action, a.slice)};
  e.actions = {std::move(a)};
  return e;
}

CatalogEntry aff1_action_entry() {
  CatalogEntry e;
  e.id = "aff1-action";
  e.kind = EntryKind::Action;
  e.summary = "aff(1) on (q, p, u), du + p dq, by cotangent lifts of q -> e^{-a} q + b";
  e.notes =
      "zeta_1 = -q d_q + p d_p, zeta_2 = d_q with [zeta_1, zeta_2] = zeta_2. Moment covector (-qp, p); "
      "chart 2 of P(aff(1)*) gives w = -q, a submersion of rank 1. Slice (0, 1, u) projecting to u. "
      "Orbits in P(aff(1)*) are 1-dimensional, so reduced leaves are odd.";
  const ContactStructure M = make_contact(Chart("aff1-model", {{-1, 1}, {0.5, 1.5}, {-1, 1}}),
                                          one_form({x(1), zero(), c(1)}));
  Chart S = euclidean("u", 1);
  ActionData a{{"aff1-action",
                aff1(),
                {vector_field({-x(0), x(1), zero()}), vector_field({c(1), zero(), zero()})},
                {[](const Coords& p, double t) { return Coords{p[0] * std::exp(-t), p[1] * std::exp(t), p[2]}; },
                 [](const Coords& p, double t) { return Coords{p[0] + t, p[1], p[2]}; }}},
               {S, {"embed", S, M.chart, {zero(), c(1), x(0)}}, {"project", M.chart, S, {x(2)}}},
               Chart("inner", {{-0.5, 0.5}, {0.8, 1.2}, {-0.5, 0.5}})};
  e.contacts = {M};
  e.dual_pairs = {reduction_dual_pair(M, a.action, a.slice)};
  e.actions = {std::move(a)};
  return e;
}

constexpr double kHopfBound = 2.0;  // |z1 / z2| stays below this in the S^3 charts

Field hopf_r2() { return x(0) * x(0) + x(1) * x(1) + x(2) * x(2); }

Chart hopf_chart(int eps, double half_width) {
  return Chart(std::string("S^3 stereo ") + (eps > 0 ? "+" : "-"), std::vector<Interval>(3, {-half_width, half_width}),
               [](const Coords& w, double margin) {
                 const double r2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
                 const double num = 4 * (w[0] * w[0] + w[1] * w[1]);
                 const double den = 4 * w[2] * w[2] + (r2 - 1) * (r2 - 1);
                 return num >= kHopfBound * kHopfBound * (1 - margin) * den;
               });
}

CatalogEntry hopf_entry() {
  CatalogEntry e;
  e.id = "hopf";
  e.kind = EntryKind::Action;
  e.summary = "S^1 on S^3 in C^2 by e^{it}, contact form x dy - y dx summed, in two stereographic charts";
  e.notes =
      "Chart eps maps w in R^3 to (2w, eps(|w|^2 - 1)) / (1 + |w|^2) = (x1, y1, x2, y2). The generator "
      "(-y1, x1, -y2, x2) is the Reeb field of the restricted form, so theta(zeta) = 1 and the moment leg is "
      "a point with factor 1. Quotient S^2 in the affine chart z1 / z2, sliced by (a, b, 1) / |.|; it is "
      "symplectic with omega = dx ^ dy / Pi^{01}, eta = 0. Points with |z1 / z2| >= 2 are excluded.";
  for (int eps : {1, -1}) {
    const Chart M = hopf_chart(eps, 1.5);
    const KForm alpha = one_form({-x(1), x(0), -x(3), x(2)});
    const ContactStructure C = make_contact(M, pullback_form(hopf_sphere_map(eps), alpha));
    Chart S("S^2 affine", {{-1.4, 1.4}, {-1.4, 1.4}});
    const Field N = sqrt(1.0 + x(0) * x(0) + x(1) * x(1));
    SmoothMap proj = hopf_projection(eps);
    ActionData a{{"hopf", abelian(1), {hopf_generator(eps)},
                  {[eps](const Coords& w, double t) { return hopf_flow(eps, w, t); }}},
                 {S, {"embed", S, M, {x(0) / N, x(1) / N, 1.0 / N}}, {proj.name, M, S, proj.components}},
                 hopf_chart(eps, 1.0)};
    DualPairSpec dp = reduction_dual_pair(C, a.action, a.slice);
    const Field pi01 = dp.leg1.target.Pi.at({0, 1});
    const LeafLcs s1{zero_form(2, 1), two_form(2, {{zero(), 1.0 / pi01}})};
    e.lcs_leaves.push_back({e.dual_pairs.size(), identity_map(M), s1, trivial_lcs(0)});
    e.contacts.push_back(C);
    e.dual_pairs.push_back(std::move(dp));
    e.actions.push_back(std::move(a));
  }
  return e;
}

CatalogEntry broken_jacobi_entry() {
  CatalogEntry e;
  e.id = "broken-jacobi-pair";
  e.kind = EntryKind::JacobiPair;
  e.summary = "R^3 with Pi = d_x ^ d_y, E = d_z";
  e.notes = "[[Pi, Pi]] = 0 but 2 E ^ Pi = 2 d_z ^ d_x ^ d_y != 0, so the pair is not Jacobi.";
  const Chart R3 = euclidean("R^3", 3);
  e.pairs = {make_jacobi_pair(R3, bivector(3, {{zero(), c(1), zero()}}), vector_field({zero(), zero(), c(1)}))};
  e.expected = {{"jacobi-pair", Status::Fail}};
  return e;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  out.push_back(contact_entry("darboux3", darboux(1), "R^3 with dz - y dx",
                              "Reeb field d_z. The induced Jacobi pair has Pi^{xy} = -y and E = d_z."));
  out.push_back(contact_entry("darboux5", darboux(2), "R^5 with dz - y1 dx1 - y2 dx2",
                              "Reeb field d_z; the contact volume is constant."));
  out.push_back(triv_gpd_entry(1));
  out.push_back(triv_gpd_entry(2));

  auto so3 = lie_poisson_entry("lie-poisson-so3", jdl::so3(), "so(3)* with {x1, x2} = x3 and cyclic");
  so3.notes += " Casimir |x|^2; leaves are spheres and the origin.";
  so3.traces = {{0, euclidean("seeds", 3, 0.8), {x(0) * x(0) + x(1) * x(1) + x(2) * x(2)}}};
  out.push_back(std::move(so3));
  out.push_back(lie_poisson_entry("lie-poisson-aff1", jdl::aff1(), "aff(1)* with {x1, x2} = x2"));
  out.push_back(projective_entry("proj-su2", jdl::so3(), "P(su(2)*) = S^2 in the affine charts mu_1 = 1, mu_2 = 1"));
  out.push_back(projective_entry("proj-aff1", jdl::aff1(), "P(aff(1)*) in the affine charts mu_1 = 1, mu_2 = 1"));
  out.push_back(rtrans_entry());
  out.push_back(hopf_entry());
  out.push_back(aff1_action_entry());

  const Chart M = triv_contact().chart;
  out.push_back(broken_entry(
      "broken-orth", point_leg(M), "triv with legs q -> R and a point, factor 1",
      "H1 = span{d_p} and H2 = H: c(d_p, d_q - p d_u) = -1, so orthogonality fails. Transversality holds "
      "and E = d_u kills q, so commutation holds. The ranks give 1 + 1 + 0 != 3." + std::string(kDerived),
      with_derived({{"curvature-orthogonality", Status::Fail}, {"pullback-distribution", Status::Fail}})));
  out.push_back(broken_entry(
      "broken-comm",
      coordinate_leg(M, {0}, make_jacobi_pair(euclidean("R", 1), AltField::zero(AltKind::Multivector, 1, 2),
                                              vector_field({c(1)})),
                     x(1) + 2.0),
      "triv with legs q -> R (zero) and q -> (R, E = d_x) with factor p + 2",
      "Both kernels are span{d_p, d_u} so transversality and orthogonality match the valid pair; "
      "X_{p+2} has a d_q component, so the factor does not commute with the other leg." + std::string(kDerived),
      with_derived({{"commutation", Status::Fail}, {"pullback-distribution", Status::Fail}})));
  out.push_back(broken_entry(
      "broken-transv",
      coordinate_leg(M, {0, 2}, make_jacobi_pair(euclidean("R^2", 2), AltField::zero(AltKind::Multivector, 2, 2),
                                                 vector_field({zero(), c(1)}))),
      "triv with legs q -> R and (q, u) -> (R^2, E = d_y)",
      "ker T phi2 = span{d_p} lies in H, so H + ker T phi2 = H. The Reeb field d_u is not in ker T phi2, so "
      "X_{a2} = E fails to be vertical for leg 1 too: commutation forces transversality and fails with it." +
          std::string(kDerived),
      with_derived({{"transversality", Status::Fail}, {"commutation", Status::Fail}})));
  out.push_back(broken_jacobi_entry());
  return out;
}

const std::vector<CatalogEntry>& entries() {
  static std::once_flag once;
  static std::vector<CatalogEntry> all;
  std::call_once(once, [] { all = build(); });
  return all;
}

}  // namespace

const char* to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Contact: return "contact";
    case EntryKind::JacobiPair: return "jacobi_pair";
    case EntryKind::DualPair: return "dual_pair";
    case EntryKind::Groupoid: return "groupoid";
    case EntryKind::Action: return "action";
    case EntryKind::Homogeneous: return "homogeneous";
  }
  return "?";
}

Status CatalogEntry::expected_status(const std::string& check) const {
  for (const auto& v : expected)
    if (v.check == check) return v.status;
  return Status::Pass;
}

namespace catalog {

const CatalogEntry& get(const std::string& id) {
  for (const auto& e : entries())
    if (e.id == id) return e;
  throw UnknownId("no catalog entry '" + id + "'");
}

std::vector<std::string> list() {
  std::vector<std::string> ids;
  for (const auto& e : entries()) ids.push_back(e.id);
  return ids;
}

}  // namespace catalog

SmoothMap hopf_sphere_map(int eps) {
  const double e = eps;
  const Field r2 = hopf_r2();
  const Field D = 1.0 + r2;
  return {"sigma", hopf_chart(eps, 1.5), euclidean("C^2", 4),
          {2.0 * x(0) / D, 2.0 * x(1) / D, 2.0 * x(2) / D, e * (r2 - 1.0) / D}};
}

Multivector hopf_generator(int eps) {
  const double e = eps;
  return vector_field({-x(1) + e * x(0) * x(2), x(0) + e * x(1) * x(2), 0.5 * e * (1.0 - hopf_r2() + 2.0 * x(2) * x(2))});
}

SmoothMap hopf_projection(int eps) {
  // z1 / z2 = (A + iB) / (C + iD) with (A, B, C, D) = (2w1, 2w2, 2w3, eps(r^2 - 1)).
  const double e = eps;
  const Field A = 2.0 * x(0), B = 2.0 * x(1), C = 2.0 * x(2), D = e * (hopf_r2() - 1.0);
  const Field den = C * C + D * D;
  return {"hopf", hopf_chart(eps, 1.5), euclidean("S^2 affine", 2, kHopfBound),
          {(A * C + B * D) / den, (B * C - A * D) / den}};
}

Coords hopf_flow(int eps, const Coords& w, double t) {
  const double r2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  const double D = 1 + r2;
  const double x1 = 2 * w[0] / D, y1 = 2 * w[1] / D, x2 = 2 * w[2] / D, y2 = eps * (r2 - 1) / D;
  const double ct = std::cos(t), st = std::sin(t);
  const double X1 = ct * x1 - st * y1, Y1 = st * x1 + ct * y1;
  const double X2 = ct * x2 - st * y2, Y2 = st * x2 + ct * y2;
  const double k = 1 - eps * Y2;
  return {X1 / k, Y1 / k, X2 / k};
}

}  // namespace jdl
