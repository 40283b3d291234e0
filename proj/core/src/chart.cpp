#include "jdl/chart.hpp"

#include <random>

namespace jdl {

Chart::Chart(std::string n, std::vector<Interval> b,
             std::function<bool(const Coords&, double)> ex)
    : name(std::move(n)), dim(static_cast<int>(b.size())), box(std::move(b)), excluded(std::move(ex)) {
  for (const auto& iv : box)
    if (!(iv.hi > iv.lo)) throw ConfigError("chart '" + name + "' has an empty box interval");
}

bool Chart::in_box(const Coords& p, double slack) const {
  if (static_cast<int>(p.size()) != dim) return false;
  for (int i = 0; i < dim; ++i) {
    const double w = slack * std::max(1.0, box[i].hi - box[i].lo);
    if (p[i] < box[i].lo - w || p[i] > box[i].hi + w) return false;
  }
  return true;
}

Chart euclidean(const std::string& name, int dim, double half_width) {
  return Chart(name, std::vector<Interval>(dim, Interval{-half_width, half_width}));
}

Coords SmoothMap::operator()(const Coords& p) const {
  if (static_cast<int>(p.size()) != source.dim)
    throw DimensionMismatch("map '" + name + "' expects " + std::to_string(source.dim) + " coordinates");
  Coords out(components.size());
  for (std::size_t k = 0; k < components.size(); ++k) out[k] = value_at(components[k], p);
  return out;
}

std::vector<Jet> SmoothMap::operator()(std::span<const Jet> xs) const {
  if (static_cast<int>(xs.size()) != source.dim)
    throw DimensionMismatch("map '" + name + "' expects " + std::to_string(source.dim) + " jets");
  std::vector<Jet> out;
  out.reserve(components.size());
  for (const auto& c : components) {
    if (c) out.push_back(c(xs));
    else out.push_back(xs.empty() ? Jet::constant(0, 0, 0.0) : Jet::like(xs[0], 0.0));
  }
  return out;
}

Field pullback(const SmoothMap& F, const Field& f) {
  if (!f) return {};
  return Field([F, f](std::span<const Jet> xs) {
    std::vector<Jet> ys = F(xs);
    if (ys.empty()) {
      if (xs.empty()) return f(ys);
      return Jet::like(xs[0], f(ys).value());
    }
    return f(ys);
  });
}

SmoothMap identity_map(const Chart& c) {
  SmoothMap m{"id_" + c.name, c, c, {}};
  for (int i = 0; i < c.dim; ++i) m.components.push_back(coord(i));
  return m;
}

SmoothMap compose(const SmoothMap& g, const SmoothMap& f) {
  if (g.source.dim != f.target.dim)
    throw DimensionMismatch("cannot compose '" + g.name + "' after '" + f.name + "'");
  SmoothMap out{g.name + "∘" + f.name, f.source, g.target, {}};
  for (const auto& gc : g.components) out.components.push_back(pullback(f, gc));
  return out;
}

std::vector<Coords> sample_points(const Chart& c, int n, std::uint64_t seed) {
  if (n < 1) throw SamplingExhausted("sample count must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> dist;
  dist.reserve(c.dim);
  for (const auto& iv : c.box) dist.emplace_back(iv.lo, iv.hi);

  std::vector<Coords> out;
  out.reserve(n);
  const long long min_window = 10LL * n;
  long long draws = 0;
  Coords p(c.dim);
  while (static_cast<int>(out.size()) < n) {
    for (int i = 0; i < c.dim; ++i) p[i] = dist[i](rng);
    ++draws;
    if (!c.is_excluded(p)) out.push_back(p);
    if (draws >= min_window) {
      const double rejected = 1.0 - static_cast<double>(out.size()) / static_cast<double>(draws);
      if (rejected > 0.99)
        throw SamplingExhausted("chart '" + c.name + "' rejected more than 99% of " +
                                std::to_string(draws) + " draws");
    }
  }
  return out;
}

std::vector<Jet> map_jets(const SmoothMap& F, const Coords& p, int order) {
  auto xs = variables(p, order);
  return F(std::span<const Jet>(xs));
}

Eigen::MatrixXd tangent_map(const SmoothMap& F, const Coords& p) {
  if (!F.source.contains(p))
    throw DomainViolation("point outside the domain of map '" + F.name + "'");
  auto js = map_jets(F, p, 1);
  Eigen::MatrixXd J(js.size(), F.source.dim);
  for (std::size_t r = 0; r < js.size(); ++r) J.row(r) = js[r].grad().transpose();
  return J;
}

Eigen::VectorXd to_vector(const Coords& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

Coords to_coords(const Eigen::VectorXd& v) { return Coords(v.data(), v.data() + v.size()); }

}  // namespace jdl
