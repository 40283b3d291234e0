#pragma once

// Coordinate charts, smooth maps between them, and deterministic sampling.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jdl/jets.hpp"

namespace jdl {

inline constexpr double kDefaultExclusionMargin = 1e-3;

struct Interval {
  double lo = 0;
  double hi = 0;
};

struct Chart {
  std::string name;
  int dim = 0;
  std::vector<Interval> box;
  // Rejects points near singular loci. The margin is passed in so predicates
  // can be written as |g(p)| < margin.
  std::function<bool(const Coords&, double margin)> excluded;
  double margin = kDefaultExclusionMargin;

  Chart() = default;
  Chart(std::string name, std::vector<Interval> box,
        std::function<bool(const Coords&, double)> excluded = {});

  bool in_box(const Coords& p, double slack = 1e-12) const;
  bool is_excluded(const Coords& p) const { return excluded && excluded(p, margin); }
  bool contains(const Coords& p) const { return in_box(p) && !is_excluded(p); }
};

// A chart that is all of R^n for practical purposes (box [-1,1]^n).
Chart euclidean(const std::string& name, int dim, double half_width = 1.0);

struct SmoothMap {
  std::string name;
  Chart source;
  Chart target;
  std::vector<Field> components;  // target.dim entries

  Coords operator()(const Coords& p) const;
  // Composition with arbitrary jets in the source coordinates.
  std::vector<Jet> operator()(std::span<const Jet> xs) const;
};

// f after F. Works when the target is a point chart.
Field pullback(const SmoothMap& F, const Field& f);

SmoothMap identity_map(const Chart& c);
SmoothMap compose(const SmoothMap& g, const SmoothMap& f);  // g after f

std::vector<Coords> sample_points(const Chart& c, int n, std::uint64_t seed);

// Jacobian (target.dim x source.dim) from order-1 jets.
Eigen::MatrixXd tangent_map(const SmoothMap& F, const Coords& p);

// Order-K jets of all components of F at p.
std::vector<Jet> map_jets(const SmoothMap& F, const Coords& p, int order);

Eigen::VectorXd to_vector(const Coords& p);
Coords to_coords(const Eigen::VectorXd& v);

}  // namespace jdl
