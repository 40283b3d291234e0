#pragma once

// Shared helpers for the unit tests: random smooth fields and finite-difference
// oracles. The oracles never touch the jet kernel's derivative logic; they
// only call fields at order 0.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "jdl/jets.hpp"

namespace jdl::testing {

// Plain double evaluation of a field (order-0 jets).
inline double eval0(const Field& f, const Coords& p) { return value_at(f, p); }

inline double fd_partial(const std::function<double(const Coords&)>& f, Coords p, int i,
                         double h = 1e-5) {
  Coords a = p, b = p;
  a[i] += h;
  b[i] -= h;
  return (f(a) - f(b)) / (2 * h);
}

inline double fd_second(const std::function<double(const Coords&)>& f, const Coords& p, int i,
                        int j, double h = 1e-4) {
  auto g = [&](const Coords& q) { return fd_partial(f, q, j, h); };
  return fd_partial(g, p, i, h);
}

// Random polynomial of total degree <= deg with O(1) coefficients.
inline Field random_polynomial(std::mt19937_64& rng, int dim, int deg, int terms = 5) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, dim - 1);
  std::uniform_int_distribution<int> dd(0, deg);
  Field f = constant(coef(rng));
  for (int t = 0; t < terms; ++t) {
    Field m = constant(coef(rng));
    const int d = dd(rng);
    for (int k = 0; k < d; ++k) m = m * coord(var(rng));
    f = f + m;
  }
  return f;
}

// Random smooth field mixing polynomials with sin/cos/exp of bounded arguments.
inline Field random_smooth(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> pick(0, 3);
  Field a = random_polynomial(rng, dim, 2, 3);
  Field b = random_polynomial(rng, dim, 2, 3);
  switch (pick(rng)) {
    case 0: return a * sin(b);
    case 1: return cos(a) + b * b;
    case 2: return exp(0.3 * a) * b;
    default: return sqrt(2.0 + sin(a)) - cos(b) * a;
  }
}

inline Coords random_point(std::mt19937_64& rng, int dim, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Coords p(dim);
  for (auto& x : p) x = u(rng);
  return p;
}

}  // namespace jdl::testing
