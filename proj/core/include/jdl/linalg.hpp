#pragma once

// Subspaces of R^n with tolerance-aware rank decisions.

#include <vector>

#include <Eigen/Dense>

#include "jdl/errors.hpp"

namespace jdl {

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr double kDefaultAngleTol = 1e-7;

struct Subspace {
  int ambient = 0;
  Eigen::MatrixXd basis;  // ambient x r, orthonormal columns
  double tol = kDefaultRankTol;

  int dim() const { return static_cast<int>(basis.cols()); }
  // Orthogonal projector onto the subspace.
  Eigen::MatrixXd projector() const;
};

struct BilinearForm {
  int ambient = 0;
  Eigen::MatrixXd matrix;

  double operator()(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return u.dot(matrix * v);
  }
  double antisymmetry_residual() const;
};

// Numerical rank of M: singular values above tol * max(sigma_max, floor).
int numerical_rank(const Eigen::MatrixXd& M, double tol = kDefaultRankTol);
// Orthonormal basis of ker M.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& M, double tol = kDefaultRankTol);

Subspace zero_subspace(int ambient);
Subspace whole_space(int ambient);
Subspace span_of(const Eigen::MatrixXd& columns, double tol = kDefaultRankTol);
Subspace span_of(const std::vector<Eigen::VectorXd>& vectors, int ambient,
                 double tol = kDefaultRankTol);
Subspace kernel(const Eigen::MatrixXd& M, double tol = kDefaultRankTol);
Subspace image(const Eigen::MatrixXd& M, double tol = kDefaultRankTol);

Subspace sum(const Subspace& U, const Subspace& V);
Subspace intersect(const Subspace& U, const Subspace& V);
Subspace annihilator(const Subspace& U);

// Distance of U from lying inside V: ||(I - P_V) U||_2.
double containment_residual(const Subspace& U, const Subspace& V);
bool contained_in(const Subspace& U, const Subspace& V, double tol = 1e-8);

// {v in within : B(v, u) = 0 for all u in U}.
Subspace orth_complement_wrt(const BilinearForm& B, const Subspace& U, const Subspace& within);

struct SubspaceComparison {
  bool equal = false;
  double max_angle = 0;  // radians
};
SubspaceComparison subspace_equal(const Subspace& U, const Subspace& V,
                                  double angle_tol = kDefaultAngleTol);

}  // namespace jdl
