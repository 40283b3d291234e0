#include "jdl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace jdl {

namespace {

constexpr double kAbsFloor = 1e-13;

void require_ambient(const Subspace& U, const Subspace& V) {
  if (U.ambient != V.ambient)
    throw DimensionMismatch("subspaces live in R^" + std::to_string(U.ambient) + " and R^" +
                            std::to_string(V.ambient));
}

double threshold(const Eigen::VectorXd& sv, double tol) {
  const double top = sv.size() ? sv(0) : 0.0;
  return std::max(tol * top, kAbsFloor);
}

}  // namespace

Eigen::MatrixXd Subspace::projector() const { return basis * basis.transpose(); }

double BilinearForm::antisymmetry_residual() const {
  return (matrix + matrix.transpose()).cwiseAbs().maxCoeff();
}

int numerical_rank(const Eigen::MatrixXd& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  const double thr = threshold(sv, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& M, double tol) {
  const Eigen::Index n = M.cols();
  if (M.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  if (n == 0) return Eigen::MatrixXd(0, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = threshold(sv, tol);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return svd.matrixV().rightCols(n - r);
}

Subspace zero_subspace(int ambient) { return {ambient, Eigen::MatrixXd(ambient, 0)}; }

Subspace whole_space(int ambient) {
  return {ambient, Eigen::MatrixXd::Identity(ambient, ambient)};
}

Subspace span_of(const Eigen::MatrixXd& columns, double tol) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return {n, Eigen::MatrixXd(n, 0), tol};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thr = threshold(sv, tol);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  if (sv.size() && sv(0) <= kAbsFloor) r = 0;
  return {n, svd.matrixU().leftCols(r), tol};
}

Subspace span_of(const std::vector<Eigen::VectorXd>& vectors, int ambient, double tol) {
  Eigen::MatrixXd M(ambient, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != ambient) throw DimensionMismatch("vector length differs from ambient");
    M.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  return span_of(M, tol);
}

Subspace kernel(const Eigen::MatrixXd& M, double tol) {
  return {static_cast<int>(M.cols()), null_space(M, tol), tol};
}

Subspace image(const Eigen::MatrixXd& M, double tol) { return span_of(M, tol); }

Subspace sum(const Subspace& U, const Subspace& V) {
  require_ambient(U, V);
  Eigen::MatrixXd M(U.ambient, U.dim() + V.dim());
  M << U.basis, V.basis;
  return span_of(M, std::max(U.tol, V.tol));
}

Subspace annihilator(const Subspace& U) {
  if (U.dim() == 0) return whole_space(U.ambient);
  return {U.ambient, null_space(U.basis.transpose(), U.tol), U.tol};
}

Subspace intersect(const Subspace& U, const Subspace& V) {
  require_ambient(U, V);
  return annihilator(sum(annihilator(U), annihilator(V)));
}

double containment_residual(const Subspace& U, const Subspace& V) {
  require_ambient(U, V);
  if (U.dim() == 0) return 0.0;
  Eigen::MatrixXd R = U.basis - V.basis * (V.basis.transpose() * U.basis);
  if (R.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues()(0);
}

bool contained_in(const Subspace& U, const Subspace& V, double tol) {
  return containment_residual(U, V) <= tol;
}

Subspace orth_complement_wrt(const BilinearForm& B, const Subspace& U, const Subspace& within) {
  require_ambient(U, within);
  if (B.ambient != U.ambient) throw DimensionMismatch("form and subspace ambients differ");
  if (!contained_in(U, within))
    throw NotContained("subspace is not contained in the ambient subspace (residual " +
                       std::to_string(containment_residual(U, within)) + ")");
  const Eigen::MatrixXd& W = within.basis;
  if (U.dim() == 0 || W.cols() == 0) return within;
  // c in ker of (W^T B U)^T.
  Eigen::MatrixXd M = (W.transpose() * B.matrix * U.basis).transpose();
  const double scale = std::max(1.0, B.matrix.norm());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = std::max(within.tol * std::max(sv.size() ? sv(0) : 0.0, scale), kAbsFloor);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  Eigen::MatrixXd C = svd.matrixV().rightCols(W.cols() - r);
  return {within.ambient, W * C, within.tol};
}

SubspaceComparison subspace_equal(const Subspace& U, const Subspace& V, double angle_tol) {
  require_ambient(U, V);
  if (U.dim() != V.dim()) return {false, std::numbers::pi / 2};
  if (U.dim() == 0) return {true, 0.0};
  const double s = std::min(1.0, containment_residual(V, U));
  const double angle = std::asin(s);
  return {angle < angle_tol, angle};
}

}  // namespace jdl
