#pragma once

// Dense complex linear algebra helpers shared by the torsion engine and the
// twisted-cohomology code. Everything is small (tens of rows), so accuracy
// wins over speed: full Jacobi SVDs are used for every rank decision.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "fibertor/errors.hpp"

namespace fibertor {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Tolerance policy. Each knob has its own default because each decision has
// a different conditioning.
struct Tolerance {
  // singular values below rank * sigma_max count as zero
  double rank = 1e-9;
  // matrices whose largest singular value is below this are treated as zero
  double zero = 1e-12;
  // relative bound on ||d o d||
  double complex_check = 1e-8;
  // ||rho(r) - I|| bound for relators
  double relator = 1e-8;
  // |lambda - 1| below this counts as the unit eigenvalue
  double unit_eigenvalue = 1e-6;
};

inline Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

inline double singular_threshold(const Eigen::VectorXd& sigma, const Tolerance& tol) {
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  if (top <= tol.zero) return std::numeric_limits<double>::infinity();
  return tol.rank * top;
}

inline Eigen::Index numerical_rank(const Matrix& m, const Tolerance& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double cut = singular_threshold(s, tol);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// Orthonormal basis of ker(m), as columns.
inline Matrix kernel_basis(const Matrix& m, const Tolerance& tol = {}) {
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  auto svd = full_svd(m);
  const Eigen::Index r = numerical_rank(m, tol);
  return svd.matrixV().rightCols(m.cols() - r);
}

// Orthonormal basis of im(m), as columns.
inline Matrix image_basis(const Matrix& m, const Tolerance& tol = {}) {
  if (m.rows() == 0) return Matrix(0, 0);
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  auto svd = full_svd(m);
  const Eigen::Index r = numerical_rank(m, tol);
  return svd.matrixU().leftCols(r);
}

// Orthonormal basis of the orthogonal complement of the column span of m
// inside F^ambient.
inline Matrix complement_basis(const Matrix& m, Eigen::Index ambient, const Tolerance& tol = {}) {
  if (m.cols() == 0 || numerical_rank(m, tol) == 0) return Matrix::Identity(ambient, ambient);
  auto svd = full_svd(m);
  const Eigen::Index r = numerical_rank(m, tol);
  return svd.matrixU().rightCols(ambient - r);
}

// Indices of columns of m selected greedily by largest pivot (column-pivoted
// QR); the selected columns span im(m).
inline std::vector<Eigen::Index> pivot_columns(const Matrix& m, const Tolerance& tol = {}) {
  std::vector<Eigen::Index> cols;
  if (m.rows() == 0 || m.cols() == 0) return cols;
  const Eigen::Index r = numerical_rank(m, tol);
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < r; ++i) cols.push_back(perm(i));
  return cols;
}

// Least-squares solution of a x = b (minimum norm).
inline Matrix least_squares(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return Matrix(0, b.cols());
  return a.completeOrthogonalDecomposition().solve(b);
}

inline Matrix hstack(std::initializer_list<const Matrix*> blocks, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto* b : blocks) cols += b->cols();
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto* b : blocks) {
    if (b->cols() == 0) continue;
    if (b->rows() != rows) fail(ErrorCode::DimensionMismatch, "hstack: row count mismatch");
    out.middleCols(at, b->cols()) = *b;
    at += b->cols();
  }
  return out;
}

inline double smallest_singular_ratio(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

}  // namespace fibertor
