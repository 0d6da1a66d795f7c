#pragma once

// Dense helpers: real flattening of complex matrices, ranks and null spaces.

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "lkh/config.hpp"

namespace lkh {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Column-major real/imag interleave; length 2*rows*cols.
inline RVec flatten(const Mat& m) {
  RVec v(2 * m.size());
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    v(2 * k) = m.data()[k].real();
    v(2 * k + 1) = m.data()[k].imag();
  }
  return v;
}

inline Mat unflatten(const RVec& v, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = cplx(v(2 * k), v(2 * k + 1));
  return m;
}

inline RMat stack_columns(const std::vector<RVec>& cols, Eigen::Index len) {
  RMat A(len, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) A.col(static_cast<Eigen::Index>(j)) = cols[j];
  return A;
}

// Singular values below rel * s_max (or below an absolute floor) count as zero.
inline double rank_cut(const RVec& s, double rel) {
  double smax = s.size() ? s(0) : 0.0;
  return std::max(rel * smax, 1e-13);
}

inline int numerical_rank(const RMat& A, double rel = 1e-9) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<RMat> svd(A);
  RVec s = svd.singularValues();
  double cut = rank_cut(s, rel);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// Orthonormal basis of the column span.
inline RMat column_span(const RMat& A, double rel = 1e-9) {
  if (A.cols() == 0) return RMat(A.rows(), 0);
  Eigen::JacobiSVD<RMat> svd(A, Eigen::ComputeThinU);
  RVec s = svd.singularValues();
  double cut = rank_cut(s, rel);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of ker A; the threshold is relative to the largest singular value.
inline RMat null_space(const RMat& A, double rel = 1e-9) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return RMat::Identity(n, n);
  Eigen::JacobiSVD<RMat> svd(A, Eigen::ComputeFullV);
  RVec s = svd.singularValues();
  double cut = rank_cut(s, rel);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Same kernel through a column-pivoted QR of A^T; used for the large sparse constraint systems,
/// where a full SVD is slow.
inline RMat null_space_qr(const RMat& A, double rel = 1e-9) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return RMat::Identity(n, n);
  Eigen::ColPivHouseholderQR<RMat> qr(A.transpose());
  qr.setThreshold(rel);
  const Eigen::Index r = qr.rank();
  RMat Q = qr.householderQ();
  return Q.rightCols(n - r);
}

inline Mat null_space_complex(const Mat& A, double rel = 1e-9) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  RVec s = svd.singularValues();
  double cut = rank_cut(s, rel);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Orthonormal complex basis of the column span.
inline Mat column_span_complex(const Mat& A, double rel = 1e-9) {
  if (A.cols() == 0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  RVec s = svd.singularValues();
  double cut = rank_cut(s, rel);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

/// Distance from x to the span of the orthonormal columns Q.
inline double residual_to_span(const RMat& Q, const RVec& x) {
  if (Q.cols() == 0) return x.norm();
  return (x - Q * (Q.transpose() * x)).norm();
}

/// Real span of a list of complex matrices, returned as an orthonormal basis (flattened inner product).
inline std::vector<Mat> real_span(const std::vector<Mat>& ms, double rel = 1e-9) {
  if (ms.empty()) return {};
  const auto rows = ms.front().rows(), cols = ms.front().cols();
  std::vector<RVec> v;
  for (const auto& m : ms) {
    if (m.rows() != rows || m.cols() != cols) throw ShapeError("real_span: matrices differ in shape");
    v.push_back(flatten(m));
  }
  RMat Q = column_span(stack_columns(v, 2 * rows * cols), rel);
  std::vector<Mat> out;
  for (Eigen::Index j = 0; j < Q.cols(); ++j) out.push_back(unflatten(Q.col(j), rows, cols));
  return out;
}

inline RMat flatten_all(const std::vector<Mat>& ms, Eigen::Index rows, Eigen::Index cols) {
  std::vector<RVec> v;
  for (const auto& m : ms) v.push_back(flatten(m));
  return stack_columns(v, 2 * rows * cols);
}

/// Unique Hermitian positive square root of a Hermitian positive definite matrix.
inline Mat hermitian_sqrt(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.eigenvalues().minCoeff() <= 0.0) throw DegeneracyError("hermitian_sqrt: not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace lkh
