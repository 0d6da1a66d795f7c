#pragma once

// Matrices whose entries are jets.

#include <map>
#include <vector>

#include "lkh/jet.hpp"
#include "lkh/linalg.hpp"

namespace lkh {

class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int rows, int cols, int d, int order) : rows_(rows), cols_(cols), e_(rows * cols, Jet(d, order)) {}

  static JetMatrix constant(const Mat& m, int d, int order) {
    JetMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()), d, order);
    for (int i = 0; i < r.rows_; ++i)
      for (int j = 0; j < r.cols_; ++j) r(i, j) = Jet::constant(d, order, m(i, j));
    return r;
  }
  static JetMatrix identity(int n, int d, int order) { return constant(Mat::Identity(n, n), d, order); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_coords() const { return e_.empty() ? 1 : e_.front().num_coords(); }
  int order() const {
    int o = Jet::kMaxOrder;
    for (const auto& j : e_) o = std::min(o, j.order());
    return o;
  }

  Jet& operator()(int i, int j) { return e_[i * cols_ + j]; }
  const Jet& operator()(int i, int j) const { return e_[i * cols_ + j]; }

  friend JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    JetMatrix r = a;
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
    return r;
  }
  friend JetMatrix operator-(const JetMatrix& a, const JetMatrix& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    JetMatrix r = a;
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
    return r;
  }
  friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
    check(a.cols_ == b.rows_);
    const int ord = std::min(a.order(), b.order());
    JetMatrix r(a.rows_, b.cols_, a.num_coords(), ord);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) {
        Jet s(a.num_coords(), ord);
        for (int k = 0; k < a.cols_; ++k) {
          if (a(i, k).empty() || b(k, j).empty()) continue;
          s += a(i, k) * b(k, j);
        }
        r(i, j) = s;
      }
    return r;
  }
  friend JetMatrix operator*(const JetMatrix& a, cplx s) {
    JetMatrix r = a;
    for (auto& j : r.e_) j = j * s;
    return r;
  }
  friend JetMatrix operator*(cplx s, const JetMatrix& a) { return a * s; }
  friend JetMatrix operator*(const JetMatrix& a, const Jet& s) {
    JetMatrix r = a;
    for (auto& j : r.e_) j = j * s;
    return r;
  }
  friend JetMatrix operator*(const Jet& s, const JetMatrix& a) { return a * s; }

  JetMatrix derivative(Var v) const {
    JetMatrix r = *this;
    for (auto& j : r.e_) j = j.derivative(v);
    return r;
  }
  JetMatrix truncated(int order) const {
    JetMatrix r = *this;
    for (auto& j : r.e_) j = j.truncated(order);
    return r;
  }
  JetMatrix homogeneous(int k) const {
    JetMatrix r = *this;
    for (auto& j : r.e_) j = j.homogeneous(k);
    return r;
  }
  /// Entrywise conjugate jets, transposed.
  JetMatrix adjoint() const {
    JetMatrix r(cols_, rows_, num_coords(), order());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j).conjugate();
    return r;
  }
  JetMatrix block(int i0, int j0, int nr, int nc) const {
    JetMatrix r(nr, nc, num_coords(), order());
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) r(i, j) = (*this)(i0 + i, j0 + j);
    return r;
  }
  void set_block(int i0, int j0, const JetMatrix& b) {
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }

  /// Constant terms.
  Mat value() const {
    Mat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).constant_term();
    return m;
  }
  Mat evaluate(std::span<const cplx> z) const {
    Mat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).evaluate(z);
    return m;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& j : e_) m = std::max(m, j.max_abs());
    return m;
  }
  bool is_zero(double tol = 0.0) const {
    return std::all_of(e_.begin(), e_.end(), [&](const Jet& j) { return j.is_zero(tol); });
  }

  /// Coefficient matrices keyed by monomial.
  std::map<Jet::Key, Mat> coefficient_matrices() const {
    std::map<Jet::Key, Mat> out;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        for (const auto& t : (*this)(i, j).terms()) {
          auto it = out.find(t.key);
          if (it == out.end()) it = out.emplace(t.key, Mat::Zero(rows_, cols_)).first;
          it->second(i, j) += t.c;
        }
    return out;
  }

  static JetMatrix from_coefficients(const std::map<Jet::Key, Mat>& cm, int rows, int cols, int d, int order) {
    std::vector<std::vector<Jet::Term>> terms(rows * cols);
    for (const auto& [k, m] : cm) {
      int deg = Jet::key_degree(d, k);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
          if (m(i, j) != cplx{}) terms[i * cols + j].push_back({k, deg, m(i, j)});
    }
    JetMatrix r(rows, cols, d, order);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r(i, j) = Jet::from_terms(d, order, std::move(terms[i * cols + j]));
    return r;
  }

 private:
  static void check(bool ok) {
    if (!ok) throw ShapeError("jet matrix: shape mismatch");
  }
  int rows_ = 0, cols_ = 0;
  std::vector<Jet> e_;
};

inline JetMatrix commutator(const JetMatrix& a, const JetMatrix& b) { return a * b - b * a; }

/// Inverse by Neumann series around the constant term.
inline JetMatrix jet_inverse(const JetMatrix& h) {
  if (h.rows() != h.cols()) throw ShapeError("jet_inverse: not square");
  const int n = h.rows(), d = h.num_coords(), ord = h.order();
  Mat h0 = h.value();
  Eigen::FullPivLU<Mat> lu(h0);
  if (!lu.isInvertible()) throw DegeneracyError("jet_inverse: singular at base point");
  Mat k0 = lu.inverse();
  JetMatrix K0 = JetMatrix::constant(k0, d, ord);
  JetMatrix step = K0 * (JetMatrix::constant(h0, d, ord) - h);
  JetMatrix acc = JetMatrix::identity(n, d, ord), pw = acc;
  for (int k = 1; k <= ord; ++k) {
    pw = pw * step;
    if (pw.is_zero()) break;
    acc = acc + pw;
  }
  return acc * K0;
}

/// exp of a jet matrix whose constant term vanishes.
inline JetMatrix jet_matrix_exp(const JetMatrix& g) {
  if (g.value().norm() != 0.0) throw PreconditionError("jet_matrix_exp: nonzero constant term");
  const int n = g.rows(), d = g.num_coords(), ord = g.order();
  JetMatrix acc = JetMatrix::identity(n, d, ord), pw = acc;
  double fact = 1.0;
  for (int k = 1; k <= ord; ++k) {
    fact *= k;
    pw = pw * g;
    if (pw.is_zero()) break;
    acc = acc + pw * cplx(1.0 / fact);
  }
  return acc;
}

/// Hermitian positive square root of a Hermitian jet matrix, solved degree by degree
/// from S0 S_k + S_k S0 = H_k - sum_{i+j=k} S_i S_j.
inline JetMatrix jet_hermitian_sqrt(const JetMatrix& h) {
  const int n = h.rows(), d = h.num_coords(), ord = h.order();
  Mat s0 = hermitian_sqrt(h.value());
  Eigen::SelfAdjointEigenSolver<Mat> es(s0);
  const Mat& U = es.eigenvectors();
  const RVec& ev = es.eigenvalues();
  std::vector<JetMatrix> parts{JetMatrix::constant(s0, d, ord)};
  for (int k = 1; k <= ord; ++k) {
    JetMatrix rhs = h.homogeneous(k);
    for (int i = 1; i < k; ++i) rhs = rhs - (parts[i] * parts[k - i]).homogeneous(k);
    auto cm = rhs.coefficient_matrices();
    for (auto& [key, m] : cm) {
      Mat t = U.adjoint() * m * U;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t(a, b) /= (ev(a) + ev(b));
      m = U * t * U.adjoint();
    }
    parts.push_back(JetMatrix::from_coefficients(cm, n, n, d, ord));
  }
  JetMatrix s = parts[0];
  for (int k = 1; k <= ord; ++k) s = s + parts[k];
  return s;
}

}  // namespace lkh
