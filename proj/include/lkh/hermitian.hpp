#pragma once

// Hermitian forms on the Witt model of C^{1,n+1}, matrix exponentials and real forms L0.
//
// h(x, y) = y^* G x, linear in the first argument.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lkh/jetmat.hpp"
#include "lkh/linalg.hpp"

namespace lkh {

/// Gram matrix in the basis p, e_1..e_n, q.
inline Mat witt_gram(int n) {
  Mat g = Mat::Zero(n + 2, n + 2);
  g(0, n + 1) = g(n + 1, 0) = 1.0;
  for (int j = 1; j <= n; ++j) g(j, j) = 1.0;
  return g;
}

struct WittMetric {
  int n = 0;
  Mat gram;
  explicit WittMetric(int n_) : n(n_), gram(witt_gram(n_)) {}
};

inline cplx herm(const Mat& G, const Vec& x, const Vec& y) { return (y.adjoint() * G * x)(0, 0); }
inline cplx herm(const Vec& x, const Vec& y) { return y.dot(x); }

/// Scaling and squaring with a Taylor kernel.
inline Mat matrix_exp(const Mat& A) {
  const auto n = A.rows();
  double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  Mat B = A / std::ldexp(1.0, s);
  Mat term = Mat::Identity(n, n), sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * B / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// e^{-G} d_v e^{G} = sum_k (-1)^k/(k+1)! ad_G^k (d_v G), truncated at k_max.
inline JetMatrix exp_derivative_series(const JetMatrix& G, Var v, int k_max = -1) {
  if (G.value().norm() != 0.0) throw PreconditionError("exp_derivative_series: G(0) must vanish");
  if (k_max < 0) k_max = G.order();
  JetMatrix dG = G.derivative(v);
  JetMatrix term = dG, sum = dG;
  double fact = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    fact *= (k + 1);
    term = commutator(G, term);
    if (term.is_zero()) break;
    sum = sum + term * cplx((k % 2 ? -1.0 : 1.0) / fact * 1.0);
  }
  return sum;
}

/// Direct jet-product form e^{-G} d_v e^{G}.
inline JetMatrix exp_derivative_direct(const JetMatrix& G, Var v) {
  JetMatrix e = jet_matrix_exp(G), em = jet_matrix_exp(G * cplx(-1.0));
  return em * e.derivative(v);
}

struct SkewNormalForm {
  RMat Q;                        // orthogonal, Q^T omega Q = normal form
  std::vector<double> lambdas;   // descending, >= 0
  int zero_block = 0;
  RMat normal_form() const {
    const auto k = Q.cols();
    RMat nf = RMat::Zero(k, k);
    for (std::size_t b = 0; b < lambdas.size(); ++b) {
      nf(2 * b, 2 * b + 1) = -lambdas[b];
      nf(2 * b + 1, 2 * b) = lambdas[b];
    }
    return nf;
  }
};

/// Block form diag([[0,-l1],[l1,0]], ..., 0) of a real skew matrix.
inline SkewNormalForm skew_normal_form(const RMat& omega, double tol = 1e-9) {
  const auto k = omega.rows();
  if (omega.cols() != k) throw ValidationError("skew_normal_form: not square");
  const double scale = std::max(1.0, omega.norm());
  if ((omega + omega.transpose()).norm() > 1e-10 * scale) throw ValidationError("skew_normal_form: not skew-symmetric");
  SkewNormalForm out;
  {
    // already in normal form: keep Q = identity
    SkewNormalForm id;
    id.Q = RMat::Identity(k, k);
    Eigen::Index b = 0;
    while (2 * b + 1 < k && omega(2 * b + 1, 2 * b) > tol * scale &&
           (b == 0 || omega(2 * b + 1, 2 * b) <= omega(2 * b - 1, 2 * b - 2)))
      id.lambdas.push_back(omega(2 * b + 1, 2 * b)), ++b;
    id.zero_block = static_cast<int>(k - 2 * b);
    if ((id.normal_form() - omega).norm() <= 1e-14 * scale) return id;
  }
  out.Q = RMat(k, k);
  // i*omega is Hermitian; eigenvalue mu > 0 with eigenvector x + iy gives omega x = mu y, omega y = -mu x.
  Mat H = cplx(0, 1) * omega.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  std::vector<int> pos;
  for (Eigen::Index i = 0; i < k; ++i)
    if (es.eigenvalues()(i) > tol * scale) pos.push_back(static_cast<int>(i));
  std::sort(pos.begin(), pos.end(), [&](int a, int b) { return es.eigenvalues()(a) > es.eigenvalues()(b); });
  Eigen::Index col = 0;
  for (int i : pos) {
    Vec v = es.eigenvectors().col(i);
    out.Q.col(col++) = std::sqrt(2.0) * v.real();
    out.Q.col(col++) = std::sqrt(2.0) * v.imag();
    out.lambdas.push_back(es.eigenvalues()(i));
  }
  RMat ker = null_space(omega, tol);
  out.zero_block = static_cast<int>(k - col);
  if (ker.cols() != out.zero_block) throw ValidationError("skew_normal_form: inconsistent kernel dimension");
  if (out.zero_block) out.Q.rightCols(out.zero_block) = ker;
  return out;
}

/// Real form L0 of C^{n-m}: f-basis, omega, lambdas, theta and tau (tau(x) = T conj(x)).
struct RealFormData {
  int n_minus_m = 0;
  Mat basis_f;                  // columns f_{m+1}..f_n
  RMat omega;
  std::vector<double> lambdas;
  Mat theta;
  Mat tau;

  /// Canonical f-basis with Gram delta + i*omega, omega in block normal form.
  static RealFormData from_lambdas(int n_minus_m, const std::vector<double>& lambdas) {
    if (2 * static_cast<int>(lambdas.size()) > n_minus_m) throw ValidationError("real form: too many lambda blocks");
    Mat F = Mat::Identity(n_minus_m, n_minus_m);
    for (std::size_t b = 0; b < lambdas.size(); ++b) {
      double l = lambdas[b];
      if (!(std::abs(l) < 1.0)) throw ValidationError("real form: |lambda| must be < 1");
      const int i = 2 * static_cast<int>(b);
      const double a = std::sqrt(1.0 - l), c = std::sqrt(1.0 + l), r = 1.0 / std::sqrt(2.0);
      F.col(i).setZero();
      F.col(i + 1).setZero();
      F(i, i) = a * r;
      F(i + 1, i) = cplx(0, -c * r);
      F(i, i + 1) = cplx(0, -a * r);
      F(i + 1, i + 1) = c * r;
    }
    return from_basis(F);
  }

  /// Any real basis of L0 (columns). Re-orthonormalized for Re h and rotated to the normal form.
  static RealFormData from_basis(const Mat& F0) {
    const auto k = F0.rows();
    if (F0.cols() != k) throw ValidationError("real form: need n-m basis vectors");
    RealFormData rf;
    rf.n_minus_m = static_cast<int>(k);
    if (k == 0) {
      rf.basis_f = Mat(0, 0);
      rf.omega = RMat(0, 0);
      rf.theta = rf.tau = Mat(0, 0);
      return rf;
    }
    RMat LiL(2 * k, 2 * k);
    LiL << F0.real(), -F0.imag(), F0.imag(), F0.real();
    if (numerical_rank(LiL) != 2 * k) throw ValidationError("real form: L0 + iL0 is not C^{n-m}");
    // Gram_jk = h(f_j, f_k) = f_k^* f_j
    Mat gram = (F0.adjoint() * F0).transpose();
    RMat g = gram.real();
    Eigen::SelfAdjointEigenSolver<RMat> es(g);
    RMat s = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    Mat F = F0 * s.cast<cplx>();
    RMat om = (F.adjoint() * F).transpose().imag();
    SkewNormalForm nf = skew_normal_form(om);
    F = F * nf.Q.cast<cplx>();
    rf.basis_f = F;
    rf.omega = nf.normal_form();
    rf.lambdas = nf.lambdas;
    for (double l : rf.lambdas)
      if (!(l < 1.0)) throw ValidationError("real form: h not positive definite on span");
    // theta f_j = sum_k Theta_kj f_k with Theta = omega^T
    Mat Th = rf.omega.transpose().cast<cplx>();
    rf.theta = F * Th * F.inverse();
    rf.tau = F * F.conjugate().inverse();
    return rf;
  }

  /// Gram h(f_j, f_k).
  Mat gram() const { return (basis_f.adjoint() * basis_f).transpose(); }
  Vec apply_tau(const Vec& x) const { return tau * x.conjugate(); }
  bool theta_zero(double tol = 1e-9) const { return omega.norm() <= tol; }
};

/// Adapted h-orthonormal basis e_{m+1}..e_n built from the normal-form f-basis.
inline Mat adapted_basis(const RealFormData& rf) {
  Mat E = rf.basis_f;
  const double r = std::sqrt(2.0) / 2.0;
  for (std::size_t b = 0; b < rf.lambdas.size(); ++b) {
    double l = rf.lambdas[b];
    if (!(std::abs(l) < 1.0)) throw ValidationError("adapted_basis: |lambda| must be < 1");
    const int i = 2 * static_cast<int>(b);
    Vec f1 = rf.basis_f.col(i), f2 = rf.basis_f.col(i + 1);
    E.col(i) = r / std::sqrt(1.0 - l) * (f1 + I * f2);
    E.col(i + 1) = r / std::sqrt(1.0 + l) * (f2 + I * f1);
  }
  return E;
}

}  // namespace lkh
