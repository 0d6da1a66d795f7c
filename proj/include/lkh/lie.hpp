#pragma once

// Real Lie subalgebras of u(1,n+1) as spans of complex (n+2)x(n+2) matrices.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lkh/hermitian.hpp"
#include "lkh/linalg.hpp"

namespace lkh {

inline Mat bracket(const Mat& x, const Mat& y) { return x * y - y * x; }

/// (a, A, Z, c) <-> [[a, -Z^*, ic], [0, A, Z], [0, 0, -conj(a)]]
struct ABZC {
  cplx a{};
  Mat A;
  Vec Z;
  double c = 0.0;

  static ABZC zero(int n) { return {cplx{}, Mat::Zero(n, n), Vec::Zero(n), 0.0}; }
  int n() const { return static_cast<int>(Z.size()); }

  Mat embed() const {
    const int n = this->n();
    Mat m = Mat::Zero(n + 2, n + 2);
    m(0, 0) = a;
    m(n + 1, n + 1) = -std::conj(a);
    m(0, n + 1) = cplx(0, c);
    if (n) {
      m.block(1, 1, n, n) = A;
      m.block(1, n + 1, n, 1) = Z;
      m.block(0, 1, 1, n) = -Z.adjoint();
    }
    return m;
  }

  /// Reads the tuple back; throws PatternError if m is not in u(1,n+1)_{Cp}.
  static ABZC decompose(const Mat& m, double tol = 1e-9) {
    const int n = static_cast<int>(m.rows()) - 2;
    if (n < 0 || m.cols() != m.rows()) throw ShapeError("decompose: bad shape");
    ABZC x;
    x.a = m(0, 0);
    x.A = m.block(1, 1, n, n);
    x.Z = m.block(1, n + 1, n, 1);
    x.c = m(0, n + 1).imag();
    double scale = std::max(1.0, m.norm());
    if ((x.embed() - m).norm() > tol * scale) throw PatternError("decompose: matrix is not of the form (a,A,Z,c)");
    if ((x.A + x.A.adjoint()).norm() > tol * scale) throw PatternError("decompose: A is not anti-Hermitian");
    return x;
  }
};

inline ABZC abzc_bracket(const ABZC& x, const ABZC& y) { return ABZC::decompose(bracket(x.embed(), y.embed())); }

/// Element of sim(C^n) = (R + u(n)) x C^n.
struct SimElement {
  double r = 0.0;
  Mat U;
  Vec Z;
};

inline SimElement gamma_prime(const ABZC& x) {
  const int n = x.n();
  return {x.a.real(), cplx(0, -x.a.imag()) * Mat::Identity(n, n) + x.A, x.Z};
}

inline SimElement sim_bracket(const SimElement& x, const SimElement& y) {
  const int n = static_cast<int>(x.Z.size());
  SimElement r;
  r.r = 0.0;
  r.U = x.U * y.U - y.U * x.U;
  r.Z = (x.r * Mat::Identity(n, n) + x.U) * y.Z - (y.r * Mat::Identity(n, n) + y.U) * x.Z;
  return r;
}

/// Zero below the (p | e | q) block diagonal.
inline bool parabolic_pattern(const Mat& xi, double tol = 1e-9) {
  const int n = static_cast<int>(xi.rows()) - 2;
  double scale = std::max(1.0, xi.norm());
  double low = xi.block(1, 0, n + 1, 1).norm() + (n ? xi.block(n + 1, 1, 1, n).norm() : 0.0);
  return low <= tol * scale;
}

/// Anti-linear involution on the complexified parabolic algebra; its fixed points form the real algebra.
inline Mat sigma_involution(const Mat& xi) {
  if (!parabolic_pattern(xi)) throw ShapeError("sigma: matrix is not upper block triangular");
  const Mat G = witt_gram(static_cast<int>(xi.rows()) - 2);
  return -G * xi.adjoint() * G;
}

/// sigma without the pattern check (the formula is valid on all of gl(V)).
inline Mat sigma_any(const Mat& xi) {
  const Mat G = witt_gram(static_cast<int>(xi.rows()) - 2);
  return -G * xi.adjoint() * G;
}

inline bool is_anti_hermitian(const Mat& xi, double tol = 1e-9) {
  const Mat G = witt_gram(static_cast<int>(xi.rows()) - 2);
  return (xi.adjoint() * G + G * xi).norm() <= tol * std::max(1.0, xi.norm());
}

struct MatrixAlgebra {
  int n = 0;
  std::vector<Mat> basis;  // orthonormal for the flattened real inner product
  bool unitary_sub = true;

  int dim() const { return static_cast<int>(basis.size()); }
  int size() const { return n + 2; }

  RMat flat() const { return flatten_all(basis, size(), size()); }

  double residual(const Mat& x) const { return residual_to_span(flat(), flatten(x)); }
  bool contains(const Mat& x, double tol = 1e-9) const { return residual(x) <= tol * std::max(1.0, x.norm()); }
  bool contains(const MatrixAlgebra& o, double tol = 1e-9) const {
    for (const auto& b : o.basis)
      if (!contains(b, tol)) return false;
    return true;
  }

  double bracket_residual() const {
    double worst = 0.0;
    RMat Q = flat();
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j)
        worst = std::max(worst, residual_to_span(Q, flatten(bracket(basis[i], basis[j]))));
    return worst;
  }
};

inline MatrixAlgebra make_span(int n, const std::vector<Mat>& mats, double rel = 1e-9) {
  MatrixAlgebra alg;
  alg.n = n;
  std::vector<Mat> nz;
  for (const auto& m : mats) {
    if (m.rows() != n + 2 || m.cols() != n + 2) throw ShapeError("algebra: matrix has wrong size");
    if (m.norm() > 1e-13) nz.push_back(m);
  }
  alg.basis = real_span(nz, rel);
  alg.unitary_sub = std::all_of(alg.basis.begin(), alg.basis.end(), [](const Mat& b) { return is_anti_hermitian(b); });
  return alg;
}

inline bool same_span(const MatrixAlgebra& a, const MatrixAlgebra& b, double tol = 1e-8) {
  return a.dim() == b.dim() && a.contains(b, tol) && b.contains(a, tol);
}

/// Smallest bracket-closed real span containing the seed.
inline MatrixAlgebra span_close(int n, const std::vector<Mat>& seed, double rel = 1e-9) {
  MatrixAlgebra alg = make_span(n, seed, rel);
  const int bound = 2 * (n + 2) * (n + 2);
  for (int pass = 0; pass <= bound; ++pass) {
    std::vector<Mat> all = alg.basis;
    const std::size_t k = alg.basis.size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) all.push_back(bracket(alg.basis[i], alg.basis[j]));
    MatrixAlgebra next = make_span(n, all, rel);
    if (next.dim() == alg.dim()) return alg;
    if (next.dim() > bound) break;
    alg = next;
  }
  throw IterationError("span_close: did not stabilize");
}

/// Real form { (x + sigma(x))/2 } of the complex span of the given matrices.
inline MatrixAlgebra real_form_of_complex_span(int n, const std::vector<Mat>& mats, double rel = 1e-9) {
  std::vector<Mat> r;
  for (const auto& m : mats) {
    Mat im = I * m;
    r.push_back(0.5 * (m + sigma_any(m)));
    r.push_back(0.5 * (im + sigma_any(im)));
  }
  return make_span(n, r, rel);
}

enum class Summand { C_plus_un, un, Cn_iR, iR };

inline Mat project(const Mat& m, Summand t) {
  ABZC x = ABZC::decompose(m);
  const int n = x.n();
  ABZC y = ABZC::zero(n);
  switch (t) {
    case Summand::C_plus_un:
      y.a = x.a;
      y.A = x.A;
      break;
    case Summand::un:
      y.A = x.A;
      break;
    case Summand::Cn_iR:
      y.Z = x.Z;
      y.c = x.c;
      break;
    case Summand::iR:
      y.c = x.c;
      break;
  }
  return y.embed();
}

inline MatrixAlgebra projection(const MatrixAlgebra& alg, Summand t) {
  std::vector<Mat> out;
  for (const auto& b : alg.basis) {
    if (!parabolic_pattern(b)) throw PatternError("projection: algebra is not parabolic");
    out.push_back(project(b, t));
  }
  return make_span(alg.n, out);
}

/// Full u(1,n+1)_{Cp}.
inline std::vector<Mat> parabolic_basis(int n) {
  std::vector<Mat> b;
  auto push = [&](const ABZC& x) { b.push_back(x.embed()); };
  ABZC x = ABZC::zero(n);
  x.a = 1.0;
  push(x);
  x.a = I;
  push(x);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ABZC y = ABZC::zero(n);
      if (i == j) {
        y.A(i, i) = I;
        push(y);
      } else {
        y.A(i, j) = 1.0;
        y.A(j, i) = -1.0;
        push(y);
        y.A(i, j) = I;
        y.A(j, i) = I;
        push(y);
      }
    }
  for (int i = 0; i < n; ++i) {
    ABZC y = ABZC::zero(n);
    y.Z(i) = 1.0;
    push(y);
    y.Z(i) = I;
    push(y);
  }
  ABZC y = ABZC::zero(n);
  y.c = 1.0;
  push(y);
  return b;
}

inline Mat iR_element(int n) {
  ABZC y = ABZC::zero(n);
  y.c = 1.0;
  return y.embed();
}

struct FalsifierResult {
  bool found = false;
  Mat subspace;  // columns
};

/// Randomized search for a proper nondegenerate invariant complex subspace. Not finding one proves nothing.
inline FalsifierResult weak_irreducibility_falsifier(const MatrixAlgebra& alg, int trials = 64, unsigned seed = 1) {
  const int N = alg.size();
  const Mat G = witt_gram(alg.n);
  auto invariant_hull = [&](const Mat& start) {
    Mat W = column_span_complex(start);
    for (int it = 0; it <= N; ++it) {
      Mat cat(N, W.cols() * (1 + alg.dim()));
      cat.leftCols(W.cols()) = W;
      for (int k = 0; k < alg.dim(); ++k) cat.block(0, W.cols() * (k + 1), N, W.cols()) = alg.basis[k] * W;
      Mat W2 = column_span_complex(cat);
      if (W2.cols() == W.cols()) return W2;
      W = W2;
    }
    return W;
  };
  auto perp = [&](const Mat& W) { return W.cols() ? null_space_complex(W.adjoint() * G) : Mat(Mat::Identity(N, N)); };
  auto proper_nondegenerate = [&](const Mat& W) {
    if (W.cols() == 0 || W.cols() == N) return false;
    Eigen::JacobiSVD<Mat> svd(W.adjoint() * G * W);
    return svd.singularValues().minCoeff() > 1e-8;
  };
  auto invariant = [&](const Mat& W) {
    for (const auto& b : alg.basis) {
      Mat r = b * W;
      if ((r - W * (W.adjoint() * r)).norm() > 1e-8 * std::max(1.0, r.norm())) return false;
    }
    return true;
  };
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec> starts;
  for (int i = 0; i < N; ++i) starts.push_back(Vec::Unit(N, i));
  for (int t = 0; t < trials; ++t) {
    Vec v(N);
    for (int i = 0; i < N; ++i) v(i) = cplx(g(rng), g(rng));
    starts.push_back(v);
  }
  for (const auto& v : starts) {
    Mat W = invariant_hull(v);
    Mat Wp = perp(W);
    Mat cands[4];
    cands[0] = W;
    cands[1] = column_span_complex(Wp);
    Mat sum(N, W.cols() + Wp.cols());
    sum << W, Wp;
    cands[2] = column_span_complex(sum);
    // intersection W n W^perp = vectors of W orthogonal to W
    Mat ker = W.cols() ? null_space_complex(W.adjoint() * G * W) : Mat(N, 0);
    cands[3] = column_span_complex(W * ker);
    for (auto& c : cands)
      if (proper_nondegenerate(c) && invariant(c)) return {true, c};
  }
  return {};
}

}  // namespace lkh
