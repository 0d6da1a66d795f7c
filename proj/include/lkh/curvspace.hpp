#pragma once

// Algebraic curvature tensors with values in g^C, the Berger test and the block codec.
//
// A map is stored by its values M(i, j) = R^{1,0}(b_i, conj(b_j)) on the basis b = (p, e_1..e_n, q).
// R(b_i, b_k) = R(conj b_i, conj b_k) = 0 and R(conj b_j, b_i) = -M(i, j).

#include <vector>

#include "lkh/lie.hpp"

namespace lkh {

struct CurvatureMap {
  int N = 0;  // dim V
  std::vector<Mat> M;

  static CurvatureMap zero(int N) { return {N, std::vector<Mat>(N * N, Mat::Zero(N, N))}; }
  Mat& operator()(int i, int j) { return M[i * N + j]; }
  const Mat& operator()(int i, int j) const { return M[i * N + j]; }
  double norm() const {
    double s = 0.0;
    for (const auto& m : M) s += m.squaredNorm();
    return std::sqrt(s);
  }
  friend CurvatureMap operator+(CurvatureMap a, const CurvatureMap& b) {
    for (std::size_t k = 0; k < a.M.size(); ++k) a.M[k] += b.M[k];
    return a;
  }
  friend CurvatureMap operator-(CurvatureMap a, const CurvatureMap& b) {
    for (std::size_t k = 0; k < a.M.size(); ++k) a.M[k] -= b.M[k];
    return a;
  }
  friend CurvatureMap operator*(double s, CurvatureMap a) {
    for (auto& m : a.M) m *= s;
    return a;
  }
  CurvatureMap negated() const { return -1.0 * (*this); }
};

/// sigma(xi) = -G xi^* G for a Hermitian gram G.
inline Mat sigma_with(const Mat& G, const Mat& xi) { return -G * xi.adjoint() * G; }

/// Residuals of the two defining conditions: M(i,j) = sigma(-M(j,i)) and M(i,j) b_k = M(k,j) b_i.
inline double lemma_residual(const CurvatureMap& R, const Mat& G) {
  const int N = R.N;
  double worst = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      worst = std::max(worst, (R(i, j) + sigma_with(G, R(j, i))).norm());
      for (int k = 0; k < N; ++k) worst = std::max(worst, (R(i, j).col(k) - R(k, j).col(i)).norm());
    }
  return worst;
}

/// First Bianchi identity on V^C = V + conj V with R(b_i, conj b_j) = diag(M, conj(sigma M)).
inline double bianchi_residual(const CurvatureMap& R, const Mat& G) {
  const int N = R.N;
  auto endo = [&](int u, int v) -> Mat {
    // u, v in 0..2N-1; < N holomorphic
    Mat E = Mat::Zero(2 * N, 2 * N);
    bool uh = u < N, vh = v < N;
    if (uh == vh) return E;
    int i = uh ? u : v, j = uh ? v - N : u - N;
    Mat T1 = R(i, j), T2 = sigma_with(G, T1).conjugate();
    E.topLeftCorner(N, N) = T1;
    E.bottomRightCorner(N, N) = T2;
    return uh ? E : Mat(-E);
  };
  double worst = 0.0;
  for (int x = 0; x < 2 * N; ++x)
    for (int y = 0; y < 2 * N; ++y)
      for (int z = 0; z < 2 * N; ++z) {
        Vec s = endo(x, y).col(z) + endo(y, z).col(x) + endo(z, x).col(y);
        worst = std::max(worst, s.norm());
      }
  return worst;
}

/// Basis (over R) of the space of maps with values in the complex span of `basis` satisfying the two conditions.
inline std::vector<CurvatureMap> solve_curvature_space(const std::vector<Mat>& basis, const Mat& G, double rel = 1e-9) {
  const int N = static_cast<int>(G.rows());
  const int d = static_cast<int>(basis.size());
  if (d == 0) return {};
  const int P = N * N;
  const int unknowns = 2 * P * d;
  const int rows1 = P * 2 * N * N;
  const int ntrip = N * N * (N - 1) / 2;
  const int rows2 = ntrip * 2 * N;
  RMat A = RMat::Zero(rows1 + rows2, unknowns);
  auto tri_index = [&](int j, int a, int k) {
    // a < k
    int idx = 0;
    for (int aa = 0; aa < a; ++aa) idx += N - 1 - aa;
    idx += k - a - 1;
    return j * (N * (N - 1) / 2) + idx;
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int s = 0; s < d; ++s)
        for (int part = 0; part < 2; ++part) {
          const int col = ((i * N + j) * d + s) * 2 + part;
          Mat W = (part ? I : cplx(1.0)) * basis[s];
          // condition 1 for (i, j) and for (j, i)
          A.block((i * N + j) * 2 * N * N, col, 2 * N * N, 1) += flatten(W);
          A.block((j * N + i) * 2 * N * N, col, 2 * N * N, 1) += flatten(sigma_with(G, W));
          // condition 2
          for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            int a = std::min(i, k), b = std::max(i, k);
            // row block (j, a, b) holds M(a,j) b_b - M(b,j) b_a
            double sign = (i == a) ? 1.0 : -1.0;
            Vec contrib = (i == a) ? Vec(W.col(b)) : Vec(W.col(a));
            RVec rc(2 * N);
            for (int t = 0; t < N; ++t) {
              rc(2 * t) = sign * contrib(t).real();
              rc(2 * t + 1) = sign * contrib(t).imag();
            }
            A.block(rows1 + tri_index(j, a, b) * 2 * N, col, 2 * N, 1) += rc;
          }
        }
  RMat K = null_space_qr(A, rel);
  std::vector<CurvatureMap> out;
  for (Eigen::Index c = 0; c < K.cols(); ++c) {
    CurvatureMap R = CurvatureMap::zero(N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Mat m = Mat::Zero(N, N);
        for (int s = 0; s < d; ++s) {
          const int base = ((i * N + j) * d + s) * 2;
          m += cplx(K(base, c), K(base + 1, c)) * basis[s];
        }
        R(i, j) = m;
      }
    out.push_back(std::move(R));
  }
  return out;
}

inline std::vector<CurvatureMap> solve_curvature_space(const MatrixAlgebra& alg, double rel = 1e-9) {
  return solve_curvature_space(alg.basis, witt_gram(alg.n), rel);
}

struct BergerResult {
  bool is_berger = false;
  int dim_R_space = 0;
  MatrixAlgebra generated;
};

/// Span of all values of all maps in the space, real form taken; Berger iff it is the whole algebra.
inline BergerResult berger_check(const MatrixAlgebra& alg) {
  BergerResult r;
  auto space = solve_curvature_space(alg);
  r.dim_R_space = static_cast<int>(space.size());
  std::vector<Mat> vals;
  for (const auto& R : space)
    for (const auto& m : R.M)
      if (m.norm() > 1e-12) vals.push_back(m);
  r.generated = real_form_of_complex_span(alg.n, vals);
  r.is_berger = same_span(r.generated, alg);
  return r;
}

/// Ric(b, c) = sum_a R^a_{c a conj(b)} = sum_a M(a, b)(a, c).
inline Mat ricci_of_map(const CurvatureMap& R) {
  const int N = R.N;
  Mat ric = Mat::Zero(N, N);
  for (int b = 0; b < N; ++b)
    for (int c = 0; c < N; ++c)
      for (int a = 0; a < N; ++a) ric(b, c) += R(a, b)(a, c);
  return ric;
}

/// u(n) as n x n matrices.
inline std::vector<Mat> un_basis(int n) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat A = Mat::Zero(n, n);
      if (i == j) {
        A(i, i) = I;
        out.push_back(A);
      } else {
        A(i, j) = 1.0;
        A(j, i) = -1.0;
        out.push_back(A);
        A(i, j) = I;
        A(j, i) = I;
        out.push_back(A);
      }
    }
  return out;
}

/// Block parameters of a map on u(1,n+1)_{Cp} (x) C.
struct CurvatureParam {
  int n = 0;
  cplx alpha{}, beta{};
  double c = 0.0;
  Vec N, K;
  Mat T;               // symmetric
  std::vector<Mat> P;  // P[k] = P(e_k), with P(e_k) e_l = P(e_l) e_k
  Mat A;               // Hermitian u-block of R(q, conj q)
  CurvatureMap R0;     // R(u(n)^C), maps on C^n

  static CurvatureParam zero(int n) {
    CurvatureParam p;
    p.n = n;
    p.N = p.K = Vec::Zero(n);
    p.T = p.A = Mat::Zero(n, n);
    p.P.assign(n, Mat::Zero(n, n));
    p.R0 = CurvatureMap::zero(n);
    return p;
  }

  /// Flat real vector (for round trips and JSON).
  RVec to_vector() const {
    std::vector<double> v{alpha.real(), alpha.imag(), beta.real(), beta.imag(), c};
    auto put = [&](const Mat& m) {
      RVec f = flatten(m);
      v.insert(v.end(), f.data(), f.data() + f.size());
    };
    put(N);
    put(K);
    put(T);
    for (const auto& m : P) put(m);
    put(A);
    for (const auto& m : R0.M) put(m);
    return Eigen::Map<RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
};

inline double param_invariant_residual(const CurvatureParam& p) {
  double r = (p.T - p.T.transpose()).norm() + (p.A - p.A.adjoint()).norm();
  for (int k = 0; k < p.n; ++k)
    for (int l = 0; l < p.n; ++l) r += (p.P[k].col(l) - p.P[l].col(k)).norm();
  if (p.n) r += lemma_residual(p.R0, Mat::Identity(p.n, p.n));
  return r;
}

inline CurvatureMap param_encode(const CurvatureParam& p) {
  const int n = p.n, N = n + 2, q = n + 1;
  if (param_invariant_residual(p) > 1e-9) throw ValidationError("param_encode: parameter invariants violated");
  const Mat G = witt_gram(n);
  CurvatureMap R = CurvatureMap::zero(N);
  // R(p, conj q)
  Mat& Mpq = R(0, q);
  Mpq(0, 0) = p.alpha;
  for (int k = 0; k < n; ++k) Mpq(0, 1 + k) = p.N(k);
  Mpq(0, q) = p.beta;
  // R(q, conj q)
  Mat& Mqq = R(q, q);
  Mqq(0, 0) = p.beta;
  for (int k = 0; k < n; ++k) {
    Mqq(0, 1 + k) = std::conj(p.K(k));
    Mqq(1 + k, q) = p.K(k);
  }
  Mqq(0, q) = cplx(p.c, 0.0);
  if (n) Mqq.block(1, 1, n, n) = p.A;
  Mqq(q, q) = std::conj(p.beta);
  // R(e_k, conj q)
  for (int k = 0; k < n; ++k) {
    Mat& M = R(1 + k, q);
    M(0, 0) = p.N(k);
    for (int m = 0; m < n; ++m) M(0, 1 + m) = p.T(k, m);
    M(0, q) = std::conj(p.K(k));
    M.block(1, 1, n, n) = p.P[k];
    M.block(1, q, n, 1) = p.A.col(k);
  }
  // reversed via reality
  R(q, 0) = -sigma_with(G, R(0, q));
  for (int k = 0; k < n; ++k) R(q, 1 + k) = -sigma_with(G, R(1 + k, q));
  // R(e_k, conj e_l)
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      Mat& M = R(1 + k, 1 + l);
      for (int m = 0; m < n; ++m) M(0, 1 + m) = p.P[k](l, m);
      M.block(1, 1, n, n) = p.R0(k, l);
      M.col(q) = R(q, 1 + l).col(1 + k);
    }
  return R;
}

inline CurvatureParam param_decode(const CurvatureMap& R, double tol = 1e-9) {
  const int N = R.N, n = N - 2, q = n + 1;
  CurvatureParam p = CurvatureParam::zero(n);
  const Mat& Mpq = R(0, q);
  p.alpha = Mpq(0, 0);
  p.beta = Mpq(0, q);
  for (int k = 0; k < n; ++k) p.N(k) = Mpq(0, 1 + k);
  const Mat& Mqq = R(q, q);
  p.c = Mqq(0, q).real();
  if (n) {
    p.A = Mqq.block(1, 1, n, n);
    p.K = Mqq.block(1, q, n, 1);
  }
  for (int k = 0; k < n; ++k) {
    const Mat& M = R(1 + k, q);
    for (int m = 0; m < n; ++m) p.T(k, m) = M(0, 1 + m);
    p.P[k] = M.block(1, 1, n, n);
    for (int l = 0; l < n; ++l) p.R0(k, l) = R(1 + k, 1 + l).block(1, 1, n, n);
  }
  if (param_invariant_residual(p) > tol * std::max(1.0, R.norm()))
    throw PatternError("param_decode: blocks violate the parameter symmetries");
  if ((param_encode(p) - R).norm() > tol * std::max(1.0, R.norm()))
    throw PatternError("param_decode: map is not in R(u(1,n+1)_{Cp} (x) C)");
  return p;
}

/// Real dimension of the parameter space: alpha, beta, c, N, K, T, P, A, R0.
inline int param_dimension(int n) {
  const int r0 = n ? static_cast<int>(solve_curvature_space(un_basis(n), Mat::Identity(n, n)).size()) : 0;
  return 2 + 2 + 1 + 2 * n + 2 * n + n * (n + 1) + n * n * (n + 1) + n * n + r0;
}

}  // namespace lkh
