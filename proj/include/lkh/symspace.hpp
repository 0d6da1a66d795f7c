#pragma once

// Lorentz-Kahler symmetric spaces from a pair (g, R): the transvection algebra h = g + m,
// the six canonical pairs with g inside u(1,n+1)_{Cp}, and their checks.

#include <cstdio>
#include <string>
#include <vector>

#include "lkh/classify.hpp"
#include "lkh/curvspace.hpp"

namespace lkh {

/// A slot whose value the display only fixes through a relation; the solver decides it.
struct ForcedEntry {
  int i = 0, j = 0;
  Mat printed;  // what the relation as written gives
  Mat forced;   // what the invariants give
  bool agrees = false;
};

struct SymmetricPair {
  int n = 0;
  char family = '?';
  int m = 0;
  MatrixAlgebra g;
  CurvatureMap R;  // R^{1,0}(b_i, conj b_j) on the Witt basis
  std::vector<ForcedEntry> forced;
  std::string relation_note;
};

/// R(X, Y) = R(X, conj Y) - R(Y, conj X) for X, Y in C^{1,n+1} seen as the real tangent space.
inline Mat real_curvature(const CurvatureMap& R, const Vec& X, const Vec& Y) {
  const int N = R.N;
  Mat out = Mat::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      cplx c = X(i) * std::conj(Y(j)) - Y(i) * std::conj(X(j));
      if (c != cplx{}) out += c * R(i, j);
    }
  return out;
}

/// Real basis b_0, i b_0, b_1, i b_1, ... of m.
inline std::vector<Vec> m_basis(int N) {
  std::vector<Vec> out;
  for (int i = 0; i < N; ++i) {
    out.push_back(Vec::Unit(N, i));
    out.push_back(I * Vec::Unit(N, i));
  }
  return out;
}

/// (xi . R)(b_i, conj b_j) = [xi, R(i,j)] - R(xi b_i, conj b_j) - R(b_i, conj(xi b_j)); max norm over i, j.
inline double invariance_residual(const CurvatureMap& R, const Mat& xi) {
  const int N = R.N;
  double worst = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Mat t = bracket(xi, R(i, j));
      for (int k = 0; k < N; ++k) {
        if (xi(k, i) != cplx{}) t -= xi(k, i) * R(k, j);
        if (xi(k, j) != cplx{}) t -= std::conj(xi(k, j)) * R(i, k);
      }
      worst = std::max(worst, t.norm());
    }
  return worst;
}

/// Span of R(m, m) as a real algebra.
inline MatrixAlgebra curvature_span(const CurvatureMap& R, int n) {
  auto mb = m_basis(R.N);
  std::vector<Mat> vals;
  for (std::size_t a = 0; a < mb.size(); ++a)
    for (std::size_t b = a + 1; b < mb.size(); ++b) vals.push_back(real_curvature(R, mb[a], mb[b]));
  return make_span(n, vals);
}

struct TransvectionAlgebra {
  int g_dim = 0, m_dim = 0;
  std::vector<std::vector<RVec>> C;  // [e_a, e_b] = sum_c C[a][b](c) e_c; g first, then m
  double jacobi_residual = 0.0;
  double R_residual = 0.0;     // |[X, Y]_g + R(X, Y)| over m basis pairs
  double g_span_residual = 0.0;  // how far R(m, m) and [g, g] stick out of g
  bool g_equals_RmM = false;

  int dim() const { return g_dim + m_dim; }
};

namespace detail {

struct GCoords {
  RMat B;  // flattened g basis as columns
  Eigen::ColPivHouseholderQR<RMat> qr;
  explicit GCoords(const MatrixAlgebra& g) : B(g.basis.empty() ? RMat(0, 0) : flatten_all(g.basis, g.basis[0].rows(), g.basis[0].cols())) {
    if (B.cols()) qr.compute(B);
  }
  /// coordinates and the residual of the projection
  std::pair<RVec, double> operator()(const Mat& x) const {
    RVec f = flatten(x);
    if (B.cols() == 0) return {RVec(0), f.norm()};
    RVec c = qr.solve(f);
    return {c, (B * c - f).norm()};
  }
};

}  // namespace detail

inline TransvectionAlgebra build_transvection(const SymmetricPair& p, double tol = 1e-10) {
  const int N = p.n + 2;
  const auto& gb = p.g.basis;
  auto mb = m_basis(N);
  TransvectionAlgebra t;
  t.g_dim = static_cast<int>(gb.size());
  t.m_dim = 2 * N;
  const int D = t.dim();
  detail::GCoords gc(p.g);
  auto m_coords = [&](const Vec& v) {
    RVec r(2 * N);
    for (int i = 0; i < N; ++i) {
      r(2 * i) = v(i).real();
      r(2 * i + 1) = v(i).imag();
    }
    return r;
  };
  t.C.assign(D, std::vector<RVec>(D, RVec::Zero(D)));
  double stick = 0.0;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      RVec out = RVec::Zero(D);
      if (a < t.g_dim && b < t.g_dim) {
        auto [c, res] = gc(bracket(gb[a], gb[b]));
        stick = std::max(stick, res);
        out.head(t.g_dim) = c;
      } else if (a < t.g_dim) {
        out.tail(t.m_dim) = m_coords(gb[a] * mb[b - t.g_dim]);
      } else if (b < t.g_dim) {
        out.tail(t.m_dim) = -m_coords(gb[b] * mb[a - t.g_dim]);
      } else {
        Mat r = real_curvature(p.R, mb[a - t.g_dim], mb[b - t.g_dim]);
        auto [c, res] = gc(-r);
        stick = std::max(stick, res);
        out.head(t.g_dim) = c;
        if (t.g_dim) {
          Mat back = Mat::Zero(N, N);
          for (int k = 0; k < t.g_dim; ++k) back += c(k) * gb[k];
          t.R_residual = std::max(t.R_residual, (back + r).norm());
        } else {
          t.R_residual = std::max(t.R_residual, r.norm());
        }
      }
      t.C[a][b] = out;
    }
  t.g_span_residual = stick;
  auto br = [&](const RVec& x, const RVec& y) {
    RVec out = RVec::Zero(D);
    for (int a = 0; a < D; ++a) {
      if (x(a) == 0.0) continue;
      for (int b = 0; b < D; ++b)
        if (y(b) != 0.0) out += x(a) * y(b) * t.C[a][b];
    }
    return out;
  };
  double worst = 0.0;
  for (int a = 0; a < D; ++a)
    for (int b = a + 1; b < D; ++b)
      for (int c = b + 1; c < D; ++c) {
        RVec ea = RVec::Unit(D, a), eb = RVec::Unit(D, b), ec = RVec::Unit(D, c);
        RVec j = br(t.C[a][b], ec) + br(t.C[b][c], ea) + br(t.C[c][a], eb);
        worst = std::max(worst, j.norm());
      }
  t.jacobi_residual = worst;
  t.g_equals_RmM = same_span(curvature_span(p.R, p.n), p.g);
  if (worst > tol || stick > 1e-8) throw ValidationError("build_transvection: invalid pair (Jacobi residual " + std::to_string(worst) + ")");
  return t;
}

namespace detail {

inline Mat unit(int N, int i, int j, cplx v = 1.0) {
  Mat E = Mat::Zero(N, N);
  E(i, j) = v;
  return E;
}

inline RVec flat_map(const CurvatureMap& R) {
  const int N = R.N;
  RVec v(2 * N * N * N * N);
  int k = 0;
  for (const auto& M : R.M)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        v(k++) = M(i, j).real();
        v(k++) = M(i, j).imag();
      }
  return v;
}

/// Element of R(g) agreeing with `target` on every slot except the `free` ones; returns it and the misfit.
inline std::pair<CurvatureMap, double> solve_free_slots(const MatrixAlgebra& g, const CurvatureMap& target,
                                                       const std::vector<std::pair<int, int>>& free) {
  const int N = target.N, blk = 2 * N * N;
  auto space = solve_curvature_space(g);
  std::vector<int> rows;
  for (int s = 0; s < N * N; ++s) {
    bool is_free = false;
    for (auto [i, j] : free) is_free = is_free || s == i * N + j;
    if (!is_free)
      for (int r = 0; r < blk; ++r) rows.push_back(s * blk + r);
  }
  RVec t = flat_map(target);
  RVec b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) b(r) = t(rows[r]);
  if (space.empty()) return {CurvatureMap::zero(N), b.norm()};
  RMat A(rows.size(), space.size());
  for (std::size_t s = 0; s < space.size(); ++s) {
    RVec f = flat_map(space[s]);
    for (std::size_t r = 0; r < rows.size(); ++r) A(r, s) = f(rows[r]);
  }
  RVec x = A.colPivHouseholderQr().solve(b);
  CurvatureMap out = CurvatureMap::zero(N);
  for (std::size_t s = 0; s < space.size(); ++s) out = out + x(s) * space[s];
  for (auto& M : out.M)
    for (auto& z : M.reshaped()) z = cplx(std::abs(z.real()) < 1e-13 ? 0.0 : z.real(), std::abs(z.imag()) < 1e-13 ? 0.0 : z.imag());
  return {out, (A * x - b).norm()};
}

/// Listed values plus their reality partners M(j,i) = G M(i,j)^* G; everything else zero.
inline CurvatureMap complete_by_reality(int N, const std::vector<std::tuple<int, int, Mat>>& listed) {
  CurvatureMap R = CurvatureMap::zero(N);
  const Mat G = witt_gram(N - 2);
  for (const auto& [i, j, M] : listed) R(i, j) = M;
  for (const auto& [i, j, M] : listed)
    if (i != j) R(j, i) = G * M.adjoint() * G;
  return R;
}

}  // namespace detail

/// The six pairs a)-f). a)-c) need n = 0, d) and e) n = 1, f) any n >= 1 with 0 <= m <= n.
inline SymmetricPair canonical_pair(char family, int n, int m = 0) {
  SymmetricPair p;
  p.family = family;
  p.n = n;
  p.m = m;
  const int N = n + 2, q = N - 1;
  using detail::unit;
  std::vector<std::tuple<int, int, Mat>> listed, relation;
  std::vector<Mat> gens;
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
  };
  switch (family) {
    case 'a':
    case 'b':
      need(n == 0, "pairs a), b) live on C^{1,1} (n = 0)");
      gens = {iR_element(0)};
      listed = {{q, q, unit(N, 0, q)}};
      break;
    case 'c':
      need(n == 0, "pair c) lives on C^{1,1} (n = 0)");
      gens = {k_element(0, 1.0, Mat()), k_element(0, I, Mat())};
      listed = {{0, q, unit(N, 0, 0)}};
      break;
    case 'd':
    case 'e': {
      need(n == 1, "pairs d), e) need n = 1");
      ABZC x = ABZC::zero(1);
      x.Z(0) = 1.0;
      gens = {x.embed(), iR_element(1)};
      listed = {{1, q, unit(N, 0, q, -I)}, {q, q, unit(N, 0, 1, -I) + unit(N, 1, q, I)}};
      break;
    }
    case 'f': {
      need(n >= 1 && 0 <= m && m <= n, "pair f) needs n >= 1 and 0 <= m <= n");
      ABZC a = ABZC::zero(n);
      a.a = 2.0 * I;
      for (int j = 0; j < n; ++j) a.A(j, j) = j < m ? I : 2.0 * I;
      gens = {a.embed(), iR_element(n)};
      for (int j = 0; j < m; ++j) {
        ABZC z = ABZC::zero(n);
        z.Z(j) = 1.0;
        gens.push_back(z.embed());
        z.Z(j) = I;
        gens.push_back(z.embed());
      }
      for (int k = m; k < n; ++k) {
        ABZC z = ABZC::zero(n);
        z.Z(k) = 1.0;
        gens.push_back(z.embed());
      }
      listed.push_back({0, q, unit(N, 0, q)});
      // R(p,q) = 2 R(e_j,e_j) = 1/2 R(e_k,e_k): the diagonal slots are left to the solver
      for (int j = 1; j <= m; ++j) {
        relation.push_back({j, j, unit(N, 0, q, 0.5)});
        listed.push_back({j, q, unit(N, j, q, 0.5)});
      }
      for (int k = m + 1; k <= n; ++k) {
        relation.push_back({k, k, unit(N, 0, q, 2.0)});
        listed.push_back({k, q, unit(N, k, q) - unit(N, 0, k)});
      }
      Mat Rqq = Mat::Identity(N, N);
      for (int j = 1; j <= m; ++j) Rqq(j, j) -= 0.5;
      listed.push_back({q, q, Rqq});
      break;
    }
    default:
      throw ValidationError(std::string("canonical_pair: unknown family '") + family + "'");
  }
  p.g = make_span(n, gens);
  p.R = detail::complete_by_reality(N, listed);
  if (!relation.empty()) {
    std::vector<std::pair<int, int>> free;
    for (const auto& [i, j, M] : relation) free.push_back({i, j});
    auto [R, res] = detail::solve_free_slots(p.g, p.R, free);
    if (res > 1e-9) throw ValidationError("canonical_pair: displayed values admit no invariant completion");
    p.R = R;
    bool all = true;
    std::string note;
    for (const auto& [i, j, M] : relation) {
      ForcedEntry e{i, j, M, p.R(i, j), (p.R(i, j) - M).norm() < 1e-9};
      all = all && e.agrees;
      if (!e.agrees) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "R(b%d,conj b%d): relation gives %g E_pq, invariants force %g E_pq; ", i, j,
                      M(0, q).real(), p.R(i, j)(0, q).real());
        note += buf;
      }
      p.forced.push_back(e);
    }
    p.relation_note = all ? "relation R(p,q) = 2R(e_j,e_j) = 1/2 R(e_k,e_k) consistent"
                          : "relation R(p,q) = 2R(e_j,e_j) = 1/2 R(e_k,e_k) inconsistent: " + note;
  }
  if (family == 'b' || family == 'e') p.R = -1.0 * p.R;
  return p;
}

struct PairConsistency {
  double lemma = 0, bianchi = 0, invariance = 0;
  double outside_g = 0;      // distance of the values from g (complexified)
  double fit_residual = 0;   // distance of the listed data from the solved space R(g)
  CurvatureMap nearest;      // closest element of R(g) to the listed data
  bool consistent = false;
};

/// Compares the pair's R with the solution space of the curvature equations for g.
inline PairConsistency pair_consistency(const SymmetricPair& p, double tol = 1e-10) {
  PairConsistency c;
  const Mat G = witt_gram(p.n);
  c.lemma = lemma_residual(p.R, G);
  c.bianchi = bianchi_residual(p.R, G);
  for (const auto& xi : p.g.basis) c.invariance = std::max(c.invariance, invariance_residual(p.R, xi));
  auto space = solve_curvature_space(p.g);
  const int N = p.R.N;
  auto flat = detail::flat_map;
  RVec target = flat(p.R);
  c.nearest = CurvatureMap::zero(N);
  if (!space.empty()) {
    RMat A(target.size(), space.size());
    for (std::size_t s = 0; s < space.size(); ++s) A.col(s) = flat(space[s]);
    RVec x = A.colPivHouseholderQr().solve(target);
    for (std::size_t s = 0; s < space.size(); ++s) c.nearest = c.nearest + x(s) * space[s];
    c.fit_residual = (A * x - target).norm();
  } else {
    c.fit_residual = target.norm();
  }
  // values in g tensor C
  std::vector<Mat> cb = p.g.basis;
  for (const auto& b : p.g.basis) cb.push_back(I * b);
  for (const auto& M : p.R.M) {
    if (cb.empty()) {
      c.outside_g = std::max(c.outside_g, M.norm());
      continue;
    }
    RMat B = flatten_all(cb, N, N);
    RVec f = flatten(M);
    RVec y = B.colPivHouseholderQr().solve(f);
    c.outside_g = std::max(c.outside_g, (B * y - f).norm());
  }
  c.consistent = c.lemma < tol && c.bianchi < tol && c.invariance < tol && c.outside_g < tol && c.fit_residual < 1e-8;
  return c;
}

struct SymspaceReport {
  bool jacobi = false;
  double jacobi_residual = 0;
  bool g_equals_RmM = false;
  bool ricci_degenerate = false;
  bool calabi_yau = false;
  Mat ricci;
  AlgebraDescriptor holonomy;  // match of g
  PairConsistency consistency;
  std::string irreducible_note;
};

inline SymspaceReport symspace_report(const SymmetricPair& p, double tol = 1e-10) {
  SymspaceReport r;
  r.consistency = pair_consistency(p, tol);
  try {
    TransvectionAlgebra t = build_transvection(p, tol);
    r.jacobi = true;
    r.jacobi_residual = t.jacobi_residual;
    r.g_equals_RmM = t.g_equals_RmM;
  } catch (const ValidationError&) {
    r.jacobi = false;
    r.g_equals_RmM = same_span(curvature_span(p.R, p.n), p.g);
  }
  r.ricci = ricci_of_map(p.R);
  Eigen::SelfAdjointEigenSolver<Mat> es(r.ricci);
  r.ricci_degenerate = es.eigenvalues().cwiseAbs().minCoeff() < 1e-9;
  r.calabi_yau = r.ricci.norm() < 1e-9;
  r.holonomy = match_algebra(p.g);
  r.irreducible_note = r.ricci_degenerate
                           ? "Ricci degenerate: h is not simple and g is not totally reducible"
                           : "Ricci non-degenerate: h is simple and g is totally reducible";
  return r;
}

/// The irreducible cases g = u(1,n+1); informational only, nothing is built for them.
inline std::vector<std::string> irreducible_symmetric_spaces(int n) {
  const std::string k = std::to_string(n + 2);
  return {"dS^" + k + "(C) = SU(1," + std::to_string(n + 2) + ")/U(1," + std::to_string(n + 1) + ")",
          "AdS^" + k + "(C) = SU(2," + std::to_string(n + 1) + ")/U(1," + std::to_string(n + 1) + ")"};
}

}  // namespace lkh
