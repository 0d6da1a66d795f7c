#pragma once

// Metric jets in complex Walker coordinates (v, z^1..z^n, u), Christoffel symbols, curvature,
// covariant derivatives, the Witt frame and the infinitesimal holonomy at the base point.
//
// h(a, b) is h_{conj(a) b}; for vector fields X, Y the form is h(X, Y) = Y^* h X.

#include <map>
#include <optional>
#include <vector>

#include "lkh/curvspace.hpp"
#include "lkh/hermitian.hpp"
#include "lkh/jetmat.hpp"
#include "lkh/lie.hpp"

namespace lkh {

struct MetricJet {
  int n = 0;
  JetMatrix h;
  std::vector<cplx> base;  // chart point the jets are expanded at
  bool walker_form = false;

  int N() const { return n + 2; }
  int d() const { return n + 2; }
  int order() const { return h.order(); }
};

/// f(z0 + w) as a jet in w; exact for polynomial jets.
inline Jet recenter(const Jet& f, std::span<const cplx> z0) {
  const int d = f.num_coords(), ord = f.order();
  bool zero = std::all_of(z0.begin(), z0.end(), [](cplx c) { return c == cplx{}; });
  if (z0.empty() || zero) return f;
  if (static_cast<int>(z0.size()) != d) throw ShapeError("recenter: point has wrong dimension");
  // (c + w)^e for each variable, cached by exponent
  std::map<std::pair<int, int>, Jet> pw;
  auto power = [&](int var, int e) -> const Jet& {
    auto key = std::pair{var, e};
    auto it = pw.find(key);
    if (it != pw.end()) return it->second;
    Var v = var < d ? holo(var) : anti(var - d);
    cplx c = var < d ? z0[var] : std::conj(z0[var - d]);
    Jet base = Jet::variable(d, ord, v) + Jet::constant(d, ord, c);
    Jet r = Jet::constant(d, ord, 1.0);
    for (int k = 0; k < e; ++k) r = r * base;
    return pw.emplace(key, r).first->second;
  };
  Jet out(d, ord);
  for (const auto& t : f.terms()) {
    Jet m = Jet::constant(d, ord, t.c);
    for (int var = 0; var < 2 * d; ++var) {
      Var v = var < d ? holo(var) : anti(var - d);
      int e = Jet::exponent(d, t.key, v);
      if (e) m = m * power(var, e);
    }
    out += m;
  }
  out.set_real_valued(f.real_valued());
  return out;
}

inline double hermitian_residual(const JetMatrix& h) { return (h - h.adjoint()).max_abs(); }

/// max over a, b, c of |d_a h_{conj b, c} - d_c h_{conj b, a}|.
inline double kahler_residual(const JetMatrix& h) {
  const int N = h.rows();
  double worst = 0.0;
  for (int b = 0; b < N; ++b)
    for (int a = 0; a < N; ++a)
      for (int c = a + 1; c < N; ++c) {
        worst = std::max(worst, (h(b, c).derivative(holo(a)) - h(b, a).derivative(holo(c))).max_abs());
      }
  return worst;
}

/// Walker pattern: h_{conj v, v} = h_{conj v, k} = 0 (and their conjugates), h_{conj u, v} != 0 at the base.
inline bool detect_walker(const JetMatrix& h, double tol = 1e-12) {
  const int N = h.rows(), u = N - 1;
  for (int k = 0; k < u; ++k)
    if (!h(0, k).is_zero(tol) || !h(k, 0).is_zero(tol)) return false;
  return std::abs(h(u, 0).constant_term()) > tol;
}

/// Coordinate dependence of the Walker coefficients.
inline bool walker_dependence_ok(const JetMatrix& h, double tol = 1e-12) {
  const int N = h.rows(), n = N - 2, u = N - 1;
  auto indep = [&](const Jet& j, std::initializer_list<Var> vs) {
    for (Var v : vs)
      if (j.depends_on(v, tol)) return false;
    return true;
  };
  std::vector<Var> zs;
  for (int k = 1; k <= n; ++k) zs.push_back(holo(k));
  bool ok = indep(h(0, u), {holo(0)});  // h_{conj v, u}(conj v, conj z, u, conj u)
  for (Var z : zs) ok = ok && indep(h(0, u), {z});
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) ok = ok && indep(h(j, k), {holo(0), anti(0)});
  for (int k = 1; k <= n; ++k) ok = ok && indep(h(k, u), {holo(0)});
  return ok;
}

inline MetricJet metric_from_matrix(const JetMatrix& h, std::vector<cplx> base = {}) {
  const int N = h.rows();
  if (N < 2 || h.cols() != N || h.num_coords() != N) throw ShapeError("metric: needs an (n+2)x(n+2) matrix over n+2 coordinates");
  MetricJet m;
  m.n = N - 2;
  m.h = h;
  m.base = base.empty() ? std::vector<cplx>(N, cplx{}) : std::move(base);
  if (std::abs(h.value().determinant()) < 1e-12) throw DegeneracyError("metric: degenerate at the base point");
  m.walker_form = detect_walker(h);
  return m;
}

/// h_{conj a, b} = d_{conj a} d_b f.
inline MetricJet metric_from_potential(const Jet& f, std::vector<cplx> base = {}) {
  const int d = f.num_coords();
  if (!f.is_real(1e-12)) throw ValidationError("metric_from_potential: potential is not real");
  Jet g = base.empty() ? f : recenter(f, base);
  JetMatrix h(d, d, d, std::max(g.order() - 2, 0));
  for (int a = 0; a < d; ++a) {
    Jet da = g.derivative(anti(a));
    for (int b = 0; b < d; ++b) h(a, b) = da.derivative(holo(b));
  }
  return metric_from_matrix(h, std::move(base));
}

/// W(a, b) = h^{conj a, b} from the Walker formulas; h^{conj a b} h_{conj a c} = delta.
inline JetMatrix walker_inverse(const MetricJet& m) {
  if (!m.walker_form) throw PreconditionError("walker_inverse: metric is not in Walker form");
  const int n = m.n, N = m.N(), u = N - 1, d = m.d(), ord = m.order();
  const JetMatrix& h = m.h;
  Jet inv_vu = reciprocal(h(0, u));                     // 1 / h_{conj v u}
  Jet abs2 = reciprocal(h(u, 0) * h(0, u));              // 1 / |h_{conj u v}|^2
  JetMatrix W(N, N, d, ord);
  JetMatrix ht = n ? jet_inverse(h.block(1, 1, n, n)) : JetMatrix();
  // tilde h^{conj j k}: transpose of the matrix inverse
  auto hinv = [&](int j, int k) -> const Jet& { return ht(k - 1, j - 1); };
  Jet s(d, ord);
  for (int l = 1; l <= n; ++l)
    for (int j = 1; j <= n; ++j) s += h(l, u) * hinv(l, j) * h(u, j);
  W(0, 0) = abs2 * (s - h(u, u));
  W(0, u) = inv_vu;
  W(u, 0) = inv_vu.conjugate();
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) W(j, k) = hinv(j, k);
  for (int k = 1; k <= n; ++k) {
    Jet acc(d, ord);
    for (int j = 1; j <= n; ++j) acc += h(j, u) * hinv(j, k);
    W(0, k) = -(inv_vu * acc);
    W(k, 0) = W(0, k).conjugate();
  }
  return W;
}

/// Gamma[c](a, b) = Gamma^a_{bc} = h^{conj d a} d_c h_{conj d b}.
inline std::vector<JetMatrix> christoffel(const MetricJet& m) {
  JetMatrix K = jet_inverse(m.h);
  std::vector<JetMatrix> G;
  for (int c = 0; c < m.N(); ++c) G.push_back(K * m.h.derivative(holo(c)));
  return G;
}

struct CurvatureField {
  int N = 0;
  std::vector<JetMatrix> R;  // R[c * N + d] = R(d_c, d_{conj d}) as an endomorphism of T^{1,0}

  const JetMatrix& operator()(int c, int d) const { return R[c * N + d]; }
  /// R^a_{b c conj d}
  const Jet& component(int a, int b, int c, int d) const { return (*this)(c, d)(a, b); }
};

inline CurvatureField curvature(const std::vector<JetMatrix>& gamma) {
  CurvatureField F;
  F.N = static_cast<int>(gamma.size());
  for (int c = 0; c < F.N; ++c)
    for (int d = 0; d < F.N; ++d) F.R.push_back(gamma[c].derivative(anti(d)) * cplx(-1.0));
  return F;
}

inline CurvatureField curvature(const MetricJet& m) { return curvature(christoffel(m)); }

/// nabla_{d_c} xi = d_c xi + [Gamma_c, xi],  nabla_{d_{conj c}} xi = d_{conj c} xi.
inline JetMatrix covariant_derivative(const JetMatrix& xi, const std::vector<JetMatrix>& gamma, Var dir) {
  if (xi.order() < 1) throw InsufficientOrderError("covariant_derivative: jet order exhausted; use a larger truncation");
  if (dir.kind == Kind::anti) return xi.derivative(dir);
  const JetMatrix& G = gamma.at(dir.coord);
  return xi.derivative(dir) + commutator(G, xi);
}

/// Frame columns p, e_1..e_n, q in coordinates.
inline JetMatrix witt_frame(const MetricJet& m) {
  if (!m.walker_form) throw PreconditionError("witt_frame: metric is not in Walker form");
  const int n = m.n, N = m.N(), u = N - 1, d = m.d(), ord = m.order();
  const JetMatrix& h = m.h;
  Jet inv_uv = reciprocal(h(u, 0));  // 1 / h_{conj u v}
  JetMatrix F(N, N, d, ord);
  F(0, 0) = inv_uv;
  if (n) {
    JetMatrix ht = h.block(1, 1, n, n);
    Mat h0 = ht.value();
    Eigen::SelfAdjointEigenSolver<Mat> es(h0);
    if (es.eigenvalues().minCoeff() <= 1e-12) throw DegeneracyError("witt_frame: h_{conj j k} is not positive definite");
    JetMatrix C = jet_inverse(jet_hermitian_sqrt(ht));
    for (int j = 0; j < n; ++j) {
      Jet pv(d, ord);
      for (int k = 0; k < n; ++k) {
        F(1 + k, 1 + j) = C(k, j);
        pv -= C(k, j) * h(u, 1 + k) * inv_uv;
      }
      F(0, 1 + j) = pv;
    }
  }
  F(u, u) = Jet::constant(d, ord, 1.0);
  F(0, u) = h(u, u) * inv_uv * cplx(-0.5);
  return F;
}

/// Curvature at the base point as a map R^{1,0}(b_i, conj b_j) in the Witt frame.
inline CurvatureMap curvature_map_at_base(const MetricJet& m, const CurvatureField& R) {
  const int N = m.N();
  Mat F0 = witt_frame(m).value();
  Mat Fi = F0.inverse();
  CurvatureMap out = CurvatureMap::zero(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Mat acc = Mat::Zero(N, N);
      for (int c = 0; c < N; ++c)
        for (int dd = 0; dd < N; ++dd) {
          cplx w = F0(c, i) * std::conj(F0(dd, j));
          if (w != cplx{}) acc += w * R(c, dd).value();
        }
      out(i, j) = Fi * acc * F0;
    }
  return out;
}

inline CurvatureMap curvature_map_at_base(const MetricJet& m) { return curvature_map_at_base(m, curvature(m)); }

/// Ric(b, c) = R_{conj b c} = R^a_{c a conj b}.
inline JetMatrix ricci(const CurvatureField& R) {
  const int N = R.N;
  const int d = R.R.front().num_coords(), ord = R.R.front().order();
  JetMatrix ric(N, N, d, ord);
  for (int b = 0; b < N; ++b)
    for (int c = 0; c < N; ++c)
      for (int a = 0; a < N; ++a) ric(b, c) += R(a, b)(a, c);
  return ric;
}

inline JetMatrix ricci(const MetricJet& m) { return ricci(curvature(m)); }

namespace detail {

using SparseVec = std::vector<std::pair<std::pair<int, Jet::Key>, cplx>>;

inline SparseVec sparse_of(const JetMatrix& x, int order) {
  SparseVec v;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j)
      for (const auto& t : x(i, j).terms())
        if (t.deg <= order && t.c != cplx{}) v.push_back({{i * x.cols() + j, t.key}, t.c});
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

inline cplx sdot(const SparseVec& a, const SparseVec& b) {
  // sum conj(a) b
  cplx s{};
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) ++ia;
    else if (ib->first < ia->first) ++ib;
    else {
      s += std::conj(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

inline SparseVec saxpy(const SparseVec& x, cplx a, const SparseVec& y) {
  // x - a y
  SparseVec r;
  auto ix = x.begin(), iy = y.begin();
  while (ix != x.end() || iy != y.end()) {
    if (iy == y.end() || (ix != x.end() && ix->first < iy->first)) r.push_back(*ix++);
    else if (ix == x.end() || iy->first < ix->first) {
      r.push_back({iy->first, -a * iy->second});
      ++iy;
    } else {
      r.push_back({ix->first, ix->second - a * iy->second});
      ++ix;
      ++iy;
    }
  }
  return r;
}

inline double snorm(const SparseVec& a) { return std::sqrt(std::abs(sdot(a, a))); }

/// Complex Gram-Schmidt over sparse vectors.
struct SparseBasis {
  std::vector<SparseVec> q;
  double rel = 1e-9;
  bool add(SparseVec v) {
    double n0 = snorm(v);
    if (n0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) v = saxpy(v, sdot(b, v), b);
    double n1 = snorm(v);
    if (n1 <= rel * n0) return false;
    for (auto& e : v) e.second /= n1;
    q.push_back(std::move(v));
    return true;
  }
};

}  // namespace detail

struct HolonomyReport {
  MatrixAlgebra algebra;          // in the Witt frame at the base point
  std::vector<int> dims_by_order;  // after including derivatives of order <= r
  bool stabilized = false;
  int r_max = 0;
  int jets_kept = 0;
};

/// Span of all covariant derivatives of curvature endomorphisms up to order r_max, at the base point,
/// real form taken and bracket-closed.
inline HolonomyReport infinitesimal_holonomy(const MetricJet& m, int r_max) {
  if (r_max < 0) throw PreconditionError("infinitesimal_holonomy: r_max must be >= 0");
  if (m.order() < r_max + 2)
    throw InsufficientOrderError("infinitesimal_holonomy: metric jet order " + std::to_string(m.order()) +
                                 " is below r_max + 2 = " + std::to_string(r_max + 2));
  const int N = m.N(), n = m.n;
  auto gamma = christoffel(m);
  CurvatureField R = curvature(gamma);
  Mat F0 = witt_frame(m).value();
  Mat Fi = F0.inverse();
  const int top = m.order() - 2;  // order of the curvature jets

  HolonomyReport rep;
  rep.r_max = r_max;
  std::vector<JetMatrix> kept;   // all kept jets
  std::vector<int> kept_level;
  std::vector<Mat> values;
  std::vector<JetMatrix> frontier = R.R;
  for (int r = 0; r <= r_max; ++r) {
    const int ord = top - r;
    detail::SparseBasis basis;
    for (const auto& k : kept) basis.add(detail::sparse_of(k, ord));
    std::vector<JetMatrix> fresh;
    for (const auto& x : frontier)
      if (basis.add(detail::sparse_of(x, ord))) {
        fresh.push_back(x.truncated(ord));
        values.push_back(Fi * x.value() * F0);
      }
    for (const auto& x : fresh) {
      kept.push_back(x);
      kept_level.push_back(r);
    }
    rep.algebra = span_close(n, real_form_of_complex_span(n, values).basis);
    rep.dims_by_order.push_back(rep.algebra.dim());
    if (r == r_max) break;
    frontier.clear();
    for (const auto& x : fresh)
      for (int c = 0; c < N; ++c) {
        frontier.push_back(covariant_derivative(x, gamma, holo(c)));
        frontier.push_back(covariant_derivative(x, gamma, anti(c)));
      }
  }
  rep.jets_kept = static_cast<int>(kept.size());
  rep.stabilized = r_max >= 1 && rep.dims_by_order[r_max] == rep.dims_by_order[r_max - 1];
  return rep;
}

struct PPWaveReport {
  bool p_parallel = false;
  bool cond1 = false, cond2 = false, cond3 = false, cond4 = false;
  std::optional<bool> cond5_hint;
  bool agree() const {
    bool ok = cond1 == cond2 && cond2 == cond3 && cond3 == cond4;
    if (cond5_hint) ok = ok && *cond5_hint == cond1;
    return ok;
  }
};

/// f = conj(u) v + conj(v) u + sum |z^k|^2 + Re phi(z, u, conj u).
inline bool matches_ppwave_potential(const Jet& f, double tol = 1e-12) {
  const int d = f.num_coords(), n = d - 2, u = d - 1;
  Jet g = f - Jet::variable(d, f.order(), anti(u)) * Jet::variable(d, f.order(), holo(0)) -
          Jet::variable(d, f.order(), anti(0)) * Jet::variable(d, f.order(), holo(u));
  for (int k = 1; k <= n; ++k) g -= Jet::variable(d, f.order(), holo(k)) * Jet::variable(d, f.order(), anti(k));
  if (!g.is_real(1e-12)) return false;
  for (const auto& t : g.terms()) {
    if (std::abs(t.c) <= tol) continue;
    if (Jet::exponent(d, t.key, holo(0)) || Jet::exponent(d, t.key, anti(0))) return false;
    bool hz = false, az = false;
    for (int k = 1; k <= n; ++k) {
      hz = hz || Jet::exponent(d, t.key, holo(k));
      az = az || Jet::exponent(d, t.key, anti(k));
    }
    if (hz && az) return false;
  }
  return true;
}

inline PPWaveReport ppwave_check(const MetricJet& m, int r_max, const Jet* potential = nullptr, double tol = 1e-10) {
  PPWaveReport rep;
  const int n = m.n, N = m.N(), u = N - 1, d = m.d();
  auto gamma = christoffel(m);
  CurvatureField R = curvature(gamma);
  if (m.walker_form) {
    // p = d_v / h_{conj u v}; nabla p = 0
    JetMatrix p(N, 1, d, m.order());
    p(0, 0) = reciprocal(m.h(u, 0));
    bool par = true;
    for (int c = 0; c < N && par; ++c) {
      JetMatrix dp = p.derivative(holo(c)) + gamma[c] * p;
      JetMatrix dpb = p.derivative(anti(c));
      par = dp.is_zero(tol) && dpb.is_zero(tol);
    }
    rep.p_parallel = par;
  }
  auto hol = infinitesimal_holonomy(m, r_max);
  rep.cond1 = true;
  for (const auto& b : hol.algebra.basis) {
    ABZC x = ABZC::decompose(b);
    if (std::abs(x.a) > 1e-9 || x.A.norm() > 1e-9) rep.cond1 = false;
  }
  // p^perp in T^{1,0} is spanned by d_v, d_{z^k}
  rep.cond3 = true;
  for (int c = 0; c <= n; ++c)
    for (int dd = 0; dd <= n; ++dd) rep.cond3 = rep.cond3 && R(c, dd).is_zero(tol);
  // real form: R(X, Y) = R(X', conj Y') - R(Y', conj X') on X = a + conj a, Y = b + conj b and i-rotated Y
  rep.cond2 = true;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      JetMatrix s1 = R(a, b) - R(b, a);
      JetMatrix s2 = (R(a, b) + R(b, a)) * cplx(0, -1);
      rep.cond2 = rep.cond2 && s1.is_zero(tol) && s2.is_zero(tol);
    }
  // coefficient pattern in the given coordinates
  const JetMatrix& h = m.h;
  bool c4 = m.walker_form;
  if (c4) {
    c4 = (h(u, 0) - Jet::constant(d, h(u, 0).order(), 1.0)).is_zero(tol);
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        c4 = c4 && (h(j, k) - Jet::constant(d, h(j, k).order(), j == k ? 1.0 : 0.0)).is_zero(tol);
    for (int k = 1; k <= n && c4; ++k) {
      const Jet& hku = h(k, u);
      c4 = !hku.depends_on(holo(0), tol) && !hku.depends_on(anti(0), tol);
      for (int l = 1; l <= n; ++l) c4 = c4 && !hku.depends_on(holo(l), tol);
    }
    const Jet& huu = h(u, u);
    c4 = c4 && !huu.depends_on(holo(0), tol) && !huu.depends_on(anti(0), tol);
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j) c4 = c4 && huu.derivative(holo(k)).derivative(anti(j)).is_zero(tol);
  }
  rep.cond4 = c4;
  if (potential) rep.cond5_hint = matches_ppwave_potential(*potential);
  return rep;
}

}  // namespace lkh
