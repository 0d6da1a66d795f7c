#pragma once

// Kahler potentials and explicit metrics in complex Walker coordinates (v, z^1..z^n, u).
// Coordinate indices: 0 = v, k = z^k, n+1 = u. Every |u|^{2k} is the monomial (u conj u)^k.

#include <string>
#include <vector>

#include "lkh/classify.hpp"
#include "lkh/geometry.hpp"

namespace lkh {

enum class PotentialKind { FC, FUN, FCM, FRNM, FL0, FPSI, SUM, DIRECT, F1, F2, F3, F4 };

inline const char* potential_kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::FC: return "FC";
    case PotentialKind::FUN: return "FUN";
    case PotentialKind::FCM: return "FCM";
    case PotentialKind::FRNM: return "FRNM";
    case PotentialKind::FL0: return "FL0";
    case PotentialKind::FPSI: return "FPSI";
    case PotentialKind::SUM: return "SUM";
    case PotentialKind::DIRECT: return "DIRECT";
    case PotentialKind::F1: return "F1";
    case PotentialKind::F2: return "F2";
    case PotentialKind::F3: return "F3";
    case PotentialKind::F4: return "F4";
  }
  return "?";
}

inline PotentialKind potential_kind_from_name(const std::string& s) {
  for (auto k : {PotentialKind::FC, PotentialKind::FUN, PotentialKind::FCM, PotentialKind::FRNM, PotentialKind::FL0,
                 PotentialKind::FPSI, PotentialKind::SUM, PotentialKind::DIRECT, PotentialKind::F1, PotentialKind::F2,
                 PotentialKind::F3, PotentialKind::F4})
    if (s == potential_kind_name(k)) return k;
  throw ValidationError("unknown potential kind '" + s + "'");
}

/// Tagged union; only the fields of the active kind are read.
///  FC: a, b.   FUN: A (A_1..A_N in u(n)), central (optional flags).   FCM: m, n0.   FRNM: m.
///  FL0: m, B ((n-m)x(n-m)), N.   FPSI: r, D ((n-r)x(n+m-2r)), N (unused by the formula, kept for the record).
///  SUM: parts.   DIRECT: direct (coefficients of the potential).
///  F1..F4: a, b, A, m, r, n0 and B/D as above; assembled by build_potential.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::FC;
  int n = 0;
  cplx a{}, b{};
  std::vector<Mat> A;
  std::vector<bool> central;
  int m = 0, n0 = 0, r = 0, N = 0;
  Mat B, D;
  bool printed_psi = false;  // FPSI/F4: use the printed quadratic form
  std::vector<PotentialSpec> parts;
  Jet direct;
};

namespace detail {

struct Coords {
  int n, d, ord;
  Jet var(Var v) const { return Jet::variable(d, ord, v); }
  Jet z(int k) const { return var(holo(k)); }
  Jet zb(int k) const { return var(anti(k)); }
  Jet u() const { return var(holo(n + 1)); }
  Jet ub() const { return var(anti(n + 1)); }
  Jet uu() const { return u() * ub(); }
  Jet one() const { return Jet::constant(d, ord, 1.0); }
  Jet zero() const { return Jet(d, ord); }
};

inline double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// x + conj(x), flagged real.
inline Jet two_re(const Jet& x) {
  Jet f = x + x.conjugate();
  f.set_real_valued(true);
  return f;
}

inline Jet re(const Jet& x) { return two_re(x) * 0.5; }

inline void need(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace detail

/// v psi + conj(v psi) with d_{conj u} psi = exp(-i a |u|^2 - (i b / 4) |u|^4), psi(u, 0) = 0.
/// This is twice the printed Re(...) form; with the factor 2 it reduces to conj(v) u + conj(u) v at a = b = 0.
inline Jet f_C(int n, int order, cplx a, cplx b) {
  detail::need(a != cplx{} || b == cplx{}, "FC: a = 0 requires b = 0");
  detail::Coords c{n, n + 2, order};
  Jet uu = c.uu();
  Jet E = jet_exp(uu * (-I * a) + uu * uu * (-I * b / 4.0));
  Jet psi = E.integral(anti(n + 1));
  return detail::two_re(c.z(0) * psi);
}

/// The b = 0 closed form -v (e^{-i a |u|^2} - 1) / (i a u) as a divided series, for cross-checks.
inline Jet f_C_closed(int n, int order, cplx a) {
  detail::Coords c{n, n + 2, order + 1};
  if (a == cplx{}) return detail::two_re(c.z(0) * c.ub()).truncated(order);
  Jet num = (jet_exp(c.uu() * (-I * a)) - c.one()) * (-1.0 / (I * a));
  Jet psi = divided_series(num, holo(n + 1), 1);
  Jet f = detail::two_re(Jet::variable(n + 2, psi.order(), holo(0)) * psi);
  return f.truncated(order);
}

/// b != 0 closed form: psi = e^{i a^2 / b} sqrt(pi) / (sqrt(i b) u) (erf(sqrt(i b) (|u|^2 + 2 a / b) / 2) - erf(sqrt(i b) a / b)).
/// This is the printed erf expression with (a, b) -> (i a, i b) and without its leading -v / (i a u) factor.
inline Jet f_C_erf(int n, int order, cplx a, cplx b) {
  detail::need(b != cplx{}, "f_C_erf: needs b != 0");
  detail::Coords c{n, n + 2, order + 1};
  const cplx s = std::sqrt(I * b);
  Jet arg = (c.uu() + Jet::constant(c.d, c.ord, 2.0 * a / b)) * (s / 2.0);
  Jet num = (jet_erf(arg) - Jet::constant(c.d, c.ord, erf_complex(s * a / b))) *
            (std::exp(I * a * a / b) * std::sqrt(std::numbers::pi) / s);
  Jet psi = divided_series(num, holo(n + 1), 1);
  return detail::two_re(Jet::variable(n + 2, psi.order(), holo(0)) * psi).truncated(order);
}

/// G = sum_alpha B_alpha |u|^{2 alpha}, B_alpha = -i A_alpha / (alpha!)^2.
inline JetMatrix fun_exponent(const std::vector<Mat>& A, int n, int order) {
  detail::Coords c{n, n + 2, order};
  JetMatrix G = JetMatrix::constant(Mat::Zero(n, n), c.d, order);
  Jet uu = c.uu(), pw = c.one();
  for (std::size_t al = 0; al < A.size(); ++al) {
    pw = pw * uu;
    const double f = detail::factorial(static_cast<int>(al) + 1);
    G = G + JetMatrix::constant(-I * A[al] / (f * f), c.d, order) * pw;
  }
  return G;
}

/// conj(Z)^T e^G Z.
inline Jet f_un(int n, int order, const std::vector<Mat>& A) {
  for (const auto& a : A) detail::need(a.rows() == n && a.cols() == n && (a + a.adjoint()).norm() < 1e-9, "FUN: A_alpha must be in u(n)");
  detail::Coords c{n, n + 2, order};
  JetMatrix E = jet_matrix_exp(fun_exponent(A, n, order));
  Jet f = c.zero();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) f += c.zb(1 + j) * E(j, k) * c.z(1 + k);
  f.set_real_valued(true);
  return f;
}

/// (1/4) Re(i conj(u)^2 sum_{k=n0+1}^m (z^k)^2).
inline Jet f_Cm(int n, int order, int m, int n0) {
  detail::need(0 <= n0 && n0 <= m && m <= n, "FCM: needs 0 <= n0 <= m <= n");
  detail::Coords c{n, n + 2, order};
  Jet s = c.zero();
  for (int k = n0 + 1; k <= m; ++k) s += c.z(k) * c.z(k);
  return detail::re(s * c.ub() * c.ub() * I) * 0.25;
}

/// (1 - e^{|u|^2}) / conj(u)^2 + (u / conj(u)) e^{|u|^2}, poles removed.
inline Jet frnm_profile(int n, int order) {
  detail::Coords c{n, n + 2, order + 2};
  Jet e = jet_exp(c.uu());
  Jet num = (c.one() - e) + c.u() * c.ub() * e;
  return divided_series(num, anti(n + 1), 2).truncated(order);
}

/// -(1/2) Re(sum_{j=m+1}^n (conj z^j)^2 X(u)), X the profile above.
/// The printed formula has no z^j inside the j-sum; (conj z^j)^2 is the factor that makes T(e_j) = conj e_j.
/// With (z^j)^2 instead the leading term z^2 u^2 never reaches h_{conj u k}.
inline Jet f_Rnm(int n, int order, int m) {
  detail::need(0 <= m && m < n, "FRNM: needs 0 <= m < n");
  detail::Coords c{n, n + 2, order};
  Jet X = frnm_profile(n, order);
  Jet s = c.zero();
  for (int j = m + 1; j <= n; ++j) s += c.zb(j) * c.zb(j);
  return detail::re(s * X) * -1.0;
}

/// The printed block matrix built from the lambdas of L0 (rows/cols m+1..n).
/// Its columns have a real Gram matrix, so the L0 they span always has omega = 0; the
/// descriptor constructions use the normal-form basis f_{m+1}..f_n instead, which differs
/// from this block by swapping the entries of each second column.
inline Mat l0_matrix(int n_minus_m, const std::vector<double>& lambdas) {
  Mat B = Mat::Identity(n_minus_m, n_minus_m);
  const double r = std::sqrt(2.0) / 2.0;
  for (std::size_t s = 0; s < lambdas.size(); ++s) {
    const int i = 2 * static_cast<int>(s);
    const double l = lambdas[s], a = std::sqrt(1.0 - l), b = std::sqrt(1.0 + l);
    B(i, i) = r * a;
    B(i, i + 1) = r * b;
    B(i + 1, i) = -I * r * b;
    B(i + 1, i + 1) = -I * r * a;
  }
  return B;
}

/// -Re(sum_{j>m} sum_alpha i B_{j,m+alpha} conj(z^j) |u|^{2(N+alpha)} u / (((N+alpha)!)^2 (N+alpha+1))).
inline Jet f_L0(int n, int order, int m, const Mat& B, int N) {
  detail::need(0 <= m && m < n && B.rows() == n - m && B.cols() == n - m, "FL0: B must be (n-m)x(n-m)");
  detail::Coords c{n, n + 2, order};
  Jet s = c.zero();
  for (int al = 1; al <= n - m; ++al) {
    const int k = N + al;
    const double f = detail::factorial(k);
    Jet prof = jet_pow(c.uu(), k) * c.u() * (1.0 / (f * f * (k + 1)));
    for (int j = m + 1; j <= n; ++j) s += c.zb(j) * prof * (I * B(j - m - 1, al - 1));
  }
  return detail::re(s) * -1.0;
}

/// Printed form: -(1/2) Re(sum_{k=r+1}^n sum_alpha D_{k alpha} (conj z^k)^2 |u|^{2(alpha+2)} u / (((alpha+2)!)^2 (alpha+3))).
/// The printed sum runs over j with k free; k is taken to range as j does.
inline Jet f_psi_printed(int n, int order, int r, const Mat& D) {
  detail::need(0 <= r && r <= n && D.rows() == n - r, "FPSI: D must have n-r rows");
  detail::Coords c{n, n + 2, order};
  Jet s = c.zero();
  for (int al = 1; al <= D.cols(); ++al) {
    const double f = detail::factorial(al + 2);
    Jet prof = jet_pow(c.uu(), al + 2) * c.u() * (1.0 / (f * f * (al + 3)));
    for (int k = r + 1; k <= n; ++k)
      if (D(k - r - 1, al - 1) != cplx{}) s += c.zb(k) * c.zb(k) * prof * D(k - r - 1, al - 1);
  }
  return detail::re(s) * -0.5;
}

/// Paired form: -Re(sum_{k=r+1}^n sum_alpha D_{k alpha} conj(z^k) |u|^{2 alpha} u / ((alpha!)^2 (alpha+1))).
/// Same shape as f_L0 with N = 0: column alpha of D lands in K at the derivative order where
/// i A_alpha lands in the u(n) block, so each psi image is paired with its argument.
/// The printed form puts the Z-parts at order 2 alpha + 3 instead, where nothing pairs them.
inline Jet f_psi(int n, int order, int r, const Mat& D) {
  detail::need(0 <= r && r <= n && D.rows() == n - r, "FPSI: D must have n-r rows");
  detail::Coords c{n, n + 2, order};
  Jet s = c.zero();
  for (int al = 1; al <= D.cols(); ++al) {
    const double f = detail::factorial(al);
    Jet prof = jet_pow(c.uu(), al) * c.u() * (1.0 / (f * f * (al + 1)));
    for (int k = r + 1; k <= n; ++k)
      if (D(k - r - 1, al - 1) != cplx{}) s += c.zb(k) * prof * D(k - r - 1, al - 1);
  }
  return detail::re(s) * -1.0;
}

/// The matrix (i E_{m-r}, -E_{m-r}, 0 / 0, 0, i B).
inline Mat psi_matrix(int n, int m, int r, const Mat& B) {
  const int s = m - r, t = n - m;
  Mat D = Mat::Zero(n - r, n + m - 2 * r);
  D.block(0, 0, s, s) = I * Mat::Identity(s, s);
  D.block(0, s, s, s) = -Mat::Identity(s, s);
  D.block(s, 2 * s, t, t) = I * B;
  return D;
}

struct N0Split {
  int n0 = 0;
  Mat U;  // unitary; U^* A1 U vanishes outside the leading n0 x n0 block
};

/// Rank of A1 with a unitary rotation moving its image to the first coordinates.
inline N0Split n0_split(const Mat& A1, double tol = 1e-9) {
  const auto k = A1.rows();
  if (k == 0) return {0, Mat(0, 0)};
  if ((A1 + A1.adjoint()).norm() > tol) throw PreconditionError("n0_split: A1 must be anti-Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(I * A1));
  const auto& ev = es.eigenvalues();
  std::vector<int> nz, z;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < k; ++i) (std::abs(ev(i)) > tol * scale ? nz : z).push_back(i);
  N0Split out;
  out.n0 = static_cast<int>(nz.size());
  out.U = Mat(k, k);
  int c = 0;
  for (int i : nz) out.U.col(c++) = es.eigenvectors().col(i);
  for (int i : z) out.U.col(c++) = es.eigenvectors().col(i);
  return out;
}

inline Jet build_potential(const PotentialSpec& s, int order);

namespace detail {

inline void check_central(const std::vector<Mat>& A, std::size_t idx, int m) {
  if (idx >= A.size()) return;
  for (const auto& x : A) {
    Mat xa = x, ya = A[idx];
    if (bracket(ya, xa).norm() > 1e-9) throw ValidationError("centrality: A_" + std::to_string(idx + 1) + " is not central in pr_u(n) k");
  }
  (void)m;
}

/// Pads an m x m block into u(n).
inline Mat pad(const Mat& A, int n) {
  Mat out = Mat::Zero(n, n);
  out.topLeftCorner(A.rows(), A.cols()) = A;
  return out;
}

inline int n0_of(const std::vector<Mat>& A, int m) {
  if (A.empty() || m == 0) return 0;
  Mat a = A[0].topLeftCorner(m, m);
  int n0 = n0_split(a).n0;
  // the zero block must come last: A_1 is assumed already rotated
  Mat tail = A[0].block(n0, n0, m - n0, m - n0);
  if (tail.norm() > 1e-9 || A[0].block(0, n0, n0, m - n0).norm() > 1e-9)
    throw ValidationError("A_1 is not split: rotate with n0_split first");
  return n0;
}

}  // namespace detail

inline Jet build_potential(const PotentialSpec& s, int order) {
  const int n = s.n;
  Jet f;
  switch (s.kind) {
    case PotentialKind::FC:
      f = f_C(n, order, s.a, s.b);
      break;
    case PotentialKind::FUN:
      for (std::size_t i = 0; i < s.central.size() && i < s.A.size(); ++i)
        if (s.central[i]) detail::check_central(s.A, i, n);
      f = f_un(n, order, s.A);
      break;
    case PotentialKind::FCM:
      f = f_Cm(n, order, s.m, s.n0);
      break;
    case PotentialKind::FRNM:
      f = f_Rnm(n, order, s.m);
      break;
    case PotentialKind::FL0:
      f = f_L0(n, order, s.m, s.B, s.N);
      break;
    case PotentialKind::FPSI:
      f = s.printed_psi ? f_psi_printed(n, order, s.r, s.D) : f_psi(n, order, s.r, s.D);
      break;
    case PotentialKind::SUM: {
      detail::need(!s.parts.empty(), "SUM: empty");
      f = build_potential(s.parts.front(), order);
      for (std::size_t i = 1; i < s.parts.size(); ++i) f += build_potential(s.parts[i], order);
      break;
    }
    case PotentialKind::DIRECT:
      detail::need(s.direct.num_coords() == n + 2, "DIRECT: wrong number of coordinates");
      f = s.direct.truncated(order);
      break;
    case PotentialKind::F1: {
      // f_C + f_u(n) + f_{C^m}, m = n
      if (s.a != cplx{}) detail::check_central(s.A, 0, n);
      if (s.b != cplx{}) detail::check_central(s.A, 1, n);
      int n0 = detail::n0_of(s.A, n);
      f = f_C(n, order, s.a, s.b) + f_un(n, order, s.A) + f_Cm(n, order, n, n0);
      break;
    }
    case PotentialKind::F2: {
      detail::need(s.a == I && s.b == cplx{}, "F2: needs a = i, b = 0");
      detail::need(0 <= s.m && s.m < n && !s.A.empty(), "F2: needs m < n and A_1");
      Mat want = Mat::Zero(n, n);
      want.topLeftCorner(s.m, s.m) = s.A[0].topLeftCorner(s.m, s.m);
      want.bottomRightCorner(n - s.m, n - s.m) = I * Mat::Identity(n - s.m, n - s.m);
      detail::need((s.A[0] - want).norm() < 1e-9, "F2: A_1 must be tilde A_1 + i id on C^{n-m}");
      for (std::size_t i = 1; i < s.A.size(); ++i) detail::need(detail::supported_in(s.A[i], s.m), "F2: A_alpha must lie in u(m)");
      int n0 = detail::n0_of(s.A, s.m);
      f = f_C(n, order, s.a, 0.0) + f_un(n, order, s.A) + f_Cm(n, order, s.m, n0) + f_Rnm(n, order, s.m);
      break;
    }
    case PotentialKind::F3: {
      detail::need(0 <= s.m && s.m < n, "F3: needs m < n");
      for (const auto& a : s.A) detail::need(detail::supported_in(a, s.m), "F3: A_alpha must lie in u(m)");
      int n0 = detail::n0_of(s.A, s.m);
      f = f_C(n, order, 0.0, 0.0) + f_un(n, order, s.A) + f_Cm(n, order, s.m, n0) +
          f_L0(n, order, s.m, s.B, static_cast<int>(s.A.size()));
      break;
    }
    case PotentialKind::F4: {
      detail::need(1 <= s.r && s.r <= s.m && s.m <= n, "F4: needs 1 <= r <= m <= n");
      int n0 = detail::n0_of(s.A, s.r);
      f = f_C(n, order, 0.0, 0.0) + f_un(n, order, s.A) + f_Cm(n, order, s.r, n0) +
          (s.printed_psi ? f_psi_printed(n, order, s.r, s.D) : f_psi(n, order, s.r, s.D));
      break;
    }
  }
  f.set_real_valued(true);
  if (!f.is_real(1e-12)) throw ValidationError("build_potential: result is not real");
  return f;
}

/// Potential spec realizing a descriptor (F1..F4), plus the unitary rotation of C^n applied to k.
struct ConstructedSpec {
  PotentialSpec spec;
  Mat U;       // the construction realizes U^* k U
  int levels;  // covariant-derivative depth needed to see every generator
};

namespace detail {

/// Reorders a basis of k so that at most the first two elements have a nonzero C-part.
inline std::vector<ABZC> reduce_c_parts(const std::vector<Mat>& kb, int n) {
  std::vector<ABZC> xs;
  for (const auto& k : kb) xs.push_back(k_part(k, n));
  std::vector<ABZC> out;
  for (int comp = 0; comp < 2; ++comp) {
    auto val = [&](const ABZC& x) { return comp == 0 ? x.a.real() : x.a.imag(); };
    int piv = -1;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (std::abs(val(xs[i])) > 1e-9 && (piv < 0 || std::abs(val(xs[i])) > std::abs(val(xs[piv])))) piv = static_cast<int>(i);
    if (piv < 0) continue;
    ABZC p = xs[piv];
    xs.erase(xs.begin() + piv);
    for (auto& x : xs) {
      double t = val(x) / val(p);
      x.a -= t * p.a;
      x.A -= t * p.A;
    }
    out.push_back(p);
  }
  // A-only remainder, independent
  std::vector<Mat> rest;
  for (auto& x : xs)
    if (x.A.norm() > 1e-9) rest.push_back(x.A);
  for (const auto& A : real_span(rest)) {
    ABZC y = ABZC::zero(n);
    y.A = A;
    out.push_back(y);
  }
  return out;
}

inline Mat rotate(const Mat& A, const Mat& U) { return U.adjoint() * A * U; }

}  // namespace detail

inline ConstructedSpec spec_for_descriptor(const AlgebraDescriptor& d) {
  validate_descriptor(d);
  const int n = d.n;
  ConstructedSpec out;
  PotentialSpec& s = out.spec;
  s.n = n;
  s.m = d.m;
  s.r = d.r;
  std::vector<ABZC> xs;
  switch (d.family) {
    case Family::GK:
      s.kind = PotentialKind::F1;
      s.m = n;
      xs = detail::reduce_c_parts(d.k_basis, n);
      break;
    case Family::GKJL: {
      s.kind = PotentialKind::F2;
      xs = detail::reduce_c_parts(d.k_basis, n);
      // the element with a = i comes first; scale it to a = i exactly
      detail::need(!xs.empty() && std::abs(xs[0].a.imag()) > 1e-9, "GKJL: no element with a != 0");
      double t = xs[0].a.imag();
      xs[0].a /= t;
      xs[0].A /= t;
      break;
    }
    case Family::GKL:
      s.kind = PotentialKind::F3;
      xs = detail::reduce_c_parts(d.k_basis, n);
      s.B = d.real_form.basis_f;
      break;
    case Family::GK0PSI: {
      s.kind = PotentialKind::F4;
      // psi(e_{r+1}),..,psi(e_m), psi(i e_{r+1}),..,psi(i e_m), psi(f_{m+1}),..,psi(f_n), then k0
      const int sdim = d.m - d.r;
      for (int j = 0; j < sdim; ++j) xs.push_back(detail::k_part(d.psi_images[2 * j], n));
      for (int j = 0; j < sdim; ++j) xs.push_back(detail::k_part(d.psi_images[2 * j + 1], n));
      for (int j = 0; j < n - d.m; ++j) xs.push_back(detail::k_part(d.psi_images[2 * sdim + j], n));
      for (const auto& k : d.k_basis) xs.push_back(detail::k_part(k, n));
      s.B = d.real_form.basis_f;
      s.D = psi_matrix(n, d.m, d.r, s.B);
      break;
    }
    default:
      throw DescriptorError("spec_for_descriptor: no construction for this family");
  }
  if (!xs.empty() && xs[0].a != cplx{}) s.a = xs[0].a;
  if (xs.size() > 1 && xs[1].a != cplx{}) s.b = xs[1].a;
  for (const auto& x : xs) s.A.push_back(x.A);
  // rotate so A_1 is an isomorphism on the first n0 coordinates of C^{m'} and zero after
  const int mm = s.kind == PotentialKind::F1 ? n : s.kind == PotentialKind::F4 ? d.r : d.m;
  out.U = Mat::Identity(n, n);
  if (!s.A.empty() && mm > 0) {
    N0Split sp = n0_split(Mat(s.A[0].topLeftCorner(mm, mm)));
    out.U.topLeftCorner(mm, mm) = sp.U;
    for (auto& A : s.A) A = detail::rotate(A, out.U);
    s.n0 = sp.n0;
  }
  s.N = static_cast<int>(s.A.size());
  out.levels = 2 * std::max<int>(static_cast<int>(s.A.size()), 2) + 2;
  return out;
}

enum class SmallDim { g1, g2, g3gamma, g3zero };

inline SmallDim small_dim_from_name(const std::string& s) {
  if (s == "g1") return SmallDim::g1;
  if (s == "g2") return SmallDim::g2;
  if (s == "g3gamma") return SmallDim::g3gamma;
  if (s == "g3zero") return SmallDim::g3zero;
  throw ValidationError("unknown n = 0 metric '" + s + "'");
}

/// n = 0 metrics: f_C(i, 1); e^{conj(u) v} d conj(u) dv + e^{conj(v) u} d conj(v) du; f_C(gamma, 0); f_C(0, 0) + |u|^4.
inline MetricJet small_dim_metric(SmallDim which, int order, cplx gamma = 1.0) {
  const int d = 2;
  switch (which) {
    case SmallDim::g1:
      return metric_from_potential(f_C(0, order + 2, I, 1.0));
    case SmallDim::g3gamma:
      if (gamma == cplx{}) throw ValidationError("g3gamma: gamma must be nonzero");
      return metric_from_potential(f_C(0, order + 2, gamma, 0.0));
    case SmallDim::g3zero: {
      Jet uu = Jet::variable(d, order + 2, holo(1)) * Jet::variable(d, order + 2, anti(1));
      Jet f = f_C(0, order + 2, 0.0, 0.0) + uu * uu;
      f.set_real_valued(true);
      return metric_from_potential(f);
    }
    case SmallDim::g2: {
      Jet x = Jet::variable(d, order, anti(1)) * Jet::variable(d, order, holo(0));
      JetMatrix h(2, 2, d, order);
      h(0, 0) = Jet(d, order);
      h(1, 1) = Jet(d, order);
      h(1, 0) = jet_exp(x);
      h(0, 1) = h(1, 0).conjugate();
      if (kahler_residual(h) > 1e-12 || hermitian_residual(h) > 1e-12) throw ValidationError("g2: coefficients fail the Kahler symmetry");
      return metric_from_matrix(h);
    }
  }
  throw ValidationError("small_dim_metric: unknown case");
}

enum class LinesVariant { literal, hermitized };

/// h_{conj u v} = h_{conj v u} = (1+|u|^2)^{-2} and the d conj(u) du coefficient
///   literal:    2i (conj(v) u + conj(u) v) / (1+|u|^2)^5   (as printed, with the outer factor distributed)
///   hermitized: -2 (conj(v) u + conj(u) v) / (1+|u|^2)^3   (the metric of f = (v conj u + conj v u) / (1+|u|^2))
/// The literal coefficient is purely imaginary on a diagonal slot, so that jet is not Hermitian.
inline MetricJet oriented_lines_metric(LinesVariant variant, int order) {
  const int d = 2;
  auto var = [&](Var v) { return Jet::variable(d, order, v); };
  Jet v = var(holo(0)), vb = var(anti(0)), u = var(holo(1)), ub = var(anti(1));
  Jet w = reciprocal(Jet::constant(d, order, 1.0) + u * ub);
  Jet w2 = w * w, w3 = w2 * w;
  Jet s = vb * u + ub * v;
  JetMatrix h(2, 2, d, order);
  h(0, 0) = Jet(d, order);
  h(0, 1) = w2;
  h(1, 0) = w2;
  h(1, 1) = variant == LinesVariant::literal ? s * (w3 * w2) * cplx(0, 2) : s * w3 * -2.0;
  return metric_from_matrix(h);
}

struct LinesValidation {
  LinesVariant variant;
  double hermitian_residual = 0, kahler_residual = 0;
  bool valid_metric = false;
  Mat R_pq, R_qq;  // R^{1,0}(p, conj q)(0), R^{1,0}(q, conj q)(0)
  bool reproduces = false;  // R_pq = [[0,2],[0,0]] and diag R_qq = (2,2)
};

inline LinesValidation validate_oriented_lines(LinesVariant variant, int order = 10, double tol = 1e-9) {
  LinesValidation out;
  out.variant = variant;
  MetricJet m = oriented_lines_metric(variant, order);
  out.hermitian_residual = hermitian_residual(m.h);
  out.kahler_residual = kahler_residual(m.h);
  out.valid_metric = out.hermitian_residual < tol && out.kahler_residual < tol && m.walker_form;
  CurvatureMap R = curvature_map_at_base(m);
  out.R_pq = R(0, 1);
  out.R_qq = R(1, 1);
  Mat want(2, 2);
  want << 0, 2, 0, 0;
  out.reproduces = (out.R_pq - want).norm() < tol && std::abs(out.R_qq(0, 0) - 2.0) < tol && std::abs(out.R_qq(1, 1) - 2.0) < tol;
  return out;
}

}  // namespace lkh
