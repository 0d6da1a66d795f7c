#pragma once

// Canonical holonomy families, the matcher, and the realizability / Ricci-flat predicates.

#include <string>
#include <vector>

#include "lkh/hermitian.hpp"
#include "lkh/lie.hpp"

namespace lkh {

enum class Family { G0, G1, G2, G3, GK, GKJL, GKL, GK0PSI, BergerGK, Unknown };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::G0: return "G0";
    case Family::G1: return "G1";
    case Family::G2: return "G2";
    case Family::G3: return "G3";
    case Family::GK: return "GK";
    case Family::GKJL: return "GKJL";
    case Family::GKL: return "GKL";
    case Family::GK0PSI: return "GK0PSI";
    case Family::BergerGK: return "BergerGK";
    case Family::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

inline Family family_from_name(const std::string& s) {
  for (Family f : {Family::G0, Family::G1, Family::G2, Family::G3, Family::GK, Family::GKJL, Family::GKL,
                   Family::GK0PSI, Family::BergerGK})
    if (s == family_name(f)) return f;
  if (s == "UNKNOWN") return Family::Unknown;
  throw DescriptorError("unknown family tag: " + s);
}

// Sign of theta in the BergerGK block a2(iE + s*theta). Fixed by the Berger test (see tests).
inline constexpr double kBergerThetaSign = -1.0;

/// k-elements (and psi images) are stored as full (n+2)x(n+2) matrices of the form (a, A, 0, 0).
/// psi_images follow the real basis e_{r+1}, i e_{r+1}, ..., e_m, i e_m, then the columns of real_form.basis_f.
struct AlgebraDescriptor {
  Family family = Family::Unknown;
  int n = 0, m = 0, r = 0;
  cplx gamma{};
  std::vector<Mat> k_basis;
  RealFormData real_form;
  std::vector<Mat> psi_images;
  std::string note;

  int k_dim() const { return make_span(n, k_basis).dim(); }
};

/// (a, A) with A placed in the top-left block of u(n).
inline Mat k_element(int n, cplx a, const Mat& A_small) {
  ABZC x = ABZC::zero(n);
  x.a = a;
  if (A_small.size()) x.A.topLeftCorner(A_small.rows(), A_small.cols()) = A_small;
  return x.embed();
}

/// a2 (i + i id_{C^{n-m}}) + A, A in u(m).
inline Mat gkjl_element(int n, int m, double a2, const Mat& A_m) {
  ABZC x = ABZC::zero(n);
  x.a = cplx(0, a2);
  if (m) x.A.topLeftCorner(m, m) = A_m;
  x.A.bottomRightCorner(n - m, n - m) = cplx(0, a2) * Mat::Identity(n - m, n - m);
  return x.embed();
}

/// a1 + a2 (i + i id + s theta) + A.
inline Mat berger_element(int n, int m, const RealFormData& rf, double a1, double a2, const Mat& A_m) {
  ABZC x = ABZC::zero(n);
  x.a = cplx(a1, a2);
  if (m) x.A.topLeftCorner(m, m) = A_m;
  if (n > m)
    x.A.bottomRightCorner(n - m, n - m) =
        a2 * (I * Mat::Identity(n - m, n - m) + kBergerThetaSign * rf.theta);
  return x.embed();
}

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DescriptorError(msg);
}

inline ABZC k_part(const Mat& k, int n) {
  require(k.rows() == n + 2 && k.cols() == n + 2, "k element has wrong size");
  ABZC x;
  try {
    x = ABZC::decompose(k);
  } catch (const Error&) {
    throw DescriptorError("k element is not in C + u(n)");
  }
  require(x.Z.norm() < 1e-9 && std::abs(x.c) < 1e-9, "k element has a C^n or iR part");
  return x;
}

inline bool closed(int n, const std::vector<Mat>& ms) {
  if (ms.empty()) return true;
  MatrixAlgebra a = make_span(n, ms);
  return a.bracket_residual() < 1e-9;
}

/// Off-diagonal blocks between C^s and its complement vanish and the complement block is zero.
inline bool supported_in(const Mat& A, int s) {
  const auto n = A.rows();
  return A.bottomRows(n - s).norm() + A.rightCols(n - s).norm() < 1e-9;
}

inline Vec embed_L0(int n, int m, const Vec& x) {
  Vec z = Vec::Zero(n);
  z.tail(n - m) = x;
  return z;
}

/// Real basis of C^{m-r} + L0 as vectors of C^n (order used by psi_images).
inline std::vector<Vec> psi_domain(const AlgebraDescriptor& d) {
  std::vector<Vec> out;
  for (int j = d.r; j < d.m; ++j) {
    out.push_back(Vec::Unit(d.n, j));
    out.push_back(I * Vec::Unit(d.n, j));
  }
  for (int j = 0; j < d.n - d.m; ++j) out.push_back(embed_L0(d.n, d.m, d.real_form.basis_f.col(j)));
  return out;
}

inline Mat translation(int n, const Vec& z) {
  ABZC x = ABZC::zero(n);
  x.Z = z;
  return x.embed();
}

}  // namespace detail

/// Checks the descriptor invariants; throws DescriptorError.
inline void validate_descriptor(const AlgebraDescriptor& d) {
  using detail::require;
  const int n = d.n;
  switch (d.family) {
    case Family::G0:
    case Family::G1:
    case Family::G2:
    case Family::G3:
      require(n == 0, "n = 0 families need n = 0");
      return;
    case Family::Unknown:
      throw DescriptorError("UNKNOWN is not a buildable family");
    default:
      break;
  }
  require(n >= 1 && n <= 3, "n must be in 1..3");
  for (const auto& k : d.k_basis) detail::k_part(k, n);
  require(detail::closed(n, d.k_basis), "k is not closed under the bracket");
  auto need_real_form = [&]() {
    require(d.real_form.n_minus_m == n - d.m, "real form has the wrong dimension");
  };
  switch (d.family) {
    case Family::GK:
      break;
    case Family::GKJL: {
      require(0 <= d.m && d.m < n, "GKJL needs 0 <= m < n");
      bool outside = false;
      for (const auto& k : d.k_basis) {
        ABZC x = detail::k_part(k, n);
        double a2 = x.a.imag();
        require(std::abs(x.a.real()) < 1e-9, "GKJL: k has a real C-part");
        Mat want = Mat::Zero(n, n);
        want.topLeftCorner(d.m, d.m) = x.A.topLeftCorner(d.m, d.m);
        want.bottomRightCorner(n - d.m, n - d.m) = cplx(0, a2) * Mat::Identity(n - d.m, n - d.m);
        require((x.A - want).norm() < 1e-9, "GKJL: k not in RJ + u(m)");
        if (std::abs(a2) > 1e-9) outside = true;
      }
      require(outside, "GKJL: k is contained in u(m)");
      break;
    }
    case Family::GKL:
      require(0 <= d.m && d.m < n, "GKL needs 0 <= m < n");
      need_real_form();
      for (const auto& k : d.k_basis) {
        ABZC x = detail::k_part(k, n);
        require(std::abs(x.a) < 1e-9 && detail::supported_in(x.A, d.m), "GKL: k not in u(m)");
      }
      break;
    case Family::GK0PSI: {
      require(1 <= d.r && d.r <= d.m && d.m <= n, "GK0PSI needs 1 <= r <= m <= n");
      need_real_form();
      const std::size_t dom = 2 * (d.m - d.r) + (n - d.m);
      require(dom > 0, "GK0PSI: C^{m-r} + L0 is zero");
      require(d.psi_images.size() == dom, "GK0PSI: psi needs one image per real basis vector");
      for (const auto& k : d.k_basis) {
        ABZC x = detail::k_part(k, n);
        require(std::abs(x.a) < 1e-9 && detail::supported_in(x.A, d.r), "GK0PSI: k0 not in u(r)");
      }
      double psi_norm = 0.0;
      for (const auto& p : d.psi_images) {
        ABZC x = detail::k_part(p, n);
        require(std::abs(x.a) < 1e-9 && detail::supported_in(x.A, d.r), "GK0PSI: psi image not in u(r)");
        psi_norm += p.norm();
      }
      require(psi_norm > 1e-9, "GK0PSI: psi is zero");
      for (const auto& p : d.psi_images) {
        for (const auto& q : d.psi_images) require(bracket(p, q).norm() < 1e-9, "GK0PSI: psi image not commutative");
        for (const auto& k : d.k_basis) require(bracket(p, k).norm() < 1e-9, "GK0PSI: psi image does not commute with k0");
      }
      std::vector<Mat> both = d.k_basis;
      both.insert(both.end(), d.psi_images.begin(), d.psi_images.end());
      require(make_span(n, both).dim() == make_span(n, d.k_basis).dim() + make_span(n, d.psi_images).dim(),
              "GK0PSI: psi image meets k0");
      break;
    }
    case Family::BergerGK:
      require(0 <= d.m && d.m <= n, "BergerGK needs 0 <= m <= n");
      need_real_form();
      for (const auto& k : d.k_basis) {
        ABZC x = detail::k_part(k, n);
        double a1 = x.a.real(), a2 = x.a.imag();
        Mat want = Mat::Zero(n, n);
        want.topLeftCorner(d.m, d.m) = x.A.topLeftCorner(d.m, d.m);
        if (n > d.m)
          want.bottomRightCorner(n - d.m, n - d.m) =
              a2 * (I * Mat::Identity(n - d.m, n - d.m) + kBergerThetaSign * d.real_form.theta);
        require((x.A - want).norm() < 1e-9, "BergerGK: k not in R + R(i, i id + theta) + u(m)");
        (void)a1;
      }
      break;
    default:
      break;
  }
}

/// g0 = sl(2,R) acting on span(p1,p2) of R^{2,2}, J p1 = q2, J p2 = -q1, written in a Witt basis of C^{1,1}.
inline std::vector<Mat> g0_basis() {
  // complex basis {p1, p2}: g(p_i, q_j) = delta_ij and h(x, y) = g(x, y) + i g(x, Jy)
  // gives h(p1, p2) = -i, h(p2, p1) = i, h(p_j, p_j) = 0; Gram(k, j) = h(b_j, b_k)
  Mat gram(2, 2);
  gram << 0.0, I, -I, 0.0;
  // p = p1, q = t p2 with h(p, q) = conj(t) h(p1, p2) = 1
  cplx t = std::conj(1.0 / gram(1, 0));
  Mat P(2, 2);
  P << 1.0, 0.0, 0.0, t;
  Mat check = P.adjoint() * gram * P;
  if ((check - witt_gram(0)).norm() > 1e-12) throw ValidationError("g0: Witt change of basis failed");
  std::vector<Mat> out;
  Mat h(2, 2), e(2, 2), f(2, 2);
  h << 1, 0, 0, -1;
  e << 0, 1, 0, 0;
  f << 0, 0, 1, 0;
  for (const Mat& A : {h, e, f}) out.push_back(P.inverse() * A * P);
  return out;
}

inline MatrixAlgebra build_family(const AlgebraDescriptor& d) {
  validate_descriptor(d);
  const int n = d.n;
  std::vector<Mat> gens;
  auto add_iR = [&]() { gens.push_back(iR_element(n)); };
  switch (d.family) {
    case Family::G0:
      return make_span(0, g0_basis());
    case Family::G1:
      return make_span(0, parabolic_basis(0));
    case Family::G2:
      gens.push_back(k_element(0, 1.0, Mat()));
      gens.push_back(k_element(0, I, Mat()));
      return make_span(0, gens);
    case Family::G3:
      if (std::abs(d.gamma) > 0) gens.push_back(k_element(0, d.gamma, Mat()));
      add_iR();
      return make_span(0, gens);
    case Family::GK:
      gens = d.k_basis;
      for (int j = 0; j < n; ++j) {
        gens.push_back(detail::translation(n, Vec::Unit(n, j)));
        gens.push_back(detail::translation(n, I * Vec::Unit(n, j)));
      }
      add_iR();
      break;
    case Family::GKJL:
    case Family::GKL:
    case Family::BergerGK: {
      gens = d.k_basis;
      for (int j = 0; j < d.m; ++j) {
        gens.push_back(detail::translation(n, Vec::Unit(n, j)));
        gens.push_back(detail::translation(n, I * Vec::Unit(n, j)));
      }
      Mat F = d.family == Family::GKJL ? Mat(Mat::Identity(n - d.m, n - d.m)) : d.real_form.basis_f;
      for (int j = 0; j < n - d.m; ++j) gens.push_back(detail::translation(n, detail::embed_L0(n, d.m, F.col(j))));
      add_iR();
      break;
    }
    case Family::GK0PSI: {
      gens = d.k_basis;
      auto dom = detail::psi_domain(d);
      for (std::size_t j = 0; j < dom.size(); ++j) gens.push_back(detail::translation(n, dom[j]) + d.psi_images[j]);
      for (int j = 0; j < d.r; ++j) {
        gens.push_back(detail::translation(n, Vec::Unit(n, j)));
        gens.push_back(detail::translation(n, I * Vec::Unit(n, j)));
      }
      add_iR();
      break;
    }
    default:
      throw DescriptorError("build_family: unsupported family");
  }
  MatrixAlgebra alg = make_span(n, gens);
  if (alg.bracket_residual() > 1e-9) throw DescriptorError("build_family: span is not closed");
  return alg;
}

/// Expected real dimension from the family formula.
inline int family_dimension(const AlgebraDescriptor& d) {
  const int kd = d.k_dim();
  switch (d.family) {
    case Family::G0: return 3;
    case Family::G1: return 3;
    case Family::G2: return 2;
    case Family::G3: return std::abs(d.gamma) > 0 ? 2 : 1;
    case Family::GK: return kd + 2 * d.n + 1;
    case Family::GKJL:
    case Family::GKL:
    case Family::BergerGK: return kd + 2 * d.m + (d.n - d.m) + 1;
    case Family::GK0PSI: return kd + 2 * d.r + 2 * (d.m - d.r) + (d.n - d.m) + 1;
    default: return -1;
  }
}

namespace detail {

inline MatrixAlgebra conjugate(const MatrixAlgebra& alg, const Mat& P) {
  Mat Pi = P.inverse();
  std::vector<Mat> b;
  for (const auto& x : alg.basis) b.push_back(Pi * x * P);
  return make_span(alg.n, b);
}

inline RVec realify(const Vec& z) {
  RVec v(2 * z.size());
  v << z.real(), z.imag();
  return v;
}

inline Vec complexify(const RVec& v) {
  const auto n = v.size() / 2;
  Vec z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = cplx(v(i), v(n + i));
  return z;
}

inline AlgebraDescriptor unknown(int n, const std::string& why) {
  AlgebraDescriptor d;
  d.family = Family::Unknown;
  d.n = n;
  d.note = why;
  return d;
}

inline cplx normalize_gamma(cplx g) {
  if (std::abs(g) < 1e-12) return 0.0;
  g /= std::abs(g);
  if (g.real() < -1e-12 || (std::abs(g.real()) <= 1e-12 && g.imag() < 0)) g = -g;
  return g;
}

inline AlgebraDescriptor match_n0(const MatrixAlgebra& alg) {
  bool parabolic = std::all_of(alg.basis.begin(), alg.basis.end(), [](const Mat& b) { return parabolic_pattern(b); });
  if (!parabolic) {
    if (alg.dim() == 3 && alg.unitary_sub &&
        std::all_of(alg.basis.begin(), alg.basis.end(), [](const Mat& b) { return std::abs(b.trace()) < 1e-9; })) {
      AlgebraDescriptor d;
      d.family = Family::G0;
      return d;
    }
    return unknown(0, "n = 0 algebra outside the parabolic pattern");
  }
  const bool has_iR = alg.contains(iR_element(0));
  std::vector<Mat> a_parts;
  for (const auto& b : alg.basis) a_parts.push_back(project(b, Summand::C_plus_un));
  MatrixAlgebra ap = make_span(0, a_parts);
  AlgebraDescriptor d;
  if (has_iR) {
    if (ap.dim() == 2 && alg.dim() == 3) {
      d.family = Family::G1;
      return d;
    }
    if (ap.dim() == 1 && alg.dim() == 2) {
      d.family = Family::G3;
      d.gamma = normalize_gamma(ap.basis[0](0, 0));
      return d;
    }
    if (ap.dim() == 0 && alg.dim() == 1) {
      d.family = Family::G3;
      d.gamma = 0.0;
      return d;
    }
  } else if (ap.dim() == 2 && alg.dim() == 2) {
    d.family = Family::G2;
    return d;
  }
  return unknown(0, "no n = 0 family fits");
}

}  // namespace detail

/// Identifies the family in the canonical Witt frame, up to a unitary change of basis of C^n.
inline AlgebraDescriptor match_algebra(const MatrixAlgebra& alg_in) {
  const int n = alg_in.n;
  if (n == 0) return detail::match_n0(alg_in);
  for (const auto& b : alg_in.basis)
    if (!parabolic_pattern(b) || !is_anti_hermitian(b)) return detail::unknown(n, "not inside u(1,n+1)_{Cp}");
  if (!alg_in.contains(iR_element(n))) return detail::unknown(n, "iR is not contained");

  // L = projection to C^n
  RMat Zs(2 * n, alg_in.dim());
  for (int k = 0; k < alg_in.dim(); ++k) Zs.col(k) = detail::realify(ABZC::decompose(alg_in.basis[k]).Z);
  RMat Lq = column_span(Zs);
  Mat Lc(n, Lq.cols());
  for (Eigen::Index j = 0; j < Lq.cols(); ++j) Lc.col(j) = detail::complexify(Lq.col(j));
  if (column_span_complex(Lc).cols() != n) return detail::unknown(n, "L does not span C^n");
  // L n iL
  RMat Jq(2 * n, Lq.cols());
  for (Eigen::Index j = 0; j < Lq.cols(); ++j) Jq.col(j) = detail::realify(I * detail::complexify(Lq.col(j)));
  RMat both(2 * n, 2 * Lq.cols());
  both << Lq, -Jq;
  RMat ker = null_space(both);
  Mat inter(n, ker.cols());
  for (Eigen::Index j = 0; j < ker.cols(); ++j) inter.col(j) = detail::complexify(Lq * ker.col(j).head(Lq.cols()));
  Mat Cm = column_span_complex(inter);
  const int m = static_cast<int>(Cm.cols());
  if (Lq.cols() != 2 * m + (n - m)) return detail::unknown(n, "L is not C^m + real form");

  // C^m first; also put the u-part support (C^r candidate) first inside C^m
  auto frame = [&](const Mat& head) {
    Mat U(n, n);
    Mat rest = head.cols() ? null_space_complex(head.adjoint()) : Mat(Mat::Identity(n, n));
    U << head, rest;
    Mat P = Mat::Identity(n + 2, n + 2);
    P.block(1, 1, n, n) = U;
    return P;
  };
  MatrixAlgebra alg = detail::conjugate(alg_in, frame(Cm));

  std::vector<ABZC> parts;
  for (const auto& b : alg.basis) parts.push_back(ABZC::decompose(b));
  const int dim = alg.dim();
  // translations T = { Z : (0, 0, Z, c) in g }
  RMat AA(2 + 2 * n * n, dim);
  for (int k = 0; k < dim; ++k) {
    RVec v(2 + 2 * n * n);
    v << parts[k].a.real(), parts[k].a.imag(), flatten(parts[k].A);
    AA.col(k) = v;
  }
  RMat kerA = null_space(AA);
  RMat Tz(2 * n, kerA.cols());
  for (Eigen::Index j = 0; j < kerA.cols(); ++j) {
    Vec z = Vec::Zero(n);
    for (int k = 0; k < dim; ++k) z += kerA(k, j) * parts[k].Z;
    Tz.col(j) = detail::realify(z);
  }
  const int dimT = numerical_rank(Tz);
  const int dimL = static_cast<int>(Lq.cols());

  // L0 basis in C^{n-m}
  auto l0_basis = [&](const MatrixAlgebra& a) {
    RMat Z2(2 * n, a.dim());
    for (int k = 0; k < a.dim(); ++k) Z2.col(k) = detail::realify(ABZC::decompose(a.basis[k]).Z);
    RMat q = column_span(Z2);
    Mat tail(n - m, q.cols());
    for (Eigen::Index j = 0; j < q.cols(); ++j) tail.col(j) = detail::complexify(q.col(j)).tail(n - m);
    RMat tr(2 * (n - m), tail.cols());
    for (Eigen::Index j = 0; j < tail.cols(); ++j) tr.col(j) = detail::realify(Vec(tail.col(j)));
    RMat tq = column_span(tr);
    Mat F(n - m, tq.cols());
    for (Eigen::Index j = 0; j < tq.cols(); ++j) F.col(j) = detail::complexify(tq.col(j));
    return F;
  };

  AlgebraDescriptor d;
  d.n = n;
  d.m = m;
  if (dimT == dimL) {
    MatrixAlgebra k = projection(alg, Summand::C_plus_un);
    d.k_basis = k.basis;
    if (m == n) {
      d.family = Family::GK;
      return d;
    }
    Mat F = l0_basis(alg);
    if (F.cols() != n - m) return detail::unknown(n, "L0 has the wrong dimension");
    d.real_form = RealFormData::from_basis(F);
    bool plain = true, any_a2 = false, twisted = true;
    for (const auto& kb : k.basis) {
      ABZC x = ABZC::decompose(kb);
      if (x.A.topRightCorner(m, n - m).norm() + x.A.bottomLeftCorner(n - m, m).norm() > 1e-8)
        return detail::unknown(n, "k mixes C^m and C^{n-m}");
      const double a1 = x.a.real(), a2 = x.a.imag();
      Mat B = x.A.bottomRightCorner(n - m, n - m);
      Mat E = Mat::Identity(n - m, n - m);
      if (std::abs(a1) > 1e-8 || (B - cplx(0, a2) * E).norm() > 1e-8) plain = false;
      if (std::abs(a2) > 1e-8) any_a2 = true;
      if ((B - a2 * (I * E + kBergerThetaSign * d.real_form.theta)).norm() > 1e-8) twisted = false;
    }
    if (plain && !any_a2) {
      d.family = Family::GKL;
      return d;
    }
    if (plain && d.real_form.theta_zero()) {
      d.family = Family::GKJL;
      return d;
    }
    if (twisted) {
      d.family = Family::BergerGK;
      return d;
    }
    return detail::unknown(n, "projection to C + u(n) fits no family");
  }

  // psi-coupled: C^r = support of the u(n)-parts
  for (const auto& p : parts)
    if (std::abs(p.a) > 1e-8) return detail::unknown(n, "psi-type algebra with a C-part");
  Mat cols(n, 0);
  for (const auto& p : parts) {
    Mat c2(n, cols.cols() + n);
    c2 << cols, p.A;
    cols = c2;
  }
  Mat Cr = column_span_complex(cols);
  const int r = static_cast<int>(Cr.cols());
  if (r < 1 || r > m) return detail::unknown(n, "psi-type algebra with bad C^r");
  if (Cr.bottomRows(n - m).norm() > 1e-8) return detail::unknown(n, "C^r is not inside C^m");
  // rotate inside C^m so that C^r comes first
  {
    Mat head = Cr.topRows(m);
    Mat rest = null_space_complex(head.adjoint());
    Mat Um(m, m);
    Um << head, rest;
    Mat P = Mat::Identity(n + 2, n + 2);
    P.block(1, 1, m, m) = Um;
    alg = detail::conjugate(alg, P);
  }
  parts.clear();
  for (const auto& b : alg.basis) parts.push_back(ABZC::decompose(b));
  d.r = r;
  Mat F = l0_basis(alg);
  if (F.cols() != n - m) return detail::unknown(n, "L0 has the wrong dimension");
  d.real_form = RealFormData::from_basis(F);
  // k0: u-parts of elements with Z = 0
  RMat Zm(2 * n, dim);
  for (int k = 0; k < dim; ++k) Zm.col(k) = detail::realify(parts[k].Z);
  RMat kerZ = null_space(Zm);
  std::vector<Mat> k0;
  for (Eigen::Index j = 0; j < kerZ.cols(); ++j) {
    ABZC x = ABZC::zero(n);
    for (int k = 0; k < dim; ++k) x.A += kerZ(k, j) * parts[k].A;
    k0.push_back(x.embed());
  }
  MatrixAlgebra k0s = make_span(n, k0);
  d.k_basis = k0s.basis;
  RMat k0q = k0s.flat();
  Eigen::CompleteOrthogonalDecomposition<RMat> solver(Zm);
  for (const auto& X : detail::psi_domain(d)) {
    RVec coef = solver.solve(detail::realify(X));
    if ((Zm * coef - detail::realify(X)).norm() > 1e-8) return detail::unknown(n, "C^{m-r} + L0 not reached");
    ABZC x = ABZC::zero(n);
    for (int k = 0; k < dim; ++k) x.A += coef(k) * parts[k].A;
    RVec f = flatten(x.embed());
    if (k0q.cols()) f -= k0q * (k0q.transpose() * f);
    d.psi_images.push_back(unflatten(f, n + 2, n + 2));
  }
  d.family = Family::GK0PSI;
  try {
    validate_descriptor(d);
  } catch (const DescriptorError& e) {
    return detail::unknown(n, std::string("psi-type algebra: ") + e.what());
  }
  return d;
}

enum class Realizability { yes, berger_only, not_berger };

inline const char* realizability_name(Realizability r) {
  switch (r) {
    case Realizability::yes: return "yes";
    case Realizability::berger_only: return "berger_only";
    case Realizability::not_berger: return "not_berger";
  }
  return "not_berger";
}

inline Realizability is_holonomy_realizable(const AlgebraDescriptor& d) {
  if (d.family == Family::Unknown) return Realizability::not_berger;
  try {
    validate_descriptor(d);
  } catch (const DescriptorError&) {
    return Realizability::not_berger;
  }
  if (d.family != Family::BergerGK || d.m == d.n) return Realizability::yes;
  // m < n: holonomy forces a1 = 0 and a2 theta = 0
  const bool theta0 = d.real_form.theta_zero();
  for (const auto& k : d.k_basis) {
    ABZC x = ABZC::decompose(k);
    if (std::abs(x.a.real()) > 1e-9) return Realizability::berger_only;
    if (!theta0 && std::abs(x.a.imag()) > 1e-9) return Realizability::berger_only;
  }
  return Realizability::yes;
}

/// Ricci-flat test by traces: every generator of build_family(d) lies in su(1,n+1).
inline bool ricci_flat_by_trace(const AlgebraDescriptor& d) {
  if (d.family == Family::G0) return true;
  MatrixAlgebra g = build_family(d);
  for (const auto& b : g.basis)
    if (std::abs(b.trace()) > 1e-9) return false;
  return true;
}

/// The same test written as the list of the Ricci-flat corollary.
inline bool ricci_flat_condition(const AlgebraDescriptor& d) {
  validate_descriptor(d);
  const int n = d.n, m = d.m;
  auto tr = [](const Mat& A) { return std::abs(A.trace()); };
  switch (d.family) {
    case Family::G0: return true;
    case Family::G1:
    case Family::G2: return false;
    case Family::G3: return std::abs(d.gamma.imag()) < 1e-9;
    case Family::GK:
      // k in R + R(n i, -2i id) + su(n)
      for (const auto& k : d.k_basis) {
        ABZC x = ABZC::decompose(k);
        double t = x.a.imag() / n;
        if (tr(x.A + cplx(0, 2.0 * t) * Mat::Identity(n, n)) > 1e-9) return false;
      }
      return true;
    case Family::GKJL:
      // k in R(m i, -(2+n-m) i id_m + m i id_{n-m}) + su(m)
      if (m == 0) return false;
      for (const auto& k : d.k_basis) {
        ABZC x = ABZC::decompose(k);
        double t = x.a.imag() / m;
        Mat S = x.A.topLeftCorner(m, m) + cplx(0, (2.0 + n - m) * t) * Mat::Identity(m, m);
        if (tr(S) > 1e-9) return false;
      }
      return true;
    case Family::GKL:
      for (const auto& k : d.k_basis)
        if (tr(k) > 1e-9) return false;
      return true;
    case Family::GK0PSI:
      for (const auto& k : d.k_basis)
        if (tr(k) > 1e-9) return false;
      for (const auto& p : d.psi_images)
        if (tr(p) > 1e-9) return false;
      return true;
    case Family::BergerGK:
      return ricci_flat_by_trace(d);
    default:
      return false;
  }
}

}  // namespace lkh
