#include <gtest/gtest.h>

#include <random>

#include "lkh/lie.hpp"

using namespace lkh;

namespace {

ABZC random_abzc(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  ABZC x = ABZC::zero(n);
  x.a = {g(rng), g(rng)};
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = {g(rng), g(rng)};
  x.A = A - A.adjoint();
  for (int i = 0; i < n; ++i) x.Z(i) = {g(rng), g(rng)};
  x.c = g(rng);
  return x;
}

double dist(const ABZC& x, const ABZC& y) { return (x.embed() - y.embed()).norm(); }

double dist(const SimElement& x, const SimElement& y) {
  return std::abs(x.r - y.r) + (x.U - y.U).norm() + (x.Z - y.Z).norm();
}

}  // namespace

TEST(Lie, EmbeddingIsAntiHermitian) {
  std::mt19937 rng(1);
  for (int n = 0; n <= 3; ++n)
    for (int k = 0; k < 10; ++k) EXPECT_TRUE(is_anti_hermitian(random_abzc(rng, n).embed()));
}

TEST(Lie, BracketFormulas) {
  std::mt19937 rng(2);
  ABZC x = random_abzc(rng, 2);
  x.Z.setZero();
  x.c = 0;
  EXPECT_LT(abzc_bracket(x, x).embed().norm(), 1e-14);

  ABZC z = ABZC::zero(1), w = ABZC::zero(1);
  z.Z(0) = 1.0;
  w.Z(0) = I;
  ABZC r = abzc_bracket(z, w);
  // commutator gives c = 2 Im h(Z, V) with h(Z, V) = V^* Z, here Im(-i) * 2 = -2
  EXPECT_NEAR(r.c, 2.0 * herm(z.Z, w.Z).imag(), 1e-15);
  EXPECT_NEAR(r.c, -2.0, 1e-15);
  EXPECT_LT(std::abs(r.a) + r.A.norm() + r.Z.norm(), 1e-15);

  ABZC one = ABZC::zero(0), c1 = ABZC::zero(0);
  one.a = 1.0;
  c1.c = 1.0;
  EXPECT_NEAR(abzc_bracket(one, c1).c, 2.0, 1e-15);

  // general (a,A,0,0) with (b,B,Z,c)
  for (int k = 0; k < 20; ++k) {
    ABZC p = random_abzc(rng, 3), q = random_abzc(rng, 3);
    p.Z.setZero();
    p.c = 0;
    ABZC got = abzc_bracket(p, q);
    ABZC want = ABZC::zero(3);
    want.A = p.A * q.A - q.A * p.A;
    want.Z = std::conj(p.a) * q.Z + p.A * q.Z;
    want.c = 2.0 * q.c * p.a.real();
    EXPECT_LT(dist(got, want), 1e-12);
    ABZC s = random_abzc(rng, 3), t = random_abzc(rng, 3);
    s.a = t.a = 0;
    s.A.setZero();
    t.A.setZero();
    s.c = 0;
    ABZC st = abzc_bracket(s, t);
    EXPECT_NEAR(st.c, 2.0 * herm(s.Z, t.Z).imag(), 1e-12);
  }
}

TEST(Lie, SpanClose) {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = I;
  d(1, 1) = -I;
  EXPECT_EQ(span_close(0, {d}).dim(), 1);

  ABZC a = ABZC::zero(1), z = ABZC::zero(1);
  a.a = 1.0;
  z.Z(0) = 1.0;
  MatrixAlgebra g = span_close(1, {a.embed(), z.embed()});
  EXPECT_GE(g.dim(), 2);
  EXPECT_LT(g.bracket_residual(), 1e-10);
  // idempotent and monotone
  MatrixAlgebra g2 = span_close(1, g.basis);
  EXPECT_TRUE(same_span(g, g2));
  EXPECT_TRUE(g.contains(a.embed()));

  // [Z, iZ] produces the iR line
  ABZC iz = ABZC::zero(1);
  iz.Z(0) = I;
  MatrixAlgebra h = span_close(1, {z.embed(), iz.embed()});
  EXPECT_EQ(h.dim(), 3);
  EXPECT_TRUE(h.contains(iR_element(1)));
}

TEST(Lie, Sigma) {
  std::mt19937 rng(3);
  for (int n = 0; n <= 2; ++n) {
    Mat x = random_abzc(rng, n).embed();
    EXPECT_LT((sigma_involution(x) - x).norm(), 1e-13);
  }
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = cplx(1, 2);
  d(2, 2) = cplx(-3, 0.5);
  Mat want = Mat::Zero(3, 3);
  want(0, 0) = -std::conj(d(2, 2));
  want(2, 2) = -std::conj(d(0, 0));
  EXPECT_LT((sigma_involution(d) - want).norm(), 1e-15);
  // sigma^2 = id on upper block triangular matrices; fixed space has real dim = dim u(1,n+1)_{Cp}
  std::normal_distribution<double> g;
  for (int n = 1; n <= 2; ++n) {
    const int N = n + 2;
    std::vector<Mat> ut;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        bool allowed = !(i > 0 && j == 0) && !(i == N - 1 && j < N - 1);
        if (!allowed) continue;
        Mat e = Mat::Zero(N, N);
        e(i, j) = 1.0;
        ut.push_back(e);
        e(i, j) = I;
        ut.push_back(e);
      }
    Mat y = Mat::Zero(N, N);
    for (const auto& e : ut) y += g(rng) * e;
    EXPECT_LT((sigma_involution(sigma_involution(y)) - y).norm(), 1e-13);
    RMat S(2 * N * N, ut.size());
    for (std::size_t k = 0; k < ut.size(); ++k) S.col(k) = flatten(sigma_involution(ut[k]) - ut[k]);
    int fixed = static_cast<int>(ut.size()) - numerical_rank(S);
    EXPECT_EQ(fixed, 2 + n * n + 2 * n + 1);
    EXPECT_EQ(fixed, make_span(n, parabolic_basis(n)).dim());
  }
  Mat low = Mat::Zero(3, 3);
  low(2, 0) = 1.0;
  EXPECT_THROW(sigma_involution(low), ShapeError);
}

TEST(Lie, GammaPrime) {
  ABZC x = ABZC::zero(2);
  x.a = I;
  SimElement s = gamma_prime(x);
  EXPECT_NEAR(s.r, 0.0, 0);
  EXPECT_LT((s.U + I * Mat::Identity(2, 2)).norm(), 1e-15);
  ABZC c = ABZC::zero(2);
  c.c = 1.0;
  SimElement sc = gamma_prime(c);
  EXPECT_EQ(sc.r, 0.0);
  EXPECT_EQ(sc.U.norm() + sc.Z.norm(), 0.0);
  std::mt19937 rng(5);
  for (int k = 0; k < 100; ++k) {
    ABZC p = random_abzc(rng, 2), q = random_abzc(rng, 2);
    EXPECT_LT(dist(gamma_prime(abzc_bracket(p, q)), sim_bracket(gamma_prime(p), gamma_prime(q))), 1e-10);
  }
  // kernel = RJ + iR
  for (int n = 1; n <= 3; ++n) {
    auto B = parabolic_basis(n);
    RMat M(2 + 2 * n * n + 2 * n, B.size());
    for (std::size_t k = 0; k < B.size(); ++k) {
      SimElement s2 = gamma_prime(ABZC::decompose(B[k]));
      RVec v = RVec::Zero(M.rows());
      v(0) = s2.r;
      RVec u = flatten(s2.U), z = flatten(Mat(s2.Z));
      v.segment(1, u.size()) = u;
      v.segment(1 + u.size(), z.size()) = z;
      M.col(k) = v.head(M.rows());
    }
    EXPECT_EQ(static_cast<int>(B.size()) - numerical_rank(M), 2) << n;
  }
}

TEST(Lie, Projection) {
  MatrixAlgebra full = make_span(1, parabolic_basis(1));
  EXPECT_EQ(projection(full, Summand::C_plus_un).dim(), 3);
  EXPECT_EQ(projection(full, Summand::un).dim(), 1);
  EXPECT_EQ(projection(full, Summand::Cn_iR).dim(), 3);
  MatrixAlgebra line = make_span(2, {iR_element(2)});
  EXPECT_TRUE(same_span(projection(line, Summand::Cn_iR), line));
  EXPECT_EQ(projection(line, Summand::C_plus_un).dim(), 0);
}

TEST(Lie, Falsifier) {
  MatrixAlgebra full = make_span(1, parabolic_basis(1));
  EXPECT_FALSE(weak_irreducibility_falsifier(full, 64, 1).found);
  // u(1) acting on span(e_1) only
  Mat u = Mat::Zero(4, 4);
  u(1, 1) = I;
  MatrixAlgebra red = make_span(2, {u});
  auto r = weak_irreducibility_falsifier(red, 64, 1);
  EXPECT_TRUE(r.found);
}
