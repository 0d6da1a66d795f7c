#include <gtest/gtest.h>

#include "lkh/symspace.hpp"

using namespace lkh;

namespace {

struct Case {
  char f;
  int n, m;
};

std::vector<Case> all_cases() {
  std::vector<Case> cs{{'a', 0, 0}, {'b', 0, 0}, {'c', 0, 0}, {'d', 1, 0}, {'e', 1, 0}};
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= n; ++m) cs.push_back({'f', n, m});
  return cs;
}

// real Bianchi R(X,Y)Z + cyclic, straight from real arguments
double real_bianchi(const CurvatureMap& R) {
  auto mb = m_basis(R.N);
  double worst = 0;
  for (auto& X : mb)
    for (auto& Y : mb)
      for (auto& Z : mb) {
        Vec s = real_curvature(R, X, Y) * Z + real_curvature(R, Y, Z) * X + real_curvature(R, Z, X) * Y;
        worst = std::max(worst, s.norm());
      }
  return worst;
}

// [A, R(X,Y)] = R(AX, Y) + R(X, AY)
double real_invariance(const SymmetricPair& p) {
  auto mb = m_basis(p.R.N);
  double worst = 0;
  for (const auto& A : p.g.basis)
    for (auto& X : mb)
      for (auto& Y : mb) {
        Mat d = bracket(A, real_curvature(p.R, X, Y)) - real_curvature(p.R, A * X, Y) - real_curvature(p.R, X, A * Y);
        worst = std::max(worst, d.norm());
      }
  return worst;
}

}  // namespace

TEST(Symspace, AbelianWhenFlat) {
  SymmetricPair p;
  p.n = 1;
  p.g = make_span(1, {});
  p.R = CurvatureMap::zero(3);
  auto t = build_transvection(p);
  EXPECT_EQ(t.dim(), 6);
  for (auto& row : t.C)
    for (auto& v : row) EXPECT_EQ(v.norm(), 0.0);
}

TEST(Symspace, DisplayedData) {
  auto a = canonical_pair('a', 0);
  ASSERT_EQ(a.g.basis.size(), 1u);
  EXPECT_NEAR((a.R(1, 1) - detail::unit(2, 0, 1)).norm(), 0, 1e-14);
  auto c = canonical_pair('c', 0);
  Mat d10 = Mat::Zero(2, 2);
  d10(0, 0) = 1;
  EXPECT_NEAR((c.R(0, 1) - d10).norm(), 0, 1e-14);
  auto d = canonical_pair('d', 1);
  Mat Rd = Mat::Zero(3, 3);
  Rd(0, 2) = -I;
  EXPECT_NEAR((d.R(1, 2) - Rd).norm(), 0, 1e-14);
  auto f = canonical_pair('f', 2, 1);
  Mat Rqq = Mat::Identity(4, 4);
  Rqq(1, 1) = 0.5;
  EXPECT_NEAR((f.R(3, 3) - Rqq).norm(), 0, 1e-12);
}

TEST(Symspace, NegatedFamilies) {
  auto a = canonical_pair('a', 0), b = canonical_pair('b', 0);
  auto d = canonical_pair('d', 1), e = canonical_pair('e', 1);
  EXPECT_EQ((a.R + b.R).norm(), 0.0);
  EXPECT_EQ((d.R + e.R).norm(), 0.0);
  EXPECT_TRUE(same_span(a.g, b.g));
}

TEST(Symspace, AllFamiliesJacobiAndSpan) {
  for (auto [f, n, m] : all_cases()) {
    SCOPED_TRACE(std::string(1, f) + " n=" + std::to_string(n) + " m=" + std::to_string(m));
    auto p = canonical_pair(f, n, m);
    auto t = build_transvection(p);
    EXPECT_LT(t.jacobi_residual, 1e-10);
    EXPECT_LT(t.R_residual, 1e-10);
    EXPECT_TRUE(t.g_equals_RmM);
    EXPECT_LT(real_bianchi(p.R), 1e-10);
    EXPECT_LT(real_invariance(p), 1e-10);
    auto c = pair_consistency(p);
    EXPECT_TRUE(c.consistent);
  }
}

TEST(Symspace, CalabiYauExactlyABDE) {
  for (auto [f, n, m] : all_cases()) {
    auto r = symspace_report(canonical_pair(f, n, m));
    bool expect = f == 'a' || f == 'b' || f == 'd' || f == 'e';
    EXPECT_EQ(r.calabi_yau, expect) << f << n << m;
    EXPECT_TRUE(r.jacobi);
  }
  EXPECT_FALSE(symspace_report(canonical_pair('c', 0)).ricci_degenerate);
  EXPECT_FALSE(symspace_report(canonical_pair('f', 1, 0)).calabi_yau);
}

TEST(Symspace, HolonomyOfPair) {
  EXPECT_EQ(symspace_report(canonical_pair('a', 0)).holonomy.family, Family::G3);
  EXPECT_EQ(symspace_report(canonical_pair('c', 0)).holonomy.family, Family::G2);
  EXPECT_EQ(symspace_report(canonical_pair('d', 1)).holonomy.family, Family::GKL);
  EXPECT_EQ(symspace_report(canonical_pair('f', 2, 1)).holonomy.family, Family::GKJL);
  EXPECT_EQ(symspace_report(canonical_pair('f', 2, 2)).holonomy.family, Family::GK);
}

TEST(Symspace, RelationInFamilyF) {
  // m = n: only the 1/2 relation occurs and it holds
  auto full = canonical_pair('f', 2, 2);
  for (auto& e : full.forced) EXPECT_TRUE(e.agrees);
  EXPECT_NE(full.relation_note.find("consistent"), std::string::npos);
  // k > m: the factor 2 does not survive the invariants, forced value is R(p, conj q)
  auto p = canonical_pair('f', 2, 1);
  int bad = 0;
  for (auto& e : p.forced) {
    if (e.i > p.m) {
      EXPECT_FALSE(e.agrees);
      EXPECT_NEAR((e.forced - p.R(0, 3)).norm(), 0, 1e-9);
      ++bad;
    } else {
      EXPECT_TRUE(e.agrees);
    }
  }
  EXPECT_EQ(bad, 1);
  EXPECT_NE(p.relation_note.find("inconsistent"), std::string::npos);
}

TEST(Symspace, ParamRoundTrip) {
  for (auto [f, n, m] : all_cases()) {
    auto p = canonical_pair(f, n, m);
    auto cp = param_decode(p.R);
    EXPECT_LT(param_invariant_residual(cp), 1e-10);
    EXPECT_LT((param_encode(cp) - p.R).norm(), 1e-10) << f << n << m;
  }
}

TEST(Symspace, InvalidPairs) {
  EXPECT_THROW(canonical_pair('d', 2), ValidationError);
  EXPECT_THROW(canonical_pair('f', 2, 3), ValidationError);
  EXPECT_THROW(canonical_pair('x', 0), ValidationError);
  SymmetricPair bad = canonical_pair('a', 0);
  bad.R = canonical_pair('c', 0).R;  // values outside g
  EXPECT_THROW(build_transvection(bad), ValidationError);
  EXPECT_FALSE(symspace_report(bad).jacobi);
}

TEST(Symspace, InformationalCases) {
  auto v = irreducible_symmetric_spaces(1);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NE(v[0].find("dS"), std::string::npos);
}
