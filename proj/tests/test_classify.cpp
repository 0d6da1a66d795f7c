#include <gtest/gtest.h>

#include <random>

#include "lkh/classify.hpp"

using namespace lkh;

namespace {

Mat diag_i(const std::vector<double>& t) {
  Mat A = Mat::Zero(t.size(), t.size());
  for (std::size_t j = 0; j < t.size(); ++j) A(j, j) = cplx(0, t[j]);
  return A;
}

std::vector<Mat> u_basis(int n, int k) {
  // u(k) in the top-left block of u(n)
  std::vector<Mat> out;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Mat A = Mat::Zero(k, k);
      if (i == j) {
        A(i, i) = I;
        out.push_back(k_element(n, 0.0, A));
      } else {
        A(i, j) = 1.0;
        A(j, i) = -1.0;
        out.push_back(k_element(n, 0.0, A));
        A(i, j) = I;
        A(j, i) = I;
        out.push_back(k_element(n, 0.0, A));
      }
    }
  return out;
}

std::vector<Mat> su_basis(int n, int k) {
  std::vector<Mat> out;
  for (const auto& b : u_basis(n, k)) {
    Mat A = b.block(1, 1, k, k);
    A -= A.trace() / double(k) * Mat::Identity(k, k);
    out.push_back(k_element(n, 0.0, A));
  }
  return out;
}

AlgebraDescriptor gk_full(int n) {
  AlgebraDescriptor d;
  d.family = Family::GK;
  d.n = n;
  d.k_basis = u_basis(n, n);
  d.k_basis.push_back(k_element(n, 1.0, Mat()));
  d.k_basis.push_back(k_element(n, I, Mat()));
  return d;
}

void expect_round_trip(const AlgebraDescriptor& d) {
  MatrixAlgebra g = build_family(d);
  EXPECT_EQ(g.dim(), family_dimension(d)) << family_name(d.family);
  EXPECT_LT(g.bracket_residual(), 1e-10);
  EXPECT_TRUE(g.unitary_sub);
  AlgebraDescriptor e = match_algebra(g);
  EXPECT_EQ(e.family, d.family) << e.note;
  EXPECT_EQ(e.n, d.n);
  if (d.family != Family::GK && d.n > 0) EXPECT_EQ(e.m, d.m);
  EXPECT_EQ(e.r, d.r);
  if (e.family != Family::Unknown) EXPECT_EQ(e.k_dim(), d.k_dim());
}

}  // namespace

TEST(Classify, SmallFamilies) {
  AlgebraDescriptor d;
  d.family = Family::G1;
  EXPECT_EQ(build_family(d).dim(), 3);
  expect_round_trip(d);
  d.family = Family::G2;
  EXPECT_EQ(build_family(d).dim(), 2);
  expect_round_trip(d);
  d.family = Family::G3;
  d.gamma = 1.0;
  MatrixAlgebra g3 = build_family(d);
  EXPECT_EQ(g3.dim(), 2);
  expect_round_trip(d);
  d.gamma = cplx(2.0, -2.0);
  AlgebraDescriptor e = match_algebra(build_family(d));
  EXPECT_EQ(e.family, Family::G3);
  EXPECT_LT(std::abs(e.gamma - cplx(-1.0, 1.0) / std::sqrt(2.0)) * std::abs(e.gamma + cplx(-1.0, 1.0) / std::sqrt(2.0)), 1e-12);
  d.gamma = 0.0;
  EXPECT_EQ(build_family(d).dim(), 1);
  expect_round_trip(d);
}

TEST(Classify, G0) {
  AlgebraDescriptor d;
  d.family = Family::G0;
  MatrixAlgebra g = build_family(d);
  EXPECT_EQ(g.dim(), 3);
  EXPECT_TRUE(g.unitary_sub);
  for (const auto& b : g.basis) EXPECT_LT(std::abs(b.trace()), 1e-12);
  EXPECT_EQ(span_close(0, g0_basis()).dim(), 3);
  EXPECT_FALSE(weak_irreducibility_falsifier(g, 64, 3).found);
  expect_round_trip(d);
  EXPECT_TRUE(ricci_flat_condition(d));
}

TEST(Classify, GKDimension) {
  AlgebraDescriptor d = gk_full(1);
  EXPECT_EQ(build_family(d).dim(), 6);
  // n = 1: g^k with the full C + u(1) is u(1,2)_{Cp}
  EXPECT_TRUE(same_span(build_family(d), make_span(1, parabolic_basis(1))));
  for (int n = 1; n <= 3; ++n) expect_round_trip(gk_full(n));
}

TEST(Classify, RoundTrips) {
  AlgebraDescriptor d;
  d.family = Family::GKL;
  d.n = 2;
  d.m = 1;
  d.real_form = RealFormData::from_lambdas(1, {});
  d.k_basis = u_basis(2, 1);
  expect_round_trip(d);
  d.k_basis.clear();
  expect_round_trip(d);

  AlgebraDescriptor l;
  l.family = Family::GKL;
  l.n = 3;
  l.m = 1;
  l.real_form = RealFormData::from_lambdas(2, {0.5});
  l.k_basis = u_basis(3, 1);
  expect_round_trip(l);

  AlgebraDescriptor j;
  j.family = Family::GKJL;
  j.n = 2;
  j.m = 1;
  j.real_form = RealFormData::from_lambdas(1, {});
  j.k_basis = {gkjl_element(2, 1, 1.0, Mat::Zero(1, 1))};
  expect_round_trip(j);
  j.k_basis = {gkjl_element(2, 1, 1.0, diag_i({0.3})), k_element(2, 0.0, diag_i({1.0}))};
  expect_round_trip(j);
  AlgebraDescriptor j0 = j;
  j0.m = 0;
  j0.n = 1;
  j0.real_form = RealFormData::from_lambdas(1, {});
  j0.k_basis = {gkjl_element(1, 0, 1.0, Mat())};
  expect_round_trip(j0);

  AlgebraDescriptor p;
  p.family = Family::GK0PSI;
  p.n = 2;
  p.m = 1;
  p.r = 1;
  p.real_form = RealFormData::from_lambdas(1, {});
  p.psi_images = {k_element(2, 0.0, diag_i({1.0}))};
  expect_round_trip(p);

  AlgebraDescriptor p3;
  p3.family = Family::GK0PSI;
  p3.n = 3;
  p3.m = 2;
  p3.r = 1;
  p3.real_form = RealFormData::from_lambdas(1, {});
  p3.psi_images = {k_element(3, 0.0, diag_i({1.0})), k_element(3, 0.0, diag_i({0.0})),
                   k_element(3, 0.0, diag_i({-2.0}))};
  expect_round_trip(p3);
}

TEST(Classify, DescriptorErrors) {
  AlgebraDescriptor j;
  j.family = Family::GKJL;
  j.n = 2;
  j.m = 1;
  j.real_form = RealFormData::from_lambdas(1, {});
  j.k_basis = {k_element(2, 0.0, diag_i({1.0}))};
  EXPECT_THROW(build_family(j), DescriptorError);
  EXPECT_EQ(is_holonomy_realizable(j), Realizability::not_berger);
  AlgebraDescriptor p;
  p.family = Family::GK0PSI;
  p.n = 2;
  p.m = 1;
  p.r = 1;
  p.real_form = RealFormData::from_lambdas(1, {});
  p.psi_images = {k_element(2, 0.0, Mat::Zero(1, 1))};
  EXPECT_THROW(build_family(p), DescriptorError);
  AlgebraDescriptor nc = gk_full(2);
  nc.k_basis = {k_element(2, 0.0, u_basis(2, 2)[1].block(1, 1, 2, 2)), k_element(2, 0.0, u_basis(2, 2)[2].block(1, 1, 2, 2))};
  EXPECT_THROW(build_family(nc), DescriptorError);
}

TEST(Classify, Realizability) {
  EXPECT_EQ(is_holonomy_realizable(gk_full(2)), Realizability::yes);
  AlgebraDescriptor b;
  b.family = Family::BergerGK;
  b.n = 2;
  b.m = 0;
  b.real_form = RealFormData::from_lambdas(2, {0.5});
  b.k_basis = {berger_element(2, 0, b.real_form, 0.0, 1.0, Mat())};
  EXPECT_FALSE(b.real_form.theta_zero());
  EXPECT_EQ(is_holonomy_realizable(b), Realizability::berger_only);
  MatrixAlgebra g = build_family(b);
  EXPECT_EQ(g.dim(), family_dimension(b));
  EXPECT_EQ(match_algebra(g).family, Family::BergerGK);
  // a1 twist alone is excluded as well
  AlgebraDescriptor b1 = b;
  b1.real_form = RealFormData::from_lambdas(2, {});
  b1.k_basis = {berger_element(2, 0, b1.real_form, 1.0, 0.0, Mat())};
  EXPECT_EQ(is_holonomy_realizable(b1), Realizability::berger_only);
  // theta = 0, a1 = 0 is GKJL
  AlgebraDescriptor b2 = b1;
  b2.k_basis = {berger_element(2, 0, b1.real_form, 0.0, 1.0, Mat())};
  EXPECT_EQ(is_holonomy_realizable(b2), Realizability::yes);
  EXPECT_EQ(match_algebra(build_family(b2)).family, Family::GKJL);
  AlgebraDescriptor u;
  EXPECT_EQ(is_holonomy_realizable(u), Realizability::not_berger);
}

TEST(Classify, UnknownAlgebra) {
  // so(2) inside u(2) commutes with tau for L0 = R^2 but is not of the form a2(i + i id + theta)
  Mat so2(2, 2);
  so2 << 0, -1, 1, 0;
  std::vector<Mat> gens = {k_element(2, 0.0, so2)};
  for (int j = 0; j < 2; ++j) {
    ABZC x = ABZC::zero(2);
    x.Z(j) = 1.0;
    gens.push_back(x.embed());
  }
  gens.push_back(iR_element(2));
  MatrixAlgebra g = span_close(2, gens);
  EXPECT_EQ(g.dim(), 4);
  EXPECT_EQ(match_algebra(g).family, Family::Unknown);
  EXPECT_EQ(match_algebra(make_span(1, {iR_element(1)})).family, Family::Unknown);
}

TEST(Classify, BuiltFamiliesInvariants) {
  std::vector<AlgebraDescriptor> all = {gk_full(1), gk_full(2), gk_full(3)};
  AlgebraDescriptor l;
  l.family = Family::GKL;
  l.n = 3;
  l.m = 1;
  l.real_form = RealFormData::from_lambdas(2, {0.5});
  l.k_basis = u_basis(3, 1);
  all.push_back(l);
  AlgebraDescriptor j;
  j.family = Family::GKJL;
  j.n = 2;
  j.m = 1;
  j.real_form = RealFormData::from_lambdas(1, {});
  j.k_basis = {gkjl_element(2, 1, 1.0, Mat::Zero(1, 1))};
  all.push_back(j);
  AlgebraDescriptor p;
  p.family = Family::GK0PSI;
  p.n = 2;
  p.m = 1;
  p.r = 1;
  p.real_form = RealFormData::from_lambdas(1, {});
  p.psi_images = {k_element(2, 0.0, diag_i({1.0}))};
  all.push_back(p);
  AlgebraDescriptor z;
  z.family = Family::GK;
  z.n = 2;
  all.push_back(z);
  for (const auto& d : all) {
    MatrixAlgebra g = build_family(d);
    EXPECT_TRUE(g.contains(iR_element(d.n)));
    EXPECT_TRUE(g.unitary_sub);
    EXPECT_LT(g.bracket_residual(), 1e-10);
    EXPECT_FALSE(weak_irreducibility_falsifier(g, 64, 11).found) << family_name(d.family);
    EXPECT_TRUE(same_span(projection(g, Summand::C_plus_un), make_span(d.n, d.k_basis)) ||
                d.family == Family::GK0PSI);
  }
}

TEST(Classify, RicciFlat) {
  AlgebraDescriptor d;
  d.family = Family::G3;
  d.gamma = 1.0;
  EXPECT_TRUE(ricci_flat_condition(d));
  EXPECT_TRUE(ricci_flat_by_trace(d));
  d.gamma = I;
  EXPECT_FALSE(ricci_flat_condition(d));
  EXPECT_FALSE(ricci_flat_by_trace(d));
  AlgebraDescriptor l;
  l.family = Family::GKL;
  l.n = 3;
  l.m = 2;
  l.real_form = RealFormData::from_lambdas(1, {});
  l.k_basis = su_basis(3, 2);
  EXPECT_TRUE(ricci_flat_condition(l));
  l.k_basis = u_basis(3, 2);
  EXPECT_FALSE(ricci_flat_condition(l));
}

TEST(Classify, RicciFlatAgreesWithTrace) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  int flat = 0;
  for (int t = 0; t < 200; ++t) {
    AlgebraDescriptor d;
    const int kind = t % 5;
    const bool tf = coin(rng);
    if (kind == 0) {
      d.family = Family::G3;
      d.gamma = tf ? cplx(u(rng), 0) : cplx(u(rng), u(rng));
    } else if (kind == 1) {
      d.family = Family::GK;
      d.n = 1 + t % 3;
      double y = u(rng);
      std::vector<double> ts(d.n);
      double s = 0;
      for (auto& x : ts) s += (x = u(rng));
      if (tf) ts[0] -= s + 2 * y;
      d.k_basis = {k_element(d.n, cplx(u(rng), y), diag_i(ts))};
    } else if (kind == 2) {
      d.family = Family::GKJL;
      d.n = 2 + t % 2;
      d.m = 1;
      d.real_form = RealFormData::from_lambdas(d.n - 1, {});
      double a2 = 0.5 + std::abs(u(rng));
      double tt = tf ? -(2.0 + d.n - d.m) * a2 : u(rng);
      d.k_basis = {gkjl_element(d.n, 1, a2, diag_i({tt}))};
    } else if (kind == 3) {
      d.family = Family::GKL;
      d.n = 3;
      d.m = 2;
      d.real_form = RealFormData::from_lambdas(1, {});
      double a = u(rng), b = tf ? -a : u(rng);
      d.k_basis = {k_element(3, 0.0, diag_i({a, b}))};
    } else {
      d.family = Family::GK0PSI;
      d.n = 3;
      d.m = 2;
      d.r = 2;
      d.real_form = RealFormData::from_lambdas(1, {});
      double a = 0.5 + std::abs(u(rng)), b = tf ? -a : u(rng);
      d.psi_images = {k_element(3, 0.0, diag_i({a, b}))};
    }
    bool sym = ricci_flat_condition(d), tr = ricci_flat_by_trace(d);
    EXPECT_EQ(sym, tr) << family_name(d.family);
    flat += sym;
  }
  EXPECT_GT(flat, 20);
  EXPECT_LT(flat, 180);
}
