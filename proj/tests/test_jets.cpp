#include <gtest/gtest.h>

#include <random>

#include "lkh/jet.hpp"

using namespace lkh;

namespace {

// d = 3: v, z, u
constexpr int kD = 3;

Jet var(Var v, int ord = 10) { return Jet::variable(kD, ord, v); }

Jet random_jet(std::mt19937& rng, int ord, int deg, int nterms) {
  std::uniform_int_distribution<int> ex(0, deg);
  std::normal_distribution<double> g;
  Jet j(kD, ord);
  for (int t = 0; t < nterms; ++t) {
    std::vector<int> I(kD), J(kD);
    int left = deg;
    for (int i = 0; i < kD; ++i) {
      I[i] = std::min(left, ex(rng) / 2);
      left -= I[i];
      J[i] = std::min(left, ex(rng) / 2);
      left -= J[i];
    }
    j += Jet::monomial(kD, ord, I, J, {g(rng), g(rng)});
  }
  return j;
}

double diff(const Jet& a, const Jet& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Jet, MonomialProduct) {
  Jet p = var(holo(1)) * var(anti(1));
  ASSERT_EQ(p.terms().size(), 1u);
  std::vector<int> I{0, 1, 0}, J{0, 1, 0};
  EXPECT_EQ(p.coeff(I, J), cplx(1.0));
}

TEST(Jet, FlatPotentialMixedSecondDerivatives) {
  Jet f = var(anti(2)) * var(holo(0)) + var(anti(0)) * var(holo(2));
  for (int a = 0; a < kD; ++a)
    for (int b = 0; b < kD; ++b) {
      cplx h = f.derivative(anti(b)).derivative(holo(a)).constant_term();
      cplx want = ((a == 0 && b == 2) || (a == 2 && b == 0)) ? 1.0 : 0.0;
      EXPECT_EQ(h, want) << a << "," << b;
    }
}

TEST(Jet, ExpSeriesOfUUbar) {
  Jet uu = var(holo(2), 6) * var(anti(2), 6);
  Jet e = jet_exp(uu);
  double fact = 1.0;
  for (int k = 0; k <= 3; ++k) {
    if (k) fact *= k;
    std::vector<int> I{0, 0, k}, J{0, 0, k};
    EXPECT_NEAR(std::abs(e.coeff(I, J) - 1.0 / fact), 0.0, 1e-15);
  }
  EXPECT_EQ(e.terms().size(), 4u);
  EXPECT_EQ(jet_exp(Jet(kD, 6)).constant_term(), cplx(1.0));
}

TEST(Jet, ExpOfFCondition) {
  const cplx a{0.3, -0.7}, b{1.1, 0.2};
  Jet uu = var(holo(2), 8) * var(anti(2), 8);
  Jet e = jet_exp(-I * a * uu - (I * b / 4.0) * uu * uu);
  std::vector<int> I1{0, 0, 1};
  EXPECT_LT(std::abs(e.coeff(I1, I1) + I * a), 1e-15);
}

TEST(Jet, ExpMatchesPointwise) {
  std::mt19937 rng(7);
  Jet f = random_jet(rng, 24, 3, 6) * 0.3;
  Jet e = jet_exp(f);
  std::uniform_real_distribution<double> U(-0.05, 0.05);
  for (int s = 0; s < 5; ++s) {
    std::vector<cplx> z{{U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}};
    cplx want = std::exp(f.evaluate(z));
    EXPECT_LT(std::abs(e.evaluate(z) - want), 1e-8);
  }
}

TEST(Jet, ErfBasics) {
  Jet x = var(holo(2), 7);
  Jet e = jet_erf(x);
  EXPECT_EQ(e.constant_term(), cplx(0.0));
  EXPECT_NEAR(e.derivative(holo(2)).constant_term().real(), 2.0 / std::sqrt(std::numbers::pi), 1e-15);
  // term-by-term integral of (2/sqrt(pi)) exp(-x^2)
  Jet g = jet_exp(-(x * x)) * (2.0 / std::sqrt(std::numbers::pi));
  Jet integ = g.integral(holo(2));
  EXPECT_LT(diff(e, integ), 1e-14);
}

TEST(Jet, ErfAtShiftedPoint) {
  // erf(x0 + t) vs integral from x0 of the derivative
  const cplx x0{0.4, 0.3};
  Jet t = var(holo(2), 9);
  Jet e = jet_erf(t + Jet::constant(kD, 9, x0));
  Jet d = jet_exp(-(t + Jet::constant(kD, 9, x0)) * (t + Jet::constant(kD, 9, x0))) * (2.0 / std::sqrt(std::numbers::pi));
  Jet want = d.integral(holo(2)) + Jet::constant(kD, 9, erf_complex(x0));
  EXPECT_LT(diff(e, want), 1e-13);
  EXPECT_NEAR(erf_complex(0.5).real(), std::erf(0.5), 1e-15);
}

TEST(Jet, DividedSeriesPole) {
  const cplx a{0.8, 0.0};
  const int ord = 12;
  Jet uu = var(holo(2), ord) * var(anti(2), ord);
  Jet num = jet_exp(-I * a * uu) - Jet::constant(kD, ord, 1.0);
  Jet q = divided_series(num, holo(2), 1);
  EXPECT_EQ(q.order(), ord - 1);
  double fact = 1.0;
  for (int k = 1; 2 * k - 1 <= q.order(); ++k) {
    fact *= k;
    std::vector<int> Iu{0, 0, k - 1}, Ju{0, 0, k};
    EXPECT_LT(std::abs(q.coeff(Iu, Ju) - std::pow(-I * a, k) / fact), 1e-14);
  }
}

TEST(Jet, DividedSeriesCancellation) {
  const int ord = 14;
  Jet u = var(holo(2), ord), ub = var(anti(2), ord);
  Jet e = jet_exp(u * ub);
  Jet one = Jet::constant(kD, ord, 1.0);
  // (1 - e)/ub^2 + (u/ub) e  ==  [ (1 - e) + u ub e ] / ub^2
  Jet num = (one - e) + u * ub * e;
  Jet r = divided_series(num, anti(2), 2);
  double fact = 1.0;
  for (int k = 1; k <= 7; ++k) {
    fact *= k;
    if (k < 2 || 2 * k - 2 > r.order()) continue;
    std::vector<int> Iu{0, 0, k}, Ju{0, 0, k - 2};
    EXPECT_LT(std::abs(r.coeff(Iu, Ju) - double(k - 1) / fact), 1e-14);
  }
  EXPECT_EQ(r.coeff(std::vector<int>{0, 0, 1}, std::vector<int>{0, 0, 0}), cplx(0.0));
}

TEST(Jet, DividedSeriesRejects) {
  Jet uu = var(holo(2)) * var(anti(2));
  EXPECT_THROW(divided_series(uu, holo(2), 2), DivisibilityError);
}

TEST(Jet, Derivatives) {
  Jet u = var(holo(2)), ub = var(anti(2));
  EXPECT_EQ(diff((u * ub).derivative(holo(2)), ub.truncated(9)), 0.0);
  Jet e = jet_exp(u * ub);
  EXPECT_EQ(e.derivative(anti(2)).derivative(holo(2)).constant_term(), cplx(1.0));
}

TEST(Jet, RingAxiomsAndLeibniz) {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    Jet a = random_jet(rng, 8, 4, 8), b = random_jet(rng, 8, 4, 8), c = random_jet(rng, 8, 4, 8);
    EXPECT_LT(diff((a * b) * c, a * (b * c)), 1e-12);
    EXPECT_LT(diff(a * b, b * a), 1e-12);
    EXPECT_LT(diff(a * (b + c), a * b + a * c), 1e-12);
    for (Var v : {holo(0), anti(1), holo(2)}) {
      Jet lhs = (a * b).derivative(v);
      Jet rhs = a.derivative(v) * b + a * b.derivative(v);
      EXPECT_LT(diff(lhs, rhs.truncated(lhs.order())), 1e-12);
    }
  }
}

TEST(Jet, RealValuedPreserved) {
  std::mt19937 rng(3);
  Jet a = random_jet(rng, 8, 4, 6), b = random_jet(rng, 8, 4, 6);
  Jet ra = a + a.conjugate(), rb = b * b.conjugate();
  ra.set_real_valued(true);
  rb.set_real_valued(true);
  EXPECT_TRUE(ra.is_real());
  EXPECT_TRUE(rb.is_real());
  Jet s = ra + rb, p = ra * rb;
  EXPECT_TRUE(s.real_valued());
  EXPECT_TRUE(p.real_valued());
  EXPECT_TRUE(s.is_real());
  EXPECT_TRUE(p.is_real());
}

TEST(Jet, ExpOfSum) {
  std::mt19937 rng(5);
  Jet a = random_jet(rng, 10, 3, 5) * 0.5, b = random_jet(rng, 10, 3, 5) * 0.5;
  EXPECT_LT(diff(jet_exp(a + b), jet_exp(a) * jet_exp(b)), 1e-12);
}

TEST(Jet, Reciprocal) {
  std::mt19937 rng(9);
  Jet a = random_jet(rng, 10, 3, 5) + Jet::constant(kD, 10, {2.0, 1.0});
  Jet r = reciprocal(a);
  EXPECT_LT(diff(r * a, Jet::constant(kD, 10, 1.0)), 1e-12);
}

TEST(Jet, ShapeMismatch) {
  EXPECT_THROW(Jet::variable(2, 4, holo(0)) + Jet::variable(3, 4, holo(0)), ShapeError);
}
