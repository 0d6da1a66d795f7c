#pragma once

// Truncated power series in holomorphic coordinates z^0..z^{d-1} and their
// formal conjugates. Coordinate 0 is v, 1..n are z^k, d-1 is u.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lkh/config.hpp"

namespace lkh {

/// Which copy of a coordinate a variable refers to.
enum class Kind { holo, anti };

struct Var {
  int coord = 0;
  Kind kind = Kind::holo;
};

inline Var holo(int c) { return {c, Kind::holo}; }
inline Var anti(int c) { return {c, Kind::anti}; }

class Jet {
 public:
  static constexpr int kMaxCoords = 5;
  static constexpr int kBits = 6;
  static constexpr int kMaxOrder = 60;
  using Key = std::uint64_t;

  struct Term {
    Key key;
    int deg;
    cplx c;
  };

  Jet() = default;
  Jet(int num_coords, int order) : d_(num_coords), order_(order) {
    if (num_coords < 1 || num_coords > kMaxCoords)
      throw ShapeError("jet: number of coordinates must be in [1, 5]");
    if (order < 0 || order > kMaxOrder) throw ShapeError("jet: order out of range");
  }

  static Jet constant(int d, int order, cplx c) {
    Jet j(d, order);
    if (c != cplx{}) j.terms_.push_back({0, 0, c});
    j.real_ = c.imag() == 0.0;
    return j;
  }

  /// Builds from raw terms; degrees must match the keys.
  static Jet from_terms(int d, int order, std::vector<Term> terms) {
    Jet j(d, order);
    for (auto& t : terms)
      if (t.deg <= order && t.c != cplx{}) j.terms_.push_back(t);
    j.sort();
    return j;
  }

  static Jet variable(int d, int order, Var v) {
    Jet j(d, order);
    if (order >= 1) j.terms_.push_back({unit(d, v), 1, cplx{1.0}});
    return j;
  }

  /// Monomial c * z^I * zbar^J.
  static Jet monomial(int d, int order, std::span<const int> I, std::span<const int> J, cplx c) {
    Jet j(d, order);
    Key k = make_key(d, I, J);
    int deg = key_degree(d, k);
    if (deg <= order && c != cplx{}) j.terms_.push_back({k, deg, c});
    return j;
  }

  int num_coords() const { return d_; }
  int order() const { return order_; }
  int num_vars() const { return 2 * d_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool real_valued() const { return real_; }
  void set_real_valued(bool r) { real_ = r; }

  static int shift(int d, Var v) { return kBits * (v.kind == Kind::holo ? v.coord : d + v.coord); }
  static Key unit(int d, Var v) { return Key{1} << shift(d, v); }
  static int exponent(int d, Key k, Var v) {
    return static_cast<int>((k >> shift(d, v)) & ((Key{1} << kBits) - 1));
  }
  static int key_degree(int d, Key k) {
    int s = 0;
    for (int i = 0; i < 2 * d; ++i) s += static_cast<int>((k >> (kBits * i)) & ((Key{1} << kBits) - 1));
    return s;
  }
  static Key make_key(int d, std::span<const int> I, std::span<const int> J) {
    if (static_cast<int>(I.size()) != d || static_cast<int>(J.size()) != d)
      throw ShapeError("jet: multi-index length mismatch");
    Key k = 0;
    for (int i = 0; i < d; ++i) {
      if (I[i] < 0 || J[i] < 0 || I[i] > kMaxOrder || J[i] > kMaxOrder)
        throw ShapeError("jet: exponent out of range");
      k |= Key(I[i]) << shift(d, holo(i));
      k |= Key(J[i]) << shift(d, anti(i));
    }
    return k;
  }

  cplx coeff(Key k) const {
    int deg = key_degree(d_, k);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{deg, k},
                               [](const Term& t, const std::pair<int, Key>& p) {
                                 return std::pair{t.deg, t.key} < p;
                               });
    if (it != terms_.end() && it->key == k) return it->c;
    return {};
  }
  cplx coeff(std::span<const int> I, std::span<const int> J) const { return coeff(make_key(d_, I, J)); }
  cplx constant_term() const { return !terms_.empty() && terms_.front().deg == 0 ? terms_.front().c : cplx{}; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.c));
    return m;
  }

  /// True when every coefficient is below `tol` in absolute value.
  bool is_zero(double tol = 0.0) const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return std::abs(t.c) <= tol; });
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator*=(cplx s) { return *this = *this * s; }

  friend Jet operator+(const Jet& a, const Jet& b) { return combine(a, b, 1.0); }
  friend Jet operator-(const Jet& a, const Jet& b) { return combine(a, b, -1.0); }
  friend Jet operator-(const Jet& a) { return a * cplx{-1.0}; }

  friend Jet operator*(const Jet& a, cplx s) {
    Jet r(a.d_, a.order_);
    if (s == cplx{}) return r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& t : a.terms_) r.terms_.push_back({t.key, t.deg, t.c * s});
    r.real_ = a.real_ && s.imag() == 0.0;
    return r;
  }
  friend Jet operator*(cplx s, const Jet& a) { return a * s; }
  friend Jet operator*(const Jet& a, double s) { return a * cplx{s}; }
  friend Jet operator*(double s, const Jet& a) { return a * cplx{s}; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    check_shape(a, b);
    Jet r(a.d_, std::min(a.order_, b.order_));
    const int ord = r.order_;
    std::unordered_map<Key, cplx> acc;
    acc.reserve(a.terms_.size() * 4 + 16);
    for (const auto& ta : a.terms_) {
      if (ta.deg > ord) break;
      for (const auto& tb : b.terms_) {
        if (ta.deg + tb.deg > ord) break;
        acc[ta.key + tb.key] += ta.c * tb.c;
      }
    }
    r.terms_.reserve(acc.size());
    for (const auto& [k, c] : acc)
      if (c != cplx{}) r.terms_.push_back({k, key_degree(a.d_, k), c});
    r.sort();
    r.real_ = a.real_ && b.real_;
    return r;
  }

  /// Formal partial derivative; the order drops by one.
  Jet derivative(Var v) const {
    Jet r(d_, std::max(order_ - 1, 0));
    const Key u = unit(d_, v);
    for (const auto& t : terms_) {
      int e = exponent(d_, t.key, v);
      if (e == 0) continue;
      r.terms_.push_back({t.key - u, t.deg - 1, t.c * double(e)});
    }
    r.sort();
    return r;
  }

  /// Antiderivative in `v` with zero integration constant; terms beyond the order are dropped.
  Jet integral(Var v) const {
    Jet r(d_, order_);
    const Key u = unit(d_, v);
    for (const auto& t : terms_) {
      if (t.deg + 1 > order_) continue;
      int e = exponent(d_, t.key, v);
      r.terms_.push_back({t.key + u, t.deg + 1, t.c / double(e + 1)});
    }
    r.sort();
    return r;
  }

  /// Swaps z and zbar exponents and conjugates coefficients.
  Jet conjugate() const {
    Jet r(d_, order_);
    const Key mask = (Key{1} << (kBits * d_)) - 1;
    for (const auto& t : terms_) {
      Key k = ((t.key & mask) << (kBits * d_)) | (t.key >> (kBits * d_));
      r.terms_.push_back({k, t.deg, std::conj(t.c)});
    }
    r.sort();
    r.real_ = real_;
    return r;
  }

  Jet truncated(int order) const {
    Jet r(d_, std::min(order, order_));
    for (const auto& t : terms_)
      if (t.deg <= r.order_) r.terms_.push_back(t);
    r.real_ = real_;
    return r;
  }

  /// Homogeneous part of total degree k.
  Jet homogeneous(int k) const {
    Jet r(d_, order_);
    for (const auto& t : terms_)
      if (t.deg == k) r.terms_.push_back(t);
    return r;
  }

  /// Drops coefficients with |c| <= tol.
  Jet pruned(double tol) const {
    Jet r(d_, order_);
    for (const auto& t : terms_)
      if (std::abs(t.c) > tol) r.terms_.push_back(t);
    r.real_ = real_;
    return r;
  }

  /// coeff(I,J) == conj(coeff(J,I)) for every stored index, up to a relative tolerance.
  bool is_real(double rel_tol = 1e-12) const {
    Jet c = conjugate();
    double scale = std::max(1.0, max_abs());
    return (*this - c).max_abs() <= rel_tol * scale;
  }

  bool depends_on(Var v, double tol = 0.0) const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [&](const Term& t) { return exponent(d_, t.key, v) > 0 && std::abs(t.c) > tol; });
  }

  /// Polynomial value with independent values for the holomorphic and conjugate variables.
  cplx evaluate(std::span<const cplx> z, std::span<const cplx> zbar) const {
    cplx s{};
    for (const auto& t : terms_) {
      cplx m = t.c;
      for (int i = 0; i < d_; ++i) {
        int e = exponent(d_, t.key, holo(i));
        int f = exponent(d_, t.key, anti(i));
        if (e) m *= std::pow(z[i], e);
        if (f) m *= std::pow(zbar[i], f);
      }
      s += m;
    }
    return s;
  }

  /// Value at a point where the conjugate variables take the conjugate values.
  cplx evaluate(std::span<const cplx> z) const {
    std::vector<cplx> zb(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zb[i] = std::conj(z[i]);
    return evaluate(z, zb);
  }

 private:
  static void check_shape(const Jet& a, const Jet& b) {
    if (a.d_ != b.d_) throw ShapeError("jet: coordinate count mismatch");
  }

  static Jet combine(const Jet& a, const Jet& b, double sb) {
    check_shape(a, b);
    Jet r(a.d_, std::min(a.order_, b.order_));
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    auto less = [](const Term& x, const Term& y) { return std::pair{x.deg, x.key} < std::pair{y.deg, y.key}; };
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      Term t;
      if (ib == b.terms_.end() || (ia != a.terms_.end() && less(*ia, *ib))) {
        t = *ia++;
      } else if (ia == a.terms_.end() || less(*ib, *ia)) {
        t = *ib++;
        t.c *= sb;
      } else {
        t = *ia;
        t.c += sb * ib->c;
        ++ia;
        ++ib;
      }
      if (t.deg <= r.order_ && t.c != cplx{}) r.terms_.push_back(t);
    }
    r.real_ = a.real_ && b.real_;
    return r;
  }

  void sort() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return std::pair{x.deg, x.key} < std::pair{y.deg, y.key}; });
  }

  int d_ = 1;
  int order_ = 0;
  std::vector<Term> terms_;
  bool real_ = false;
};

/// sum_k c_k (a - a0)^k / with c_k supplied for k = 0..order (Taylor data of an analytic function at a0).
inline Jet compose(const Jet& a, std::span<const cplx> taylor) {
  const cplx a0 = a.constant_term();
  Jet delta = a - Jet::constant(a.num_coords(), a.order(), a0);
  const int K = std::min<int>(a.order(), static_cast<int>(taylor.size()) - 1);
  Jet r = Jet::constant(a.num_coords(), a.order(), taylor[K]);
  for (int k = K - 1; k >= 0; --k) r = r * delta + Jet::constant(a.num_coords(), a.order(), taylor[k]);
  return r;
}

inline Jet jet_exp(const Jet& a) {
  std::vector<cplx> c(a.order() + 1);
  const cplx e0 = std::exp(a.constant_term());
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = e0 / fact;
  }
  Jet r = compose(a, c);
  r.set_real_valued(a.real_valued());
  return r;
}

/// 1/a; requires a nonzero constant term.
inline Jet reciprocal(const Jet& a) {
  const cplx a0 = a.constant_term();
  if (std::abs(a0) == 0.0) throw DegeneracyError("jet reciprocal: zero constant term");
  std::vector<cplx> c(a.order() + 1);
  cplx p = 1.0 / a0;
  for (int k = 0; k <= a.order(); ++k) {
    c[k] = p;
    p *= -1.0 / a0;
  }
  return compose(a, c);
}

/// erf of a complex number via its entire Maclaurin series.
inline cplx erf_complex(cplx z) {
  cplx term = z, sum = z;
  const cplx z2 = z * z;
  for (int n = 1; n < 400; ++n) {
    term *= -z2 / double(n);
    cplx add = term / double(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

/// erf applied through its Taylor data: erf^(k)(x) = (2/sqrt(pi)) (-1)^(k-1) H_{k-1}(x) e^{-x^2}.
inline Jet jet_erf(const Jet& a) {
  const cplx x = a.constant_term();
  const int K = a.order();
  std::vector<cplx> c(K + 1);
  c[0] = erf_complex(x);
  // physicists' Hermite polynomials H_0..H_{K-1} at x
  std::vector<cplx> H(std::max(K, 2));
  H[0] = 1.0;
  if (K > 1) H[1] = 2.0 * x;
  for (int k = 2; k < K; ++k) H[k] = 2.0 * x * H[k - 1] - 2.0 * double(k - 1) * H[k - 2];
  const cplx g = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x);
  double fact = 1.0;
  for (int k = 1; k <= K; ++k) {
    fact *= k;
    double sign = (k - 1) % 2 == 0 ? 1.0 : -1.0;
    c[k] = g * sign * H[k - 1] / fact;
  }
  return compose(a, c);
}

/// a / v^k. Every coefficient whose v-degree is below k must vanish (relative to tol).
inline Jet divided_series(const Jet& a, Var v, int k, double tol = 1e-12) {
  if (k <= 0) throw PreconditionError("divided_series: k must be positive");
  const int d = a.num_coords();
  const double scale = std::max(1.0, a.max_abs());
  Jet r(d, std::max(a.order() - k, 0));
  std::vector<Jet::Term> out;
  for (const auto& t : a.terms()) {
    int e = Jet::exponent(d, t.key, v);
    if (e < k) {
      if (std::abs(t.c) > tol * scale) throw DivisibilityError("divided_series: series is not divisible");
      continue;
    }
    if (t.deg - k <= r.order()) out.push_back({t.key - Jet::Key(k) * Jet::unit(d, v), t.deg - k, t.c});
  }
  return Jet::from_terms(d, r.order(), std::move(out));
}

/// Integer power by repeated multiplication.
inline Jet jet_pow(const Jet& a, int p) {
  Jet r = Jet::constant(a.num_coords(), a.order(), 1.0);
  for (int i = 0; i < p; ++i) r = r * a;
  return r;
}

}  // namespace lkh
