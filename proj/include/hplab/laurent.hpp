// Truncated Laurent expansions at infinity: sum_{e <= top} c_e z^e, known for
// every exponent e >= -order(). Coefficients below -order() are unknown and
// every accessor refuses them.
#pragma once

#include "hplab/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace hplab {

template <class T>
class LaurentTail {
 public:
  using Traits = ScalarTraits<T>;
  // Order of a finite expansion (a polynomial times a power of z): exact to all orders.
  static constexpr int kExact = std::numeric_limits<int>::max() / 4;

  LaurentTail() = default;

  // dense[i] is the coefficient of z^(top - i); zero below the stored range
  // down to -order.
  LaurentTail(int top, std::vector<T> dense, int order) : top_(top), v_(std::move(dense)), order_(order) {
    if (order_ < 0) throw InvalidArgument("LaurentTail: truncation order must be >= 0");
    if (order_ != kExact) v_.resize(static_cast<size_t>(top_ + order_ + 1), Traits::zero());
  }

  // c[m] is the coefficient of z^(-m), m = 0..M.
  static LaurentTail from_tail(std::vector<T> c, int M) {
    if (static_cast<int>(c.size()) < M + 1) {
      throw InvalidArgument("LaurentTail::from_tail: fewer than M+1 coefficients");
    }
    c.resize(static_cast<size_t>(M) + 1);
    return LaurentTail(0, std::move(c), M);
  }

  static LaurentTail from_polynomial(const Polynomial<T>& p, int M = kExact) {
    int top = std::max(p.degree(), 0);
    std::vector<T> d(static_cast<size_t>(top) + 1, Traits::zero());
    for (int k = 0; k <= p.degree(); ++k) d[static_cast<size_t>(top - k)] = p.coeff(k);
    return LaurentTail(top, std::move(d), M);
  }

  int top() const { return top_; }
  int order() const { return order_; }
  bool is_exact() const { return order_ == kExact; }

  // Lowest exponent carried in storage.
  int stored_low() const { return top_ - static_cast<int>(v_.size()) + 1; }

  T coeff(int e) const {
    if (e < -order_) {
      throw TruncationTooShort("coefficient of z^" + std::to_string(e) + " requested, expansion known to z^-" +
                               std::to_string(order_));
    }
    if (e > top_ || e < stored_low()) return Traits::zero();
    return v_[static_cast<size_t>(top_ - e)];
  }

  // Coefficient list for z^0, z^-1, ..., z^-M as in the tail view.
  std::vector<T> tail_coeffs(int M) const {
    std::vector<T> out;
    out.reserve(static_cast<size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) out.push_back(coeff(-m));
    return out;
  }

  Polynomial<T> polynomial_part() const {
    std::vector<T> c(static_cast<size_t>(std::max(top_, 0)) + 1, Traits::zero());
    for (int e = 0; e <= top_; ++e) c[static_cast<size_t>(e)] = coeff(e);
    return Polynomial<T>(std::move(c));
  }

  LaurentTail truncated(int M) const {
    if (M > order_) throw TruncationTooShort("cannot extend truncation order by truncating");
    return LaurentTail(top_, v_, M);
  }

  LaurentTail scaled(const T& s) const {
    std::vector<T> d(v_);
    for (auto& x : d) x *= s;
    return LaurentTail(top_, std::move(d), order_);
  }

  // Multiplication by z^k.
  LaurentTail shifted(int k) const {
    int M = is_exact() ? kExact : order_ - k;
    if (M < 0) throw TruncationTooShort("shift leaves no known coefficients");
    return LaurentTail(top_ + k, v_, M);
  }

  friend LaurentTail operator+(const LaurentTail& a, const LaurentTail& b) { return combine(a, b, Traits::one()); }
  friend LaurentTail operator-(const LaurentTail& a, const LaurentTail& b) { return combine(a, b, T(-1)); }

  friend LaurentTail operator*(const LaurentTail& a, const LaurentTail& b) {
    int top = a.top_ + b.top_;
    int M;
    if (a.is_exact() && b.is_exact()) {
      M = kExact;
    } else {
      M = std::min(a.is_exact() ? kExact : a.order_ - b.top_, b.is_exact() ? kExact : b.order_ - a.top_);
      if (M < 0) throw TruncationTooShort("product has no known coefficients at or below z^0");
    }
    int low = (M == kExact) ? a.stored_low() + b.stored_low() : -M;
    std::vector<T> d(static_cast<size_t>(top - low) + 1, Traits::zero());
    for (size_t i = 0; i < a.v_.size(); ++i) {
      if (Traits::is_zero(a.v_[i])) continue;
      int ea = a.top_ - static_cast<int>(i);
      // Partner exponent eb satisfies ea + eb >= low.
      size_t jmax = std::min(b.v_.size(), static_cast<size_t>(std::max(0, b.top_ - (low - ea) + 1)));
      for (size_t j = 0; j < jmax; ++j) d[i + j] += a.v_[i] * b.v_[j];
    }
    return LaurentTail(top, std::move(d), M);
  }

  // Formal derivative; the known range shrinks by one power.
  LaurentTail derivative() const {
    std::vector<T> d(v_.size() + 1, Traits::zero());
    for (size_t i = 0; i < v_.size(); ++i) {
      int e = top_ - static_cast<int>(i);
      d[i + 1] = v_[i] * T(static_cast<long>(e));
    }
    return LaurentTail(top_, std::move(d), is_exact() ? kExact : order_ + 1);
  }

  // 1/a for a = c0 + c1/z + ... with c0 != 0 and no positive powers.
  LaurentTail reciprocal() const {
    for (int e = top_; e > 0; --e) {
      if (!Traits::is_zero(coeff(e))) throw DivisionByZero("reciprocal of a series with positive powers");
    }
    T c0 = coeff(0);
    if (Traits::is_zero(c0)) throw DivisionByZero("reciprocal of series with vanishing constant term");
    if (is_exact()) throw InvalidArgument("reciprocal of an exact expansion needs an explicit truncation order");
    int M = order_;
    std::vector<T> r(static_cast<size_t>(M) + 1, Traits::zero());
    T inv = Traits::one() / c0;
    r[0] = inv;
    for (int m = 1; m <= M; ++m) {
      T acc = Traits::zero();
      for (int j = 1; j <= m; ++j) acc += coeff(-j) * r[static_cast<size_t>(m - j)];
      r[static_cast<size_t>(m)] = -acc * inv;
    }
    return LaurentTail(0, std::move(r), M);
  }

 private:
  static LaurentTail combine(const LaurentTail& a, const LaurentTail& b, const T& sb) {
    int top = std::max(a.top_, b.top_);
    int M = std::min(a.order_, b.order_);
    int low = (M == kExact) ? std::min(a.stored_low(), b.stored_low()) : -M;
    std::vector<T> d(static_cast<size_t>(top - low) + 1, Traits::zero());
    for (int e = top; e >= low; --e) {
      d[static_cast<size_t>(top - e)] = a.coeff_unchecked(e) + sb * b.coeff_unchecked(e);
    }
    return LaurentTail(top, std::move(d), M);
  }

  T coeff_unchecked(int e) const {
    if (e > top_ || e < stored_low()) return Traits::zero();
    return v_[static_cast<size_t>(top_ - e)];
  }

  int top_ = 0;
  std::vector<T> v_;
  int order_ = kExact;
};

using QLaurent = LaurentTail<Rational>;
using CLaurent = LaurentTail<BigComplex>;

// Polynomial part of `t` after asserting that every coefficient of z^-1 ...
// z^-order vanishes (exact) or stays below `tol` in magnitude (float).
template <class T>
Polynomial<T> poly_from_tail(const LaurentTail<T>& t, double tol = 0) {
  if (t.is_exact()) {
    for (int e = -1; e >= t.stored_low(); --e) {
      if (!ScalarTraits<T>::is_zero(t.coeff(e))) {
        throw NonPolynomialTail("nonzero coefficient at z^" + std::to_string(e));
      }
    }
    return t.polynomial_part();
  }
  for (int m = 1; m <= t.order(); ++m) {
    const T c = t.coeff(-m);
    bool bad;
    if constexpr (ScalarTraits<T>::exact) {
      bad = !ScalarTraits<T>::is_zero(c);
    } else {
      bad = !(ScalarTraits<T>::magnitude(c) < tol);
    }
    if (bad) throw NonPolynomialTail("tail coefficient at z^-" + std::to_string(m) + " exceeds tolerance");
  }
  return t.polynomial_part();
}

}  // namespace hplab
