// Dense univariate polynomials, ascending coefficient order.
#pragma once

#include "hplab/errors.hpp"
#include "hplab/scalar.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace hplab {

template <class T>
class Polynomial {
 public:
  using Traits = ScalarTraits<T>;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(const T& v) { return Polynomial(std::vector<T>{v}); }
  static Polynomial monomial(const T& v, int k) {
    std::vector<T> c(static_cast<size_t>(k) + 1, Traits::zero());
    c[static_cast<size_t>(k)] = v;
    return Polynomial(std::move(c));
  }
  static Polynomial x() { return monomial(Traits::one(), 1); }
  // z - r
  static Polynomial linear_root(const T& r) { return Polynomial(std::vector<T>{-r, Traits::one()}); }

  // -1 stands for the degree of the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int i) const {
    return (i < 0 || i > degree()) ? Traits::zero() : c_[static_cast<size_t>(i)];
  }
  const T& leading() const { return c_.back(); }

  template <class U>
  U operator()(const U& z) const {
    U acc = U(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + convert<U>(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  Polynomial scaled(const T& s) const {
    std::vector<T> d(c_);
    for (auto& v : d) v *= s;
    return Polynomial(std::move(d));
  }

  // Divides by the leading coefficient; the zero polynomial stays zero.
  Polynomial monic() const { return is_zero() ? *this : scaled(Traits::one() / leading()); }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), Traits::zero());
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) { return a.scaled(T(-1)); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), Traits::zero());
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, Traits::zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (Traits::is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const T& s, const Polynomial& a) { return a.scaled(s); }
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  // Exact comparison; for BigComplex this is bitwise equality of coefficients.
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial pow(int k) const {
    Polynomial r = constant(Traits::one());
    for (int i = 0; i < k; ++i) r *= *this;
    return r;
  }

  // Composition p(q(z)).
  Polynomial compose(const Polynomial& q) const {
    Polynomial r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * q + constant(*it);
    return r;
  }

  // Quotient and remainder; throws DivisionByZero for a zero divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DivisionByZero("polynomial division by the zero polynomial");
    std::vector<T> r(c_);
    int dn = d.degree();
    int qn = degree() - dn;
    if (qn < 0) return {Polynomial(), *this};
    std::vector<T> q(static_cast<size_t>(qn) + 1, Traits::zero());
    const T inv = Traits::one() / d.leading();
    for (int k = qn; k >= 0; --k) {
      T t = r[static_cast<size_t>(k + dn)] * inv;
      q[static_cast<size_t>(k)] = t;
      if (Traits::is_zero(t)) continue;
      for (int j = 0; j <= dn; ++j) r[static_cast<size_t>(k + j)] -= t * d.c_[static_cast<size_t>(j)];
    }
    r.resize(static_cast<size_t>(dn));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  // Drops leading coefficients with magnitude <= tol (float regime helper).
  Polynomial chopped(double tol) const {
    std::vector<T> d(c_);
    while (!d.empty() && Traits::magnitude(d.back()) <= tol) d.pop_back();
    return Polynomial(std::move(d));
  }

  // Largest coefficient magnitude.
  double max_abs() const {
    double m = 0;
    for (const auto& v : c_) m = std::max(m, Traits::magnitude(v));
    return m;
  }

 private:
  template <class U>
  static U convert(const T& v) {
    if constexpr (std::is_same_v<T, U>) {
      return v;
    } else if constexpr (std::is_same_v<T, Rational> && std::is_same_v<U, BigComplex>) {
      return to_complex(v);
    } else if constexpr (std::is_same_v<T, Rational> && std::is_same_v<U, BigFloat>) {
      return to_bigfloat(v);
    } else if constexpr (std::is_same_v<T, Rational>) {
      return U(v.get_d());
    } else {
      return U(v);
    }
  }

  void trim() {
    while (!c_.empty() && Traits::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

using QPoly = Polynomial<Rational>;
using CPoly = Polynomial<BigComplex>;

CPoly to_complex(const QPoly& p);

// Monic gcd (exact regime only).
QPoly gcd(QPoly a, QPoly b);

// Integer-coefficient multiple with coprime coefficients and positive leading
// coefficient; returns the zero polynomial unchanged. `scale` receives the
// factor applied.
QPoly primitive_part(const QPoly& p, Rational* scale = nullptr);

// Least common multiple of coefficient denominators.
Integer denominator_lcm(const QPoly& p);

// Exact division; throws InternalInconsistency if the remainder is nonzero.
QPoly exact_quotient(const QPoly& a, const QPoly& b);

// Human-readable form, highest power first, e.g. "z^2 - 2*z - 85/27".
std::string to_string(const QPoly& p, const char* var = "z");

// Coefficients as canonical rational strings, ascending.
std::vector<std::string> coeff_strings(const QPoly& p);

}  // namespace hplab
