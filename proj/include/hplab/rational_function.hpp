// Quotients num/den. Exact regime: reduced with monic denominator.
// Float regime: kept unreduced, compare through cross-multiplication.
#pragma once

#include "hplab/polynomial.hpp"

namespace hplab {

template <class T>
class RationalFunction {
 public:
  using Poly = Polynomial<T>;

  RationalFunction() : num_(), den_(Poly::constant(ScalarTraits<T>::one())) {}
  RationalFunction(Poly num) : num_(std::move(num)), den_(Poly::constant(ScalarTraits<T>::one())) {}
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
    normalize();
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFunction derivative() const {
    return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DivisionByZero("division by the zero rational function");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }

  // Exact: structural equality of normalized forms. Float: cross-multiplied
  // difference below tol relative to the operands' coefficient scale.
  bool equals(const RationalFunction& o, double tol = 0) const {
    if constexpr (ScalarTraits<T>::exact) {
      return num_ == o.num_ && den_ == o.den_;
    } else {
      Poly d = num_ * o.den_ - o.num_ * den_;
      double scale = std::max((num_ * o.den_).max_abs(), (o.num_ * den_).max_abs());
      return d.max_abs() <= tol * std::max(scale, 1e-300);
    }
  }

  template <class U>
  U operator()(const U& z) const {
    return num_(z) / den_(z);
  }

 private:
  void normalize() {
    if constexpr (ScalarTraits<T>::exact) {
      if (num_.is_zero()) {
        den_ = Poly::constant(ScalarTraits<T>::one());
        return;
      }
      Poly g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = exact_quotient(num_, g);
        den_ = exact_quotient(den_, g);
      }
      T lc = den_.leading();
      num_ = num_.scaled(ScalarTraits<T>::one() / lc);
      den_ = den_.monic();
    }
  }

  Poly num_;
  Poly den_;
};

using QRatFn = RationalFunction<Rational>;
using CRatFn = RationalFunction<BigComplex>;

}  // namespace hplab
