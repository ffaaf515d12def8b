// f(z) = prod (z - a_j)^{alpha_j}, sum alpha_j = 0, branch fixed by f(inf) = 1.
#pragma once

#include "hplab/laurent.hpp"
#include "hplab/rational_function.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hplab {

template <class T>
class SemiclassicalFn {
 public:
  using Poly = Polynomial<T>;

  SemiclassicalFn(std::vector<T> a, std::vector<T> alpha) : a_(std::move(a)), alpha_(std::move(alpha)) {
    if (a_.size() != alpha_.size()) throw InvalidArgument("branch_points and exponents differ in length");
    if (a_.size() < 2) throw InvalidArgument("at least two branch points are required");
    for (size_t i = 0; i < a_.size(); ++i)
      for (size_t j = i + 1; j < a_.size(); ++j)
        if (near_equal(a_[i], a_[j])) throw InvalidArgument("branch points must be pairwise distinct");
    for (size_t j = 0; j < alpha_.size(); ++j) {
      if (is_integer(alpha_[j])) {
        throw IntegerExponent("exponent alpha_" + std::to_string(j) + " is an integer");
      }
    }
    A_ = Poly::constant(ScalarTraits<T>::one());
    for (const auto& aj : a_) A_ *= Poly::linear_root(aj);
    B_ = build_B();
  }

  int p() const { return static_cast<int>(a_.size()); }
  const std::vector<T>& branch_points() const { return a_; }
  const std::vector<T>& exponents() const { return alpha_; }
  const Poly& A() const { return A_; }
  const Poly& B() const { return B_; }

  // f^k, the member of the same family with exponents k*alpha.
  SemiclassicalFn power(int k) const {
    std::vector<T> e(alpha_);
    for (auto& v : e) v *= T(static_cast<long>(k));
    return SemiclassicalFn(a_, std::move(e));
  }

 private:
  static bool near_equal(const T& x, const T& y) {
    if constexpr (ScalarTraits<T>::exact) {
      return x == y;
    } else {
      return ScalarTraits<T>::magnitude(x - y) < 1e-12;
    }
  }

  static bool is_integer(const T& x) {
    if constexpr (ScalarTraits<T>::exact) {
      return x.get_den() == 1;
    } else {
      double re = static_cast<double>(x.real());
      double im = static_cast<double>(x.imag());
      return std::abs(im) < 1e-12 && std::abs(re - std::round(re)) < 1e-12;
    }
  }

  // B = sum alpha_j A/(z - a_j); its z^{p-1} coefficient is sum alpha_j.
  Poly build_B() const {
    Poly B;
    for (size_t j = 0; j < a_.size(); ++j) {
      Poly term = Poly::constant(alpha_[j]);
      for (size_t i = 0; i < a_.size(); ++i)
        if (i != j) term *= Poly::linear_root(a_[i]);
      B += term;
    }
    const int p = static_cast<int>(a_.size());
    if (B.degree() == p - 1) {
      if constexpr (ScalarTraits<T>::exact) {
        throw ExponentSumNonzero("sum of exponents is " + to_string(B.leading()));
      } else {
        double scale = 0;
        for (const auto& v : alpha_) scale = std::max(scale, ScalarTraits<T>::magnitude(v));
        if (ScalarTraits<T>::magnitude(B.leading()) > 1e-12 * std::max(scale, 1.0)) {
          throw ExponentSumNonzero("sum of exponents is not zero");
        }
        std::vector<T> c = B.coeffs();
        c.pop_back();
        B = Poly(std::move(c));
      }
    }
    return B;
  }

  std::vector<T> a_;
  std::vector<T> alpha_;
  Poly A_;
  Poly B_;
};

using QFn = SemiclassicalFn<Rational>;
using CFn = SemiclassicalFn<BigComplex>;

template <class T>
struct PowerSystem {
  SemiclassicalFn<T> base;
  int s = 0;
  std::vector<LaurentTail<T>> tails;  // tails[k] expands f^k
};

// f'/f = B/A.
template <class T>
RationalFunction<T> pearson_pair(const SemiclassicalFn<T>& f) {
  return RationalFunction<T>(f.B(), f.A());
}

// c_0 = 1 and, from A f' = B f,
// r c_r = -sum_{i<p} (r-p+i) A_i c_{r-p+i} - sum_{i<=p-2} B_i c_{r+1+i-p}.
template <class T>
LaurentTail<T> expand_at_infinity(const SemiclassicalFn<T>& f, int M) {
  if (M < 0) throw InvalidArgument("expansion order must be >= 0");
  const int p = f.p();
  const auto& A = f.A();
  const auto& B = f.B();
  std::vector<T> c(static_cast<size_t>(M) + 1, ScalarTraits<T>::zero());
  c[0] = ScalarTraits<T>::one();
  auto at = [&](int m) -> T { return m < 0 ? ScalarTraits<T>::zero() : c[static_cast<size_t>(m)]; };
  for (int r = 1; r <= M; ++r) {
    T acc = ScalarTraits<T>::zero();
    for (int i = 0; i < p; ++i) {
      int m = r - p + i;
      if (m < 0 || ScalarTraits<T>::is_zero(A.coeff(i))) continue;
      acc += T(static_cast<long>(m)) * A.coeff(i) * at(m);
    }
    for (int i = 0; i <= B.degree(); ++i) acc += B.coeff(i) * at(r + 1 + i - p);
    c[static_cast<size_t>(r)] = -acc / T(static_cast<long>(r));
  }
  return LaurentTail<T>::from_tail(std::move(c), M);
}

// Relative agreement threshold for float-regime self-consistency checks.
double consistency_tolerance();

template <class T>
bool tails_agree(const LaurentTail<T>& x, const LaurentTail<T>& y, int M) {
  for (int m = 0; m <= M; ++m) {
    if constexpr (ScalarTraits<T>::exact) {
      if (x.coeff(-m) != y.coeff(-m)) return false;
    } else {
      T d = x.coeff(-m) - y.coeff(-m);
      double scale = std::max(ScalarTraits<T>::magnitude(x.coeff(-m)), 1.0);
      if (ScalarTraits<T>::magnitude(d) > consistency_tolerance() * scale) return false;
    }
  }
  return true;
}

// tails[k] for f^k, k = 0..s, each expanded through its own Pearson
// recurrence and cross-checked against tails[k-1] * tails[1].
template <class T>
PowerSystem<T> power_tails(const SemiclassicalFn<T>& f, int s, int M) {
  if (s < 1) throw InvalidArgument("s must be >= 1");
  PowerSystem<T> sys{f, s, {}};
  sys.tails.reserve(static_cast<size_t>(s) + 1);
  std::vector<T> one(static_cast<size_t>(M) + 1, ScalarTraits<T>::zero());
  one[0] = ScalarTraits<T>::one();
  sys.tails.push_back(LaurentTail<T>::from_tail(std::move(one), M));
  for (int k = 1; k <= s; ++k) {
    SemiclassicalFn<T> fk = [&] {
      try {
        return f.power(k);
      } catch (const IntegerExponent&) {
        throw IntegerExponent(std::to_string(k) + "*alpha_j is an integer for some j; the system (1, f, ..., f^" +
                              std::to_string(s) + ") degenerates");
      }
    }();
    sys.tails.push_back(expand_at_infinity(fk, M));
    if (k >= 2 && !tails_agree(sys.tails[static_cast<size_t>(k)],
                               sys.tails[static_cast<size_t>(k - 1)] * sys.tails[1], M)) {
      throw InternalInconsistency("expansion of f^" + std::to_string(k) + " disagrees with repeated products");
    }
  }
  return sys;
}

template <class T>
SemiclassicalFn<BigComplex> to_complex_fn(const SemiclassicalFn<T>& f) {
  if constexpr (std::is_same_v<T, BigComplex>) {
    return f;
  } else {
    std::vector<BigComplex> a, e;
    for (const auto& v : f.branch_points()) a.push_back(to_complex(v));
    for (const auto& v : f.exponents()) e.push_back(to_complex(v));
    return SemiclassicalFn<BigComplex>(std::move(a), std::move(e));
  }
}

// Two-point family ((z-1)/(z+1))^alpha: branch points {1, -1}, exponents
// {alpha, -alpha}, A = z^2 - 1, B = 2 alpha.
QFn two_point_function(const Rational& alpha);

}  // namespace hplab
