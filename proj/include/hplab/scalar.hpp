// Scalar regimes: exact rationals (GMP) and arbitrary-precision complex floats
// (MPFR through Boost.Multiprecision). The regime is a compile-time property
// of every container, so mixing regimes does not type-check.
#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

namespace hplab {

namespace mp = boost::multiprecision;

using Rational = mpq_class;
using Integer = mpz_class;
using BigFloat = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using BigComplex = mp::number<mp::backends::complex_adaptor<mp::mpfr_float_backend<0>>, mp::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;

// Process-wide working precision for BigFloat/BigComplex values created after
// the call. Throws std::invalid_argument below kMinPrecisionBits.
void set_precision_bits(unsigned bits);
unsigned precision_bits();
unsigned precision_digits10();

// Reads HP_LAB_PRECISION_BITS if set; returns the precision in effect.
unsigned init_precision_from_env();

// Restores the previous precision on scope exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

// "p/q", "p", or "-p/q". Throws std::invalid_argument on malformed input or a
// zero denominator.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

BigFloat to_bigfloat(const Rational& q);
BigComplex to_complex(const Rational& q);
inline BigComplex to_complex(const BigComplex& z) { return z; }
BigComplex make_complex(const BigFloat& re, const BigFloat& im);
BigComplex make_complex(double re, double im);

BigFloat pi();
BigComplex imag_unit();

// Scientific notation with `digits` significant digits.
std::string to_string(const BigFloat& x, int digits);
std::string to_string(const BigComplex& z, int digits);

// 10^(-e) at the current precision.
BigFloat pow10_neg(double e);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_rational(const Rational& q) { return q; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
};

template <>
struct ScalarTraits<BigComplex> {
  static constexpr bool exact = false;
  static bool is_zero(const BigComplex& x) { return x.real() == 0 && x.imag() == 0; }
  static BigComplex zero() { return BigComplex(0); }
  static BigComplex one() { return BigComplex(1); }
  static BigComplex from_int(long v) { return BigComplex(v); }
  static BigComplex from_rational(const Rational& q) { return to_complex(q); }
  static double magnitude(const BigComplex& x) { return static_cast<double>(abs(x)); }
};

BigFloat abs_big(const BigComplex& z);

}  // namespace hplab
