#include "hplab/scalar.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hplab {

namespace {

unsigned g_bits = 0;

unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * std::log10(2.0)));
}

void ensure_init() {
  if (g_bits == 0) set_precision_bits(kDefaultPrecisionBits);
}

[[maybe_unused]] const bool g_static_init = (ensure_init(), true);

}  // namespace

void set_precision_bits(unsigned bits) {
  if (bits < kMinPrecisionBits) {
    throw std::invalid_argument("precision_bits must be >= 64, got " + std::to_string(bits));
  }
  g_bits = bits;
  BigFloat::default_precision(digits_for_bits(bits));
}

unsigned precision_bits() {
  ensure_init();
  return g_bits;
}

unsigned precision_digits10() { return digits_for_bits(precision_bits()); }

unsigned init_precision_from_env() {
  if (const char* env = std::getenv("HP_LAB_PRECISION_BITS"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0) {
      throw std::invalid_argument(std::string("HP_LAB_PRECISION_BITS is not a positive integer: ") + env);
    }
    set_precision_bits(static_cast<unsigned>(v));
  } else {
    ensure_init();
  }
  return g_bits;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_(precision_bits()) { set_precision_bits(bits); }
PrecisionScope::~PrecisionScope() { set_precision_bits(saved_); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    auto b = t.find_first_not_of(" \t");
    auto e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto valid_int = [](const std::string& t) {
    size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  trim(num);
  trim(den);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in rational literal: " + s);
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

BigFloat to_bigfloat(const Rational& q) {
  ensure_init();
  BigFloat n(q.get_num().get_str());
  BigFloat d(q.get_den().get_str());
  return n / d;
}

BigComplex to_complex(const Rational& q) {
  ensure_init();
  return BigComplex(to_bigfloat(q));
}

BigComplex make_complex(const BigFloat& re, const BigFloat& im) {
  ensure_init();
  return BigComplex(re, im);
}

BigComplex make_complex(double re, double im) {
  ensure_init();
  return BigComplex(BigFloat(re), BigFloat(im));
}

BigFloat pi() {
  ensure_init();
  return boost::math::constants::pi<BigFloat>();
}

BigComplex imag_unit() { return make_complex(0.0, 1.0); }

std::string to_string(const BigFloat& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::scientific << x;
  return os.str();
}

std::string to_string(const BigComplex& z, int digits) {
  std::string re = to_string(BigFloat(z.real()), digits);
  BigFloat im = z.imag();
  std::string sign = im < 0 ? "-" : "+";
  return re + sign + to_string(BigFloat(abs(im)), digits) + "i";
}

BigFloat pow10_neg(double e) {
  ensure_init();
  return pow(BigFloat(10), BigFloat(-e));
}

BigFloat abs_big(const BigComplex& z) { return BigFloat(abs(z)); }

}  // namespace hplab
