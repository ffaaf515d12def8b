#include "hplab/polynomial.hpp"

#include <sstream>

namespace hplab {

CPoly to_complex(const QPoly& p) {
  std::vector<BigComplex> c;
  c.reserve(p.coeffs().size());
  for (const auto& q : p.coeffs()) c.push_back(to_complex(q));
  return CPoly(std::move(c));
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Integer denominator_lcm(const QPoly& p) {
  Integer l = 1;
  for (const auto& q : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  return l;
}

QPoly primitive_part(const QPoly& p, Rational* scale) {
  if (p.is_zero()) {
    if (scale) *scale = 1;
    return p;
  }
  Integer l = denominator_lcm(p);
  Integer g = 0;
  for (const auto& q : p.coeffs()) {
    Integer v = q.get_num() * (l / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Rational s(l, g);
  s.canonicalize();
  if (sgn(p.leading()) < 0) s = -s;
  if (scale) *scale = s;
  return p.scaled(s);
}

QPoly exact_quotient(const QPoly& a, const QPoly& b) {
  auto [q, r] = a.divmod(b);
  if (!r.is_zero()) throw InternalInconsistency("exact_quotient: nonzero remainder");
  return q;
}

std::string to_string(const QPoly& p, const char* var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    Rational c = p.coeff(k);
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = (mag == 1);
    if (k == 0 || !unit) os << mag.get_str();
    if (k > 0) {
      if (!unit) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

std::vector<std::string> coeff_strings(const QPoly& p) {
  std::vector<std::string> out;
  out.reserve(p.coeffs().size());
  for (const auto& q : p.coeffs()) out.push_back(to_string(q));
  return out;
}

}  // namespace hplab
