#include "doctest.h"
#include "oracles.hpp"

#include "hplab/laurent.hpp"
#include "hplab/rational_function.hpp"

using namespace hplab;

namespace {
QPoly qp(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(std::move(v));
}
}  // namespace

TEST_CASE("rational literals") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("-2/4") == Rational(-1, 2));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK(to_string(parse_rational("6/3")) == "2");
}

TEST_CASE("rational literal errors") {
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("a/2"));
  CHECK_THROWS(parse_rational(""));
  CHECK_THROWS(parse_rational("1/-2"));
}

TEST_CASE("precision control") {
  CHECK(precision_bits() >= 64);
  {
    PrecisionScope scope(128);
    CHECK(precision_bits() == 128);
  }
  CHECK_THROWS_AS(set_precision_bits(32), std::invalid_argument);
}

TEST_CASE("polynomial arithmetic examples") {
  CHECK(qp({-1, 0, 1}).derivative() == qp({0, 2}));
  CHECK(qp({-1, 1}) * qp({1, 1}) == qp({-1, 0, 1}));
  auto [q, r] = qp({0, 0, 0, 1}).divmod(qp({-1, 0, 1}));
  CHECK(q == qp({0, 1}));
  CHECK(r == qp({0, 1}));
  CHECK(QPoly().degree() == -1);
  CHECK_THROWS_AS(qp({1, 1}).divmod(QPoly()), DivisionByZero);
}

TEST_CASE("polynomial ring axioms on random inputs") {
  oracle::RationalGen gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    QPoly a(gen.vec(1 + trial % 6)), b(gen.vec(1 + (trial * 3) % 5)), c(gen.vec(1 + (trial * 7) % 4));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
    if (!b.is_zero()) {
      auto [q, r] = a.divmod(b);
      CHECK(q * b + r == a);
      CHECK(r.degree() < b.degree());
    }
  }
}

TEST_CASE("gcd and primitive part") {
  QPoly a = qp({-1, 0, 1}) * qp({2, 1});
  QPoly b = qp({-1, 1}) * qp({5, 1});
  CHECK(gcd(a, b) == qp({-1, 1}));
  Rational sc;
  QPoly p = QPoly({Rational(1, 2), Rational(-3, 4)});
  CHECK(primitive_part(p, &sc) == qp({-2, 3}));
  CHECK(sc == Rational(-4));
}

TEST_CASE("rational function normalization") {
  QRatFn r(qp({-1, 0, 1}), qp({-2, 2}));  // (z^2-1)/(2z-2) = (z+1)/2
  CHECK(r.num() == QPoly({Rational(1, 2), Rational(1, 2)}));
  CHECK(r.den() == qp({1}));
  QRatFn d = QRatFn(qp({0, 1})).derivative();
  CHECK(d.num() == qp({1}));
  CHECK_THROWS_AS(QRatFn(qp({1}), QPoly()), DivisionByZero);
}

TEST_CASE("laurent examples") {
  auto a = QLaurent::from_tail({1, -1, 0, 0, 0}, 4);
  auto b = QLaurent::from_tail({1, 1, 0, 0, 0}, 4);
  auto ab = a * b;
  CHECK(ab.order() == 4);
  CHECK(ab.tail_coeffs(4) == std::vector<Rational>{1, 0, -1, 0, 0});
  auto r = a.reciprocal();
  CHECK(r.tail_coeffs(4) == std::vector<Rational>{1, 1, 1, 1, 1});
  auto inv_z = QLaurent::from_tail({0, 1, 0, 0}, 3);
  auto d = inv_z.derivative();
  CHECK(d.order() == 4);
  CHECK(d.coeff(-2) == -1);
  CHECK(d.coeff(-1) == 0);
  CHECK_THROWS_AS(d.coeff(-5), TruncationTooShort);
  CHECK_THROWS_AS(QLaurent::from_tail({0, 1}, 1).reciprocal(), DivisionByZero);
}

TEST_CASE("laurent mul and add agree with brute-force convolution") {
  oracle::RationalGen gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    int M = 1 + trial % 9;
    auto x = gen.vec(M + 1), y = gen.vec(M + 1);
    auto X = QLaurent::from_tail(x, M), Y = QLaurent::from_tail(y, M);
    CHECK((X * Y).tail_coeffs(M) == oracle::convolve(x, y, M));
    auto S = X + Y;
    for (int m = 0; m <= M; ++m) CHECK(S.coeff(-m) == x[static_cast<size_t>(m)] + y[static_cast<size_t>(m)]);
  }
}

TEST_CASE("reciprocal is a two-sided inverse and an involution") {
  oracle::RationalGen gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    int M = 2 + trial % 8;
    auto a = gen.vec(M + 1);
    if (sgn(a[0]) == 0) a[0] = 1;
    auto A = QLaurent::from_tail(a, M);
    auto one = A * A.reciprocal();
    CHECK(one.coeff(0) == 1);
    for (int m = 1; m <= M; ++m) CHECK(one.coeff(-m) == 0);
    CHECK(A.reciprocal().reciprocal().tail_coeffs(M) == A.tail_coeffs(M));
  }
}

TEST_CASE("polynomial times tail loses order by the degree") {
  auto t = QLaurent::from_tail({1, 2, 3, 4, 5, 6}, 5);
  auto p = QLaurent::from_polynomial(qp({1, 1, 1}));
  auto pt = p * t;
  CHECK(pt.top() == 2);
  CHECK(pt.order() == 3);
  CHECK(pt.coeff(2) == 1);
  CHECK(pt.coeff(1) == 3);
  CHECK(pt.coeff(0) == 6);
  CHECK(pt.coeff(-3) == 4 + 5 + 6);
}

TEST_CASE("poly_from_tail") {
  auto exact = QLaurent::from_polynomial(qp({0, 1}), 2);
  CHECK(poly_from_tail(exact) == qp({0, 1}));
  {
    PrecisionScope scope(256);
    CLaurent t(2, {make_complex(1, 0), make_complex(0, 0), make_complex(-1, 0), BigComplex(pow10_neg(40))}, 1);
    auto p = poly_from_tail(t, 1e-30);
    CHECK(p.degree() == 2);
    CHECK(static_cast<double>(abs(p.coeff(0) + BigComplex(1))) == 0.0);
  }
  auto bad = QLaurent::from_tail({1, Rational(1, 2)}, 1);
  CHECK_THROWS_AS(poly_from_tail(bad), NonPolynomialTail);
}
