#include "doctest.h"
#include "oracles.hpp"

#include "hplab/hp.hpp"

using namespace hplab;

namespace {

// P_n^{(a,b)}(x) = sum_k binom(n+a, n-k) binom(n+b, k) ((x-1)/2)^k ((x+1)/2)^(n-k).
QPoly jacobi_explicit(const Rational& a, const Rational& b, int n) {
  QPoly xm({Rational(-1, 2), Rational(1, 2)}), xp({Rational(1, 2), Rational(1, 2)});
  QPoly out;
  for (int k = 0; k <= n; ++k) {
    Rational c = oracle::binom(a + n, n - k) * oracle::binom(b + n, k);
    out += QPoly::constant(c) * xm.pow(k) * xp.pow(n - k);
  }
  return out;
}

}  // namespace

TEST_CASE("n = 0, s = 2 solves by hand") {
  for (Rational a : {Rational(1, 3), Rational(1, 4), Rational(-2, 5)}) {
    auto sol = hp_solve(two_point_function(a), 2, 0);
    REQUIRE(sol.Q.size() == 3);
    CHECK(sol.Q[0] == QPoly::constant(1));
    CHECK(sol.Q[1] == QPoly::constant(-2));
    CHECK(sol.Q[2] == QPoly::constant(1));
    CHECK(sol.leading_remainder == 4 * a * a);
    CHECK(sol.normal);
  }
}

TEST_CASE("Pade at n = 0 and n = 1") {
  auto f = two_point_function(Rational(1, 3));
  auto p0 = pade_solve(f, 0);
  CHECK(p0.Q == QPoly::constant(1));
  CHECK(p0.P == QPoly::constant(1));
  CHECK(p0.M_n == Rational(-2, 3));
  auto p1 = pade_solve(f, 1);
  CHECK(p1.Q == QPoly({Rational(1, 3), Rational(1)}));
  CHECK(p1.defect == 0);
  // Q f - P starts at z^-2.
  for (int e = p1.remainder.top(); e >= -1; --e) CHECK(p1.remainder.coeff(e) == 0);
  CHECK(p1.remainder.coeff(-2) != 0);
}

TEST_CASE("known s = 2 solutions for alpha = 1/3") {
  auto f = two_point_function(Rational(1, 3));
  CHECK(hp_solve(f, 2, 1).Q[2] == QPoly({Rational(11, 9), Rational(1)}));
  CHECK(hp_solve(f, 2, 2).Q[2] == QPoly({Rational(-85, 27), Rational(-2), Rational(1)}));
}

TEST_CASE("Q_{n,2}(alpha) is proportional to Q_{n,0}(-alpha)") {
  for (int n = 0; n <= 5; ++n) {
    auto a = hp_solve(two_point_function(Rational(1, 3)), 2, n);
    auto b = hp_solve(two_point_function(Rational(-1, 3)), 2, n);
    CHECK(a.Q[2].monic() == b.Q[0].monic());
  }
}

TEST_CASE("remainder vanishes through the prescribed order") {
  for (int n : {3, 6}) {
    auto sol = hp_solve(two_point_function(Rational(2, 7)), 2, n);
    for (int e = sol.remainder.top(); e > -(2 * n + 2); --e) CHECK(sol.remainder.coeff(e) == 0);
    CHECK(sol.nullspace_dim == 1);
  }
}

TEST_CASE("Jacobi recurrence matches the explicit sum") {
  for (Rational a : {Rational(1, 3), Rational(1, 4), Rational(2, 5)})
    for (int n = 0; n <= 8; ++n) CHECK(jacobi_polynomial(a, -a, n) == jacobi_explicit(a, -a, n));
  CHECK(jacobi_polynomial(Rational(1, 2), Rational(3, 2), 5) == jacobi_explicit(Rational(1, 2), Rational(3, 2), 5));
}

TEST_CASE("Jacobi cross-check") {
  CHECK(jacobi_crosscheck(Rational(1, 3), 0));
  CHECK(jacobi_crosscheck(Rational(1, 3), 1));
  CHECK(jacobi_crosscheck(Rational(1, 4), 10));
}

TEST_CASE("Pade defect is zero for real alpha in (0, 1/2)") {
  auto f = two_point_function(Rational(1, 3));
  for (int n = 0; n <= 12; ++n) {
    auto p = pade_solve(f, n);
    CHECK(p.defect == 0);
    CHECK(p.normal);
  }
}

TEST_CASE("truncation too short") {
  auto sys = power_tails(two_point_function(Rational(1, 3)), 2, 5);
  CHECK_THROWS_AS(hp_solve(sys, 3), TruncationTooShort);
}

TEST_CASE("float regime reproduces exact solution") {
  PrecisionScope scope(256);
  auto f = two_point_function(Rational(1, 3));
  auto ex = hp_solve(f, 2, 4);
  auto fl = hp_solve(to_complex_fn(f), 2, 4);
  CHECK(fl.normal);
  for (int k = 0; k <= 2; ++k)
    for (int j = 0; j <= 4; ++j) {
      BigComplex d = fl.Q[static_cast<size_t>(k)].coeff(j) - to_complex(ex.Q[static_cast<size_t>(k)].coeff(j));
      CHECK(static_cast<double>(abs(d)) < 1e-50);
    }
}

TEST_CASE("serial and parallel elimination agree") {
  auto f = two_point_function(Rational(1, 4));
  auto sys = power_tails(f, 2, working_order(2, 8));
  auto a = hp_solve(sys, 8, Exec::Serial);
  auto b = hp_solve(sys, 8, Exec::Parallel);
  for (int k = 0; k <= 2; ++k) CHECK(a.Q[static_cast<size_t>(k)] == b.Q[static_cast<size_t>(k)]);
  auto sw = hp_sweep(f, 2, {2, 5, 8}, Exec::Parallel);
  CHECK(sw[2].Q[2] == a.Q[2]);
}

TEST_CASE("rho_0 at the origin") {
  Rational a(1, 3);
  auto sol = hp_solve(two_point_function(a), 2, 0);
  BigFloat v = rho_value(sol, a, BigFloat(0));
  CHECK(static_cast<double>(v) == doctest::Approx(2 * std::cos(M_PI / 3) - 2));
  CHECK(v < 0);
}

TEST_CASE("rho_n sign changes reach 2n+1") {
  Rational a(1, 3);
  for (int n : {1, 3, 6}) {
    auto sol = hp_solve(two_point_function(a), 2, n);
    auto form = rho_form(sol, a, clustered_grid(400));
    CHECK(form.sign_changes >= 2 * n + 1);
    auto z = rho_zeros(sol, a, form);
    CHECK(static_cast<int>(z.size()) == form.sign_changes);
  }
}
