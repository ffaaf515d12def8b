#include "doctest.h"

#include "hplab/ode.hpp"

using namespace hplab;

namespace {

std::vector<QuasiSolution<Rational>> quasi(const HPSolution<Rational>& sol, const QFn& f) {
  std::vector<QuasiSolution<Rational>> out;
  for (int k = 0; k <= sol.s; ++k) out.push_back({sol.Q[static_cast<size_t>(k)], k, f});
  return out;
}

bool annihilates(const LinearODE<Rational>& ode, const QuasiSolution<Rational>& w) {
  return ode_residual(ode, w).num().is_zero();
}

}  // namespace

TEST_CASE("derived third-order equation annihilates the s = 2 forms") {
  for (Rational a : {Rational(1, 3), Rational(1, 4), Rational(2, 7)}) {
    auto f = two_point_function(a);
    for (int n = 1; n <= 6; ++n) {
      auto sol = hp_solve(f, 2, n);
      auto ode = build_ode_p2_s2(a, n, false, OdeVariant::Derived);
      CAPTURE(n);
      for (const auto& w : quasi(sol, f)) CHECK(annihilates(ode, w));
    }
  }
}

TEST_CASE("printed constants leave a residual") {
  Rational a(1, 3);
  auto ode = build_ode_p2_s2(a, 2, false, OdeVariant::Printed);
  CHECK(ode[1] == QPoly({Rational(80, 9), Rational(-4), Rational(-12)}));
  auto f = two_point_function(a);
  auto sol = hp_solve(f, 2, 2);
  bool all_zero = true;
  for (const auto& w : quasi(sol, f)) all_zero = all_zero && annihilates(ode, w);
  CHECK_FALSE(all_zero);
}

TEST_CASE("flipped equation annihilates Q_{n,2} alone") {
  Rational a(1, 3);
  auto f = two_point_function(a);
  auto fneg = two_point_function(-a);
  for (int n = 1; n <= 5; ++n) {
    auto sol = hp_solve(f, 2, n);
    auto ode = build_ode_p2_s2(a, n, true, OdeVariant::Derived);
    CHECK(annihilates(ode, {sol.Q[2], 0, fneg}));
  }
}

TEST_CASE("Wronskian extraction recovers the derived equation") {
  for (Rational a : {Rational(1, 3), Rational(1, 5)}) {
    auto f = two_point_function(a);
    for (int n = 2; n <= 5; ++n) {
      auto sys = power_tails(f, 2, extraction_order(2, n, 2));
      auto sol = hp_solve(sys, n);
      auto ode = extract_ode_wronskian(sys, sol);
      CAPTURE(n);
      CHECK(proportional(ode, build_ode_p2_s2(a, n, false, OdeVariant::Derived)));
      CHECK_FALSE(proportional(ode, build_ode_p2_s2(a, n, false, OdeVariant::Printed)));
      auto rep = structure_audit(ode, f, 2, n);
      CHECK(rep.H == QPoly::constant(1));
      CHECK_FALSE(rep.degenerate);
    }
  }
}

TEST_CASE("s = 1 audit on the two-point family") {
  Rational a(1, 3);
  auto f = two_point_function(a);
  for (int n = 1; n <= 6; ++n) {
    auto sys = power_tails(f, 1, extraction_order(1, n, 2));
    auto sol = hp_solve(sys, n);
    auto ode = extract_ode_wronskian(sys, sol);
    auto rep = structure_audit(ode, f, 1, n);
    CHECK(rep.H == QPoly::constant(1));
    CHECK(ode[1] == QPoly({-2 * a, Rational(2)}));
    CHECK(rep.C == QPoly::constant(1));
    // The Pade builder with H = 1, C = 1 is the same equation.
    auto built = build_ode_pade(f, QPoly::constant(1), QPoly::constant(1), Rational(n * (n + 1)));
    CHECK(proportional(ode, built));
    for (const auto& w : quasi(sol, f)) CHECK(annihilates(built, w));
  }
}

TEST_CASE("Riccati coefficients for p = 2") {
  Rational a(1, 3);
  auto f = two_point_function(a);
  for (int n = 1; n <= 4; ++n) {
    auto ode = build_ode_pade(f, QPoly::constant(1), QPoly::constant(1), Rational(n * (n + 1)));
    auto [sn, rn] = riccati_reduce(ode, n);
    QRatFn expect_r(QPoly::constant(Rational(-n * (n + 1)) / Rational(n * n)), f.A());
    CHECK(rn.num() == expect_r.num());
    CHECK(rn.den() == expect_r.den());
    // v = Q_n' / (n Q_n) solves the Riccati equation.
    auto p = pade_solve(f, n);
    QRatFn v(p.Q.derivative(), p.Q.scaled(Rational(n)));
    auto fl = two_point_function(-a);
    auto [sf, rf] = riccati_reduce(build_ode_pade(fl, QPoly::constant(1), QPoly::constant(1), Rational(n * (n + 1))), n);
    CHECK(riccati_residual(sf, rf, v, n).num().is_zero());
  }
  CHECK_THROWS_AS(riccati_reduce(build_ode_p2_s2(a, 2, false), 2), OrderMismatch);
}

TEST_CASE("float extraction agrees with exact") {
  PrecisionScope scope(256);
  Rational a(1, 3);
  auto f = two_point_function(a);
  const int n = 4;
  auto sys = power_tails(to_complex_fn(f), 2, extraction_order(2, n, 2));
  auto sol = hp_solve(sys, n);
  auto ode = extract_ode_wronskian(sys, sol);
  auto ex = build_ode_p2_s2(a, n, false, OdeVariant::Derived);
  LinearODE<BigComplex> exc;
  for (const auto& c : ex.coeffs) exc.coeffs.push_back(to_complex(c));
  CHECK(proportional(ode, exc));
}

TEST_CASE("accessory parameter tracking for three branch points") {
  PrecisionScope scope(256);
  CFn f({make_complex(-1, 0), make_complex(1, 0), make_complex(0, 0.5)},
        {make_complex(0.25, 0), make_complex(0.25, 0), make_complex(-0.5, 0)});
  const std::vector<int> ns{5, 10, 20};
  auto track = accessory_track(f, ns, Exec::Serial);
  REQUIRE(track.steps.size() == 3);
  for (const auto& st : track.steps) {
    CAPTURE(st.n);
    CHECK(st.H.degree() == 1);
    CHECK(st.V.degree() == 1);
    // C_n = (z - c_near) V_n after monic normalization.
    auto diff = st.C - CPoly::linear_root(st.c_near) * st.V;
    CHECK(diff.max_abs() < 1e-60);
    CHECK(static_cast<double>(abs(st.h_root + st.H.coeff(0))) == 0.0);
  }
  auto par = accessory_track(f, ns, Exec::Parallel);
  for (size_t i = 0; i < 3; ++i)
    CHECK(static_cast<double>(abs(par.steps[i].h_root - track.steps[i].h_root)) < 1e-40);
}

TEST_CASE("accessory tracking requires three branch points") {
  CFn f({make_complex(-1, 0), make_complex(1, 0)}, {make_complex(0.25, 0), make_complex(-0.25, 0)});
  CHECK_THROWS_AS(accessory_track(f, {4}), InvalidArgument);
}
