#include "doctest.h"

#include "hplab/potential.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <random>

using namespace hplab;

namespace {

CFn three_point(cplx a3) {
  return CFn({make_complex(-1, 0), make_complex(1, 0), make_complex(a3.real(), a3.imag())},
             {make_complex(0.25, 0), make_complex(0.25, 0), make_complex(-0.5, 0)});
}

// V^lambda(x) for |x| > 1 by tanh-sinh on the closed-form density.
double log_potential_lambda_oracle(double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [x](double t, double tc) {
    double dm = tc > 0 ? tc : 1 - t, dp = tc < 0 ? -tc : 1 + t;
    double c = std::sqrt(3.0) / (4 * M_PI);
    return -std::log(std::abs(x - t)) * c / std::cbrt(dm * dp) * (1 / std::cbrt(dm) + 1 / std::cbrt(dp));
  };
  return ts.integrate(f, -1.0, 1.0);
}

// V^nu(x) for |x| < 1, folding the symmetric density onto u in (0, 1).
double log_potential_nu_oracle(double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [x](double u, double uc) {
    if (u == 0) return 0.0;
    double dm = uc > 0 ? uc : 1 - u;
    double c = std::sqrt(3.0) / (2 * M_PI);
    double g = c / u / std::cbrt(dm * (1 + u)) * (1 / std::cbrt(dm) - 1 / std::cbrt(1 + u));
    return g * (2 * std::log(u) - std::log(std::abs(x * u - 1)) - std::log(std::abs(x * u + 1)));
  };
  return ts.integrate(f, 0.0, 1.0);
}

std::vector<double> grid_E20() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back(-0.95 + 0.1 * i);
  return g;
}

std::vector<double> grid_F20() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back((i % 2 ? -1 : 1) * (1.05 + 0.4 * i));
  return g;
}

}  // namespace

TEST_CASE("green_E: closed values, boundary, symmetry, harmonicity") {
  CHECK(green_E(1.25) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(external_field(1.25) == doctest::Approx(3 * std::log(2.0)).epsilon(1e-15));
  CHECK(external_field(-1.25) == doctest::Approx(3 * std::log(2.0)).epsilon(1e-15));
  CHECK(green_E(cplx(1 + 1e-14, 0), cplx(3, 1)) < 1e-6);
  CHECK(green_E(cplx(0, 1e-13), cplx(3, 1)) < 1e-6);
  CHECK_THROWS_AS(green_E(cplx(0.5, 0)), OnBoundary);
  CHECK_THROWS_AS(external_field(0.5), OutsideSupport);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int k = 0; k < 100; ++k) {
    cplx z(d(rng), d(rng)), t(d(rng), d(rng));
    CHECK(std::abs(green_E(z, t) - green_E(t, z)) < 1e-10);
    CHECK(green_E(z, t) >= 0);
  }
  // 5-point Laplacian of z -> g_E(z, t) away from E and t.
  const cplx t(0.3, 1.1);
  const double h = 1e-3;
  for (cplx z : {cplx(2, 0.5), cplx(-1.5, -1), cplx(0, 2)}) {
    double lap = green_E(z + h, t) + green_E(z - h, t) + green_E(z + cplx(0, h), t) + green_E(z - cplx(0, h), t) -
                 4 * green_E(z, t);
    CHECK(std::abs(lap) < 1e-9);
    lap = green_E(z + h) + green_E(z - h) + green_E(z + cplx(0, h)) + green_E(z - cplx(0, h)) - 4 * green_E(z);
    CHECK(std::abs(lap) < 1e-9);
  }
  // Pole at infinity: g_E(iy) = log(2y) + o(1).
  CHECK(std::abs(green_E(cplx(0, 1e6)) - std::log(2e6)) < 1e-9);
}

TEST_CASE("green_F: boundary, pole, symmetry, harmonicity") {
  const cplx t(0, 0.5);
  CHECK(green_F(cplx(1.5, 1e-13), t) < 1e-6);
  CHECK(green_F(cplx(-4, -1e-13), t) < 1e-6);
  CHECK(green_F(cplx(1e6, 3), t) < 1e-6);
  CHECK_THROWS_AS(green_F(cplx(2, 0), t), OnBoundary);
  CHECK_THROWS_AS(green_F(cplx(0, 0), cplx(-1, 0)), OnBoundary);
  // Logarithmic blow-up at the pole.
  const double g1 = green_F(cplx(1e-4, 0), 0), g2 = green_F(cplx(1e-8, 0), 0);
  CHECK(g2 - g1 == doctest::Approx(std::log(1e4)).epsilon(1e-6));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int k = 0; k < 100; ++k) {
    cplx z(d(rng), d(rng)), w(d(rng), d(rng));
    CHECK(std::abs(green_F(z, w) - green_F(w, z)) < 1e-10);
    CHECK(green_F(z, w) >= 0);
    CHECK(std::abs(green_F(z, w) - green_F(std::conj(z), std::conj(w))) < 1e-10);
  }
  const double h = 1e-3;
  for (cplx z : {cplx(0.2, 0.1), cplx(3, 1), cplx(-0.5, -0.7), cplx(-2, 2)}) {
    double lap = green_F(z + h, t) + green_F(z - h, t) + green_F(z + cplx(0, h), t) + green_F(z - cplx(0, h), t) -
                 4 * green_F(z, t);
    CHECK(std::abs(lap) < 1e-9);
  }
}

TEST_CASE("log potentials match tanh-sinh oracles off the support") {
  for (double x : {1.5, 2.0, -3.0, 10.0})
    CHECK(std::abs(log_potential(DensityKind::Lambda, x, 24) - log_potential_lambda_oracle(x)) < 1e-11);
  for (double x : {0.0, 0.5, -0.9})
    CHECK(std::abs(log_potential(DensityKind::Nu, x, 32) - log_potential_nu_oracle(x)) < 1e-11);
  // Both measures are symmetric.
  CHECK(std::abs(log_potential(DensityKind::Nu, 2.0, 24) - log_potential(DensityKind::Nu, -2.0, 24)) < 1e-13);
  CHECK(std::abs(log_potential(DensityKind::Lambda, 0.3, 24) - log_potential(DensityKind::Lambda, -0.3, 24)) < 1e-13);
  CHECK_THROWS_AS(green_potential(DensityKind::Lambda, 2.0, 24), OutsideSupport);
  CHECK_THROWS_AS(green_potential(DensityKind::Nu, 0.5, 24), OutsideSupport);
}

TEST_CASE("equilibrium identities are constant on 20-point grids") {
  auto e1 = equilibrium_check(Equilibrium::Eq1, grid_E20(), 32);
  auto e2 = equilibrium_check(Equilibrium::Eq2, grid_F20(), 32);
  CHECK(e1.spread < 1e-6);
  CHECK(e2.spread < 1e-6);
  CHECK(equilibrium_check(Equilibrium::Eq1, {-0.5, 0, 0.5}, 24).spread < 1e-6);
  CHECK(equilibrium_check(Equilibrium::Eq2, {1.5, 2, 3}, 24).spread < 1e-6);
  CHECK(equilibrium_check(Equilibrium::Eq1, {0.25}, 16).spread == 0);

  // Spreads shrink as the quadrature is refined.
  double prev1 = 1, prev2 = 1;
  for (int q : {8, 12, 16, 24}) {
    double s1 = equilibrium_check(Equilibrium::Eq1, grid_E20(), q).spread;
    double s2 = equilibrium_check(Equilibrium::Eq2, grid_F20(), q).spread;
    CHECK(s1 < prev1);
    CHECK(s2 < prev2);
    prev1 = s1;
    prev2 = s2;
  }

  auto p1 = equilibrium_check(Equilibrium::Eq1, grid_E20(), 24, Exec::Parallel);
  auto s1 = equilibrium_check(Equilibrium::Eq1, grid_E20(), 24, Exec::Serial);
  CHECK(p1.values == s1.values);

  CHECK_THROWS_AS(equilibrium_check(Equilibrium::Eq1, {1.5}, 16), OutsideSupport);
  CHECK_THROWS_AS(equilibrium_check(Equilibrium::Eq2, {0.5}, 16), OutsideSupport);
}

TEST_CASE("balayage: V^nu - V^lambda is constant on F") {
  CHECK(balayage_check({1.5, 2, 4}).spread < 1e-6);
  CHECK(balayage_check(grid_F20(), 32).spread < 1e-6);
  auto sym = balayage_check({2, -2});
  CHECK(std::abs(sym.values[0] - sym.values[1]) < 1e-13);
  CHECK(balayage_check({3}).spread == 0);
  CHECK_THROWS_AS(balayage_check({0.5}), OutsideSupport);
}

TEST_CASE("stahl_g agrees with the Green function of the segment") {
  CFn seg({make_complex(-1, 0), make_complex(1, 0)}, {make_complex(BigFloat(1) / 3, BigFloat(0)), make_complex(BigFloat(-1) / 3, BigFloat(0))});
  auto g = stahl_g(seg, cplx(1.25, 0));
  CHECK(std::abs(g.integral - std::log(2.0)) < 1e-10);
  CHECK(std::abs(stahl_g(seg, cplx(-1.25, 0)).integral - std::log(2.0)) < 1e-10);
  CHECK(stahl_g(seg, cplx(1 + 1e-10, 0)).integral < 1e-4);
  CHECK(std::abs(stahl_g(seg, cplx(0, 1e4)).integral - std::log(2e4)) < 1e-8);
  for (cplx z : {cplx(0.3, 2), cplx(-2, -0.1), cplx(0.99, 0.01)})
    CHECK(std::abs(stahl_g(seg, z).integral - green_E(z)) < 1e-10);
  CHECK_THROWS_AS(stahl_g(seg, cplx(0.2, 0)), OnBoundary);

  // An oblique segment maps affinely onto E.
  CFn tilt({make_complex(0, 1), make_complex(2, -1)}, {make_complex(0.25, 0), make_complex(-0.25, 0)});
  for (cplx z : {cplx(3, 3), cplx(1, 0.5), cplx(-1, -1)}) CHECK_NOTHROW(stahl_g(tilt, z));
  CHECK_THROWS_AS(stahl_g(three_point({0, 2}), cplx(3, 0)), InvalidArgument);
}

TEST_CASE("find_closed_V: symmetric, asymmetric and merged configurations") {
  const BigFloat h = sqrt(BigFloat(3)) / 2;
  CFn roots_of_unity({make_complex(BigFloat(1), BigFloat(0)), make_complex(BigFloat(-0.5), h),
                      make_complex(BigFloat(-0.5), -h)},
                     {make_complex(0.25, 0), make_complex(0.25, 0), make_complex(-0.5, 0)});
  auto sym = find_closed_V(roots_of_unity);
  CHECK(std::abs(sym.v) < 1e-10);

  auto asym = find_closed_V(three_point({0, 2}));
  CHECK(asym.max_residual < 1e-12);
  CHECK(asym.residuals.size() == 3);
  CHECK(std::abs(asym.v.real()) < 1e-12);  // mirror symmetry in the imaginary axis
  ClosedVOptions fine;
  fine.quad_nodes = 128;
  CHECK(std::abs(find_closed_V(three_point({0, 2}), fine).v - asym.v) < 1e-8);

  auto merged = find_closed_V(three_point({1, 0.01}));
  CHECK(std::abs(merged.v - cplx(1, 0)) < 0.02);
  CHECK(merged.max_residual < 1e-10);

  ClosedVOptions none;
  none.max_iterations = 0;
  CHECK_THROWS_AS(find_closed_V(three_point({0, 2}), none), NewtonDivergence);
  CFn two({make_complex(-1, 0), make_complex(1, 0)}, {make_complex(BigFloat(1) / 3, BigFloat(0)), make_complex(BigFloat(-1) / 3, BigFloat(0))});
  CHECK_THROWS_AS(find_closed_V(two), InvalidArgument);
}

TEST_CASE("sqrt(V/A) branch and Pade Cauchy transforms") {
  const std::vector<cplx> a{{-1, 0}, {1, 0}, {0, 2}};
  auto v = find_closed_V(three_point({0, 2})).v;
  const cplx far(3e5, -4e5);
  CHECK(std::abs(far * sqrt_V_over_A(a, v, far) - 1.0) < 1e-5);
  const cplx z(3, 1);
  const cplx s = sqrt_V_over_A(a, v, z);
  CHECK(std::abs(s * s * (z - a[0]) * (z - a[1]) * (z - a[2]) - (z - v)) < 1e-12);

  for (cplx zt : {cplx(3, 0), cplx(-2, -2)}) {
    auto err = closed_V_pade_errors(three_point({0, 2}), v, zt, {10, 20, 40}, Exec::Parallel);
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
  }
}
