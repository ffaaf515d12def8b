#include "doctest.h"

#include "hplab/asymptotics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <random>
#include <sstream>

using namespace hplab;

namespace {

double dabs(const BigComplex& z) { return static_cast<double>(abs(z)); }

// -2i int_1^inf nu'(t) / (1 + t^2) dt = C^nu(i), by symmetry of nu.
double cauchy_nu_at_i_imag() {
  boost::math::quadrature::tanh_sinh<double> ts;
  // t = 1/u, dt = du / u^2, on u in (0, 1); nu'(t) / u^2 = g(u).
  auto f = [](double u, double uc) {
    if (u == 0) return 0.0;
    double dm = uc > 0 ? uc : 1 - u;
    double c = std::sqrt(3.0) / (2 * M_PI);
    double g = c / u / std::cbrt(dm * (1 + u)) * (1 / std::cbrt(dm) - 1 / std::cbrt(1 + u));
    return g / (1 + 1 / (u * u));
  };
  return -2 * ts.integrate(f, 0.0, 1.0);
}

double cauchy_lambda_at_i_imag() {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [](double t, double tc) {
    double dm = tc > 0 ? tc : 1 - t, dp = tc < 0 ? -tc : 1 + t;
    double c = std::sqrt(3.0) / (4 * M_PI);
    return c / std::cbrt(dm * dp) * (1 / std::cbrt(dm) + 1 / std::cbrt(dp)) / (1 + t * t);
  };
  return -ts.integrate(f, -1.0, 1.0);
}

}  // namespace

TEST_CASE("roots of small polynomials") {
  auto m = roots(QPoly({Rational(1, 3), Rational(1)}), 256);
  REQUIRE(m.points.size() == 1);
  CHECK(dabs(m.points[0] + to_complex(Rational(1, 3))) < 1e-60);
  auto m2 = roots(QPoly({Rational(-1), Rational(0), Rational(1)}), 256);
  CHECK(m2.real);
  CHECK(dabs(m2.points[0] + BigComplex(1)) < 1e-60);
  CHECK(dabs(m2.points[1] - BigComplex(1)) < 1e-60);
  auto m3 = roots(QPoly({Rational(1), Rational(0), Rational(1)}), 256);
  CHECK_FALSE(m3.real);
  CHECK_THROWS_AS(roots(QPoly::constant(2), 256), InvalidArgument);
}

TEST_CASE("roots reconstruct the polynomial") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coef(-9, 9);
  PrecisionScope scope(256);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> c;
    for (int k = 0; k < 7 + trial; ++k) c.emplace_back(coef(rng));
    c.emplace_back(1);
    QPoly q(c);
    auto m = roots(q, 256);
    CPoly prod = CPoly::constant(BigComplex(1));
    for (const auto& r : m.points) prod = prod * CPoly::linear_root(r);
    CHECK((prod - to_complex(q)).max_abs() < 1e-50);
  }
}

TEST_CASE("serial and parallel Aberth agree") {
  auto sol = hp_solve(two_point_function(Rational(1, 3)), 2, 8);
  auto a = roots(sol.Q[2], 256, {2000, Exec::Serial});
  auto b = roots(sol.Q[2], 256, {2000, Exec::Parallel});
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) CHECK(dabs(a.points[i] - b.points[i]) == 0.0);
}

TEST_CASE("zeros of Q_{10,k} are real and outside [-1, 1]") {
  auto sol = hp_solve(two_point_function(Rational(1, 3)), 2, 10);
  for (int k = 0; k <= 2; ++k) {
    auto m = roots(sol.Q[static_cast<size_t>(k)], 256);
    CHECK(m.real);
    auto cert = certify_real_roots(sol.Q[static_cast<size_t>(k)], m);
    CHECK(cert.all_real);
    CHECK(cert.outside_unit);
  }
}

TEST_CASE("certificate rejects non-real roots") {
  QPoly q({Rational(4), Rational(0), Rational(1)});
  auto m = roots(q, 256);
  CHECK_FALSE(certify_real_roots(q, m).all_real);
  QPoly inside({Rational(-1, 4), Rational(0), Rational(1)});
  auto cert = certify_real_roots(inside, roots(inside, 256));
  CHECK(cert.all_real);
  CHECK_FALSE(cert.outside_unit);
}

TEST_CASE("cubic branches at special points") {
  PrecisionScope scope(256);
  auto b0 = cubic_branches(BigComplex(0));
  CHECK(dabs(b0.y1) < 1e-70);
  auto bi = cubic_branches(imag_unit());
  BigComplex expect = make_complex(BigFloat(0), -(sqrt(BigFloat(3)) - 1) / 2);
  CHECK(dabs(bi.y1 - expect) < 1e-70);
  CHECK_THROWS_AS(cubic_branches(BigComplex(2)), OnBranchCut);
  CHECK_THROWS_AS(cubic_branches(BigComplex(-1)), OnBranchCut);
}

TEST_CASE("branches against Cauchy integrals of the densities") {
  auto bi = cubic_branches(imag_unit());
  CHECK(static_cast<double>(BigFloat(bi.y1.imag())) == doctest::Approx(cauchy_nu_at_i_imag()).epsilon(1e-9));
  CHECK(static_cast<double>(BigFloat(bi.y3.imag())) ==
        doctest::Approx(-2 * cauchy_lambda_at_i_imag()).epsilon(1e-9));
}

TEST_CASE("cubic residual and Vieta identities at random points") {
  PrecisionScope scope(256);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  int checked = 0;
  while (checked < 200) {
    BigComplex z = make_complex(u(rng), u(rng));
    if (std::abs(static_cast<double>(BigFloat(z.imag()))) < 1e-3) continue;
    auto b = cubic_branches(z);
    const BigComplex w = z * z - BigComplex(1);
    for (const auto& y : {b.y1, b.y2, b.y3}) CHECK(dabs(cubic_residual(z, y)) < 1e-30);
    CHECK(dabs(b.y1 + b.y2 + b.y3) < 1e-30);
    CHECK(dabs(b.y1 * b.y2 + b.y1 * b.y3 + b.y2 * b.y3 + BigComplex(3) / w) < 1e-30);
    CHECK(dabs(b.y1 * b.y2 * b.y3 + BigComplex(2) * z / (w * w)) < 1e-30);
    ++checked;
  }
}

TEST_CASE("behaviour of the branches at infinity") {
  PrecisionScope scope(256);
  BigComplex z = make_complex(0, 1e6);
  auto b = cubic_branches(z);
  CHECK(dabs(b.y1 * z - BigComplex(1)) < 1e-5);
  CHECK(dabs(b.y2 * z - BigComplex(1)) < 1e-5);
  CHECK(dabs(b.y3 * z + BigComplex(2)) < 1e-5);
}

TEST_CASE("density values and symmetry") {
  CHECK(density(DensityKind::Lambda, 0.0) == doctest::Approx(std::sqrt(3.0) / (2 * M_PI)).epsilon(1e-14));
  double nu2 = std::sqrt(3.0) / (2 * M_PI) * std::pow(3.0, -1.0 / 3) * (1 - std::pow(3.0, -1.0 / 3));
  CHECK(density(DensityKind::Nu, 2.0) == doctest::Approx(nu2).epsilon(1e-14));
  for (double x : {0.1, 0.5, 0.97}) CHECK(density(DensityKind::Lambda, x) == doctest::Approx(density(DensityKind::Lambda, -x)));
  CHECK_THROWS_AS(density(DensityKind::Lambda, 1.5), OutsideSupport);
  CHECK_THROWS_AS(density(DensityKind::Nu, 0.5), OutsideSupport);
  PrecisionScope scope(256);
  CHECK(std::abs(static_cast<double>(density(DensityKind::Nu, BigFloat(2))) - nu2) < 1e-15);
}

TEST_CASE("densities are probability measures with vanishing odd moments") {
  CHECK(std::abs(density_mass(DensityKind::Lambda) - 1) < 1e-8);
  CHECK(std::abs(density_mass(DensityKind::Nu) - 1) < 1e-8);
  boost::math::quadrature::tanh_sinh<double> ts;
  double m1 = ts.integrate([](double x) { return x * density(DensityKind::Lambda, x); }, -1.0, 1.0);
  CHECK(std::abs(m1) < 1e-10);
  // First odd moment of nu in u = 1/x: int u g(u) du.
  double mu = ts.integrate([](double u) { return u * nu_u_density(u); }, -1.0, 1.0);
  CHECK(std::abs(mu) < 1e-10);
  CHECK(lambda_cdf(0.0) == doctest::Approx(0.5));
  CHECK(nu_u_cdf(0.0) == doctest::Approx(0.5));
  CHECK(std::abs(nu_u_cdf(1.0 - 1e-15) - 1) < 1e-4);
}

TEST_CASE("CDF in u matches the CDF in x") {
  // Mass of nu on [2, inf) equals mass of g on (0, 1/2].
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  double tail = es.integrate([](double x) { return density(DensityKind::Nu, x + 2); }, 0.0,
                             std::numeric_limits<double>::infinity());
  CHECK(nu_u_cdf(0.5) - 0.5 == doctest::Approx(tail).epsilon(1e-10));
}

TEST_CASE("Sokhotskii jumps reproduce the closed forms") {
  for (double x : {2.0, -2.0, 1.1, 7.5}) {
    auto r = sokhotskii_crosscheck(x, DensityKind::Nu);
    CHECK(static_cast<double>(r.difference) < 1e-10);
  }
  for (double x : {0.0, 0.3, -0.95}) {
    auto r = sokhotskii_crosscheck(x, DensityKind::Lambda);
    CHECK(static_cast<double>(r.difference) < 1e-10);
  }
  auto a = sokhotskii_crosscheck(2.0, DensityKind::Nu), b = sokhotskii_crosscheck(-2.0, DensityKind::Nu);
  CHECK(static_cast<double>(abs(a.jump_form - b.jump_form)) < 1e-12);
  CHECK(std::abs(static_cast<double>(sokhotskii_crosscheck(0.0, DensityKind::Lambda).jump_form) - std::sqrt(3.0) / (2 * M_PI)) < 1e-10);
}

TEST_CASE("KS distance of a quantile sample") {
  for (auto kind : {DensityKind::Lambda, DensityKind::Nu}) {
    const int n = 100;
    std::vector<BigFloat> xs;
    for (int i = 1; i <= n; ++i) {
      double q = limit_quantile(kind, (i - 0.5) / n);
      xs.emplace_back(kind == DensityKind::Nu ? 1 / q : q);
    }
    CHECK(measure_distance(real_measure(xs), kind) <= 1.0 / (2 * n) + 1e-9);
  }
  std::vector<BigFloat> inside{BigFloat(0.1), BigFloat(0.2), BigFloat(0.3)};
  CHECK_THROWS_AS(measure_distance(real_measure(inside), DensityKind::Nu), SupportMismatch);
}

TEST_CASE("KS distance to nu decreases from n = 10 to n = 20") {
  auto f = two_point_function(Rational(1, 3));
  auto d10 = measure_distance(roots(hp_solve(f, 2, 10).Q[2], 256), DensityKind::Nu);
  auto d20 = measure_distance(roots(hp_solve(f, 2, 20).Q[2], 256), DensityKind::Nu);
  CHECK(d20 < d10);
}

TEST_CASE("f0 branch values") {
  PrecisionScope scope(256);
  Rational a(1, 3);
  CHECK(dabs(f0_complex(a, BigComplex(0)) - BigComplex(1)) < 1e-70);
  BigFloat ang = -pi() / 6;
  CHECK(dabs(f0_complex(a, imag_unit()) - make_complex(cos(ang), sin(ang))) < 1e-70);
  CHECK_THROWS_AS(f0_complex(a, BigComplex(3)), OnBranchCut);
}

TEST_CASE("ratio asymptotics improve with n") {
  Rational a(1, 3);
  auto sols = hp_sweep(two_point_function(a), 2, {6, 12, 18}, Exec::Serial);
  for (auto z : {imag_unit(), make_complex(0, 2), make_complex(0.5, 0.5)}) {
    auto e = ratio_limit_check(sols, z, a);
    REQUIRE(e.size() == 3);
    for (size_t i = 1; i < e.size(); ++i) {
      CHECK(e[i].err_q1 < e[i - 1].err_q1);
      CHECK(e[i].err_q0 < e[i - 1].err_q0);
    }
  }
}

TEST_CASE("sheet ordering") {
  PrecisionScope scope(256);
  auto v = sheet_ordering(imag_unit());
  CHECK(v.ordered);
  CHECK(v.phi2 - v.phi1 < 0);
  BigComplex z = make_complex(0.7, 0.4);
  auto a = sheet_ordering(z), b = sheet_ordering(make_complex(0.7, -0.4));
  CHECK(static_cast<double>(abs(a.phi1 - b.phi1)) < 1e-12);
  CHECK(static_cast<double>(abs(a.phi2 - b.phi2)) < 1e-12);
  CHECK(static_cast<double>(abs(a.phi3 - b.phi3)) < 1e-12);
  // Same values from the other branch point: the real periods vanish.
  auto c = sheet_ordering(z, -1);
  CHECK(static_cast<double>(abs(a.phi1 - c.phi1)) < 1e-12);
  CHECK(static_cast<double>(abs(a.phi3 - c.phi3)) < 1e-12);
  CHECK_THROWS_AS(sheet_ordering(BigComplex(2)), PathCrossesCut);
}

TEST_CASE("Cauchy transforms of zero counting measures") {
  auto f = two_point_function(Rational(1, 3));
  auto sols = hp_sweep(f, 2, {5, 10, 20}, Exec::Serial);
  BigFloat prev = 1e9;
  for (const auto& s : sols) {
    BigFloat e = cauchy_transform_check(s, 2, imag_unit());
    CHECK(e < prev);
    prev = e;
  }
  // Real coefficients: the error is the same at conjugate points.
  const auto& q = sols[1].Q[2];
  CHECK(abs(cauchy_transform_check(sols[1], 2, make_complex(0.3, 2)) -
            cauchy_transform_check(sols[1], 2, make_complex(0.3, -2))) < 1e-20);
  // Unit mass: (1/n) Q'/Q(z) ~ 1/z.
  BigComplex big = make_complex(0, 1e8);
  BigComplex hb = q.derivative()(big) / (BigComplex(10) * q(big));
  CHECK(dabs(hb * big - BigComplex(1)) < 1e-6);
}

TEST_CASE("density CSV layout") {
  std::ostringstream os;
  write_density_csv(os, real_measure({BigFloat(-0.5), BigFloat(0.5)}), DensityKind::Lambda);
  std::string s = os.str();
  CHECK(s.rfind("x,density,empirical_cdf,limit_cdf\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}
