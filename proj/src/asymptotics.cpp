#include "hplab/asymptotics.hpp"

#include "hplab/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hplab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

BigFloat big_sqrt3() { return sqrt(BigFloat(3)); }

BigFloat tol_digits(double fraction) { return pow10_neg(fraction * precision_digits10()); }

// p(z), p'(z) by Horner.
void horner2(const std::vector<BigComplex>& c, const BigComplex& z, BigComplex& p, BigComplex& dp) {
  p = c.back();
  dp = BigComplex(0);
  for (size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
}

BigFloat backward_error(const std::vector<BigComplex>& c, const BigComplex& z) {
  BigComplex p = c.back();
  BigFloat az = abs(z), scale = abs(c.back());
  for (size_t k = c.size() - 1; k-- > 0;) {
    p = p * z + c[k];
    scale = scale * az + BigFloat(abs(c[k]));
  }
  return BigFloat(abs(p)) / scale;
}

}  // namespace

EmpiricalMeasure roots(const CPoly& q_in, unsigned bits, RootOptions opt) {
  if (q_in.degree() < 1) throw InvalidArgument("roots needs degree >= 1");
  PrecisionScope scope(bits);
  std::vector<BigComplex> c;
  for (int k = 0; k <= q_in.degree(); ++k) c.push_back(BigComplex(q_in.coeff(k)));
  const BigComplex lead = c.back();
  for (auto& v : c) v = v / lead;
  const int d = q_in.degree();

  // Fujiwara bound on the root moduli.
  BigFloat bound = 0;
  for (int k = 0; k < d; ++k) {
    BigFloat a = abs(c[static_cast<size_t>(k)]);
    if (k == 0) a = a / 2;
    if (a > 0) bound = std::max(bound, BigFloat(pow(a, BigFloat(1) / BigFloat(d - k))));
  }
  bound = 2 * bound;
  if (bound == 0) bound = 1;
  const BigComplex center = -c[static_cast<size_t>(d - 1)] / BigComplex(d);
  std::vector<BigComplex> z(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) {
    BigFloat ang = 2 * pi() * k / d + BigFloat(0.4);
    z[static_cast<size_t>(k)] = center + make_complex(bound / 2 * cos(ang), bound / 2 * sin(ang));
  }

  const BigFloat step_tol = tol_digits(0.85);
  const BigFloat floor_tol = tol_digits(0.9);
  std::vector<BigComplex> w(static_cast<size_t>(d));
  std::vector<char> small(static_cast<size_t>(d));
  auto update = [&](int i) {
    const auto ii = static_cast<size_t>(i);
    BigComplex p, dp;
    horner2(c, z[ii], p, dp);
    if (p == BigComplex(0)) {
      w[ii] = BigComplex(0);
      small[ii] = 1;
      return;
    }
    BigComplex ratio = p / dp;
    BigComplex sum(0);
    for (int j = 0; j < d; ++j)
      if (j != i) sum += BigComplex(1) / (z[ii] - z[static_cast<size_t>(j)]);
    w[ii] = ratio / (BigComplex(1) - ratio * sum);
    small[ii] = abs(w[ii]) <= step_tol * std::max(BigFloat(1), BigFloat(abs(z[ii]))) ||
                backward_error(c, z[ii]) <= floor_tol;
  };

  int it = 0;
  for (;; ++it) {
    if (it >= opt.max_iterations) throw NonConvergence("Aberth iteration did not converge");
    if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < d; ++i) update(i);
    } else {
      for (int i = 0; i < d; ++i) update(i);
    }
    bool done = true;
    for (int i = 0; i < d; ++i) {
      z[static_cast<size_t>(i)] -= w[static_cast<size_t>(i)];
      done = done && small[static_cast<size_t>(i)];
    }
    if (done) break;
  }
  // Newton polishing.
  for (auto& r : z) {
    for (int k = 0; k < 2; ++k) {
      BigComplex p, dp;
      horner2(c, r, p, dp);
      if (dp == BigComplex(0)) break;
      r -= p / dp;
    }
  }

  const BigFloat accept = tol_digits(0.6);
  const BigFloat cluster = tol_digits(0.2);
  EmpiricalMeasure m;
  m.n = d;
  for (const auto& r : z) {
    if (backward_error(c, r) >= accept) throw NonConvergence("root failed the backward-error test");
    m.points.push_back(r);
  }
  bool all_real = true;
  for (const auto& r : z) all_real = all_real && abs(BigFloat(r.imag())) <= cluster * std::max(BigFloat(1), BigFloat(abs(r)));
  std::sort(m.points.begin(), m.points.end(), [](const BigComplex& a, const BigComplex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  if (all_real) {
    m.real = true;
    for (auto& r : m.points) r = BigComplex(BigFloat(r.real()));
  }
  // Multiplicity by cluster detection on the sorted list.
  int run = 1;
  for (size_t i = 1; i < m.points.size(); ++i) {
    const auto& a = m.points[i - 1];
    const auto& b = m.points[i];
    if (abs(a - b) <= cluster * std::max(BigFloat(1), BigFloat(abs(a)))) {
      m.max_multiplicity = std::max(m.max_multiplicity, ++run);
    } else {
      run = 1;
    }
  }
  return m;
}

EmpiricalMeasure roots(const QPoly& q, unsigned bits, RootOptions opt) {
  PrecisionScope scope(bits);
  return roots(to_complex(q), bits, opt);
}

EmpiricalMeasure real_measure(const std::vector<BigFloat>& xs) {
  EmpiricalMeasure m;
  m.real = true;
  m.n = static_cast<int>(xs.size());
  for (const auto& x : xs) m.points.push_back(BigComplex(x));
  std::sort(m.points.begin(), m.points.end(), [](const BigComplex& a, const BigComplex& b) { return a.real() < b.real(); });
  return m;
}

namespace {

Rational to_rational(const BigFloat& x) {
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, x.backend().data());
  Rational r(q);
  mpq_clear(q);
  return r;
}

int exact_sign(const QPoly& q, const Rational& x) {
  Rational v = 0;
  for (int k = q.degree(); k >= 0; --k) v = v * x + q.coeff(k);
  return sgn(v);
}

}  // namespace

RealRootCertificate certify_real_roots(const QPoly& q, const EmpiricalMeasure& m, double delta) {
  RealRootCertificate cert;
  const int d = q.degree();
  if (d < 1 || static_cast<int>(m.points.size()) != d) return cert;
  // delta = num / 10^k with k chosen so delta is an exact decimal.
  const int k = static_cast<int>(std::ceil(-std::log10(delta)));
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(k));
  Rational del(1, 1);
  del = Rational(mpz_class(1), den);
  del.canonicalize();
  std::vector<std::pair<Rational, Rational>> br;
  double min_dist = 1e300;
  for (const auto& z : m.points) {
    BigFloat x = z.real();
    Rational xr = to_rational(x);
    Rational scale = std::max(Rational(1), Rational(abs(xr)));
    mpz_class sc_int = scale.get_num() / scale.get_den() + 1;
    Rational half = del * Rational(sc_int);
    br.emplace_back(xr - half, xr + half);
    min_dist = std::min(min_dist, std::abs(x.convert_to<double>()) - 1.0);
  }
  std::sort(br.begin(), br.end());
  int ok = 0;
  bool outside = true;
  for (size_t i = 0; i < br.size(); ++i) {
    if (i > 0 && !(br[i - 1].second < br[i].first)) continue;
    if (exact_sign(q, br[i].first) * exact_sign(q, br[i].second) < 0) {
      ++ok;
      outside = outside && (br[i].first > 1 || br[i].second < -1);
    } else {
      outside = false;
    }
  }
  cert.certified = ok;
  cert.all_real = ok == d;
  cert.outside_unit = cert.all_real && outside;
  cert.min_distance_to_unit = min_dist;
  return cert;
}

BigComplex cubic_Y(const BigComplex& z) {
  const BigComplex one(1);
  if (z == one) throw OnBranchCut("Y is singular at z = 1");
  BigComplex w = (one + z) / (one - z);
  return exp(log(w) / BigComplex(3));
}

CubicBranches cubic_branches(const BigComplex& z) {
  const BigFloat x = z.real(), y = z.imag();
  const BigFloat tol = tol_digits(0.8);
  if (abs(y) <= tol && abs(x) >= 1 - tol) throw OnBranchCut("z lies on F = R \\ (-1, 1)");
  const BigComplex one(1);
  const BigComplex Y = cubic_Y(z);
  const BigComplex a = one / (z + one), b = one / (z - one);
  const BigComplex w = make_complex(BigFloat(-0.5), big_sqrt3() / 2);  // e^{2 pi i / 3}
  const BigComplex wc = make_complex(BigFloat(-0.5), -big_sqrt3() / 2);
  CubicBranches out;
  out.z = z;
  out.y1 = a * Y + b / Y;
  if (y >= 0) {
    out.y3 = w * a * Y + wc * b / Y;
  } else {
    out.y3 = wc * a * Y + w * b / Y;
  }
  out.y2 = -out.y1 - out.y3;
  return out;
}

BigComplex cubic_residual(const BigComplex& z, const BigComplex& y) {
  const BigComplex u = z * z - BigComplex(1);
  return u * u * y * y * y - BigComplex(3) * u * y + BigComplex(2) * z;
}

const char* to_string(DensityKind k) { return k == DensityKind::Nu ? "nu" : "lambda"; }

DensityKind parse_density_kind(const std::string& s) {
  if (s == "nu") return DensityKind::Nu;
  if (s == "lambda") return DensityKind::Lambda;
  throw InvalidArgument("density kind must be nu or lambda, got " + s);
}

BigFloat density(DensityKind kind, const BigFloat& x) {
  if (kind == DensityKind::Lambda) {
    if (!(abs(x) < 1)) throw OutsideSupport("lambda' is supported on (-1, 1)");
    BigFloat c = big_sqrt3() / (4 * pi());
    return c / cbrt(1 - x * x) * (1 / cbrt(1 - x) + 1 / cbrt(1 + x));
  }
  if (!(abs(x) > 1)) throw OutsideSupport("nu' is supported on |x| > 1");
  BigFloat ax = abs(x);
  BigFloat c = big_sqrt3() / (2 * pi());
  return c / cbrt(x * x - 1) * (1 / cbrt(ax - 1) - 1 / cbrt(ax + 1));
}

namespace {

// lambda' with dm = 1 - x and dp = 1 + x supplied separately.
double lambda_prime(double dm, double dp) {
  return kSqrt3 / (4 * M_PI) / std::cbrt(dm * dp) * (1 / std::cbrt(dm) + 1 / std::cbrt(dp));
}

// nu' at |x| = 1 + d.
double nu_prime_shift(double d) {
  const double a = std::cbrt(d), b = std::cbrt(d + 2);
  return kSqrt3 / (2 * M_PI) / (a * b) * (1 / a - 1 / b);
}

}  // namespace

double density(DensityKind kind, double x) {
  if (kind == DensityKind::Lambda) {
    if (!(std::abs(x) < 1)) throw OutsideSupport("lambda' is supported on (-1, 1)");
    return lambda_prime(1 - x, 1 + x);
  }
  if (!(std::abs(x) > 1)) throw OutsideSupport("nu' is supported on |x| > 1");
  return nu_prime_shift(std::abs(x) - 1);
}

double density_mass(DensityKind kind) {
  boost::math::quadrature::tanh_sinh<double> ts;
  if (kind == DensityKind::Lambda) {
    auto f = [](double x, double xc) {
      double dm = xc > 0 ? xc : 1 - x;
      double dp = xc < 0 ? -xc : 1 + x;
      return lambda_prime(dm, dp);
    };
    return ts.integrate(f, -1.0, 1.0);
  }
  auto near = [](double x, double xc) { return nu_prime_shift(xc < 0 ? -xc : x - 1); };
  boost::math::quadrature::exp_sinh<double> es;
  auto tail = [](double x) { return nu_prime_shift(x - 1); };
  return 2 * (ts.integrate(near, 1.0, 2.0) + es.integrate(tail, 2.0, std::numeric_limits<double>::infinity()));
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// int_0^a lambda' via 1 - t = v^3, which makes the integrand analytic.
double lambda_half(double a) {
  const double c = 3 * kSqrt3 / (4 * M_PI);
  auto h = [c](double v) {
    double r = std::cbrt(2 - v * v * v);
    return c / r * (1 + v / r);
  };
  return GK::integrate(h, std::cbrt(1 - a), 1.0, 10, 1e-11);
}

// (1-t)^{-1/3} - (1+t)^{-1/3} without cancellation for small t.
double bracket(double t) {
  if (t < 1e-3) return (2.0 / 3) * t + (28.0 / 81) * t * t * t;
  return 1 / std::cbrt(1 - t) - 1 / std::cbrt(1 + t);
}

// int_0^a g over [0, a]; [0, 1/2] directly, the rest with 1 - u = v^3.
double nu_u_half(double a) {
  const double c = kSqrt3 / (2 * M_PI);
  auto g = [c](double u) {
    if (u == 0) return c * 2.0 / 3;
    return c / u / std::cbrt(1 - u * u) * bracket(u);
  };
  const double mid = 0.5;
  if (a <= mid) return GK::integrate(g, 0.0, a, 10, 1e-11);
  double total = GK::integrate(g, 0.0, mid, 10, 1e-11);
  auto h = [c](double v) {
    double u = 1 - v * v * v;
    double r = std::cbrt(1 + u);
    return 3 * c / u / r * (1 - v / r);
  };
  total += GK::integrate(h, std::cbrt(1 - a), std::cbrt(1 - mid), 10, 1e-11);
  return total;
}

}  // namespace

double lambda_cdf(double x) {
  if (x <= -1) return 0;
  if (x >= 1) return 1;
  double h = lambda_half(std::abs(x));
  return x >= 0 ? 0.5 + h : 0.5 - h;
}

double nu_u_density(double u) {
  const double c = kSqrt3 / (2 * M_PI);
  double t = std::abs(u);
  if (t >= 1) throw OutsideSupport("u = 1/x must lie in (-1, 1)");
  if (t == 0) return c * 2.0 / 3;
  return c / t / std::cbrt(1 - t * t) * bracket(t);
}

double nu_u_cdf(double u) {
  if (u <= -1) return 0;
  if (u >= 1) return 1;
  double h = nu_u_half(std::abs(u));
  return u >= 0 ? 0.5 + h : 0.5 - h;
}

double limit_quantile(DensityKind kind, double p) {
  if (!(p > 0 && p < 1)) throw InvalidArgument("quantile level must be in (0, 1)");
  double lo = -1, hi = 1;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    double c = kind == DensityKind::Lambda ? lambda_cdf(mid) : nu_u_cdf(mid);
    (c < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Polynomial extrapolation of (e_k, v_k) to e = 0 (Neville).
BigComplex extrapolate_zero(const std::vector<BigFloat>& e, std::vector<BigComplex> v) {
  const size_t m = e.size();
  for (size_t k = 1; k < m; ++k)
    for (size_t i = m - 1; i >= k; --i) {
      v[i] = (BigComplex(e[i]) * v[i - 1] - BigComplex(e[i - k]) * v[i]) / BigComplex(e[i] - e[i - k]);
      if (i == k) break;
    }
  return v[m - 1];
}

}  // namespace

SokhotskiiResult sokhotskii_crosscheck(double x, DensityKind kind) {
  SokhotskiiResult out;
  out.x = x;
  const BigFloat bx(x);
  out.closed_form = density(kind, bx);
  const double dist = std::min(std::abs(x - 1), std::abs(x + 1));
  const BigFloat delta = std::min(1.0, dist);
  std::vector<BigComplex> jumps;
  const BigComplex two_pi_i = make_complex(BigFloat(0), 2 * pi());
  for (int k = 2; k <= 5; ++k) {
    BigFloat eps = delta * pow10_neg(k);
    auto up = cubic_branches(make_complex(bx, eps));
    auto dn = cubic_branches(make_complex(bx, -eps));
    BigComplex j = kind == DensityKind::Nu ? -(up.y1 - dn.y1) / two_pi_i
                                           : (up.y3 - dn.y3) / (BigComplex(2) * two_pi_i);
    out.eps.push_back(eps);
    out.raw.push_back(j.real());
    jumps.push_back(j);
  }
  BigComplex lim = extrapolate_zero(out.eps, jumps);
  if (abs(lim.imag()) > 1e-10) throw InternalInconsistency("jump density has an imaginary part");
  out.jump_form = lim.real();
  out.difference = abs(out.jump_form - out.closed_form);
  return out;
}

double measure_distance(const EmpiricalMeasure& emp, DensityKind kind) {
  std::vector<double> s;
  int off = 0;
  const int total = static_cast<int>(emp.points.size()) + emp.at_infinity;
  if (total == 0) throw InvalidArgument("empty measure");
  for (const auto& z : emp.points) {
    double x = BigFloat(z.real()).convert_to<double>();
    double y = BigFloat(z.imag()).convert_to<double>();
    bool on_real = std::abs(y) <= 1e-12 * std::max(1.0, std::abs(x));
    if (kind == DensityKind::Lambda) {
      if (!on_real || std::abs(x) > 1) ++off;
      s.push_back(std::clamp(x, -1.0, 1.0));
    } else {
      if (!on_real || std::abs(x) < 1) ++off;
      double u = 1 / x;
      s.push_back(std::clamp(u, -1.0, 1.0));
    }
  }
  if (kind == DensityKind::Nu) {
    for (int i = 0; i < emp.at_infinity; ++i) s.push_back(0.0);
  } else {
    off += emp.at_infinity;
  }
  if (off > 0.05 * total) throw SupportMismatch(std::to_string(off) + " of " + std::to_string(total) + " points off the support");
  std::sort(s.begin(), s.end());
  const double N = static_cast<double>(s.size());
  double ks = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    double c = kind == DensityKind::Lambda ? lambda_cdf(s[i]) : nu_u_cdf(s[i]);
    ks = std::max({ks, std::abs((i + 1) / N - c), std::abs(i / N - c)});
  }
  return ks;
}

BigComplex f0_complex(const Rational& alpha, const BigComplex& z) {
  const BigFloat tol = tol_digits(0.8);
  if (abs(BigFloat(z.imag())) <= tol && abs(BigFloat(z.real())) >= 1 - tol) throw OnBranchCut("f0 is cut along F");
  const BigComplex one(1);
  return exp(BigComplex(to_bigfloat(alpha)) * log((one - z) / (one + z)));
}

std::vector<RatioError> ratio_limit_check(const std::vector<HPSolution<Rational>>& sols, const BigComplex& z,
                                          const Rational& alpha) {
  const BigComplex f0 = f0_complex(alpha, z);
  const BigComplex c(2 * cos(pi() * to_bigfloat(alpha)));
  std::vector<RatioError> out;
  for (const auto& sol : sols) {
    if (sol.s != 2) throw InvalidArgument("ratio check needs s = 2 solutions");
    RatioError e;
    e.n = sol.n;
    BigComplex q2 = sol.Q[2](z);
    if (q2 == BigComplex(0)) {
      e.skipped = true;
    } else {
      e.err_q1 = abs(sol.Q[1](z) / q2 + c * f0);
      e.err_q0 = abs(sol.Q[0](z) / q2 - f0 * f0);
    }
    out.push_back(e);
  }
  return out;
}

SheetValues sheet_ordering(const BigComplex& z, int base) {
  if (base != 1 && base != -1) throw InvalidArgument("base point must be 1 or -1");
  if (BigFloat(z.imag()) == 0) throw PathCrossesCut("sheet ordering needs z off the real axis");
  const BigComplex b(base);
  const BigComplex dz = z - b;
  auto integrate = [&](int panels) {
    const auto& r = gauss_legendre(20);
    BigComplex i1(0), i3(0);
    for (int p = 0; p < panels; ++p) {
      const double a = double(p) / panels, c = 0.5 / panels;
      for (size_t i = 0; i < r.x.size(); ++i) {
        BigFloat s = BigFloat(a + c) + BigFloat(c) * BigFloat(r.x[i]);
        BigComplex t = b + dz * BigComplex(s * s * s);
        auto br = cubic_branches(t);
        BigComplex jac = BigComplex(3) * dz * BigComplex(s * s) * BigComplex(BigFloat(c * r.w[i]));
        i1 += br.y1 * jac;
        i3 += br.y3 * jac;
      }
    }
    return std::make_pair(i1, i3);
  };
  int panels = 4;
  auto prev = integrate(panels);
  for (;;) {
    panels *= 2;
    auto cur = integrate(panels);
    BigFloat diff = abs(cur.first - prev.first) + abs(cur.second - prev.second);
    prev = cur;
    if (diff < 1e-13) break;
    if (panels > 512) throw QuadratureFailure("sheet integrals did not converge");
  }
  SheetValues v;
  v.phi1 = prev.first.real();
  v.phi3 = prev.second.real();
  v.phi2 = -v.phi1 - v.phi3;
  v.margin = std::min(BigFloat(v.phi1 - v.phi2), BigFloat(v.phi2 - v.phi3));
  v.ordered = v.phi3 < v.phi2 && v.phi2 < v.phi1;
  return v;
}

BigFloat cauchy_transform_check(const HPSolution<Rational>& sol, int k, const BigComplex& z) {
  if (k < 0 || k > sol.s) throw InvalidArgument("k out of range");
  if (BigFloat(z.imag()) == 0) throw InvalidArgument("z must be off the real axis");
  const QPoly& q = sol.Q[static_cast<size_t>(k)];
  BigComplex qz = q(z);
  if (qz == BigComplex(0)) throw DivisionByZero("z is a root of Q");
  BigComplex h = q.derivative()(z) / (BigComplex(sol.n) * qz);
  return abs(h - cubic_branches(z).y1);
}

void write_density_csv(std::ostream& os, const EmpiricalMeasure& emp, DensityKind kind) {
  os << "x,density,empirical_cdf,limit_cdf\n";
  std::vector<double> xs;
  for (const auto& z : emp.points) xs.push_back(BigFloat(z.real()).convert_to<double>());
  std::vector<std::pair<double, double>> keyed;  // (cdf coordinate, x)
  for (double x : xs) keyed.emplace_back(kind == DensityKind::Nu ? 1 / x : x, x);
  std::sort(keyed.begin(), keyed.end());
  const double N = static_cast<double>(keyed.size()) + emp.at_infinity;
  os.precision(17);
  for (size_t i = 0; i < keyed.size(); ++i) {
    const double key = keyed[i].first, x = keyed[i].second;
    double dens = 0;
    try {
      dens = density(kind, x);
    } catch (const OutsideSupport&) {
      dens = 0;
    }
    double lim = kind == DensityKind::Nu ? nu_u_cdf(key) : lambda_cdf(key);
    os << x << ',' << dens << ',' << (i + 1) / N << ',' << lim << '\n';
  }
}

}  // namespace hplab
