#include "hplab/potential.hpp"

#include "hplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hplab {

namespace {

constexpr double kBoundaryTol = 1e-14;
const double kEndCut = std::cbrt(0.5);  // v range of the endpoint pieces

bool on_E(cplx z) { return std::abs(z.imag()) <= kBoundaryTol && std::abs(z.real()) <= 1; }
bool on_F(cplx z) { return std::abs(z.imag()) <= kBoundaryTol && std::abs(z.real()) >= 1; }

// psi(t) = 1/phi(t) for real t = 1/u, |u| <= 1.
double inv_phi_of_u(double u) { return u / (1 + std::sqrt(std::max(0.0, 1 - u * u))); }

double phi_real(double x) { return x + std::copysign(std::sqrt(x * x - 1), x); }

// Even weights on [-1, 1] with (1 -+ t)^(-2/3) endpoint behaviour:
// direct(t) on the middle piece, mapped(v) = w(1 - v^3) * 3 v^2 near the ends.
struct Weight {
  std::function<double(double)> direct;
  std::function<double(double)> mapped;
};

Weight lambda_weight() {
  const double c = std::sqrt(3.0) / (4 * M_PI);
  return {[](double t) { return density(DensityKind::Lambda, t); },
          [c](double v) {
            double r = std::cbrt(2 - v * v * v);
            return 3 * c / r * (1 + v / r);
          }};
}

Weight nu_u_weight() {
  const double c = std::sqrt(3.0) / (2 * M_PI);
  return {[](double u) { return nu_u_density(u); },
          [c](double v) {
            double u = 1 - v * v * v;
            double r = std::cbrt(1 + u);
            return 3 * c / u / r * (1 - v / r);
          }};
}

// int_{-1}^{1} K(t) w(t) dt with panels graded toward `sing` and toward the
// ends of the endpoint pieces.
double integrate_weighted(const std::function<double(double)>& K, const Weight& w, const std::vector<double>& sing,
                          int n) {
  std::vector<double> mid_sing, left_sing{0.0}, right_sing{0.0};
  for (double s : sing) {
    if (s < -1 || s > 1) continue;
    if (s <= -0.5) left_sing.push_back(std::cbrt(s + 1));
    if (s >= 0.5) right_sing.push_back(std::cbrt(1 - s));
    if (s >= -0.5 && s <= 0.5) mid_sing.push_back(s);
  }
  double total = integrate_panels([&](double t) { return K(t) * w.direct(t); },
                                  graded_panels(-0.5, 0.5, mid_sing, n), n);
  total += integrate_panels([&](double v) { return K(1 - v * v * v) * w.mapped(v); },
                            graded_panels(0.0, kEndCut, right_sing, n), n);
  total += integrate_panels([&](double v) { return K(-1 + v * v * v) * w.mapped(v); },
                            graded_panels(0.0, kEndCut, left_sing, n), n);
  return total;
}

// g_F(x, t) for x, t in (-1, 1).
double green_F_real(double x, double t) {
  // The reciprocal form keeps t -> -1 finite.
  double s = std::sqrt((1 - x) / (1 + x));
  if (t <= 0) {
    double r0 = std::sqrt((1 + t) / (1 - t));
    return std::log(std::abs((s * r0 + 1) / (s * r0 - 1)));
  }
  double s0 = std::sqrt((1 - t) / (1 + t));
  return std::log(std::abs((s + s0) / (s - s0)));
}

template <class F>
void for_grid(int n, Exec exec, F&& body) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
}

EquilibriumResult finish(std::vector<double> values) {
  EquilibriumResult r;
  r.values = std::move(values);
  if (!r.values.empty()) {
    auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
    r.spread = *hi - *lo;
  }
  return r;
}

}  // namespace

cplx exterior_map(cplx z) { return z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0); }

double green_E(cplx z, std::optional<cplx> t) {
  if (on_E(z)) throw OnBoundary("z lies on E = [-1, 1]");
  const cplx pz = exterior_map(z);
  if (!t) return std::log(std::abs(pz));
  if (on_E(*t)) throw OnBoundary("pole lies on E = [-1, 1]");
  const cplx pt = exterior_map(*t);
  return std::log(std::abs((1.0 - pz * std::conj(pt)) / (pz - pt)));
}

double green_F(cplx z, cplx t) {
  if (on_F(z) || on_F(t)) throw OnBoundary("point lies on F = R \\ (-1, 1)");
  const cplx s = std::sqrt((1.0 - z) / (1.0 + z)), s0 = std::sqrt((1.0 - t) / (1.0 + t));
  return std::log(std::abs((s + std::conj(s0)) / (s - s0)));
}

double external_field(double x) {
  if (std::abs(x) < 1) throw OutsideSupport("psi is defined on F");
  return 3 * std::log(std::abs(x) + std::sqrt(x * x - 1));
}

double log_potential(DensityKind kind, double x, int quad_n) {
  if (kind == DensityKind::Lambda) {
    std::vector<double> sing;
    if (std::abs(x) <= 1) sing.push_back(x);
    return integrate_weighted([x](double t) { return -std::log(std::abs(x - t)); }, lambda_weight(), sing, quad_n);
  }
  // t = 1/u: log 1/|x - 1/u| = log|u| - log|x u - 1|.
  std::vector<double> sing{0.0};
  if (std::abs(x) >= 1) sing.push_back(1 / x);
  return integrate_weighted([x](double u) { return std::log(std::abs(u)) - std::log(std::abs(x * u - 1)); },
                            nu_u_weight(), sing, quad_n);
}

double green_potential(DensityKind kind, double x, int quad_n) {
  if (kind == DensityKind::Lambda) {
    if (!(std::abs(x) < 1)) throw OutsideSupport("G^lambda_F is evaluated on (-1, 1)");
    return integrate_weighted([x](double t) { return green_F_real(x, t); }, lambda_weight(), {x}, quad_n);
  }
  if (!(std::abs(x) > 1)) throw OutsideSupport("G^nu_E is evaluated on F");
  const double px = phi_real(x);
  auto K = [px](double u) {
    double q = inv_phi_of_u(u);
    return std::log(std::abs(px - q) / std::abs(1 - px * q));
  };
  return integrate_weighted(K, nu_u_weight(), {1 / x}, quad_n);
}

EquilibriumResult equilibrium_check(Equilibrium which, const std::vector<double>& grid, int quad_n, Exec exec) {
  if (quad_n < 2) throw InvalidArgument("quad_n must be >= 2");
  for (double x : grid) {
    if (which == Equilibrium::Eq1 && !(std::abs(x) < 1)) throw OutsideSupport("eq1 grid must lie in (-1, 1)");
    if (which == Equilibrium::Eq2 && !(std::abs(x) > 1)) throw OutsideSupport("eq2 grid must lie in |x| > 1");
  }
  gauss_legendre(quad_n);  // fill the cache before any parallel region
  std::vector<double> v(grid.size());
  for_grid(static_cast<int>(grid.size()), exec, [&](int i) {
    const double x = grid[static_cast<size_t>(i)];
    if (which == Equilibrium::Eq1) {
      v[static_cast<size_t>(i)] =
          3 * log_potential(DensityKind::Lambda, x, quad_n) + green_potential(DensityKind::Lambda, x, quad_n);
    } else {
      v[static_cast<size_t>(i)] = 3 * log_potential(DensityKind::Nu, x, quad_n) +
                                  green_potential(DensityKind::Nu, x, quad_n) + external_field(x);
    }
  });
  return finish(std::move(v));
}

EquilibriumResult balayage_check(const std::vector<double>& grid_F, int quad_n, Exec exec) {
  for (double x : grid_F)
    if (!(std::abs(x) > 1)) throw OutsideSupport("balayage grid must lie in |x| > 1");
  gauss_legendre(quad_n);
  std::vector<double> v(grid_F.size());
  for_grid(static_cast<int>(grid_F.size()), exec, [&](int i) {
    const double x = grid_F[static_cast<size_t>(i)];
    v[static_cast<size_t>(i)] = log_potential(DensityKind::Nu, x, quad_n) - log_potential(DensityKind::Lambda, x, quad_n);
  });
  return finish(std::move(v));
}

namespace {

cplx to_cplx(const BigComplex& z) {
  return {BigFloat(z.real()).convert_to<double>(), BigFloat(z.imag()).convert_to<double>()};
}

// Principal root re-signed to stay continuous with `prev`.
cplx tracked_sqrt(cplx w, cplx prev) {
  cplx r = std::sqrt(w);
  return std::abs(r - prev) <= std::abs(r + prev) ? r : -r;
}

}  // namespace

StahlG stahl_g(const CFn& f, cplx z) {
  if (f.p() != 2) throw InvalidArgument("stahl_g needs p = 2");
  const cplx b1 = to_cplx(f.branch_points()[0]), b2 = to_cplx(f.branch_points()[1]);
  const cplx zeta = (2.0 * z - b1 - b2) / (b2 - b1);
  if (on_E(zeta)) throw OnBoundary("z lies on the segment between the branch points");
  // Start at the branch point whose segment to z stays farther from the other.
  auto clearance = [z](cplx from, cplx other) {
    const cplx d = z - from;
    const double s = std::clamp(((other - from) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(from + s * d - other);
  };
  const bool swap = clearance(b2, b1) > clearance(b1, b2);
  const cplx a1 = swap ? b2 : b1, a2 = swap ? b1 : b2;
  // t = a1 + (z - a1) s^2 turns dt / sqrt((t - a1)(t - a2)) into 2 r1 ds / sqrt(t - a2).
  const cplx r1 = std::sqrt(z - a1);
  const auto& rule = gauss_legendre(32);
  const int panels = 32;
  cplx prev = std::sqrt(a1 - a2), sum = 0;
  for (int p = 0; p < panels; ++p) {
    for (size_t i = 0; i < rule.x.size(); ++i) {
      const double s = (p + 0.5 + 0.5 * rule.x[i]) / panels;
      const cplx t = a1 + (z - a1) * s * s;
      prev = tracked_sqrt(t - a2, prev);
      sum += 0.5 * rule.w[i] / panels / prev;
    }
  }
  StahlG g;
  g.integral = std::abs((2.0 * r1 * sum).real());
  g.green = std::log(std::abs(exterior_map(zeta)));
  if (std::abs(g.integral - g.green) > 1e-10 * std::max(1.0, std::abs(g.green))) {
    throw InternalInconsistency("Re int dt/sqrt(A) differs from the Green function of the segment");
  }
  return g;
}

namespace {

// Im[(v - a_j) int_0^pi cos^2(theta/2) / sqrt((t - a_k)(t - a_l)) dtheta] with
// t = a_j + (v - a_j) sin^2(theta/2), i.e. Re int_{a_j}^{v} sqrt(V/A) dt up to sign.
cplx leg_integral(const std::vector<cplx>& a, int j, cplx v, const ClosedVOptions& opt) {
  const cplx aj = a[static_cast<size_t>(j)];
  const cplx ak = a[static_cast<size_t>((j + 1) % 3)], al = a[static_cast<size_t>((j + 2) % 3)];
  const auto& rule = gauss_legendre(opt.quad_nodes);
  cplx prev = std::sqrt((aj - ak) * (aj - al)), sum = 0;
  for (int p = 0; p < opt.panels; ++p) {
    for (size_t i = 0; i < rule.x.size(); ++i) {
      const double th = M_PI * (p + 0.5 + 0.5 * rule.x[i]) / opt.panels;
      const double sh = std::sin(th / 2), ch = std::cos(th / 2);
      const cplx t = aj + (v - aj) * sh * sh;
      prev = tracked_sqrt((t - ak) * (t - al), prev);
      sum += 0.5 * M_PI * rule.w[i] / opt.panels * ch * ch / prev;
    }
  }
  return (v - aj) * sum;
}

}  // namespace

ClosedV find_closed_V(const CFn& f, ClosedVOptions opt) {
  if (f.p() != 3) throw InvalidArgument("find_closed_V needs p = 3");
  std::vector<cplx> a;
  for (const auto& x : f.branch_points()) a.push_back(to_cplx(x));
  const double scale = std::max({std::abs(a[0] - a[1]), std::abs(a[1] - a[2]), std::abs(a[0] - a[2])});
  ClosedV out;
  cplx v = (a[0] + a[1] + a[2]) / 3.0;
  out.trace.push_back(v);
  auto residual = [&](cplx w) {
    return std::array<double, 2>{leg_integral(a, 0, w, opt).imag(), leg_integral(a, 1, w, opt).imag()};
  };
  auto norm = [](const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); };
  auto r = residual(v);
  for (int it = 0;; ++it) {
    if (norm(r) < opt.tol * std::max(1.0, scale)) break;
    if (it >= opt.max_iterations) throw NewtonDivergence("closed-V Newton iteration exhausted its budget");
    // The legs are holomorphic in v: d Im X / dx = Im X', d Im X / dy = Re X'.
    const double h = 1e-6 * scale;
    cplx d0 = (leg_integral(a, 0, v + h, opt) - leg_integral(a, 0, v - h, opt)) / (2 * h);
    cplx d1 = (leg_integral(a, 1, v + h, opt) - leg_integral(a, 1, v - h, opt)) / (2 * h);
    const double j00 = d0.imag(), j01 = d0.real(), j10 = d1.imag(), j11 = d1.real();
    const double det = j00 * j11 - j01 * j10;
    if (std::abs(det) < 1e-300) throw NewtonDivergence("singular Jacobian in closed-V Newton iteration");
    cplx step((-r[0] * j11 + r[1] * j01) / det, (-j00 * r[1] + j10 * r[0]) / det);
    double lambda = 1;
    cplx next;
    std::array<double, 2> rn{};
    for (int k = 0; k < 30; ++k) {
      next = v + lambda * step;
      rn = residual(next);
      if (norm(rn) < norm(r)) break;
      lambda /= 2;
    }
    if (!(norm(rn) < norm(r))) {
      // Accept the floor reached by the quadrature.
      if (norm(r) < 1e-12 * std::max(1.0, scale)) break;
      throw NewtonDivergence("closed-V Newton step failed to reduce the residual");
    }
    v = next;
    r = rn;
    out.trace.push_back(v);
    out.iterations = it + 1;
    if (std::abs(v) > 1e6 * std::max(1.0, scale)) throw NewtonDivergence("closed-V iterate escaped");
  }
  out.v = v;
  for (int j = 0; j < 3; ++j) out.residuals.push_back(leg_integral(a, j, v, opt).imag());
  for (double x : out.residuals) out.max_residual = std::max(out.max_residual, std::abs(x));
  return out;
}

cplx sqrt_V_over_A(const std::vector<cplx>& a, cplx v, cplx z) {
  auto ratio = [&](cplx t) {
    cplx A = 1;
    for (const auto& x : a) A *= (t - x);
    return (t - v) / A;
  };
  double R = std::abs(z) + std::abs(v);
  for (const auto& x : a) R = std::max(R, std::abs(x));
  R *= 1e3;
  const cplx dir = z / std::abs(z);
  cplx t = R * dir;
  cplx s = std::sqrt(ratio(t));
  if (std::abs(s - 1.0 / t) > std::abs(-s - 1.0 / t)) s = -s;
  const int steps = 4000;
  const double r0 = std::log(R), r1 = std::log(std::abs(z));
  for (int k = 1; k <= steps; ++k) {
    t = std::exp(r0 + (r1 - r0) * k / steps) * dir;
    s = tracked_sqrt(ratio(t), s);
  }
  return s;
}

std::vector<double> closed_V_pade_errors(const CFn& f, cplx v, cplx z, const std::vector<int>& ns, Exec exec) {
  std::vector<cplx> a;
  for (const auto& x : f.branch_points()) a.push_back(to_cplx(x));
  const cplx target = sqrt_V_over_A(a, v, z);
  std::vector<double> err(ns.size());
  // Float Pade systems lose roughly 20 bits per unit of n.
  int n_max = 0;
  for (int n : ns) n_max = std::max(n_max, n);
  PrecisionScope scope(std::max(precision_bits(), 24u * static_cast<unsigned>(n_max) + 128u));
  const BigComplex zb = make_complex(z.real(), z.imag());
  for_grid(static_cast<int>(ns.size()), exec, [&](int i) {
    const int n = ns[static_cast<size_t>(i)];
    auto p = pade_solve(f, n);
    BigComplex h = p.Q.derivative()(zb) / (BigComplex(n) * p.Q(zb));
    err[static_cast<size_t>(i)] = std::abs(to_cplx(h) - target);
  });
  return err;
}

}  // namespace hplab
