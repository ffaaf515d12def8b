#include "hplab/hp.hpp"

#include <algorithm>
#include <cmath>

namespace hplab {

namespace {

double half_digits_tol() { return std::pow(10.0, -0.5 * precision_digits10()); }

template <class T>
bool negligible(const T& v, double scale) {
  if constexpr (ScalarTraits<T>::exact) {
    (void)scale;
    return ScalarTraits<T>::is_zero(v);
  } else {
    return ScalarTraits<T>::magnitude(v) <= half_digits_tol() * scale;
  }
}

template <class T>
std::vector<std::vector<T>> nullspace(const std::vector<std::vector<T>>& rows, int cols, Exec exec) {
  if constexpr (ScalarTraits<T>::exact) {
    return nullspace_exact(rows, cols, exec);
  } else {
    (void)exec;
    return nullspace_float(rows, cols, BigFloat(half_digits_tol())).basis;
  }
}

// Q_1..Q_s from the unknown vector; Q_0 is minus the polynomial part of
// sum_{k>=1} Q_k f^k.
template <class T>
std::vector<Polynomial<T>> assemble(const PowerSystem<T>& sys, int n, const std::vector<T>& x) {
  const int s = sys.s;
  std::vector<Polynomial<T>> Q(static_cast<size_t>(s) + 1);
  for (int k = 1; k <= s; ++k) {
    std::vector<T> c(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) c[static_cast<size_t>(j)] = x[static_cast<size_t>((k - 1) * (n + 1) + j)];
    Q[static_cast<size_t>(k)] = Polynomial<T>(std::move(c));
  }
  std::vector<T> q0(static_cast<size_t>(n) + 1, ScalarTraits<T>::zero());
  for (int e = 0; e <= n; ++e) {
    T acc = ScalarTraits<T>::zero();
    for (int k = 1; k <= s; ++k) {
      const auto& Qk = Q[static_cast<size_t>(k)];
      for (int j = e; j <= Qk.degree(); ++j) acc += Qk.coeff(j) * sys.tails[static_cast<size_t>(k)].coeff(e - j);
    }
    q0[static_cast<size_t>(e)] = -acc;
  }
  Q[0] = Polynomial<T>(std::move(q0));
  return Q;
}

template <class T>
double coeff_scale(const std::vector<Polynomial<T>>& Q) {
  double m = 0;
  for (const auto& q : Q) m = std::max(m, q.max_abs());
  return m;
}

template <class T>
bool full_degree(const Polynomial<T>& q, int n) {
  if (q.degree() != n) return false;
  if constexpr (ScalarTraits<T>::exact) {
    return true;
  } else {
    return !negligible(q.leading(), q.max_abs());
  }
}

// Q_s monic when deg Q_s = n; otherwise the first nonzero Q_k scanning from
// k = s downward is made monic.
template <class T>
void normalize(std::vector<Polynomial<T>>& Q, int n) {
  const int s = static_cast<int>(Q.size()) - 1;
  T lead = ScalarTraits<T>::one();
  if (full_degree(Q[static_cast<size_t>(s)], n)) {
    lead = Q[static_cast<size_t>(s)].leading();
  } else {
    for (int k = s; k >= 0; --k) {
      if (!Q[static_cast<size_t>(k)].is_zero()) {
        lead = Q[static_cast<size_t>(k)].leading();
        break;
      }
    }
  }
  T inv = ScalarTraits<T>::one() / lead;
  for (auto& q : Q) q = q.scaled(inv);
}

template <class T>
HPSolution<T> hp_solve_impl(const PowerSystem<T>& sys, int n, Exec exec) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  const int s = sys.s;
  const int need = required_order(s, n);
  for (const auto& t : sys.tails) {
    if (t.order() < need) {
      throw TruncationTooShort("expansion order " + std::to_string(t.order()) + " < (s+1)n+s+2 = " +
                               std::to_string(need));
    }
  }
  // Coefficient of z^{-m} in sum_{k>=1} Q_k f^k is sum_k sum_j q_{k,j} c^{(k)}_{j+m};
  // m = 1..sn+s-1 must vanish. The z^{>=0} part is absorbed by Q_0.
  const int cols = s * (n + 1);
  const int eqs = s * n + s - 1;
  std::vector<std::vector<T>> rows(static_cast<size_t>(eqs), std::vector<T>(static_cast<size_t>(cols)));
  for (int m = 1; m <= eqs; ++m)
    for (int k = 1; k <= s; ++k)
      for (int j = 0; j <= n; ++j)
        rows[static_cast<size_t>(m - 1)][static_cast<size_t>((k - 1) * (n + 1) + j)] =
            sys.tails[static_cast<size_t>(k)].coeff(-(j + m));

  auto basis = nullspace(rows, cols, exec);
  if (basis.empty()) throw InternalInconsistency("Hermite-Pade system has a trivial nullspace");

  HPSolution<T> sol;
  sol.n = n;
  sol.s = s;
  sol.nullspace_dim = static_cast<int>(basis.size());
  sol.Q = assemble(sys, n, basis.front());
  normalize(sol.Q, n);
  if (basis.size() > 1) {
    for (const auto& b : basis) {
      auto Qb = assemble(sys, n, b);
      normalize(Qb, n);
      sol.basis.push_back(std::move(Qb));
    }
  }

  LaurentTail<T> R;
  for (int k = 0; k <= s; ++k) {
    auto term = LaurentTail<T>::from_polynomial(sol.Q[static_cast<size_t>(k)]) * sys.tails[static_cast<size_t>(k)];
    R = (k == 0) ? term : R + term;
  }
  sol.remainder = R;

  double scale = 0;
  for (int k = 0; k <= s; ++k) {
    double cmax = 0;
    for (int m = 0; m <= sys.tails[static_cast<size_t>(k)].order(); ++m)
      cmax = std::max(cmax, ScalarTraits<T>::magnitude(sys.tails[static_cast<size_t>(k)].coeff(-m)));
    scale = std::max(scale, sol.Q[static_cast<size_t>(k)].max_abs() * std::max(cmax, 1.0));
  }
  scale *= (n + 1);

  for (int e = R.top(); e >= -(s * n + s - 1); --e) {
    if (!negligible(R.coeff(e), scale)) {
      throw InternalInconsistency("remainder coefficient at z^" + std::to_string(e) + " does not vanish");
    }
  }
  const int first = s * n + s;
  sol.defect_resolved = false;
  for (int m = first; m <= R.order(); ++m) {
    if (!negligible(R.coeff(-m), scale)) {
      sol.defect = m - first;
      sol.leading_remainder = R.coeff(-m);
      sol.defect_resolved = true;
      break;
    }
  }
  if (!sol.defect_resolved) {
    sol.defect = R.order() - first + 1;
    sol.leading_remainder = ScalarTraits<T>::zero();
  }
  bool degrees = true;
  for (const auto& q : sol.Q) degrees = degrees && full_degree(q, n);
  sol.normal = sol.nullspace_dim == 1 && sol.defect_resolved && sol.defect == 0 && degrees;
  return sol;
}

template <class T>
PadePair<T> pade_from(const HPSolution<T>& h) {
  PadePair<T> pp;
  pp.n = h.n;
  pp.Q = h.Q[1];
  pp.P = -h.Q[0];
  pp.M_n = h.leading_remainder;
  pp.defect = h.defect;
  pp.normal = h.normal;
  pp.remainder = h.remainder;
  return pp;
}

}  // namespace

HPSolution<Rational> hp_solve(const PowerSystem<Rational>& sys, int n, Exec exec) {
  return hp_solve_impl(sys, n, exec);
}

HPSolution<BigComplex> hp_solve(const PowerSystem<BigComplex>& sys, int n, Exec exec) {
  return hp_solve_impl(sys, n, exec);
}

std::vector<HPSolution<Rational>> hp_sweep(const QFn& f, int s, const std::vector<int>& ns, Exec exec) {
  int nmax = 0;
  for (int n : ns) nmax = std::max(nmax, n);
  const auto sys = power_tails(f, s, working_order(s, nmax));
  std::vector<HPSolution<Rational>> out(ns.size());
  const int count = static_cast<int>(ns.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = hp_solve(sys, ns[static_cast<size_t>(i)]);
  } else {
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = hp_solve(sys, ns[static_cast<size_t>(i)]);
  }
  return out;
}

PadePair<Rational> pade_solve(const QFn& f, int n, Exec exec) {
  return pade_from(hp_solve(power_tails(f, 1, working_order(1, n)), n, exec));
}

PadePair<BigComplex> pade_solve(const CFn& f, int n, Exec exec) {
  return pade_from(hp_solve(power_tails(f, 1, working_order(1, n)), n, exec));
}

QPoly jacobi_polynomial(const Rational& a, const Rational& b, int n) {
  if (n < 0) throw InvalidArgument("Jacobi degree must be >= 0");
  QPoly p0 = QPoly::constant(1);
  if (n == 0) return p0;
  QPoly p1({Rational((a - b) / 2), Rational((a + b + 2) / 2)});
  for (int k = 2; k <= n; ++k) {
    Rational kk(k), s = a + b;
    Rational c0 = 2 * kk * (kk + s) * (2 * kk + s - 2);
    Rational c1 = (2 * kk + s - 1) * (2 * kk + s) * (2 * kk + s - 2);
    Rational c2 = (2 * kk + s - 1) * (a * a - b * b);
    Rational c3 = 2 * (kk + a - 1) * (kk + b - 1) * (2 * kk + s);
    QPoly p2 = (QPoly({c2, c1}) * p1 - QPoly::constant(c3) * p0).scaled(Rational(1) / c0);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return p1;
}

bool jacobi_crosscheck(const Rational& alpha, int n) {
  auto pp = pade_solve(two_point_function(alpha), n);
  return pp.Q.monic() == jacobi_polynomial(alpha, -alpha, n).monic();
}

BigFloat f0_real(const Rational& alpha, const BigFloat& x) {
  return pow((BigFloat(1) - x) / (BigFloat(1) + x), to_bigfloat(alpha));
}

BigFloat rho_value(const HPSolution<Rational>& sol, const Rational& alpha, const BigFloat& x) {
  const BigFloat c = 2 * cos(to_bigfloat(alpha) * pi());
  return sol.Q[1](x) + c * f0_real(alpha, x) * sol.Q[2](x);
}

std::vector<double> clustered_grid(int points) {
  std::vector<double> g;
  g.reserve(static_cast<size_t>(points));
  for (int i = 1; i <= points; ++i) {
    double t = -1.0 + 2.0 * i / (points + 1);
    double x = (t < 0 ? -1.0 : 1.0) * (1.0 - std::pow(1.0 - std::abs(t), 3));
    g.push_back(x);
  }
  return g;
}

namespace {

int count_changes(const std::vector<int>& sg) {
  int c = 0;
  int last = 0;
  for (int v : sg) {
    if (v == 0) continue;
    if (last != 0 && v != last) ++c;
    last = v;
  }
  return c;
}

std::vector<int> signs_on(const HPSolution<Rational>& sol, const Rational& alpha, const std::vector<double>& g,
                          Exec exec, std::vector<BigFloat>* values = nullptr) {
  std::vector<int> sg(g.size());
  std::vector<BigFloat> v(g.size());
  const int count = static_cast<int>(g.size());
  auto body = [&](int i) {
    v[static_cast<size_t>(i)] = rho_value(sol, alpha, BigFloat(g[static_cast<size_t>(i)]));
    sg[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] > 0 ? 1 : (v[static_cast<size_t>(i)] < 0 ? -1 : 0);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i) body(i);
  } else {
    for (int i = 0; i < count; ++i) body(i);
  }
  if (values) *values = std::move(v);
  return sg;
}

}  // namespace

RhoForm rho_form(const HPSolution<Rational>& sol, const Rational& alpha, const std::vector<double>& grid, Exec exec) {
  if (sol.s != 2) throw InvalidArgument("rho_form needs an s = 2 solution");
  for (double x : grid)
    if (!(x > -1.0 && x < 1.0)) throw OutsideSupport("rho_form grid must lie in (-1, 1)");
  RhoForm out;
  std::vector<double> g(grid);
  std::sort(g.begin(), g.end());
  auto sg = signs_on(sol, alpha, g, exec, &out.values);
  // Values are reported in the caller's grid order.
  if (!std::is_sorted(grid.begin(), grid.end())) {
    std::vector<BigFloat> v(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      auto it = std::lower_bound(g.begin(), g.end(), grid[i]);
      v[i] = out.values[static_cast<size_t>(it - g.begin())];
    }
    out.values = std::move(v);
  }
  int count = count_changes(sg);
  constexpr int kMaxDoublings = 8;
  for (int r = 0; r < kMaxDoublings; ++r) {
    std::vector<double> h;
    h.reserve(2 * g.size());
    for (size_t i = 0; i < g.size(); ++i) {
      h.push_back(g[i]);
      if (i + 1 < g.size()) h.push_back(0.5 * (g[i] + g[i + 1]));
    }
    auto hs = signs_on(sol, alpha, h, exec);
    int c2 = count_changes(hs);
    g = std::move(h);
    sg = std::move(hs);
    out.refinements = r + 1;
    if (c2 == count) {
      out.sign_changes = c2;
      out.refined_grid.assign(g.begin(), g.end());
      out.refined_signs = sg;
      return out;
    }
    count = c2;
  }
  double widest = 0;
  for (size_t i = 0; i + 1 < g.size(); ++i) widest = std::max(widest, g[i + 1] - g[i]);
  if (widest > 1e-4) throw GridTooCoarse("sign-change count of rho_n did not stabilize under refinement");
  out.sign_changes = count;
  out.refined_grid.assign(g.begin(), g.end());
  out.refined_signs = sg;
  return out;
}

std::vector<BigFloat> rho_zeros(const HPSolution<Rational>& sol, const Rational& alpha, const RhoForm& form,
                                double tol) {
  std::vector<BigFloat> zeros;
  const auto& g = form.refined_grid;
  const auto& sg = form.refined_signs;
  const BigFloat btol(tol);
  size_t last = g.size();
  for (size_t i = 0; i < g.size(); ++i) {
    if (sg[i] == 0) {
      zeros.emplace_back(g[i]);
      last = g.size();
      continue;
    }
    if (last != g.size() && sg[last] != sg[i]) {
      BigFloat lo(g[last]), hi(g[i]);
      int slo = sg[last];
      while (hi - lo > btol) {
        BigFloat mid = (lo + hi) / 2;
        BigFloat v = rho_value(sol, alpha, mid);
        int sm = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (sm == 0) {
          lo = hi = mid;
          break;
        }
        if (sm == slo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      zeros.push_back((lo + hi) / 2);
    }
    last = i;
  }
  return zeros;
}

}  // namespace hplab
