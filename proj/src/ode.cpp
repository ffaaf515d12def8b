#include "hplab/ode.hpp"

#include <cmath>
#include <functional>

namespace hplab {

LinearODE<Rational> build_ode_p2_s2(const Rational& alpha, int n, bool flip, OdeVariant variant) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  const Rational a = flip ? Rational(-alpha) : alpha;
  const Rational N(n);
  const QPoly A({Rational(-1), Rational(0), Rational(1)});
  QPoly pi3 = A * A;
  QPoly pi2 = QPoly::constant(6) * A * QPoly::linear_root(a);
  Rational k2 = -3 * (N - 1) * (N + 2);
  Rational d2 = -12 * a;
  Rational c2 = 3 * N * (N + 1) + 8 * a * a - (variant == OdeVariant::Printed ? 10 : 2);
  QPoly pi1({c2, d2, k2});
  Rational k1 = 2 * N * (N * N - 1);
  Rational c1 = variant == OdeVariant::Printed ? Rational(2 * a * (3 * N * (N + 1) - 8)) : Rational(6 * a * N * (N + 1));
  QPoly pi0({c1, k1});
  return LinearODE<Rational>{{pi0, pi1, pi2, pi3}};
}

int extraction_order(int s, int n, int p, const ExtractionOptions& opt) {
  return (s + 1) * n + p * clearing_power(s) + opt.extra_order + s + 2;
}

namespace {

template <class T>
LaurentTail<T> determinant(const std::vector<std::vector<const LaurentTail<T>*>>& m) {
  const size_t d = m.size();
  if (d == 1) return *m[0][0];
  if (d == 2) return *m[0][0] * *m[1][1] - *m[0][1] * *m[1][0];
  LaurentTail<T> acc;
  bool first = true;
  for (size_t c = 0; c < d; ++c) {
    std::vector<std::vector<const LaurentTail<T>*>> sub;
    for (size_t r = 1; r < d; ++r) {
      std::vector<const LaurentTail<T>*> row;
      for (size_t cc = 0; cc < d; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      sub.push_back(std::move(row));
    }
    LaurentTail<T> term = *m[0][c] * determinant(sub);
    if (first) {
      acc = (c % 2 == 0) ? term : term.scaled(T(-1));
      first = false;
    } else {
      acc = (c % 2 == 0) ? acc + term : acc - term;
    }
  }
  return acc;
}

template <class T>
double tail_scale(const LaurentTail<T>& t) {
  double m = 0;
  for (int e = std::max(t.top(), 0); e >= 0; --e) m = std::max(m, ScalarTraits<T>::magnitude(t.coeff(e)));
  return m;
}

double float_rel_tol() { return std::pow(10.0, -0.4 * precision_digits10()); }

template <class T>
LinearODE<T> extract_impl(const PowerSystem<T>& sys_in, const HPSolution<T>& sol, ExtractionOptions opt) {
  const int s = sys_in.s;
  const int n = sol.n;
  const int p = sys_in.base.p();
  if (sol.s != s) throw InvalidArgument("solution and system disagree on s");
  if (sol.nullspace_dim != 1) throw InvalidArgument("Wronskian extraction needs a one-dimensional nullspace");
  const int K = clearing_power(s);
  const int mpow = s * (s + 1) / 2;
  const int M = extraction_order(s, n, p, opt);
  const PowerSystem<T> sys = sys_in.tails.front().order() >= M ? sys_in : power_tails(sys_in.base, s, M);

  // rows[k][c] = (Q_k f^k)^{(c)}, c = 0..s+1
  std::vector<std::vector<LaurentTail<T>>> rows(static_cast<size_t>(s) + 1);
  for (int k = 0; k <= s; ++k) {
    auto u = LaurentTail<T>::from_polynomial(sol.Q[static_cast<size_t>(k)]) * sys.tails[static_cast<size_t>(k)];
    rows[static_cast<size_t>(k)].push_back(u);
    for (int c = 1; c <= s + 1; ++c) rows[static_cast<size_t>(k)].push_back(rows[static_cast<size_t>(k)].back().derivative());
  }
  LaurentTail<T> fm = sys.tails[1];
  for (int i = 1; i < mpow; ++i) fm = fm * sys.tails[1];
  const LaurentTail<T> inv_fm = fm.reciprocal();
  const auto AK = LaurentTail<T>::from_polynomial(sys.base.A().pow(K));

  std::vector<Polynomial<T>> pis;
  for (int j = 0; j <= s + 1; ++j) {
    std::vector<std::vector<const LaurentTail<T>*>> m(static_cast<size_t>(s) + 1);
    for (int k = 0; k <= s; ++k)
      for (int c = 0; c <= s + 1; ++c)
        if (c != j) m[static_cast<size_t>(k)].push_back(&rows[static_cast<size_t>(k)][static_cast<size_t>(c)]);
    LaurentTail<T> cleared = AK * determinant(m) * inv_fm;
    Polynomial<T> pj;
    if constexpr (ScalarTraits<T>::exact) {
      pj = poly_from_tail(cleared);
    } else {
      double sc = tail_scale(cleared);
      pj = poly_from_tail(cleared, float_rel_tol() * std::max(sc, 1e-300)).chopped(float_rel_tol() * sc);
    }
    pis.push_back((j % 2 == 0) ? pj : -pj);
  }

  if constexpr (ScalarTraits<T>::exact) {
    QPoly g;
    for (const auto& q : pis) g = gcd(g, q);
    if (g.is_zero()) throw InternalInconsistency("all Wronskian minors vanish");
    for (auto& q : pis) q = exact_quotient(q, g);
  }
  if (pis.back().is_zero()) throw InternalInconsistency("top Wronskian minor vanishes");
  const T inv = ScalarTraits<T>::one() / pis.back().leading();
  for (auto& q : pis) q = q.scaled(inv);
  return LinearODE<T>{std::move(pis)};
}

}  // namespace

LinearODE<Rational> extract_ode_wronskian(const PowerSystem<Rational>& sys, const HPSolution<Rational>& sol,
                                          ExtractionOptions opt) {
  return extract_impl(sys, sol, opt);
}

LinearODE<BigComplex> extract_ode_wronskian(const PowerSystem<BigComplex>& sys, const HPSolution<BigComplex>& sol,
                                            ExtractionOptions opt) {
  return extract_impl(sys, sol, opt);
}

template <>
bool proportional(const LinearODE<Rational>& a, const LinearODE<Rational>& b) {
  if (a.order() != b.order()) return false;
  std::optional<Rational> ratio;
  for (int j = 0; j <= a.order(); ++j) {
    const auto& pa = a[j];
    const auto& pb = b[j];
    if (pa.is_zero() != pb.is_zero()) return false;
    if (pa.is_zero()) continue;
    if (!ratio) ratio = Rational(pa.leading() / pb.leading());
    if (!(pa == pb.scaled(*ratio))) return false;
  }
  return ratio.has_value();
}

template <>
bool proportional(const LinearODE<BigComplex>& a, const LinearODE<BigComplex>& b) {
  if (a.order() != b.order()) return false;
  std::optional<BigComplex> ratio;
  for (int j = 0; j <= a.order(); ++j) {
    const auto& pa = a[j];
    const auto& pb = b[j];
    if (pb.is_zero()) {
      if (pa.max_abs() > 1e-20) return false;
      continue;
    }
    if (!ratio) ratio = pa.leading() / pb.leading();
    auto d = pa - pb.scaled(*ratio);
    if (d.max_abs() > float_rel_tol() * std::max(pa.max_abs(), 1.0)) return false;
  }
  return ratio.has_value();
}

namespace {

template <class T>
bool poly_equal(const Polynomial<T>& a, const Polynomial<T>& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    return (a - b).max_abs() <= float_rel_tol() * std::max({a.max_abs(), b.max_abs(), 1.0});
  }
}

template <class T>
Polynomial<T> checked_quotient(const Polynomial<T>& a, const Polynomial<T>& b, const std::string& identity) {
  auto [q, r] = a.divmod(b);
  bool ok;
  if constexpr (ScalarTraits<T>::exact) {
    ok = r.is_zero();
  } else {
    ok = r.max_abs() <= float_rel_tol() * std::max(a.max_abs(), 1.0);
  }
  if (!ok) throw StructureMismatch(identity);
  return q;
}

template <class T>
bool coefficient_equals(const T& v, long target) {
  if constexpr (ScalarTraits<T>::exact) {
    return v == T(target);
  } else {
    return ScalarTraits<T>::magnitude(v - T(target)) <= float_rel_tol() * std::max(1.0, std::abs(double(target)));
  }
}

}  // namespace

template <class T>
AuditReport<T> structure_audit(const LinearODE<T>& ode, const SemiclassicalFn<T>& f, int s, int n) {
  if (ode.order() != s + 1) throw OrderMismatch("equation order differs from s + 1");
  AuditReport<T> rep;
  rep.s = s;
  rep.n = n;
  for (const auto& c : ode.coeffs) rep.degrees.push_back(c.degree());
  const auto& A = f.A();
  const auto& B = f.B();
  const auto dA = A.derivative();
  const int p = f.p();
  if (s == 1) {
    rep.H = checked_quotient(ode[2], A, "Pi_2 = A H");
    if (rep.H.degree() > p - 2) throw StructureMismatch("deg H <= p - 2");
    rep.checks.push_back("Pi_2 = A H");
    if (!poly_equal(ode[1], (dA - B) * rep.H - A * rep.H.derivative())) {
      throw StructureMismatch("Pi_1 = (A' - B) H - A H'");
    }
    rep.checks.push_back("Pi_1 = (A' - B) H - A H'");
    const long N = static_cast<long>(n) * (n + 1);
    if (N == 0) {
      rep.degenerate = true;
    } else {
      if (ode[0].is_zero() || !coefficient_equals(ode[0].leading(), -N)) {
        throw StructureMismatch("lc(Pi_0) = -n(n+1)");
      }
      rep.checks.push_back("lc(Pi_0) = -n(n+1)");
      rep.C = ode[0].scaled(ScalarTraits<T>::one() / T(-N));
      if (rep.C.degree() > 2 * p - 4) throw StructureMismatch("deg C <= 2p - 4");
    }
  } else if (s == 2) {
    rep.H = checked_quotient(ode[3], A * A, "Pi_3 = A^2 H");
    if (rep.H.degree() > 3 * p - 6) throw StructureMismatch("deg H <= 3p - 6");
    rep.checks.push_back("Pi_3 = A^2 H");
    if (!poly_equal(ode[2], A * ((dA - B) * rep.H.scaled(T(3)) - A * rep.H.derivative()))) {
      throw StructureMismatch("Pi_2 = A (3 (A' - B) H - A H')");
    }
    rep.checks.push_back("Pi_2 = A (3 (A' - B) H - A H')");
    const long k1 = -3L * (n - 1) * (n + 2);
    const long k0 = 2L * n * (static_cast<long>(n) * n - 1);
    if (k1 == 0 || k0 == 0) {
      rep.degenerate = true;
    } else {
      if (ode[1].is_zero() || !coefficient_equals(ode[1].leading(), k1)) {
        throw StructureMismatch("lc(Pi_1) = -3(n-1)(n+2)");
      }
      rep.checks.push_back("lc(Pi_1) = -3(n-1)(n+2)");
      if (ode[0].is_zero() || !coefficient_equals(ode[0].leading(), k0)) {
        throw StructureMismatch("lc(Pi_0) = 2n(n^2-1)");
      }
      rep.checks.push_back("lc(Pi_0) = 2n(n^2-1)");
      rep.F = ode[1].scaled(ScalarTraits<T>::one() / T(k1));
      rep.G = ode[0].scaled(ScalarTraits<T>::one() / T(k0));
      if (rep.F.degree() > 5 * p - 8) throw StructureMismatch("deg F <= 5p - 8");
      if (rep.G.degree() > 5 * p - 9) throw StructureMismatch("deg G <= 5p - 9");
    }
  } else {
    throw InvalidArgument("structure audit covers s = 1 and s = 2");
  }
  return rep;
}

template AuditReport<Rational> structure_audit(const LinearODE<Rational>&, const SemiclassicalFn<Rational>&, int, int);
template AuditReport<BigComplex> structure_audit(const LinearODE<BigComplex>&, const SemiclassicalFn<BigComplex>&, int,
                                                 int);

AccessoryTrack accessory_track(const CFn& f, const std::vector<int>& n_list, Exec exec) {
  if (f.p() != 3) throw InvalidArgument("accessory tracking is implemented for p = 3");
  AccessoryTrack track;
  track.steps.resize(n_list.size());
  const int count = static_cast<int>(n_list.size());
  auto body = [&](int i) {
    const int n = n_list[static_cast<size_t>(i)];
    auto sys = power_tails(f, 1, extraction_order(1, n, f.p()));
    auto sol = hp_solve(sys, n);
    auto ode = extract_ode_wronskian(sys, sol);
    auto rep = structure_audit(ode, f, 1, n);
    AccessoryStep st;
    st.n = n;
    st.H = rep.H.monic();
    st.C = rep.C.monic();
    if (st.H.degree() != 1 || st.C.degree() != 2) {
      throw StructureMismatch("expected deg H = 1 and deg C = 2 at n = " + std::to_string(n));
    }
    st.h_root = -st.H.coeff(0);
    const BigComplex b = st.C.coeff(1), c = st.C.coeff(0);
    const BigComplex disc = sqrt(b * b - BigComplex(4) * c);
    const BigComplex r1 = (-b + disc) / BigComplex(2), r2 = (-b - disc) / BigComplex(2);
    const bool first = abs(r1 - st.h_root) <= abs(r2 - st.h_root);
    st.c_near = first ? r1 : r2;
    st.distance = BigFloat(abs(st.c_near - st.h_root));
    st.V = CPoly::linear_root(first ? r2 : r1);
    track.steps[static_cast<size_t>(i)] = std::move(st);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) body(i);
  } else {
    for (int i = 0; i < count; ++i) body(i);
  }
  return track;
}

}  // namespace hplab
