// Linear ODEs with polynomial coefficients satisfied by Hermite-Pade forms:
// explicit builders, exact residuals, extraction from Wronskian minors,
// structural audit, Riccati reduction and accessory-parameter tracking.
#pragma once

#include "hplab/hp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hplab {

// sum_j coeffs[j] w^{(j)} = 0.
template <class T>
struct LinearODE {
  std::vector<Polynomial<T>> coeffs;
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  const Polynomial<T>& operator[](int j) const { return coeffs[static_cast<size_t>(j)]; }
};

// w = Q f^k.
template <class T>
struct QuasiSolution {
  Polynomial<T> Q;
  int k = 0;
  SemiclassicalFn<T> f;
};

// Printed: the constants exactly as published for the p = 2, s = 2 case.
// Derived: the constants recovered by exact Wronskian extraction; they differ
// from the printed ones in the w' constant term and in w's constant term.
enum class OdeVariant { Printed, Derived };

// Third-order equation for Q_{n,0}, Q_{n,1} f, Q_{n,2} f^2 with
// f = ((z-1)/(z+1))^alpha; flip = true substitutes alpha -> -alpha (the
// equation for Q_{n,2} alone).
LinearODE<Rational> build_ode_p2_s2(const Rational& alpha, int n, bool flip, OdeVariant variant = OdeVariant::Printed);

// A H w'' + ((A' - B) H - A H') w' - N C w = 0.
template <class T>
LinearODE<T> build_ode_pade(const SemiclassicalFn<T>& f, const Polynomial<T>& H, const Polynomial<T>& C, const T& N) {
  const auto& A = f.A();
  const auto& B = f.B();
  return LinearODE<T>{{Polynomial<T>::constant(-N) * C, (A.derivative() - B) * H - A * H.derivative(), A * H}};
}

// d^j/dz^j (Q f^k) = f^k P_j / A^j with P_0 = Q and
// P_{j+1} = A P_j' + (k B - j A') P_j.
template <class T>
std::vector<Polynomial<T>> derivative_numerators(const QuasiSolution<T>& w, int J) {
  const auto& A = w.f.A();
  const auto dA = A.derivative();
  const auto kB = w.f.B().scaled(T(static_cast<long>(w.k)));
  std::vector<Polynomial<T>> P{w.Q};
  for (int j = 0; j < J; ++j) {
    const auto& Pj = P.back();
    P.push_back(A * Pj.derivative() + (kB - dA.scaled(T(static_cast<long>(j)))) * Pj);
  }
  return P;
}

// (sum_j Pi_j (Q f^k)^{(j)}) / f^k as a rational function with denominator
// a power of A. The caller decides whether it must vanish.
template <class T>
RationalFunction<T> ode_residual(const LinearODE<T>& ode, const QuasiSolution<T>& w) {
  const int J = ode.order();
  auto P = derivative_numerators(w, J);
  const auto& A = w.f.A();
  Polynomial<T> num;
  for (int j = 0; j <= J; ++j) num += ode[j] * P[static_cast<size_t>(j)] * A.pow(J - j);
  return RationalFunction<T>(num, A.pow(J));
}

// Clearing exponent K in A^K / f^{s(s+1)/2}: (s+1)(s+2)/2 - 1.
inline int clearing_power(int s) { return (s + 1) * (s + 2) / 2 - 1; }

struct ExtractionOptions {
  int extra_order = 16;  // truncation margin beyond the degree budget
};

// Order s+1 equation annihilating Q_0, Q_1 f, ..., Q_s f^s, read off the
// minors of their Wronskian computed as Laurent expansions at infinity.
// Exact regime: coefficients made coprime, top coefficient monic. Float:
// top coefficient monic, negligible leading terms chopped.
LinearODE<Rational> extract_ode_wronskian(const PowerSystem<Rational>& sys, const HPSolution<Rational>& sol,
                                          ExtractionOptions opt = {});
LinearODE<BigComplex> extract_ode_wronskian(const PowerSystem<BigComplex>& sys, const HPSolution<BigComplex>& sol,
                                            ExtractionOptions opt = {});

// Expansion order used by extract_ode_wronskian for (s, n, p).
int extraction_order(int s, int n, int p, const ExtractionOptions& opt = {});

template <class T>
bool proportional(const LinearODE<T>& a, const LinearODE<T>& b);

template <class T>
struct AuditReport {
  int s = 0;
  int n = 0;
  bool degenerate = false;       // a leading factor vanishes at this n
  Polynomial<T> H;               // top coefficient / A^s
  Polynomial<T> F, G;            // s = 2: Pi_1 / (-3(n-1)(n+2)), Pi_0 / (2n(n^2-1))
  Polynomial<T> C;               // s = 1: Pi_0 / (-n(n+1))
  std::vector<std::string> checks;  // identities verified, by name
  std::vector<int> degrees;      // deg Pi_j
};

// Recovers H (and F, G or C) and checks
//   s = 1: Pi_2 = A H, Pi_1 = (A' - B) H - A H', lc(Pi_0) = -n(n+1);
//   s = 2: Pi_3 = A^2 H, Pi_2 = A (3(A' - B) H - A H'),
//          lc(Pi_1) = -3(n-1)(n+2), lc(Pi_0) = 2n(n^2-1).
// Throws StructureMismatch naming the identity that fails.
template <class T>
AuditReport<T> structure_audit(const LinearODE<T>& ode, const SemiclassicalFn<T>& f, int s, int n);

// -(1/n) v' = v^2 + s_n v + r_n for v = w'/(n w):
// s_n = Pi_1 / (n Pi_2), r_n = Pi_0 / (n^2 Pi_2).
template <class T>
std::pair<RationalFunction<T>, RationalFunction<T>> riccati_reduce(const LinearODE<T>& ode, int n) {
  if (ode.order() != 2) throw OrderMismatch("Riccati reduction needs a second-order equation");
  if (n <= 0) throw InvalidArgument("Riccati reduction needs n >= 1");
  const T nn(static_cast<long>(n));
  RationalFunction<T> sn(ode[1], ode[2].scaled(nn));
  RationalFunction<T> rn(ode[0], ode[2].scaled(nn * nn));
  return {sn, rn};
}

// (1/n) v' + v^2 + s_n v + r_n.
template <class T>
RationalFunction<T> riccati_residual(const RationalFunction<T>& sn, const RationalFunction<T>& rn,
                                     const RationalFunction<T>& v, int n) {
  RationalFunction<T> inv_n(Polynomial<T>::constant(ScalarTraits<T>::one() / T(static_cast<long>(n))));
  return inv_n * v.derivative() + v * v + sn * v + rn;
}

struct AccessoryStep {
  int n = 0;
  CPoly H;           // monic, degree <= p-2
  CPoly C;           // monic, degree <= 2p-4
  CPoly V;           // C / (z - nearest root of C to the root of H), monic
  BigComplex h_root;
  BigComplex c_near;
  BigFloat distance;  // |root(H) - nearest root(C)|
};

struct AccessoryTrack {
  std::vector<AccessoryStep> steps;
};

// p = 3, s = 1 tracking of H_n and C_n = H~_n V_n from Pade denominators.
AccessoryTrack accessory_track(const CFn& f, const std::vector<int>& n_list, Exec exec = Exec::Serial);

}  // namespace hplab
