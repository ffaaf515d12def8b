// Type I Hermite-Pade forms Q_0 + Q_1 f + ... + Q_s f^s = O(z^{-(sn+s)}) and
// their s = 1 specialization, Pade approximants at infinity.
#pragma once

#include "hplab/linalg.hpp"
#include "hplab/semiclassical.hpp"

#include <optional>
#include <vector>

namespace hplab {

template <class T>
struct HPSolution {
  int n = 0;
  int s = 0;
  std::vector<Polynomial<T>> Q;        // Q[0..s]
  LaurentTail<T> remainder;            // sum_k Q_k f^k
  bool normal = false;
  int defect = 0;                      // first nonzero remainder power is z^{-(sn+s+defect)}
  bool defect_resolved = true;         // false: no nonzero coefficient inside the known range
  T leading_remainder{};               // coefficient at z^{-(sn+s+defect)}
  int nullspace_dim = 0;
  std::vector<std::vector<Polynomial<T>>> basis;  // all nullspace vectors when nullspace_dim > 1
};

template <class T>
struct PadePair {
  Polynomial<T> P;
  Polynomial<T> Q;
  int n = 0;
  T M_n{};  // (Qf - P) = M_n z^{-(n+1+defect)} + ...
  int defect = 0;
  bool normal = false;
  LaurentTail<T> remainder;
};

// Truncation order required by hp_solve.
inline int required_order(int s, int n) { return (s + 1) * n + s + 2; }

// Default order used by the convenience wrappers; the margin lets the defect
// be measured beyond the first remainder coefficient.
inline int working_order(int s, int n) { return required_order(s, n) + 8; }

HPSolution<Rational> hp_solve(const PowerSystem<Rational>& sys, int n, Exec exec = Exec::Serial);
HPSolution<BigComplex> hp_solve(const PowerSystem<BigComplex>& sys, int n, Exec exec = Exec::Serial);

template <class T>
HPSolution<T> hp_solve(const SemiclassicalFn<T>& f, int s, int n, Exec exec = Exec::Serial) {
  return hp_solve(power_tails(f, s, working_order(s, n)), n, exec);
}

// Solutions for several n from one shared expansion; with Exec::Parallel the
// indices are distributed over OpenMP threads.
std::vector<HPSolution<Rational>> hp_sweep(const QFn& f, int s, const std::vector<int>& ns, Exec exec);

PadePair<Rational> pade_solve(const QFn& f, int n, Exec exec = Exec::Serial);
PadePair<BigComplex> pade_solve(const CFn& f, int n, Exec exec = Exec::Serial);

// P_n^{(a,b)} from the three-term recurrence.
QPoly jacobi_polynomial(const Rational& a, const Rational& b, int n);

// Monic Pade denominator for ((z-1)/(z+1))^alpha equals monic P_n^{(alpha,-alpha)}.
bool jacobi_crosscheck(const Rational& alpha, int n);

struct RhoForm {
  std::vector<BigFloat> values;  // rho_n on the input grid
  int sign_changes = 0;          // after refinement
  int refinements = 0;           // grid doublings performed
  std::vector<BigFloat> refined_grid;
  std::vector<int> refined_signs;
};

// f_0(x) = ((1-x)/(1+x))^alpha, the positive branch on (-1, 1).
BigFloat f0_real(const Rational& alpha, const BigFloat& x);

// rho_n(x) = Q_{n,1}(x) + 2 cos(alpha pi) f_0(x) Q_{n,2}(x).
BigFloat rho_value(const HPSolution<Rational>& sol, const Rational& alpha, const BigFloat& x);

// Sign changes of rho_n on `grid`, refined by midpoint doubling until the
// count repeats. Throws GridTooCoarse if it never stabilizes while some
// interval still exceeds 1e-4.
RhoForm rho_form(const HPSolution<Rational>& sol, const Rational& alpha, const std::vector<double>& grid,
                 Exec exec = Exec::Serial);

// Grid on (-1, 1) clustered toward the endpoints: x = sgn(t)(1 - (1-|t|)^3).
std::vector<double> clustered_grid(int points);

// Zeros of rho_n bracketed by the refined sign pattern, bisected to `tol`.
std::vector<BigFloat> rho_zeros(const HPSolution<Rational>& sol, const Rational& alpha, const RhoForm& form,
                                double tol = 1e-30);

}  // namespace hplab
