// Zeros, limit measures and the algebraic function behind them: the cubic
// (z^2-1)^2 y^3 - 3(z^2-1) y + 2z = 0, its three branches, the densities of
// nu on F = R \ (-1, 1) and lambda on E = [-1, 1], and convergence checks.
#pragma once

#include "hplab/hp.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace hplab {

// Normalized zero-counting measure. `points` repeats multiple roots;
// `at_infinity` counts the degree defect against n.
struct EmpiricalMeasure {
  std::vector<BigComplex> points;
  int n = 0;
  int at_infinity = 0;
  int max_multiplicity = 1;
  bool real = false;  // points sorted by real part, imaginary parts dropped
};

struct RootOptions {
  int max_iterations = 2000;
  Exec exec = Exec::Serial;
};

// Aberth-Ehrlich simultaneous iteration with Newton polishing, run at
// `precision_bits`. Accepts a root when the backward error
// |Q(r)| / sum |q_k| |r|^k is below 10^(-0.6 digits).
EmpiricalMeasure roots(const CPoly& q, unsigned precision_bits, RootOptions opt = {});
EmpiricalMeasure roots(const QPoly& q, unsigned precision_bits, RootOptions opt = {});

// Measure of real points, e.g. zeros of rho_n; normalized by its own count.
EmpiricalMeasure real_measure(const std::vector<BigFloat>& xs);

struct RealRootCertificate {
  bool all_real = false;        // deg Q disjoint sign-change brackets found
  bool outside_unit = false;    // every bracket lies in |x| > 1
  int certified = 0;
  double min_distance_to_unit = 0;  // min (|x| - 1) over the roots
};

// Exact certification for rational Q: brackets [x - d, x + d] with
// d = delta * max(1, |x|) around the real parts of the approximate roots,
// checked for pairwise disjointness and a sign change of Q in mpq.
RealRootCertificate certify_real_roots(const QPoly& q, const EmpiricalMeasure& m, double delta = 1e-25);

struct CubicBranches {
  BigComplex z, y1, y2, y3;
};

// Y(z) = ((1+z)/(1-z))^(1/3) with Y(0) = 1, holomorphic off F. The Moebius
// map sends C \ F onto C \ (-inf, 0], so this is the principal cube root.
BigComplex cubic_Y(const BigComplex& z);

// y1 = C^nu, y3 = -2 C^lambda (phase set by the half plane; on (-1, 1) the
// upper formula is used), y2 = -y1 - y3. Throws OnBranchCut on F.
CubicBranches cubic_branches(const BigComplex& z);

BigComplex cubic_residual(const BigComplex& z, const BigComplex& y);

enum class DensityKind { Nu, Lambda };
const char* to_string(DensityKind k);
DensityKind parse_density_kind(const std::string& s);

// Closed forms with positive real cube roots. Throws OutsideSupport.
BigFloat density(DensityKind kind, const BigFloat& x);
double density(DensityKind kind, double x);

// Total mass by tanh-sinh / exp-sinh quadrature in x.
double density_mass(DensityKind kind);

// Limit CDFs. Lambda: x in [-1, 1]. Nu: in u = 1/x on [-1, 1].
double lambda_cdf(double x);
double nu_u_density(double u);
double nu_u_cdf(double u);
// Inverse of the CDF above (x for lambda, u for nu) by bisection.
double limit_quantile(DensityKind kind, double p);

struct SokhotskiiResult {
  double x = 0;
  BigFloat closed_form;
  BigFloat jump_form;
  BigFloat difference;
  std::vector<BigFloat> eps;
  std::vector<BigFloat> raw;  // jump density at each eps
};

// nu' = -(y1(x+i0) - y1(x-i0)) / (2 pi i), lambda' = (y3(x+i0) - y3(x-i0)) / (4 pi i).
// The one-sided limits come from polynomial extrapolation to eps = 0 over
// eps = 10^-2 .. 10^-5 times min(1, dist(x, {-1, 1})).
SokhotskiiResult sokhotskii_crosscheck(double x, DensityKind kind);

// Kolmogorov-Smirnov distance to the limit law; nu is compared in u = 1/x.
// Throws SupportMismatch when more than 5% of the mass is off the support.
double measure_distance(const EmpiricalMeasure& emp, DensityKind kind);

// f_0(z) = ((1-z)/(1+z))^alpha, principal branch, f_0(0) = 1.
BigComplex f0_complex(const Rational& alpha, const BigComplex& z);

struct RatioError {
  int n = 0;
  bool skipped = false;  // z is a root of Q_{n,2}
  BigFloat err_q1;       // |Q1/Q2 + 2 cos(alpha pi) f0|
  BigFloat err_q0;       // |Q0/Q2 - f0^2|
};

std::vector<RatioError> ratio_limit_check(const std::vector<HPSolution<Rational>>& sols, const BigComplex& z,
                                          const Rational& alpha);

struct SheetValues {
  BigFloat phi1, phi2, phi3;
  bool ordered = false;
  BigFloat margin;  // min(phi1 - phi2, phi2 - phi3)
};

// phi_j = Re int_b^z y_j along the straight segment from the branch point b
// (1 or -1), with t = b + (z - b) s^3 absorbing the endpoint singularity.
// Throws PathCrossesCut for real z.
SheetValues sheet_ordering(const BigComplex& z, int base = 1);

// |(1/n) Q_{n,k}'(z) / Q_{n,k}(z) - y1(z)|.
BigFloat cauchy_transform_check(const HPSolution<Rational>& sol, int k, const BigComplex& z);

// Columns: x, density, empirical_cdf, limit_cdf. For nu, x is the root and
// the CDFs are in u = 1/x.
void write_density_csv(std::ostream& os, const EmpiricalMeasure& emp, DensityKind kind);

}  // namespace hplab
