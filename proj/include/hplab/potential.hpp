// Green functions of C \ E and C \ F (E = [-1, 1], F = R \ (-1, 1)), the
// mixed equilibrium identities for lambda and nu, balayage, and the
// g-function of the closed quadratic differential -(V/A) dz^2.
#pragma once

#include "hplab/asymptotics.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace hplab {

using cplx = std::complex<double>;

// Exterior map of E: phi(z) = z + sqrt(z^2 - 1) with |phi| > 1.
cplx exterior_map(cplx z);

// g_E(z, t) = log |(1 - phi(z) conj(phi(t))) / (phi(z) - phi(t))|; t = nullopt
// means t = infinity, g_E(z, inf) = log |phi(z)|. Throws OnBoundary on E.
double green_E(cplx z, std::optional<cplx> t = std::nullopt);

// g_F via T(z) = (1 - z)/(1 + z) onto C \ (-inf, 0], then sqrt onto the right
// half plane: log |(s + conj(s0)) / (s - s0)|. Throws OnBoundary on F.
double green_F(cplx z, cplx t);

// psi(x) = 3 g_E(x, inf) on F.
double external_field(double x);

// Log potential V^mu(x) = int log(1/|x - t|) dmu(t) for mu = lambda or nu.
double log_potential(DensityKind kind, double x, int quad_n);
// G^lambda_F(x) for x in (-1, 1); G^nu_E(x) for x in F.
double green_potential(DensityKind kind, double x, int quad_n);

enum class Equilibrium { Eq1, Eq2 };

struct EquilibriumResult {
  std::vector<double> values;
  double spread = 0;  // max - min over the grid
};

// Eq1: 3 V^lambda + G^lambda_F on E; Eq2: 3 V^nu + G^nu_E + psi on F.
// quad_n is both the Gauss-Legendre order per panel and the number of
// geometric grading levels toward each singular point.
EquilibriumResult equilibrium_check(Equilibrium which, const std::vector<double>& grid, int quad_n,
                                    Exec exec = Exec::Serial);

// V^nu - V^lambda on F.
EquilibriumResult balayage_check(const std::vector<double>& grid_F, int quad_n = 24, Exec exec = Exec::Serial);

struct StahlG {
  double integral;  // Re int_{a_1}^z dt / sqrt(A(t)) along the segment
  double green;     // log |phi(zeta)| after mapping [a_1, a_2] to [-1, 1]
};

// p = 2: g(z) = Re int sqrt(1/A). Throws OnBoundary on the segment and
// InternalInconsistency if the two constructions differ by more than 1e-10.
StahlG stahl_g(const CFn& f, cplx z);

struct ClosedV {
  cplx v;
  std::vector<double> residuals;  // Re int_{a_j}^{v} sqrt(V/A) dt, j = 1..3
  double max_residual = 0;
  int iterations = 0;
  std::vector<cplx> trace;        // Newton iterates starting at the centroid
};

struct ClosedVOptions {
  int quad_nodes = 64;   // Gauss-Legendre nodes per panel in theta
  int panels = 16;
  double tol = 1e-14;
  int max_iterations = 60;
};

// p = 3: V(z) = z - v with Re int_{a_j}^{v} sqrt(V/A) dt = 0 for every branch
// point (critical trajectories from each a_j to v). Newton on j = 1, 2 with
// v0 = centroid; the third equation is the certificate.
// Throws NewtonDivergence.
ClosedV find_closed_V(const CFn& f, ClosedVOptions opt = {});

// sqrt(V/A)(z) on the branch ~ 1/z at infinity, continued along the ray
// from |z| = R.
cplx sqrt_V_over_A(const std::vector<cplx>& a, cplx v, cplx z);

// |Q_n'/(n Q_n)(z) - sqrt(V/A)(z)| for Pade denominators of f.
std::vector<double> closed_V_pade_errors(const CFn& f, cplx v, cplx z, const std::vector<int>& ns,
                                         Exec exec = Exec::Serial);

}  // namespace hplab
