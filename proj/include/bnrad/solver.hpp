#ifndef BNRAD_SOLVER_HPP
#define BNRAD_SOLVER_HPP

#include <optional>
#include <utility>

#include "bnrad/profile.hpp"
#include "bnrad/radial.hpp"

namespace bnrad {

enum class SolveMode { Nonlinear, Linear };

struct SolverOptions {
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  double blowup_limit = 1e8;
  std::size_t output_points = 2049;  // uniform dense grid including 0 and R
  double residual_tol = 1e-6;        // acceptance gate for shooting results
  double root_rel_tol = 1e-9;        // accept alpha* once |u(R)| < this * alpha
  std::size_t alpha_scan_points = 64;
};

struct ShootingResult {
  double alpha = 0.0;
  RadialFunction solution;
  double residual = 0.0;  // max normalized ODE residual over [R*1e-4, R]
  double lambda = 0.0;
  int n_sign_changes = 0;
};

// Integrates the IVP u(0) = alpha, u'(0) = 0 of
//   -u'' - (n-1)(a'/a) u' = lambda u + |u|^{q-1} u     (nonlinear mode)
//   -u'' - (n-1)(a'/a) u' = lambda u                   (linear mode)
// out to R. The coefficient singularity at 0 is resolved by a series start at
// h0 = R*1e-6 built from the profile's Taylor data at 0. Throws BlowUp when
// |u| exceeds the blow-up limit before R, StiffnessFailure when the step
// size underflows.
RadialFunction integrate_from_origin(const ProblemSpec& spec, double alpha,
                                     SolveMode mode = SolveMode::Nonlinear,
                                     const SolverOptions& opt = {});

// Scans alpha over a log grid in [range.first, range.second] (same-signed,
// increasing) for a sign change of u(R; alpha), then runs Brent on the
// bracket. Returns nullopt when no bracket yields |u(R)| < root_rel_tol*alpha
// with an acceptable ODE residual. Sign changes caused by blow-up transitions
// rather than genuine roots are rejected by the same residual criterion.
std::optional<ShootingResult> shoot(const ProblemSpec& spec,
                                    std::pair<double, double> alpha_range,
                                    SolveMode mode = SolveMode::Nonlinear,
                                    const SolverOptions& opt = {});

// Smallest lambda for which the linear problem u'(0) = u(R) = 0 has a
// nontrivial solution. Bisection on a Sturm-type oscillation indicator
// (interior zero appears exactly when lambda crosses an eigenvalue), bracket
// grown by doubling up to 1e6; relative tolerance 1e-9.
double first_eigenvalue(const ProfileFunction& p, double n,
                        const SolverOptions& opt = {});

// Max over interior grid points with x >= R*1e-4 of
//   | -u'' - (n-1)(a'/a)u' - lambda u - |u|^{q-1}u | / (1 + |u|^q)
// with u'' from differencing the tabulated u'. Linear mode drops the
// nonlinear term and normalizes by (1 + |u|).
double ode_residual(const ProblemSpec& spec, const RadialFunction& u,
                    SolveMode mode = SolveMode::Nonlinear);

}  // namespace bnrad

#endif
