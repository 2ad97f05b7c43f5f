#ifndef BNRAD_IDENTITIES_HPP
#define BNRAD_IDENTITIES_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bnrad/conformal.hpp"
#include "bnrad/profile.hpp"
#include "bnrad/radial.hpp"

namespace bnrad {

// Cached quantities behind the Hardy / Pohozaev machinery:
//   G(x) = int_0^x a^{n-1},   S = G a'/a - a^{n-1}/n,   m = G a' - a^n/n.
class HardyFrame {
public:
  double G(double x) const;
  double S(double x) const;   // S(0) = 0 as a limit
  double m(double x) const;
  double Gprime(double x) const;  // a^{n-1}

  double C() const { return C_; }
  double n() const { return n_; }
  double R() const { return profile_.domain_R(); }
  const ProfileFunction& profile() const { return profile_; }
  const std::vector<double>& grid() const { return grid_; }

private:
  friend HardyFrame build_frame(const ProfileFunction&, double, double);
  HardyFrame(ProfileFunction p, double n, double C)
      : profile_(std::move(p)), n_(n), C_(C) {}

  ProfileFunction profile_;
  double n_, C_;
  std::shared_ptr<const class CumulativeIntegral> G_;
  std::vector<double> grid_;
};

// Builds the frame with G cached on a 4096-point hybrid grid (on-demand GK
// refinement between breakpoints); C comes from compute_thresholds.
HardyFrame build_frame(const ProfileFunction& p, double n, double C);

struct IdentityReport {
  double pohozaev_lhs = 0.0;
  double pohozaev_rhs = 0.0;
  double hardy_ratio = 0.0;
  double lemma32_min_margin = 0.0;
  double virial_lhs = 0.0;
  double virial_rhs = 0.0;
  std::string to_json() const;
};

// Both sides of the balance that every C^2 solution satisfies:
//   lhs = (lambda/n) int u^2 a^{n-1},
//   rhs = u'(R)^2 G(R)/2 + (n-1) int u'^2 S.
// Gated by the ODE residual of u (throws NotASolution above 10x the solver
// acceptance tolerance); the identity is meaningless for non-solutions.
std::pair<double, double> pohozaev_balance(const HardyFrame& frame,
                                           const ProblemSpec& spec,
                                           const RadialFunction& u);

// hardy_ratio = (int u^2 a^{n-1}) / (4 int G^2 u'^2 / a^{n-1}); < 1 for any
// admissible nonzero u with u(R) = 0 (u need not solve anything). Throws
// ZeroFunction when the numerator integral is below 1e-30.
double hardy_check(const HardyFrame& frame, const RadialFunction& u);

// min over the refined grid of S - C G^2/G' and its location.
std::pair<double, double> lemma32_margin(const HardyFrame& frame);

// Minima of the auxiliary comparison functions
//   f = S G' - C G^2
//   g = (n-2) a' m + G a (a'' - 2 C a)
//   g' = (2n-3) G a' a'' + (2/n) a^n a'' - 2C a^{n+1} - 4C G a a' + G a a'''
// over the frame grid; all are expected nonnegative under the hypotheses.
struct MonotonicityReport {
  double min_f = 0.0, argmin_f = 0.0;
  double min_g = 0.0, argmin_g = 0.0;
  double min_gprime = 0.0, argmin_gprime = 0.0;
};

MonotonicityReport auxiliary_monotonicity(const HardyFrame& frame, double n);

// Both sides of the virial balance on the transformed solution v = p^{n/2-1}u:
//   lhs = (1/2) r(R)^n vdot(R)^2,
//   rhs = int v^2 p^3 B [lambda - (n-2)/4 T] r^n dr.
// v carries theta derivatives on its grid; the same residual gate applies to
// the reconstructed u.
std::pair<double, double> virial_balance(const ConformalMap& map,
                                         const ProblemSpec& spec,
                                         const RadialFunction& v);

}  // namespace bnrad

#endif
