#ifndef BNRAD_THRESHOLDS_HPP
#define BNRAD_THRESHOLDS_HPP

#include <string>
#include <utility>

#include "bnrad/profile.hpp"

namespace bnrad {

enum class CBranch { HardyBranch, QuarterD };

inline const char* c_branch_name(CBranch b) {
  return b == CBranch::HardyBranch ? "HardyBranch" : "QuarterD";
}

// Non-existence thresholds for one (profile, n):
//   mu_star     = (n-2)/4 * inf { (n-1) a''/a + a'''/a' }
//   D           = inf { (2n-3) a''/a + a'''/a' }
//   omega       = inf a''/a
//   C           = min { (D + 2 omega) / (2(n+2)), D/4 }
//   lambda_star = n(n-1)/4 * C
// Argmin locations of 0 and R denote one-sided limits.
struct ThresholdReport {
  double D = 0.0;
  double omega = 0.0;
  double C = 0.0;
  CBranch C_branch = CBranch::HardyBranch;
  double mu_star = 0.0;
  double lambda_star = 0.0;
  double argmin_D = 0.0;
  double argmin_mu = 0.0;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

// Infimum of f over (0, R): minimum over a 4096-point geometric+uniform
// hybrid grid, refined by golden-section search around the grid minimizer to
// absolute x tolerance 1e-11. The reported location is the leftmost point
// attaining the minimum within evaluation noise, snapped to 0 / R at the
// endpoints (one-sided limits). Throws NonFinite when f is not finite at an
// evaluated point.
std::pair<double, double> infimum_on_interval(const std::function<double(double)>& f,
                                              double R);

// D of the second threshold; returns (value, argmin).
std::pair<double, double> compute_D(const ProfileFunction& p, double n);

// Largest omega with a'' >= omega a, i.e. inf a''/a. Throws
// HypothesisViolation if the infimum is below -1e-10.
double compute_omega(const ProfileFunction& p);

ThresholdReport compute_thresholds(const ProfileFunction& p, double n);

}  // namespace bnrad

#endif
