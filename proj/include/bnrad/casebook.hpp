#ifndef BNRAD_CASEBOOK_HPP
#define BNRAD_CASEBOOK_HPP

#include <functional>
#include <string>
#include <vector>

#include "bnrad/profile.hpp"
#include "bnrad/thresholds.hpp"

namespace bnrad {

// Closed forms for a(x) = x e^x.
//   mu_star  = (n-2)/4 * ( n + 2 (n(1+R)-1) / (R(1+R)) )
//   D        = (1+2/R)(2n-3) + (3+R)/(1+R)
//   omega    = 1 + 2/R
double closed_mu_star(double n, double R);
double closed_D(double n, double R);
double closed_omega(double R);

// lambda_star = n(n-1)/(8(n+2)) * ((1+2/R)(2n-1) + (3+R)/(1+R)) holds only
// for n >= n_hat((1+R)(2+R)); below that the active branch is D/4 and the
// value comes from n(n-1) D/16 instead (closed_form_valid is then false).
struct ClosedLambdaStar {
  double value = 0.0;
  bool closed_form_valid = true;
};
ClosedLambdaStar closed_lambda_star(double n, double R);

// Crossover curves in s = (1+R)(2+R):
//   n_hat   = [ (1+1/s) + sqrt((1+1/s)^2 + 8) ] / 2
//   n_tilde = [ (4s+1) + sqrt(16 s^2 - 24 s + 33) ] / (2(s-1))
struct CrossoverPoint {
  double s = 0.0;
  double n_hat = 0.0;
  double n_tilde = 0.0;
};
CrossoverPoint crossover(double s);  // pre: s > 1

// F(n,R) = 2 (R^2+3R)(4-n) n + 2 (8-n)(n-1); sign F >= 0 iff
// lambda_star >= mu_star for a = x e^x (in the region where the closed
// lambda_star formula holds).
double comparison_F(double n, double R);

struct SweepCell {
  double n = 0.0, R = 0.0, s = 0.0;
  ThresholdReport report;
  double lambda1 = 0.0;  // NaN unless requested
  std::string winner;    // "mu_star" | "lambda_star" | "tie"
  double F = 0.0, n_hat = 0.0, n_tilde = 0.0;
  std::string error;     // nonempty when this cell failed
};

// Threshold sweep over the (n, R) product grid. profile_for_R builds the
// profile at each R (profiles are bound to their domain). Cells run
// independently (capped by `threads`); failures land in the error column and
// the sweep continues. Output order matches the input grids.
std::vector<SweepCell> sweep(const std::function<ProfileFunction(double)>& profile_for_R,
                             const std::vector<double>& n_grid,
                             const std::vector<double>& R_grid,
                             bool with_eigenvalue = false, unsigned threads = 0);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepCell& cell);

}  // namespace bnrad

#endif
