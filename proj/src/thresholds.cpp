#include "bnrad/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bnrad/errors.hpp"
#include "bnrad/numerics.hpp"

#include "json.hpp"

namespace bnrad {

std::pair<double, double> infimum_on_interval(const std::function<double(double)>& f,
                                              double R) {
  const double x_min = R * 1e-9;
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v))
      throw NonFinite("infimum search: f not finite at x = " + std::to_string(x));
    return v;
  };

  std::vector<double> grid = geometric_grid(x_min, R, 2048);
  {
    const auto uni = uniform_grid(R / 2048.0, R, 2048);
    grid.insert(grid.end(), uni.begin(), uni.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = eval(grid[i]);
    if (values[i] < best_val) {
      best_val = values[i];
      best = i;
    }
  }

  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  double loc = grid[best];
  if (hi > lo) {
    auto [xm, fm] = golden_section_min(eval, lo, hi, 1e-11);
    if (fm < best_val) {
      best_val = fm;
      loc = xm;
    }
  }

  // deterministic location on numerically flat stretches: the leftmost grid
  // point attaining the minimum within evaluation noise
  const double flat = best_val + 1e-13 * (1.0 + std::abs(best_val));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] <= flat) {
      loc = std::min(loc, grid[i]);
      break;
    }
  }

  // endpoint snapping: values this close to the cutoffs represent one-sided limits
  if (loc <= x_min * (1.0 + 1e-6)) loc = 0.0;
  if (loc >= R - 1e-8 * R) loc = R;
  loc = std::clamp(loc, 0.0, R);
  return {best_val, loc};
}

std::pair<double, double> compute_D(const ProfileFunction& p, double n) {
  return infimum_on_interval(
      [&](double x) {
        return (2.0 * n - 3.0) * p.d2a(x) / p.a(x) + p.d3a(x) / p.da(x);
      },
      p.domain_R());
}

double compute_omega(const ProfileFunction& p) {
  auto [omega, loc] = infimum_on_interval(
      [&](double x) { return p.d2a(x) / p.a(x); }, p.domain_R());
  (void)loc;
  if (omega < -1e-10)
    throw HypothesisViolation("hypothesis (iii) violated: inf a''/a = " +
                              std::to_string(omega) + " < 0");
  return omega;
}

ThresholdReport compute_thresholds(const ProfileFunction& p, double n) {
  if (!(n > 2.0)) throw ConfigError("compute_thresholds: n must exceed 2");
  ThresholdReport rep;

  auto [mu_inf, mu_loc] = infimum_on_interval(
      [&](double x) {
        return (n - 1.0) * p.d2a(x) / p.a(x) + p.d3a(x) / p.da(x);
      },
      p.domain_R());
  rep.mu_star = 0.25 * (n - 2.0) * mu_inf;
  rep.argmin_mu = mu_loc;

  auto [D, D_loc] = compute_D(p, n);
  rep.D = D;
  rep.argmin_D = D_loc;
  rep.omega = compute_omega(p);

  const double hardy = (rep.D + 2.0 * rep.omega) / (2.0 * (n + 2.0));
  const double quarter = rep.D / 4.0;
  if (hardy <= quarter + 1e-12) {  // ties recorded as HardyBranch
    rep.C = hardy;
    rep.C_branch = CBranch::HardyBranch;
  } else {
    rep.C = quarter;
    rep.C_branch = CBranch::QuarterD;
  }
  rep.lambda_star = n * (n - 1.0) / 4.0 * rep.C;
  return rep;
}

std::string ThresholdReport::to_json() const {
  nlohmann::ordered_json j;
  j["D"] = D;
  j["omega"] = omega;
  j["C"] = C;
  j["C_branch"] = c_branch_name(C_branch);
  j["mu_star"] = mu_star;
  j["lambda_star"] = lambda_star;
  j["argmin_D"] = argmin_D;
  j["argmin_mu"] = argmin_mu;
  return j.dump();
}

std::string ThresholdReport::csv_header() {
  return "D,omega,C,C_branch,mu_star,lambda_star,argmin_D,argmin_mu";
}

std::string ThresholdReport::to_csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << D << ',' << omega << ',' << C << ',' << c_branch_name(C_branch) << ','
     << mu_star << ',' << lambda_star << ',' << argmin_D << ',' << argmin_mu;
  return os.str();
}

}  // namespace bnrad
