#include "bnrad/identities.hpp"

#include <algorithm>
#include <cmath>

#include "bnrad/errors.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/quadrature.hpp"
#include "bnrad/solver.hpp"

#include "json.hpp"

namespace bnrad {
namespace {

constexpr double kGateFactor = 10.0;  // NotASolution gate = 10x solver tolerance

// composite Simpson over a RadialFunction-style uniform grid
double integrate_grid(const std::vector<double>& grid, const std::vector<double>& y) {
  const double h = grid[1] - grid[0];
  // verify uniformity; fall back to trapezoid otherwise
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (std::abs(grid[i + 1] - grid[i] - h) > 1e-9 * h)
      return trapezoid(grid, y);
  return simpson_uniform(y, h);
}

}  // namespace

double HardyFrame::G(double x) const {
  if (x <= 0.0) return 0.0;
  return (*G_)(x);
}

double HardyFrame::Gprime(double x) const {
  if (x <= 0.0) return 0.0;
  return std::pow(profile_.a(x), n_ - 1.0);
}

double HardyFrame::S(double x) const {
  if (x <= 0.0) return 0.0;
  return G(x) * profile_.da(x) / profile_.a(x) - Gprime(x) / n_;
}

double HardyFrame::m(double x) const {
  if (x <= 0.0) return 0.0;
  return G(x) * profile_.da(x) - std::pow(profile_.a(x), n_) / n_;
}

HardyFrame build_frame(const ProfileFunction& p, double n, double C) {
  if (!(n > 2.0)) throw ConfigError("build_frame: n must exceed 2");
  HardyFrame frame(p, n, C);
  const double R = p.domain_R();

  std::vector<double> bps = geometric_grid(R * 1e-6, R, 2048);
  {
    const auto uni = uniform_grid(R / 2048.0, R, 2048);
    bps.insert(bps.end(), uni.begin(), uni.end());
    bps.push_back(0.0);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  }
  const double nn = n;
  const ProfileFunction prof = p;
  frame.G_ = std::make_shared<CumulativeIntegral>(
      [prof, nn](double s) {
        const double a = prof.a(s);
        return a <= 0.0 ? 0.0 : std::pow(a, nn - 1.0);
      },
      bps, 1e-13);
  frame.grid_ = std::move(bps);
  return frame;
}

std::pair<double, double> pohozaev_balance(const HardyFrame& frame,
                                           const ProblemSpec& spec,
                                           const RadialFunction& u) {
  u.check_shape();
  SolverOptions opt;
  const double res = ode_residual(spec, u);
  if (res >= kGateFactor * opt.residual_tol)
    throw NotASolution("pohozaev_balance: ODE residual " + std::to_string(res) +
                       " exceeds the solution gate");

  const std::size_t N = u.size();
  std::vector<double> f_lhs(N), f_rhs(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = u.grid[i];
    f_lhs[i] = u.values[i] * u.values[i] * frame.Gprime(x);
    f_rhs[i] = u.derivs[i] * u.derivs[i] * frame.S(x);
  }
  const double n = spec.n();
  const double lhs = spec.lambda() / n * integrate_grid(u.grid, f_lhs);
  const double rhs = u.derivs.back() * u.derivs.back() * frame.G(u.grid.back()) / 2.0 +
                     (n - 1.0) * integrate_grid(u.grid, f_rhs);
  return {lhs, rhs};
}

double hardy_check(const HardyFrame& frame, const RadialFunction& u) {
  u.check_shape();
  const double umax = *std::max_element(u.values.begin(), u.values.end(),
                                        [](double a, double b) {
                                          return std::abs(a) < std::abs(b);
                                        });
  if (std::abs(u.values.back()) > 1e-8 * std::max(1.0, std::abs(umax)))
    throw GridMismatch("hardy_check: u(R) must vanish");

  const std::size_t N = u.size();
  std::vector<double> num(N), den(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = u.grid[i];
    if (x <= 0.0) {
      num[i] = 0.0;
      den[i] = 0.0;  // G^2/a^{n-1} ~ x^{n+1} -> 0
      continue;
    }
    const double gp = frame.Gprime(x);
    const double G = frame.G(x);
    num[i] = u.values[i] * u.values[i] * gp;
    den[i] = G * G * u.derivs[i] * u.derivs[i] / gp;
  }
  const double I_num = integrate_grid(u.grid, num);
  const double I_den = integrate_grid(u.grid, den);
  if (I_num < 1e-30) throw ZeroFunction("hardy_check: test function is numerically zero");
  return I_num / (4.0 * I_den);
}

std::pair<double, double> lemma32_margin(const HardyFrame& frame) {
  auto margin = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double G = frame.G(x);
    return frame.S(x) - frame.C() * G * G / frame.Gprime(x);
  };
  const auto& grid = frame.grid();
  double best = std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {  // skip the 0 breakpoint
    const double v = margin(grid[i]);
    if (v < best) {
      best = v;
      at = i;
    }
  }
  double loc = grid[at];
  const double lo = grid[at > 1 ? at - 1 : 1];
  const double hi = grid[std::min(at + 1, grid.size() - 1)];
  if (hi > lo) {
    auto [xm, fm] = golden_section_min(margin, lo, hi, 1e-11 * frame.R());
    if (fm < best) {
      best = fm;
      loc = xm;
    }
  }
  return {best, loc};
}

MonotonicityReport auxiliary_monotonicity(const HardyFrame& frame, double n) {
  const ProfileFunction& prof = frame.profile();
  const double C = frame.C();
  MonotonicityReport rep;
  rep.min_f = rep.min_g = rep.min_gprime = std::numeric_limits<double>::infinity();
  for (double x : frame.grid()) {
    if (x <= 0.0) continue;
    const double a = prof.a(x);
    const double da = prof.da(x);
    const double d2a = prof.d2a(x);
    const double d3a = prof.d3a(x);
    const double G = frame.G(x);
    const double f = frame.S(x) * frame.Gprime(x) - C * G * G;
    const double g = (n - 2.0) * da * frame.m(x) + G * a * (d2a - 2.0 * C * a);
    const double gp = (2.0 * n - 3.0) * G * da * d2a +
                      (2.0 / n) * std::pow(a, n) * d2a - 2.0 * C * std::pow(a, n + 1.0) -
                      4.0 * C * G * a * da + G * a * d3a;
    if (f < rep.min_f) { rep.min_f = f; rep.argmin_f = x; }
    if (g < rep.min_g) { rep.min_g = g; rep.argmin_g = x; }
    if (gp < rep.min_gprime) { rep.min_gprime = gp; rep.argmin_gprime = x; }
  }
  return rep;
}

std::pair<double, double> virial_balance(const ConformalMap& map,
                                         const ProblemSpec& spec,
                                         const RadialFunction& v) {
  v.check_shape();
  double vmax = 0.0;
  for (double x : v.values) vmax = std::max(vmax, std::abs(x));
  if (std::abs(v.values.back()) > 1e-6 * std::max(1.0, vmax))
    throw GridMismatch("virial_balance: v(R) must vanish");

  // reconstruct u = p^{1-n/2} v and gate on its ODE residual
  const double n = spec.n();
  RadialFunction u;
  u.grid = v.grid;
  u.values.resize(v.size());
  u.derivs.resize(v.size());
  const double ex = 1.0 - 0.5 * n;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double th = std::max(v.grid[i], map.theta_min());
    const double p = map.p_of(th);
    const double w = std::pow(p, ex);
    u.values[i] = w * v.values[i];
    u.derivs[i] = w * (v.derivs[i] + ex * (map.dp_dtheta(th) / p) * v.values[i]);
  }
  SolverOptions opt;
  const double res = ode_residual(spec, u);
  if (res >= kGateFactor * opt.residual_tol)
    throw NotASolution("virial_balance: ODE residual " + std::to_string(res) +
                       " exceeds the solution gate");

  const double R = spec.R();
  const double rR = map.r_of(R);
  const double vdot_R = v.derivs.back() * map.p_of(R);  // dv/dr = v' * dtheta/dr
  const double lhs = 0.5 * std::pow(rR, n) * vdot_R * vdot_R;

  const RadialFunction integrand = virial_rhs_integrand(map, n, spec.lambda(), v);
  std::vector<double> w_theta(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double th = v.grid[i];
    if (th < map.theta_min()) {
      w_theta[i] = 0.0;
      continue;
    }
    w_theta[i] = integrand.values[i] / map.p_of(th);  // dr = dtheta / p
  }
  const double rhs = integrate_grid(v.grid, w_theta);
  return {lhs, rhs};
}

std::string IdentityReport::to_json() const {
  nlohmann::ordered_json j;
  j["pohozaev_lhs"] = pohozaev_lhs;
  j["pohozaev_rhs"] = pohozaev_rhs;
  j["hardy_ratio"] = hardy_ratio;
  j["lemma32_min_margin"] = lemma32_min_margin;
  j["virial_lhs"] = virial_lhs;
  j["virial_rhs"] = virial_rhs;
  return j.dump();
}

}  // namespace bnrad
