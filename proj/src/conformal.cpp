#include "bnrad/conformal.hpp"

#include <cmath>

#include "bnrad/errors.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/quadrature.hpp"

namespace bnrad {

double ConformalMap::r_of(double theta) const {
  return std::exp((*inv_a_)(theta) + log_r_shift_);
}

ConformalMap build_map(const ProfileFunction& p, double theta0, std::size_t grid_points) {
  const double R = p.domain_R();
  if (theta0 <= 0.0) theta0 = 0.5 * R;
  if (!(theta0 > 0.0 && theta0 < R))
    throw ConfigError("build_map: theta0 must lie in (0, R)");

  ConformalMap map(p, theta0);
  map.grid_ = geometric_grid(R * 1e-6, R, grid_points);
  // keep theta0 as a breakpoint so the anchor r(theta0) = 1 is exact
  std::vector<double> bps = map.grid_;
  bps.push_back(theta0);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  auto inv_a = [p](double s) { return 1.0 / p.a(s); };
  map.inv_a_ = std::make_shared<CumulativeIntegral>(inv_a, bps, 1e-13);
  map.log_r_shift_ = -(*map.inv_a_)(theta0);

  map.s_.resize(map.grid_.size());
  map.r_.resize(map.grid_.size());
  map.p_.resize(map.grid_.size());
  map.B_.resize(map.grid_.size());
  for (std::size_t i = 0; i < map.grid_.size(); ++i) {
    const double th = map.grid_[i];
    map.s_[i] = std::log(th);
    map.r_[i] = map.r_of(th);
    map.p_[i] = p.a(th) / map.r_[i];
    map.B_[i] = p.da(th) / p.a(th);
    if (!(map.p_[i] > 0.0))
      throw QuadratureFailure("conformal factor not positive at theta = " +
                              std::to_string(th));
  }
  return map;
}

PotentialEval potential_eval(const ConformalMap& map, double n) {
  if (!(n > 2.0)) throw ConfigError("potential_eval: n must exceed 2");
  const ProfileFunction prof = map.profile();
  PotentialEval pe;
  // the map is captured by value: callables must outlive the caller's map
  pe.V = [prof, map, n](double theta) {
    const double a = prof.a(theta);
    const double da = prof.da(theta);
    const double d2a = prof.d2a(theta);
    const double p = map.p_of(theta);
    return (n - 2.0) * p * p *
           ((n - 2.0) * (da * da - 1.0) + 2.0 * a * d2a) / (4.0 * a * a);
  };
  pe.T = [prof, n](double theta) {
    return (n - 1.0) * prof.d2a(theta) / prof.a(theta) +
           prof.d3a(theta) / prof.da(theta);
  };
  return pe;
}

std::vector<double> potential_pform_on_grid(const ConformalMap& map, double n) {
  const ProfileFunction& prof = map.profile();
  const auto& th = map.grid();
  const auto& r = map.r_cache();
  const auto& p = map.p_cache();
  const std::size_t N = th.size();
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double a = prof.a(th[i]);
    const double da = prof.da(th[i]);
    const double d2a = prof.d2a(th[i]);
    // dtheta derivatives of p under r' = r/a:
    //   p'  = (a' - 1)/r,   p'' = a''/r - (a' - 1)/(a r)
    const double p1 = (da - 1.0) / r[i];
    const double p2 = d2a / r[i] - (da - 1.0) / (a * r[i]);
    const double pdot = p1 * p[i];                        // dp/dr
    const double pddot = (p2 * p[i] + p1 * p1) * p[i];    // d2p/dr2
    out[i] = (n - 2.0) * (0.5 * pddot / p[i] +
                          0.25 * (n - 4.0) * (pdot / p[i]) * (pdot / p[i]) +
                          0.5 * (n - 1.0) * pdot / (r[i] * p[i]));
  }
  return out;
}

double operator_equivalence_residual(const ConformalMap& map, const RadialFunction& u,
                                     double n) {
  u.check_shape();
  const double R = map.R();
  if (u.grid.back() > R * (1.0 + 1e-12))
    throw GridMismatch("test function extends beyond the map's domain");
  if (u.size() < 7) throw GridMismatch("test function grid too small");

  const double theta_lo = std::max(map.theta_min(), 1e-4 * R);
  // gather indices usable as stencil support (theta above the map cutoff)
  std::size_t first = 0;
  while (first < u.size() && u.grid[first] < map.theta_min()) ++first;
  const std::size_t count = u.size() - first;
  if (count < 7) throw GridMismatch("too few grid points above the map cutoff");

  std::vector<double> theta(count), rr(count), pp(count), BB(count), uu(count);
  for (std::size_t j = 0; j < count; ++j) {
    theta[j] = u.grid[first + j];
    rr[j] = map.r_of(theta[j]);
    pp[j] = map.p_of(theta[j]);
    BB[j] = map.B_of(theta[j]);
    uu[j] = u.values[first + j];
  }

  // flux form of L: two first derivatives instead of one second derivative
  std::vector<double> flux(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double ur = stencil_derivative(rr, uu, j, 1);
    flux[j] = std::pow(rr[j], n - 1.0) * std::pow(pp[j], n - 2.0) * ur;
  }

  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < count; ++j) {
    if (theta[j] < theta_lo) continue;
    const double H = stencil_derivative(theta, uu, j, 2) +
                     (n - 1.0) * BB[j] * stencil_derivative(theta, uu, j, 1);
    const double L = std::pow(pp[j], -n) * std::pow(rr[j], 1.0 - n) *
                     stencil_derivative(rr, flux, j, 1);
    worst = std::max(worst, std::abs(H - L));
  }
  return worst;
}

RadialFunction virial_rhs_integrand(const ConformalMap& map, double n, double lambda,
                                    const RadialFunction& v) {
  v.check_shape();
  if (v.grid.back() > map.R() * (1.0 + 1e-12))
    throw GridMismatch("v extends beyond the map's domain");
  const PotentialEval pe = potential_eval(map, n);

  RadialFunction out;
  out.grid = v.grid;
  out.values.resize(v.size());
  out.derivs.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double th = v.grid[i];
    if (th < map.theta_min()) {
      out.values[i] = 0.0;  // limit: the weight vanishes like theta^{n-1}
      continue;
    }
    const double r = map.r_of(th);
    const double p = map.p_of(th);
    const double B = map.B_of(th);
    out.values[i] = v.values[i] * v.values[i] * p * p * p * B *
                    (lambda - 0.25 * (n - 2.0) * pe.T(th)) * std::pow(r, n);
  }
  return out;
}

RadialFunction to_conformal(const ConformalMap& map, double n, const RadialFunction& u) {
  u.check_shape();
  RadialFunction v;
  v.grid = u.grid;
  v.values.resize(u.size());
  v.derivs.resize(u.size());
  const double ex = 0.5 * n - 1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double th = std::max(u.grid[i], map.theta_min());
    const double p = map.p_of(th);
    const double dp = map.dp_dtheta(th);
    const double w = std::pow(p, ex);
    v.values[i] = w * u.values[i];
    v.derivs[i] = w * (u.derivs[i] + ex * (dp / p) * u.values[i]);
  }
  return v;
}

}  // namespace bnrad
