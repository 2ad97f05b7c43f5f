#include "bnrad/solver.hpp"

#include <algorithm>
#include <cmath>

#include "bnrad/errors.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/ode.hpp"

namespace bnrad {
namespace {

double nonlinearity(double u, double q) {
  return u == 0.0 ? 0.0 : std::pow(std::abs(u), q - 1.0) * u;
}

struct SeriesStart {
  double u, du;
};

// Taylor start u = alpha + c2 x^2 + c3 x^3 + c4 x^4 balancing
// u'' + (n-1)(a'/a)u' = -w(u) against a'/a = k/x + b0 + b1 x + ...
SeriesStart series_at(const ProblemSpec& spec, double alpha, SolveMode mode,
                      double x) {
  const double n = spec.n();
  const double lam = spec.lambda();
  const double q = spec.q();
  const double w = lam * alpha + (mode == SolveMode::Nonlinear ? nonlinearity(alpha, q) : 0.0);
  const double dw =
      lam + (mode == SolveMode::Nonlinear ? q * std::pow(std::abs(alpha), q - 1.0) : 0.0);

  const auto& t = spec.profile().taylor_at_zero();
  int lead = 0;  // leading nonzero derivative order of a at 0
  for (int j = 1; j <= 3; ++j) {
    if (std::isfinite(t[j]) && std::abs(t[j]) > 1e-14) {
      lead = j;
      break;
    }
  }

  double c2, c3 = 0.0, c4 = 0.0;
  if (lead == 1) {
    const double a1 = t[1];
    const double b0 = std::isfinite(t[2]) ? t[2] / (2.0 * a1) : 0.0;
    const double b1 = std::isfinite(t[3])
                          ? t[3] / (3.0 * a1) - t[2] * t[2] / (4.0 * a1 * a1)
                          : 0.0;
    c2 = -w / (2.0 * n);
    c3 = -2.0 * (n - 1.0) * b0 * c2 / (3.0 * (n + 1.0));
    c4 = -(dw * c2 + (n - 1.0) * (3.0 * c3 * b0 + 2.0 * c2 * b1)) / (4.0 * (n + 2.0));
  } else if (lead > 1) {
    // a ~ x^lead: the singular coefficient is lead/x
    c2 = -w / (2.0 * (1.0 + lead * (n - 1.0)));
  } else {
    // no Taylor data; the generic leading balance a'/a ~ 1/x
    c2 = -w / (2.0 * n);
  }
  const double x2 = x * x;
  return {alpha + c2 * x2 + c3 * x2 * x + c4 * x2 * x2,
          2.0 * c2 * x + 3.0 * c3 * x2 + 4.0 * c4 * x2 * x};
}

struct IntegrationOutcome {
  DenseOde ode;
  double h0;
};

IntegrationOutcome integrate_raw(const ProblemSpec& spec, double alpha, SolveMode mode,
                                 const SolverOptions& opt) {
  const double R = spec.R();
  const double n = spec.n();
  const double lam = spec.lambda();
  const double q = spec.q();
  const ProfileFunction& prof = spec.profile();
  const double h0 = R * 1e-6;

  OdeRhs rhs = [&prof, n, lam, q, mode](double x, const OdeState& y) -> OdeState {
    const double coeff = (n - 1.0) * prof.da(x) / prof.a(x);
    double f = -coeff * y[1] - lam * y[0];
    if (mode == SolveMode::Nonlinear) f -= nonlinearity(y[0], q);
    return {y[1], f};
  };

  const SeriesStart s = series_at(spec, alpha, mode, h0);
  DenseOde ode = integrate_dp5(rhs, h0, R, {s.u, s.du}, opt.ode_rtol, opt.ode_atol,
                               R / 64.0, opt.blowup_limit);
  return {std::move(ode), h0};
}

RadialFunction densify(const ProblemSpec& spec, double alpha, SolveMode mode,
                       const DenseOde& ode, double h0, std::size_t points) {
  RadialFunction out;
  out.grid = uniform_grid(0.0, spec.R(), points);
  out.values.resize(points);
  out.derivs.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = out.grid[i];
    if (x < h0) {
      const SeriesStart s = series_at(spec, alpha, mode, x);
      out.values[i] = s.u;
      out.derivs[i] = s.du;
    } else {
      const auto uv = ode.eval(x);
      out.values[i] = uv[0];
      out.derivs[i] = uv[1];
    }
  }
  return out;
}

}  // namespace

RadialFunction integrate_from_origin(const ProblemSpec& spec, double alpha,
                                     SolveMode mode, const SolverOptions& opt) {
  if (!std::isfinite(alpha)) throw ConfigError("integrate_from_origin: alpha not finite");
  if (alpha == 0.0) {  // the zero solution, exactly
    RadialFunction out;
    out.grid = uniform_grid(0.0, spec.R(), opt.output_points);
    out.values.assign(opt.output_points, 0.0);
    out.derivs.assign(opt.output_points, 0.0);
    return out;
  }
  auto [ode, h0] = integrate_raw(spec, alpha, mode, opt);
  if (ode.status == DenseOde::Status::BlewUp)
    throw BlowUp(ode.blowup_x, "solution magnitude exceeded " +
                                   std::to_string(opt.blowup_limit) + " at x = " +
                                   std::to_string(ode.blowup_x));
  return densify(spec, alpha, mode, ode, h0, opt.output_points);
}

double ode_residual(const ProblemSpec& spec, const RadialFunction& u, SolveMode mode) {
  u.check_shape();
  const double R = spec.R();
  const double n = spec.n();
  const double q = spec.q();
  const ProfileFunction& prof = spec.profile();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < u.size(); ++i) {
    const double x = u.grid[i];
    if (x < 1e-4 * R) continue;
    const double upp = stencil_derivative(u.grid, u.derivs, i, 1);
    const double coeff = (n - 1.0) * prof.da(x) / prof.a(x);
    double res = -upp - coeff * u.derivs[i] - spec.lambda() * u.values[i];
    double scale = 1.0;
    if (mode == SolveMode::Nonlinear) {
      res -= nonlinearity(u.values[i], q);
      scale += std::pow(std::abs(u.values[i]), q);
    } else {
      scale += std::abs(u.values[i]);
    }
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

std::optional<ShootingResult> shoot(const ProblemSpec& spec,
                                    std::pair<double, double> alpha_range,
                                    SolveMode mode, const SolverOptions& opt) {
  auto [a_lo, a_hi] = alpha_range;
  if (!(a_lo < a_hi) || a_lo * a_hi <= 0.0)
    throw ConfigError("shoot: alpha range must be increasing and same-signed");
  const bool negative = a_hi < 0.0;

  // endpoint map alpha -> u(R; alpha); blow-ups map to a large surrogate of
  // the blow-up sign so sign scanning still works
  auto endpoint = [&](double alpha) -> double {
    auto [ode, h0] = integrate_raw(spec, alpha, mode, opt);
    (void)h0;
    if (ode.status == DenseOde::Status::BlewUp)
      return ode.blowup_sign * 1e10 * (1.0 + (spec.R() - ode.blowup_x));
    return ode.state_at_end()[0];
  };

  // log-spaced scan by magnitude; for the negative branch this mirrors the
  // positive scan point-for-point
  const std::size_t m = std::max<std::size_t>(opt.alpha_scan_points, 2);
  std::vector<double> alphas(m);
  {
    const double lo_mag = negative ? -a_hi : a_lo;
    const double hi_mag = negative ? -a_lo : a_hi;
    const auto mags = geometric_grid(lo_mag, hi_mag, m);
    for (std::size_t i = 0; i < m; ++i)
      alphas[i] = negative ? -mags[i] : mags[i];
  }

  std::vector<double> ends(m);
  for (std::size_t i = 0; i < m; ++i) ends[i] = endpoint(alphas[i]);

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (ends[i] == 0.0 || (ends[i] > 0) == (ends[i + 1] > 0)) continue;
    double root;
    try {
      root = brent_root(endpoint, alphas[i], alphas[i + 1],
                        1e-13 * std::abs(alphas[i + 1]),
                        opt.root_rel_tol * 0.5 * std::abs(alphas[i]));
    } catch (const Error&) {
      continue;
    }
    const double end_val = endpoint(root);
    if (std::abs(end_val) >= opt.root_rel_tol * std::abs(root)) continue;

    ShootingResult result;
    result.alpha = root;
    result.lambda = spec.lambda();
    try {
      result.solution = integrate_from_origin(spec, root, mode, opt);
    } catch (const BlowUp&) {
      continue;
    }
    result.residual = ode_residual(spec, result.solution, mode);
    if (result.residual >= opt.residual_tol) continue;
    result.n_sign_changes =
        result.solution.count_sign_changes(1e-7 * std::abs(root));
    return result;
  }
  return std::nullopt;
}

double first_eigenvalue(const ProfileFunction& p, double n, const SolverOptions& opt) {
  const double R = p.domain_R();
  auto indicator = [&](double lambda) {
    ProblemSpec spec(p, n, R, lambda);
    const RadialFunction u = integrate_from_origin(spec, 1.0, SolveMode::Linear, opt);
    return u.count_sign_changes(1e-12) >= 1 || u.values.back() <= 0.0;
  };

  double hi = 1.0;
  while (!indicator(hi)) {
    hi *= 2.0;
    if (hi > 1e6)
      throw BracketFailure("first_eigenvalue: no sign change for lambda up to 1e6");
  }
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (indicator(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bnrad
