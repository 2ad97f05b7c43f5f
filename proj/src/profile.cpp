#include "bnrad/profile.hpp"

#include <cmath>

#include "bnrad/errors.hpp"
#include "bnrad/expr.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/thresholds.hpp"

namespace bnrad {

const char* profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::Sinh: return "sinh";
    case ProfileKind::LinearX: return "x";
    case ProfileKind::XExpX: return "xexp";
    case ProfileKind::Expression: return "expression";
  }
  return "?";
}

ProfileFunction::ProfileFunction(ProfileKind kind, double R, Fn a, Fn da, Fn d2a,
                                 Fn d3a, std::array<double, 4> taylor_at_zero,
                                 std::string source)
    : kind_(kind),
      R_(R),
      a_(std::move(a)),
      da_(std::move(da)),
      d2a_(std::move(d2a)),
      d3a_(std::move(d3a)),
      taylor0_(taylor_at_zero),
      source_(std::move(source)) {
  if (!(R_ > 0.0)) throw InvalidRadius("profile radius must be positive");
}

ProfileFunction make_builtin(ProfileKind kind, double R) {
  if (!(R > 0.0)) throw InvalidRadius("make_builtin: R must be positive");
  switch (kind) {
    case ProfileKind::Sinh:
      return ProfileFunction(
          kind, R, [](double x) { return std::sinh(x); },
          [](double x) { return std::cosh(x); },
          [](double x) { return std::sinh(x); },
          [](double x) { return std::cosh(x); }, {0.0, 1.0, 0.0, 1.0}, "sinh");
    case ProfileKind::LinearX:
      return ProfileFunction(
          kind, R, [](double x) { return x; }, [](double) { return 1.0; },
          [](double) { return 0.0; }, [](double) { return 0.0; },
          {0.0, 1.0, 0.0, 0.0}, "x");
    case ProfileKind::XExpX:
      return ProfileFunction(
          kind, R, [](double x) { return x * std::exp(x); },
          [](double x) { return std::exp(x) * (1.0 + x); },
          [](double x) { return std::exp(x) * (2.0 + x); },
          [](double x) { return std::exp(x) * (3.0 + x); }, {0.0, 1.0, 2.0, 3.0},
          "xexp");
    case ProfileKind::Expression:
      break;
  }
  throw ConfigError("make_builtin: kind must be one of sinh / x / xexp");
}

ProfileFunction parse_profile(const std::string& expr, double R) {
  if (!(R > 0.0)) throw InvalidRadius("parse_profile: R must be positive");
  const ExprPtr e0 = parse_expression(expr);
  const ExprPtr e1 = differentiate(e0);
  const ExprPtr e2 = differentiate(e1);
  const ExprPtr e3 = differentiate(e2);

  auto make_eval = [](const ExprPtr& e) {
    return [e](double x) { return eval_expression(e, x); };
  };
  ProfileFunction::Fn f0 = make_eval(e0), f1 = make_eval(e1), f2 = make_eval(e2),
                      f3 = make_eval(e3);

  // validation grid: interior points, away from possible singular behavior at 0
  const auto grid = uniform_grid(0.05 * R, 0.95 * R, 16);
  const double h0 = 0.005 * R;
  const ProfileFunction::Fn* evals[4] = {&f0, &f1, &f2, &f3};
  for (double x : grid) {
    for (int k = 0; k < 4; ++k) {
      const double v = (*evals[k])(x);
      if (!std::isfinite(v))
        throw DomainError("derivative of order " + std::to_string(k) +
                          " of '" + expr + "' is not finite at x = " +
                          std::to_string(x));
    }
    for (int k = 1; k <= 3; ++k) {
      const double sym = (*evals[k])(x);
      const double fd = richardson_derivative(f0, x, k, h0);
      if (std::abs(fd - sym) > 1e-6 * (1.0 + std::abs(sym)))
        throw DomainError("symbolic derivative of order " + std::to_string(k) +
                          " disagrees with finite differences at x = " +
                          std::to_string(x));
    }
  }

  std::array<double, 4> taylor = {eval_at_zero_or_nan(e0), eval_at_zero_or_nan(e1),
                                  eval_at_zero_or_nan(e2), eval_at_zero_or_nan(e3)};
  return ProfileFunction(ProfileKind::Expression, R, std::move(f0), std::move(f1),
                         std::move(f2), std::move(f3), taylor,
                         print_expression(e0));
}

ProfileFunction make_profile(const std::string& spec_text, double R) {
  if (spec_text == "sinh") return make_builtin(ProfileKind::Sinh, R);
  if (spec_text == "x" || spec_text == "linear")
    return make_builtin(ProfileKind::LinearX, R);
  if (spec_text == "xexp" || spec_text == "xexpx")
    return make_builtin(ProfileKind::XExpX, R);
  return parse_profile(spec_text, R);
}

ValidationReport validate_hypotheses(const ProfileFunction& p) {
  ValidationReport rep;
  const double R = p.domain_R();

  // (i) a(0) = 0
  rep.a_at_zero = p.a(0.0);
  rep.pass_i = std::isfinite(rep.a_at_zero) && std::abs(rep.a_at_zero) <= 1e-12;
  if (!rep.pass_i) rep.message += "hypothesis (i) fails: a(0) != 0; ";

  // (ii) a' > 0 on (0, R): geometric grid plus golden refinement around the
  // grid minimizer; a uniform grid can miss dips of a'.
  {
    const auto grid = geometric_grid(R * 1e-9, R, 2048);
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = p.da(grid[i]);
      if (!std::isfinite(v)) {
        rep.pass_ii = false;
        rep.message += "a' not finite on (0,R); ";
        rep.min_da = v;
        rep.min_da_location = grid[i];
        best = grid.size();
        break;
      }
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best < grid.size()) {
      const double lo = grid[best == 0 ? 0 : best - 1];
      const double hi = grid[std::min(best + 1, grid.size() - 1)];
      auto [xm, fm] = golden_section_min([&](double x) { return p.da(x); }, lo, hi,
                                         1e-11 * std::max(1.0, R));
      if (fm < best_val) {
        best_val = fm;
        rep.min_da_location = xm;
      } else {
        rep.min_da_location = grid[best];
      }
      rep.min_da = best_val;
      rep.pass_ii = best_val > 0.0;
      if (!rep.pass_ii) rep.message += "hypothesis (ii) fails: a' <= 0 inside (0,R); ";
    }
  }

  // (iii) omega = inf a''/a must be nonnegative
  try {
    auto [omega, loc] =
        infimum_on_interval([&](double x) { return p.d2a(x) / p.a(x); }, R);
    rep.omega = omega;
    rep.omega_location = loc;
    rep.pass_iii = omega >= -1e-10;
    if (!rep.pass_iii)
      rep.message += "hypothesis (iii) fails: inf a''/a = " + std::to_string(omega) +
                     " < 0; ";
  } catch (const NonFinite&) {
    rep.pass_iii = false;
    rep.omega = std::nan("");
    rep.message += "hypothesis (iii) check failed: a''/a not finite on (0,R); ";
  }
  return rep;
}

ProblemSpec::ProblemSpec(ProfileFunction profile, double n, double R, double lambda)
    : profile_(std::move(profile)), n_(n), R_(R), lambda_(lambda) {
  if (!(n_ > 2.0)) throw ConfigError("ProblemSpec: n must exceed 2");
  if (!(R_ > 0.0)) throw InvalidRadius("ProblemSpec: R must be positive");
  if (std::abs(profile_.domain_R() - R_) > 1e-9 * std::max(1.0, R_))
    throw ConfigError("ProblemSpec: profile domain and R disagree");
}

}  // namespace bnrad
