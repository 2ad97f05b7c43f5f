#ifndef BNRAD_PROFILE_HPP
#define BNRAD_PROFILE_HPP

#include <array>
#include <functional>
#include <string>

namespace bnrad {

enum class ProfileKind { Sinh, LinearX, XExpX, Expression };

const char* profile_kind_name(ProfileKind k);

// A weight function a(x) on [0, R] with derivatives up to third order.
// Built-ins carry closed-form derivatives; parsed expressions carry
// symbolically differentiated ones. Immutable after construction.
class ProfileFunction {
public:
  using Fn = std::function<double(double)>;

  ProfileFunction(ProfileKind kind, double R, Fn a, Fn da, Fn d2a, Fn d3a,
                  std::array<double, 4> taylor_at_zero, std::string source);

  double a(double x) const { return a_(x); }
  double da(double x) const { return da_(x); }
  double d2a(double x) const { return d2a_(x); }
  double d3a(double x) const { return d3a_(x); }

  ProfileKind kind() const { return kind_; }
  double domain_R() const { return R_; }
  const std::string& source() const { return source_; }

  // {a(0), a'(0), a''(0), a'''(0)}; entries are NaN when not available.
  const std::array<double, 4>& taylor_at_zero() const { return taylor0_; }

private:
  ProfileKind kind_;
  double R_;
  Fn a_, da_, d2a_, d3a_;
  std::array<double, 4> taylor0_;
  std::string source_;
};

// Closed-form built-ins: a(x) = sinh x, a(x) = x, a(x) = x e^x.
ProfileFunction make_builtin(ProfileKind kind, double R);

// Parses `expr` over the grammar in expr.hpp and differentiates it three
// times symbolically. Verifies the derivative callables against central
// finite differences of a(x) on a validation grid (relative error < 1e-6)
// and that all evaluations are finite there.
ProfileFunction parse_profile(const std::string& expr, double R);

// Resolves "sinh" / "x" / "xexp" to built-ins, anything else to parse_profile.
ProfileFunction make_profile(const std::string& spec_text, double R);

struct ValidationReport {
  bool pass_i = false;     // a(0) = 0
  bool pass_ii = false;    // a' > 0 on (0, R)
  bool pass_iii = false;   // exists omega >= 0 with a'' >= omega a
  double a_at_zero = 0.0;
  double min_da = 0.0;        // minimum of a' found on (0, R)
  double min_da_location = 0.0;
  double omega = 0.0;         // inf a''/a over (0, R)
  double omega_location = 0.0;
  std::string message;
  bool ok() const { return pass_i && pass_ii && pass_iii; }
};

// Checks hypotheses (i)-(iii). Failures are encoded in the report, never
// thrown. omega is computed by the same infimum search the thresholds use.
ValidationReport validate_hypotheses(const ProfileFunction& p);

// One instance of the boundary-value problem. q is always derived.
class ProblemSpec {
public:
  ProblemSpec(ProfileFunction profile, double n, double R, double lambda);

  const ProfileFunction& profile() const { return profile_; }
  double n() const { return n_; }
  double R() const { return R_; }
  double lambda() const { return lambda_; }
  double q() const { return (n_ + 2.0) / (n_ - 2.0); }

  ProblemSpec with_lambda(double lambda) const {
    return ProblemSpec(profile_, n_, R_, lambda);
  }

private:
  ProfileFunction profile_;
  double n_, R_, lambda_;
};

}  // namespace bnrad

#endif
