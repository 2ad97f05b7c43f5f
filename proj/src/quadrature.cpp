#include "bnrad/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "bnrad/errors.hpp"

namespace bnrad {
namespace {

// QUADPACK dqk15 abscissae/weights on [-1,1].
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

struct GkResult {
  double kronrod;
  double gauss;
  double err() const { return std::abs(kronrod - gauss); }
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  if (!std::isfinite(f0))
    throw QuadratureFailure("integrand not finite at " + std::to_string(mid));
  double kron = kWgk[7] * f0;
  double gauss = kWg[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fl = f(mid - dx);
    const double fr = f(mid + dx);
    if (!std::isfinite(fl) || !std::isfinite(fr))
      throw QuadratureFailure("integrand not finite near " + std::to_string(mid));
    kron += kWgk[i] * (fl + fr);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fl + fr);
  }
  return {kron * half, gauss * half};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int depth) {
  const GkResult r = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(r.kronrod));
  if (r.err() <= tol || depth >= 48) {
    if (depth >= 48 && r.err() > 1e3 * tol)
      throw QuadratureFailure("adaptive bisection stalled on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "]");
    return r.kronrod;
  }
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1) +
         integrate_rec(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);
  return sign * integrate_rec(f, a, b, abs_tol, rel_tol, 0);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       std::vector<double> breakpoints, double abs_tol)
    : f_(std::move(f)), x_(std::move(breakpoints)), abs_tol_(abs_tol) {
  cum_.assign(x_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x_.size(); ++i)
    cum_[i + 1] = cum_[i] + integrate_gk(f_, x_[i], x_[i + 1], abs_tol_, 1e-14);
}

double CumulativeIntegral::operator()(double x) const {
  const double lo = x_.front();
  const double hi = x_.back();
  const double pad = 1e-12 * (std::abs(hi) + std::abs(lo));
  if (x < lo - pad || x > hi + pad)
    throw QuadratureFailure("cumulative integral queried outside its domain");
  x = std::clamp(x, lo, hi);
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i >= x_.size() - 1) i = x_.size() - 2;
  if (x == x_[i]) return cum_[i];
  return cum_[i] + integrate_gk(f_, x_[i], x, abs_tol_, 1e-14);
}

}  // namespace bnrad
