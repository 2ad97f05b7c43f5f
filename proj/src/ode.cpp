#include "bnrad/ode.hpp"

#include <algorithm>
#include <cmath>

#include "bnrad/errors.hpp"

namespace bnrad {
namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState out = y;
  for (const auto& [w, k] : terms) {
    out[0] += h * w * (*k)[0];
    out[1] += h * w * (*k)[1];
  }
  return out;
}

// quintic Hermite basis on [0,1] matching value/1st/2nd derivative at ends
void hermite5(double t, double h, const double f0[3], const double f1[3],
              double* val, double* dval) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h01 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h11 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h21 = 0.5 * (t3 - 2 * t4 + t5);
  *val = f0[0] * h00 + f0[1] * h * h10 + f0[2] * h * h * h20 + f1[0] * h01 +
         f1[1] * h * h11 + f1[2] * h * h * h21;
  const double d00 = -30 * t2 + 60 * t3 - 30 * t4;
  const double d10 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double d20 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double d01 = -d00;
  const double d11 = -12 * t2 + 28 * t3 - 15 * t4;
  const double d21 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  *dval = (f0[0] * d00 + f1[0] * d01) / h + f0[1] * d10 + f1[1] * d11 +
          h * (f0[2] * d20 + f1[2] * d21);
}

}  // namespace

std::array<double, 2> DenseOde::eval(double x) const {
  const double lo = x_.front();
  const double hi = x_.back();
  if (x < lo - 1e-12 * (hi - lo) || x > hi + 1e-12 * (hi - lo))
    throw GridMismatch("dense output queried outside the integrated range");
  x = std::clamp(x, lo, hi);
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i >= x_.size() - 1) i = x_.size() - 2;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  // state component 0 has value y[0], derivative y[1], second derivative f[1]
  const double f0[3] = {y_[i][0], y_[i][1], f_[i][1]};
  const double f1[3] = {y_[i + 1][0], y_[i + 1][1], f_[i + 1][1]};
  double v, dv;
  hermite5(t, h, f0, f1, &v, &dv);
  return {v, dv};
}

DenseOde integrate_dp5(const OdeRhs& rhs, double x0, double x1, OdeState y0,
                       double rtol, double atol, double max_step,
                       double blowup_abs) {
  DenseOde out;
  const double span = x1 - x0;
  if (!(span > 0)) throw GridMismatch("integrate_dp5: need x0 < x1");

  double x = x0;
  OdeState y = y0;
  OdeState k1 = rhs(x, y);
  out.x_.push_back(x);
  out.y_.push_back(y);
  out.f_.push_back(k1);

  double h = std::min(max_step, span / 100.0);
  const double h_floor = 1e-14 * span;
  const std::size_t max_steps = 4'000'000;

  for (std::size_t step = 0; step < max_steps; ++step) {
    if (x >= x1) return out;
    h = std::min(h, x1 - x);
    if (h < h_floor)
      throw StiffnessFailure("step size underflow at x = " + std::to_string(x));

    const OdeState y2 = axpy(y, h, {{a21, &k1}});
    const OdeState k2 = rhs(x + c2 * h, y2);
    const OdeState y3 = axpy(y, h, {{a31, &k1}, {a32, &k2}});
    const OdeState k3 = rhs(x + c3 * h, y3);
    const OdeState y4 = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const OdeState k4 = rhs(x + c4 * h, y4);
    const OdeState y5 = axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const OdeState k5 = rhs(x + c5 * h, y5);
    const OdeState y6 =
        axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const OdeState k6 = rhs(x + h, y6);
    const OdeState ynew =
        axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const OdeState k7 = rhs(x + h, ynew);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(0.5 * err);

    if (err <= 1.0 || h <= h_floor * 2.0) {
      x += h;
      y = ynew;
      k1 = k7;  // FSAL
      out.x_.push_back(x);
      out.y_.push_back(y);
      out.f_.push_back(k1);
      if (std::abs(y[0]) > blowup_abs || !std::isfinite(y[0]) || !std::isfinite(y[1])) {
        out.status = DenseOde::Status::BlewUp;
        out.blowup_x = x;
        out.blowup_sign = y[0] >= 0 ? 1.0 : -1.0;
        return out;
      }
    }
    double factor = 0.2;  // NaN/inf error estimates shrink the step hard
    if (err == 0.0)
      factor = 5.0;
    else if (std::isfinite(err))
      factor = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(factor * h, max_step);
  }
  throw StiffnessFailure("step budget exhausted before reaching the right endpoint");
}

}  // namespace bnrad
