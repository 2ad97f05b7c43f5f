#ifndef BNRAD_ODE_HPP
#define BNRAD_ODE_HPP

#include <array>
#include <functional>
#include <vector>

namespace bnrad {

using OdeState = std::array<double, 2>;
using OdeRhs = std::function<OdeState(double, const OdeState&)>;

// Adaptive Dormand-Prince 5(4) for two-component systems. Accepted nodes and
// the right-hand side there are kept; in-between values come from a quintic
// Hermite built on (y, y', y'') of the enclosing step, so dense output keeps
// the integrator's accuracy without extra tableau machinery.
class DenseOde {
public:
  enum class Status { Ok, BlewUp };

  Status status = Status::Ok;
  double blowup_x = 0.0;   // where |y0| first exceeded the limit
  double blowup_sign = 0.0;

  const std::vector<double>& nodes() const { return x_; }
  double x_begin() const { return x_.front(); }
  double x_end() const { return x_.back(); }

  // component 0 of the state and its x-derivative at any x inside the range
  std::array<double, 2> eval(double x) const;

  OdeState state_at_end() const { return y_.back(); }

private:
  friend DenseOde integrate_dp5(const OdeRhs&, double, double, OdeState, double,
                                double, double, double);
  std::vector<double> x_;
  std::vector<OdeState> y_;
  std::vector<OdeState> f_;
};

// Integrates y' = rhs(x, y) from x0 to x1 (x0 < x1).
// Throws StiffnessFailure when the step size underflows or the step budget is
// exhausted. A blow-up of |y[0]| beyond blowup_abs is NOT an exception here:
// the result is returned truncated with status BlewUp (callers decide).
DenseOde integrate_dp5(const OdeRhs& rhs, double x0, double x1, OdeState y0,
                       double rtol, double atol, double max_step,
                       double blowup_abs);

}  // namespace bnrad

#endif
