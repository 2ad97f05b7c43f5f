#ifndef BNRAD_QUADRATURE_HPP
#define BNRAD_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace bnrad {

// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a,b].
// Bisects until the local K15-G7 error estimate satisfies
//   err <= max(abs_tol_share, rel_tol * |I_local|)
// with the absolute budget split across subintervals.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-12, double rel_tol = 1e-14);

// Cumulative integral x -> int_{x0}^{x} f(s) ds cached on a fixed grid of
// breakpoints; queries between breakpoints add one local GK pass. Each cell
// is integrated to near machine relative accuracy so small-x values of the
// antiderivative keep relative (not just absolute) precision.
class CumulativeIntegral {
public:
  CumulativeIntegral(std::function<double(double)> f, std::vector<double> breakpoints,
                     double abs_tol = 1e-13);

  // Integral from breakpoints.front() to x; x must lie within the breakpoints.
  double operator()(double x) const;

  const std::vector<double>& breakpoints() const { return x_; }
  const std::vector<double>& partial_sums() const { return cum_; }

private:
  std::function<double(double)> f_;
  std::vector<double> x_;
  std::vector<double> cum_;
  double abs_tol_;
};

}  // namespace bnrad

#endif
