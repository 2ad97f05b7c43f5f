#ifndef BNRAD_NUMERICS_HPP
#define BNRAD_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace bnrad {

// Golden-section minimization of f on [a,b] to absolute x tolerance xtol.
// Returns (xmin, fmin). f is evaluated ~2+log(|b-a|/xtol)/log(1.618) times.
std::pair<double, double> golden_section_min(const std::function<double(double)>& f,
                                             double a, double b, double xtol);

// Brent root finding on [a,b]. Requires f(a)*f(b) <= 0. Converges to xtol in x
// or stops early once |f| < ftol (pass ftol = 0 to disable the f-test).
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol, double ftol = 0.0);

// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
// `nodes` are abscissae, `x0` the evaluation point, `m` the derivative order.
// Returns one weight per node; sum(w_i * f(nodes_i)) approximates f^(m)(x0).
std::vector<double> fd_weights(const std::vector<double>& nodes, double x0, int m);

// Derivative of order m (1 or 2) of tabulated values at index i using a
// centered 5-point stencil (one-sided near the ends). `stride` widens the
// stencil spacing; used to keep roundoff amplification in check when the
// tabulated values themselves carry cancellation noise.
double stencil_derivative(const std::vector<double>& x, const std::vector<double>& y,
                          std::size_t i, int m, std::size_t stride = 1);

// Composite Simpson on a uniform grid (odd point count). Falls back to a
// trapezoid for the final interval when the interval count is odd.
double simpson_uniform(const std::vector<double>& y, double h);

// Trapezoid on an arbitrary strictly-increasing grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

// Richardson-extrapolated central difference of order m (1..3) of f at x.
// Used only for validation of symbolic/closed-form derivatives.
double richardson_derivative(const std::function<double(double)>& f, double x,
                             int m, double h0);

// Counter-based random stream: SplitMix64 over (seed, counter).
// out = mix64(seed + (counter+1) * 0x9E3779B97F4A7C15). Languages that
// reproduce this mix reproduce the whole suite.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter);

// Uniform double in [0,1) from the same stream.
double splitmix64_unit(std::uint64_t seed, std::uint64_t counter);

// Natural cubic spline through (x_i, y_i); evaluates value and derivative.
class CubicSpline {
public:
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double value(double x) const;
  double derivative(double x) const;

private:
  std::size_t cell(double x) const;
  std::vector<double> x_, y_, m_;  // m_ holds second derivatives at knots
};

// Grid builders. Geometric grids are log-spaced and include both endpoints.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);
std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

}  // namespace bnrad

#endif
