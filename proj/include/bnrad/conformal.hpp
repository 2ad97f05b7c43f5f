#ifndef BNRAD_CONFORMAL_HPP
#define BNRAD_CONFORMAL_HPP

#include <memory>
#include <vector>

#include "bnrad/profile.hpp"
#include "bnrad/radial.hpp"

namespace bnrad {

// Radial change of variables theta -> r(theta) with
//   r(theta) = exp( int_{theta0}^{theta} ds / a(s) ),   p = a / r,   B = a'/a,
// realizing u'' + (n-1)(a'/a) u' as the radial part of a conformal operator.
// r is defined up to a multiplicative constant; this construction anchors
// r(theta0) = 1 and all downstream identities are scale-covariant.
class ConformalMap {
public:
  double theta0() const { return theta0_; }
  double theta_min() const { return grid_.front(); }
  double R() const { return profile_.domain_R(); }
  const ProfileFunction& profile() const { return profile_; }

  // continuous evaluators; theta must lie in [theta_min, R]
  double r_of(double theta) const;
  double p_of(double theta) const { return profile_.a(theta) / r_of(theta); }
  double B_of(double theta) const { return profile_.da(theta) / profile_.a(theta); }

  // d p / d theta, exact under the construction's normalization dr/dtheta = r/a
  double dp_dtheta(double theta) const {
    return (profile_.da(theta) - 1.0) / r_of(theta);
  }

  // cached log-spaced grid on [R*1e-6, R] and values there
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& log_grid() const { return s_; }
  const std::vector<double>& r_cache() const { return r_; }
  const std::vector<double>& p_cache() const { return p_; }
  const std::vector<double>& B_cache() const { return B_; }

private:
  friend ConformalMap build_map(const ProfileFunction&, double, std::size_t);
  ConformalMap(ProfileFunction p, double theta0) : profile_(std::move(p)), theta0_(theta0) {}

  ProfileFunction profile_;
  double theta0_;
  std::shared_ptr<const class CumulativeIntegral> inv_a_;  // int 1/a from theta_min
  double log_r_shift_ = 0.0;                               // -int_{theta_min}^{theta0}
  std::vector<double> grid_, s_, r_, p_, B_;
};

// Builds the map; r via adaptive Gauss-Kronrod quadrature of 1/a (absolute
// tolerance 1e-12). Pass theta0 <= 0 to use the default R/2.
ConformalMap build_map(const ProfileFunction& p, double theta0 = 0.0,
                       std::size_t grid_points = 2048);

// Potential and virial weight of the transformed equation:
//   V = (n-2) p^2 [(n-2)(a'^2 - 1) + 2 a a''] / (4 a^2)
//       (the B-form n/4 p^2B^2 + 1/2 p Bdot - (n-2)/(4r^2) with a = p r
//        substituted; grouped this way it stays finite near 0)
//   T = (n-1) a''/a + a'''/a'
struct PotentialEval {
  std::function<double(double)> V;
  std::function<double(double)> T;
};

PotentialEval potential_eval(const ConformalMap& map, double n);

// V recomputed on the cached grid from p alone,
//   V = (n-2) [ pddot/(2p) + (n-4)/4 (pdot/p)^2 + (n-1)/2 pdot/(r p) ],
// with pdot = dp/dr and pddot = d^2p/dr^2 from the construction relations
// p' = (a'-1)/r, p'' = a''/r - (a'-1)/(a r). Cross-checks potential_eval:
// the two routes share no algebra beyond a = p r.
std::vector<double> potential_pform_on_grid(const ConformalMap& map, double n);

// Max over grid points with theta >= R*1e-4 of |H(u) - L(u)| where
//   H(u) = u'' + (n-1)(a'/a) u'            (theta derivatives)
//   L(u) = p^{-n} r^{1-n} (r^{n-1} p^{n-2} u_r)_r   (r derivatives)
// All derivatives are taken by 4th-order finite differences on the matched
// grids (u.grid in theta, its image under r in r), never via the chain rule,
// so the construction itself is what is being tested.
double operator_equivalence_residual(const ConformalMap& map, const RadialFunction& u,
                                     double n);

// Integrand of the virial balance with respect to dr, evaluated on v's theta
// grid: v^2 p^3 B [lambda - (n-2)/4 T] r^n. The value at theta = 0 is the
// limit 0. derivs of the returned function are unused and set to zero.
RadialFunction virial_rhs_integrand(const ConformalMap& map, double n, double lambda,
                                    const RadialFunction& v);

// v = p^{n/2-1} u on u's grid (theta derivatives in derivs). At theta = 0 the
// conformal factor is taken at theta_min (its one-sided limit).
RadialFunction to_conformal(const ConformalMap& map, double n, const RadialFunction& u);

}  // namespace bnrad

#endif
