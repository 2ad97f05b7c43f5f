#ifndef BNRAD_RADIAL_HPP
#define BNRAD_RADIAL_HPP

#include <string>
#include <vector>

namespace bnrad {

// A function tabulated on a strictly increasing grid in [0, R] together with
// its first derivative. Used for BVP solutions and test functions.
struct RadialFunction {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivs;

  // throws GridMismatch unless sizes match and the grid is strictly increasing
  void check_shape() const;

  std::size_t size() const { return grid.size(); }

  // strict sign changes of `values` across interior points, ignoring
  // entries below `floor` in magnitude
  int count_sign_changes(double floor = 0.0) const;

  void save_csv(const std::string& path) const;          // columns x,u,du
  static RadialFunction load_csv(const std::string& path);
};

}  // namespace bnrad

#endif
