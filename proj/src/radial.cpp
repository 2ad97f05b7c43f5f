#include "bnrad/radial.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bnrad/errors.hpp"

namespace bnrad {

void RadialFunction::check_shape() const {
  if (grid.size() != values.size() || grid.size() != derivs.size())
    throw GridMismatch("radial function: grid/values/derivs lengths differ");
  if (grid.size() < 2) throw GridMismatch("radial function: need >= 2 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw GridMismatch("radial function: grid not strictly increasing");
}

int RadialFunction::count_sign_changes(double floor) const {
  int changes = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::abs(v) <= floor) continue;
    if (prev != 0.0 && (v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  return changes;
}

void RadialFunction::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os.precision(17);
  os << "x,u,du\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << grid[i] << ',' << values[i] << ',' << derivs[i] << '\n';
}

RadialFunction RadialFunction::load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  RadialFunction f;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first) {  // header
      first = false;
      if (line.rfind("x,", 0) == 0) continue;
    }
    std::istringstream ls(line);
    double x, u, du;
    char comma;
    if (!(ls >> x >> comma >> u >> comma >> du))
      throw ConfigError("malformed solution row: '" + line + "'");
    f.grid.push_back(x);
    f.values.push_back(u);
    f.derivs.push_back(du);
  }
  f.check_shape();
  return f;
}

}  // namespace bnrad
