#include <cmath>

#include "bnrad/conformal.hpp"
#include "bnrad/errors.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/profile.hpp"
#include "doctest.h"

using namespace bnrad;

namespace {

// theta-derivative of values cached on the map's log grid
double dtheta(const ConformalMap& map, const std::vector<double>& f, std::size_t i,
              int m, std::size_t stride = 1) {
  const auto& s = map.log_grid();
  const double th = map.grid()[i];
  if (m == 1) return stencil_derivative(s, f, i, 1, stride) / th;
  const double fs = stencil_derivative(s, f, i, 1, stride);
  const double fss = stencil_derivative(s, f, i, 2, stride);
  return (fss - fs) / (th * th);
}

RadialFunction sample(double R, std::size_t n_pts,
                      const std::function<double(double)>& f,
                      const std::function<double(double)>& df) {
  RadialFunction u;
  u.grid = uniform_grid(0.0, R, n_pts);
  u.values.resize(n_pts);
  u.derivs.resize(n_pts);
  for (std::size_t i = 0; i < n_pts; ++i) {
    u.values[i] = f(u.grid[i]);
    u.derivs[i] = df(u.grid[i]);
  }
  return u;
}

}  // namespace

TEST_CASE("linear profile maps to the identity transform") {
  const auto p = make_builtin(ProfileKind::LinearX, 2.0);
  const auto map = build_map(p, 1.0);
  for (double th : {0.01, 0.5, 1.0, 1.7, 2.0}) {
    CHECK(map.r_of(th) == doctest::Approx(th).epsilon(1e-12));
    CHECK(map.p_of(th) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hyperbolic map reproduces the Poincare-ball conformal factor") {
  const double R = 2.0;
  const auto p = make_builtin(ProfileKind::Sinh, R);
  const double theta0 = 2.0 * std::atanh(0.5);
  const auto map = build_map(p, theta0);
  CHECK(map.r_of(theta0) == doctest::Approx(1.0).epsilon(1e-12));

  // normalization constant: r~ = k r with k = tanh(theta0/2) gives
  // r~ = tanh(theta/2) and p~ = p/k = 2/(1 - r~^2)
  const double k = std::tanh(0.5 * theta0);
  for (double th : {0.001, 0.3, 1.0, 1.9}) {
    const double rt = k * map.r_of(th);
    CHECK(rt == doctest::Approx(std::tanh(0.5 * th)).epsilon(1e-11));
    CHECK(map.p_of(th) / k == doctest::Approx(2.0 / (1.0 - rt * rt)).epsilon(1e-9));
  }
}

TEST_CASE("map caches satisfy the construction identities") {
  for (auto kind : {ProfileKind::Sinh, ProfileKind::XExpX}) {
    const double R = 1.0;
    const auto prof = make_builtin(kind, R);
    const auto map = build_map(prof);
    const auto& th = map.grid();
    const auto& r = map.r_cache();
    const auto& p = map.p_cache();
    const auto& B = map.B_cache();

    for (std::size_t i = 0; i + 1 < th.size(); ++i) CHECK(r[i] < r[i + 1]);

    for (std::size_t i = 0; i < th.size(); ++i) {
      CHECK(p[i] > 0.0);
      CHECK(std::abs(prof.a(th[i]) - p[i] * r[i]) <=
            1e-10 * std::max(1.0, std::abs(prof.a(th[i]))));
    }

    // dr/dtheta = 1/p by differencing the cached r
    for (std::size_t i = 2; i + 2 < th.size(); ++i) {
      if (th[i] < 1e-4 * R) continue;
      const double drdth = dtheta(map, r, i, 1);
      CHECK(std::abs(drdth - 1.0 / p[i]) <= 1e-8 * std::max(1.0, 1.0 / p[i]));
    }

    // d2r/dtheta2 = -pdot/p^3 with pdot = dp/dr; differenced directly on the
    // theta abscissae (the log transform cancels badly for near-linear r),
    // wide stencils near the left cutoff against roundoff
    for (std::size_t i = 16; i + 16 < th.size(); ++i) {
      if (th[i] < 1e-4 * R) continue;
      const std::size_t stride = th[i] < 0.01 * R ? 8 : 1;
      const double r2 = stencil_derivative(th, r, i, 2, stride);
      const double pdot = stencil_derivative(th, p, i, 1, stride) * p[i];
      CHECK(std::abs(r2 + pdot / (p[i] * p[i] * p[i])) <= 1e-6);
    }

    // B = 1/(p r) + pdot/p^2 pointwise
    for (std::size_t i = 2; i + 2 < th.size(); ++i) {
      if (th[i] < 1e-4 * R) continue;
      const double pdot = dtheta(map, p, i, 1) * p[i];
      const double rhs = 1.0 / (p[i] * r[i]) + pdot / (p[i] * p[i]);
      CHECK(std::abs(B[i] - rhs) <= 1e-7 * std::max(1.0, std::abs(B[i])));
    }
  }
}

TEST_CASE("operator equivalence: constants are annihilated") {
  const auto map = build_map(make_builtin(ProfileKind::Sinh, 1.0));
  const auto u = sample(1.0, 257, [](double) { return 4.2; }, [](double) { return 0.0; });
  // zero up to difference-weight roundoff
  CHECK(operator_equivalence_residual(map, u, 3.0) < 1e-9);
}

TEST_CASE("operator equivalence: euclidean quadratic is exact") {
  const auto map = build_map(make_builtin(ProfileKind::LinearX, 1.0));
  const auto u = sample(1.0, 513, [](double t) { return t * t; },
                        [](double t) { return 2.0 * t; });
  // H(u) = 2 + 2*2 = 6 = L(u) pointwise; only differencing error remains
  CHECK(operator_equivalence_residual(map, u, 3.0) < 1e-8);
}

TEST_CASE("operator equivalence: smooth test function on the hyperbolic map") {
  const auto map = build_map(make_builtin(ProfileKind::Sinh, 1.0));
  const auto u = sample(1.0, 4096, [](double t) { return std::cos(t); },
                        [](double t) { return -std::sin(t); });
  CHECK(operator_equivalence_residual(map, u, 3.0) < 1e-5);
}

TEST_CASE("potential vanishes for the euclidean profile") {
  const auto map = build_map(make_builtin(ProfileKind::LinearX, 1.0));
  const auto pe = potential_eval(map, 3.0);
  for (double th : {0.01, 0.4, 0.99}) CHECK(std::abs(pe.V(th)) < 1e-12);
}

TEST_CASE("T values on the built-ins") {
  const auto sh = build_map(make_builtin(ProfileKind::Sinh, 1.0));
  for (double n : {3.0, 4.0}) {
    const auto pe = potential_eval(sh, n);
    for (double th : {0.1, 0.5, 0.9})
      CHECK(pe.T(th) == doctest::Approx(n).epsilon(1e-13));
  }
  const auto xe = build_map(make_builtin(ProfileKind::XExpX, 1.5));
  CHECK(potential_eval(xe, 3.0).T(1.0) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("both forms of the potential agree") {
  for (auto kind : {ProfileKind::Sinh, ProfileKind::XExpX, ProfileKind::LinearX}) {
    const double R = 1.0;
    const auto map = build_map(make_builtin(kind, R));
    for (double n : {3.0, 5.0}) {
      const auto pe = potential_eval(map, n);
      const auto v16 = potential_pform_on_grid(map, n);
      const auto& th = map.grid();
      for (std::size_t i = 2; i + 2 < th.size(); ++i) {
        if (th[i] < 1e-4 * R) continue;
        CHECK(std::abs(pe.V(th[i]) - v16[i]) <=
              1e-7 * std::max(1.0, std::abs(pe.V(th[i]))));
      }
    }
  }
}

TEST_CASE("T in B-form agrees with the profile form") {
  // T is a cancellation of O(B^2) ingredients, so agreement is measured
  // relative to the ingredient scale, not to T itself.
  for (auto kind : {ProfileKind::Sinh, ProfileKind::XExpX}) {
    const double R = 1.0;
    const auto map = build_map(make_builtin(kind, R));
    const double n = 3.0;
    const auto pe = potential_eval(map, n);
    const auto& th = map.grid();
    const auto& B = map.B_cache();
    for (std::size_t i = 2; i + 2 < th.size(); ++i) {
      if (th[i] < 1e-4 * R) continue;
      const double Bp = dtheta(map, B, i, 1);
      const double Bpp = dtheta(map, B, i, 2);
      const double T_B = n * B[i] * B[i] + (n + 2.0) * Bp + Bpp / B[i];
      const double scale = std::max({1.0, n * B[i] * B[i], (n + 2.0) * std::abs(Bp),
                                     std::abs(Bpp / B[i])});
      CHECK(std::abs(T_B - pe.T(th[i])) <= 1e-7 * scale);
    }
  }
}

TEST_CASE("dilation identity for the potential") {
  // (1/2) r Vdot + V = (n-2)/4 r B p^3 T
  for (auto kind : {ProfileKind::Sinh, ProfileKind::XExpX}) {
    const double R = 1.0;
    const auto map = build_map(make_builtin(kind, R));
    const double n = 3.0;
    const auto pe = potential_eval(map, n);
    const auto& th = map.grid();
    const auto& r = map.r_cache();
    const auto& p = map.p_cache();
    const auto& B = map.B_cache();
    std::vector<double> V(th.size());
    for (std::size_t i = 0; i < th.size(); ++i) V[i] = pe.V(th[i]);
    const auto& s = map.log_grid();
    for (std::size_t i = 16; i + 16 < th.size(); ++i) {
      if (th[i] < 1e-4 * R) continue;
      // wide stencils near the cutoff (roundoff), narrow ones at the right
      // end (truncation); the identity cancels O(V)-sized terms, so measure
      // against the size of what enters
      const std::size_t stride = th[i] < 0.05 * R ? 4 : 1;
      const double Vs = stencil_derivative(s, V, i, 1, stride);
      const double rs = stencil_derivative(s, r, i, 1, stride);
      const double Vdot = Vs / rs;  // dV/dr differenced, no chain rule through p
      const double lhs = 0.5 * r[i] * Vdot + V[i];
      const double rhs = 0.25 * (n - 2.0) * r[i] * B[i] * p[i] * p[i] * p[i] *
                         pe.T(th[i]);
      const double scale = std::max({1.0, std::abs(rhs), std::abs(V[i])});
      CHECK(std::abs(lhs - rhs) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("substitution consistency between the two equation forms") {
  // residual of the transformed equation equals p^{1+n/2} times the residual
  // of the original one under u = p^{1-n/2} v, for any smooth v
  const double R = 1.0;
  const double n = 3.0;
  const double lambda = 0.7;
  const double q = (n + 2.0) / (n - 2.0);
  for (auto kind : {ProfileKind::Sinh, ProfileKind::XExpX}) {
    const auto prof = make_builtin(kind, R);
    const auto map = build_map(prof);
    const auto pe = potential_eval(map, n);

    const std::size_t N = 2048;
    const auto theta = uniform_grid(0.02 * R, R, N);
    std::vector<double> rr(N), pp(N), vv(N), uu(N);
    for (std::size_t i = 0; i < N; ++i) {
      rr[i] = map.r_of(theta[i]);
      pp[i] = map.p_of(theta[i]);
      vv[i] = std::cos(1.3 * theta[i]);
      uu[i] = std::pow(pp[i], 1.0 - 0.5 * n) * vv[i];
    }
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < N; ++i) {
      const double H = stencil_derivative(theta, uu, i, 2) +
                       (n - 1.0) * map.B_of(theta[i]) * stencil_derivative(theta, uu, i, 1);
      const double res13 =
          -H - lambda * uu[i] - std::pow(std::abs(uu[i]), q - 1.0) * uu[i];
      const double vddot = stencil_derivative(rr, vv, i, 2);
      const double vdot = stencil_derivative(rr, vv, i, 1);
      const double res15 = -vddot - (n - 1.0) / rr[i] * vdot + pe.V(theta[i]) * vv[i] -
                           lambda * pp[i] * pp[i] * vv[i] -
                           std::pow(std::abs(vv[i]), q - 1.0) * vv[i];
      const double scaled = std::pow(pp[i], 1.0 + 0.5 * n) * res13;
      worst = std::max(worst, std::abs(res15 - scaled));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("virial integrand") {
  const double R = 1.0;
  const double n = 3.0;
  const auto map = build_map(make_builtin(ProfileKind::Sinh, R));

  RadialFunction v;
  v.grid = uniform_grid(0.0, R, 129);
  v.values.assign(129, 0.0);
  v.derivs.assign(129, 0.0);
  auto zero = virial_rhs_integrand(map, n, 0.5, v);
  for (double w : zero.values) CHECK(w == 0.0);

  // lambda equal to (n-2)/4 T with constant T = n makes the bracket vanish
  for (std::size_t i = 0; i < v.size(); ++i) {
    v.values[i] = std::sin(v.grid[i]);
    v.derivs[i] = std::cos(v.grid[i]);
  }
  const double lam = (n - 2.0) / 4.0 * n;
  auto bal = virial_rhs_integrand(map, n, lam, v);
  for (double w : bal.values) CHECK(std::abs(w) < 1e-14);
}

TEST_CASE("to_conformal transforms values and derivatives") {
  const double R = 1.0;
  const double n = 4.0;
  const auto map = build_map(make_builtin(ProfileKind::Sinh, R));
  const auto u = sample(R, 1025, [](double t) { return std::cos(t); },
                        [](double t) { return -std::sin(t); });
  const auto v = to_conformal(map, n, u);
  // values: v = p^{n/2-1} u
  for (std::size_t i : {std::size_t(100), std::size_t(512), std::size_t(1000)}) {
    const double p = map.p_of(u.grid[i]);
    CHECK(v.values[i] == doctest::Approx(std::pow(p, 0.5 * n - 1.0) * u.values[i])
                             .epsilon(1e-12));
  }
  // derivatives agree with differencing the transformed values
  for (std::size_t i = 2; i + 2 < v.size(); i += 97) {
    if (v.grid[i] < 1e-3 * R) continue;
    const double dv = stencil_derivative(v.grid, v.values, i, 1);
    CHECK(std::abs(dv - v.derivs[i]) < 1e-6 * std::max(1.0, std::abs(dv)));
  }
}

TEST_CASE("non-integrable 1/a away from zero fails the build") {
  // a = sin has an interior zero on (0, 4); the r integral diverges there
  const auto p = parse_profile("sin(x)", 4.0);
  CHECK_THROWS_AS(build_map(p, 1.0), QuadratureFailure);
}

TEST_CASE("map rejects out-of-range requests") {
  const auto map = build_map(make_builtin(ProfileKind::Sinh, 1.0));
  CHECK_THROWS_AS(build_map(make_builtin(ProfileKind::Sinh, 1.0), 1.5), ConfigError);
  RadialFunction bad;
  bad.grid = {0.0, 0.5, 1.5};
  bad.values = {1.0, 1.0, 1.0};
  bad.derivs = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(operator_equivalence_residual(map, bad, 3.0), GridMismatch);
}
