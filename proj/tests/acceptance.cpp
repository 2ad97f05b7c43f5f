// Acceptance suite: one line per criterion, nonzero exit on unexpected
// failure. Tolerances are fixed here, not tuned at runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bnrad/casebook.hpp"
#include "bnrad/conformal.hpp"
#include "bnrad/identities.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/profile.hpp"
#include "bnrad/solver.hpp"
#include "bnrad/thresholds.hpp"
#include "support/fd_eigen.hpp"

using namespace bnrad;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail,
            bool documented_defect = false) {
  if (pass) {
    std::printf("[PASS] %s: %s\n", name.c_str(), detail.c_str());
  } else if (documented_defect) {
    std::printf("[FAIL, documented defect -- not counted] %s: %s\n", name.c_str(),
                detail.c_str());
  } else {
    std::printf("[FAIL] %s: %s\n", name.c_str(), detail.c_str());
    ++failures;
  }
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

double rel_mismatch(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

RadialFunction spline_case(double R, std::uint64_t seed, std::uint64_t case_idx) {
  std::vector<double> knots, vals;
  for (int j = 0; j <= 8; ++j) {
    knots.push_back(R * j / 8.0);
    vals.push_back(j == 8 ? 0.0 : 2.0 * splitmix64_unit(seed, case_idx * 8 + j) - 1.0);
  }
  CubicSpline sp(knots, vals);
  RadialFunction u;
  u.grid = uniform_grid(0.0, R, 1025);
  for (double x : u.grid) {
    u.values.push_back(sp.value(x));
    u.derivs.push_back(sp.derivative(x));
  }
  u.values.back() = 0.0;
  return u;
}

// --- criterion 1: hyperbolic closed-form thresholds --------------------------
void criterion_1() {
  Timer t;
  double worst = 0.0;
  for (double n : {3.0, 4.0, 5.0, 6.0}) {
    for (double R : {0.5, 1.0, 2.0}) {
      const auto rep = compute_thresholds(make_builtin(ProfileKind::Sinh, R), n);
      worst = std::max(worst, rel_err(rep.mu_star, n * (n - 2.0) / 4.0));
      worst = std::max(worst,
                       rel_err(rep.lambda_star, n * n * (n - 1.0) / (4.0 * (n + 2.0))));
    }
  }
  const double sec = t.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel err %.2e (tol 1e-9), %.2f s (limit 1 s)",
                worst, sec);
  report("criterion 1 (hyperbolic thresholds)", worst < 1e-9 && sec < 1.0, buf);
}

// --- criterion 2: euclidean degeneracy ---------------------------------------
void criterion_2() {
  double worst = 0.0;
  for (double n : {3.0, 4.0, 6.0}) {
    for (double R : {0.5, 1.0, 2.0}) {
      const auto rep = compute_thresholds(make_builtin(ProfileKind::LinearX, R), n);
      for (double v : {rep.mu_star, rep.lambda_star, rep.D, rep.omega, rep.C})
        worst = std::max(worst, std::abs(v));
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |threshold| %.2e (tol 1e-12)", worst);
  report("criterion 2 (euclidean degeneracy)", worst < 1e-12, buf);
}

// shared sweep for criteria 3 and 5
struct XexpCell {
  double n, R, mu, ls;
  CBranch branch;
};

std::vector<XexpCell> xexp_sweep_50x50() {
  const auto ns = uniform_grid(2.1, 10.0, 50);
  const auto Rs = uniform_grid(0.1, 10.0, 50);
  std::vector<XexpCell> cells;
  cells.reserve(2500);
  auto factory = [](double R) { return make_builtin(ProfileKind::XExpX, R); };
  for (const auto& cell : sweep(factory, ns, Rs)) {
    XexpCell c{cell.n, cell.R, cell.report.mu_star, cell.report.lambda_star,
               cell.report.C_branch};
    cells.push_back(c);
  }
  return cells;
}

void criterion_3(const std::vector<XexpCell>& cells, double sweep_seconds) {
  double worst = 0.0;
  for (const auto& c : cells) {
    worst = std::max(worst, rel_err(c.mu, closed_mu_star(c.n, c.R)));
    worst = std::max(worst, rel_err(c.ls, closed_lambda_star(c.n, c.R).value));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "50x50 grid, max rel err %.2e (tol 1e-8), %.2f s (limit 30 s)", worst,
                sweep_seconds);
  report("criterion 3 (dual-path closed forms)", worst < 1e-8 && sweep_seconds < 30.0,
         buf);
}

// --- criterion 4: crossover constants ----------------------------------------
void criterion_4() {
  const double nhat2 = crossover(2.0).n_hat;
  const double ntilde2 = crossover(2.0).n_tilde;
  const double ntilde_inf = crossover(1e8).n_tilde;
  const bool pass = std::abs(nhat2 - 2.35078) < 5e-6 &&
                    std::abs(ntilde2 - 8.0) < 1e-9 && ntilde_inf > 4.0 &&
                    ntilde_inf < 4.001;
  char buf[160];
  std::snprintf(buf, sizeof buf, "n_hat(2)=%.6f, n_tilde(2)=%.12f, n_tilde(1e8)=%.6f",
                nhat2, ntilde2, ntilde_inf);
  report("criterion 4 (crossover constants)", pass, buf);
}

// --- criterion 5: sign pattern of F ------------------------------------------
void criterion_5(const std::vector<XexpCell>& cells) {
  // clause 1: sign(F) == sign(lambda* - mu*) at every valid cell (n >= n_hat)
  int mismatches = 0, checked = 0;
  for (const auto& c : cells) {
    const double s = (1.0 + c.R) * (2.0 + c.R);
    if (c.n < crossover(s).n_hat) continue;
    const double F = comparison_F(c.n, c.R);
    const double diff = c.ls - c.mu;
    // near-tie cells cannot carry sign information at floating precision
    if (std::abs(F) < 1e-9 || std::abs(diff) < 1e-10 * std::max(c.ls, c.mu)) continue;
    ++checked;
    if ((F > 0) != (diff > 0)) ++mismatches;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d sign mismatches over %d valid cells", mismatches,
                checked);
  report("criterion 5 (sign pattern F vs lambda*-mu*)", mismatches == 0 && checked > 2000,
         buf);

  // second reference claim as stated: lambda* >= mu* on every n >= 4 cell.
  // It contradicts F itself: n_tilde decreases from 8 to 4, so for any n > 4
  // large R hands the win to mu*. The clean version of the claim is n <= 4.
  int violations = 0;
  double vx_n = 0, vx_R = 0;
  for (const auto& c : cells) {
    if (c.n >= 4.0 && c.ls < c.mu * (1.0 - 1e-12)) {
      if (violations == 0) {
        vx_n = c.n;
        vx_R = c.R;
      }
      ++violations;
    }
  }
  std::snprintf(buf, sizeof buf,
                "%d violations (first at n=%.3f R=%.3f); contradicts the F sign "
                "pattern above -- the clean claim (n <= 4) is criterion 5c",
                violations, vx_n, vx_R);
  report("criterion 5b (lambda*>=mu* for n>=4 cells, as stated)", violations == 0, buf,
         /*documented_defect=*/true);

  // corrected claim and the spec's own boundary invariant
  int corrected_violations = 0;
  for (const auto& c : cells)
    if (c.n <= 4.0 && c.ls < c.mu * (1.0 - 1e-12)) ++corrected_violations;

  // winner flip along each R column tracks n_tilde within one grid cell
  const auto ns = uniform_grid(2.1, 10.0, 50);
  const double dn = ns[1] - ns[0];
  int boundary_misses = 0;
  for (std::size_t j = 0; j < 50; ++j) {
    const double R = cells[j].R;
    const double nt = crossover((1.0 + R) * (2.0 + R)).n_tilde;
    double flip_n = std::nan("");
    for (std::size_t i = 0; i + 1 < 50; ++i) {
      const auto& lo = cells[i * 50 + j];
      const auto& hi = cells[(i + 1) * 50 + j];
      if ((lo.ls >= lo.mu) && (hi.ls < hi.mu)) {
        flip_n = 0.5 * (lo.n + hi.n);
        break;
      }
    }
    if (!std::isfinite(flip_n)) {
      if (nt > 2.1 && nt < 10.0) ++boundary_misses;  // flip expected but absent
      continue;
    }
    if (std::abs(flip_n - nt) > dn) ++boundary_misses;
  }
  std::snprintf(buf, sizeof buf,
                "corrected n<=4 violations: %d; winner boundary off-by->1-cell in "
                "%d/50 columns",
                corrected_violations, boundary_misses);
  report("criterion 5c (corrected claim: n<=4 cells and n_tilde boundary)",
         corrected_violations == 0 && boundary_misses == 0, buf);
}

// --- criterion 6: Hardy property suite ---------------------------------------
void criterion_6() {
  Timer t;
  double worst_ratio = 0.0;
  int cases = 0;
  for (auto kind : {ProfileKind::Sinh, ProfileKind::LinearX, ProfileKind::XExpX}) {
    for (double n : {3.0, 4.0, 5.0}) {
      const auto prof = make_builtin(kind, 1.0);
      const auto frame = build_frame(prof, n, compute_thresholds(prof, n).C);
      for (std::uint64_t k = 0; k < 100; ++k) {
        const auto u = spline_case(1.0, 20260811, k);
        worst_ratio = std::max(worst_ratio, hardy_check(frame, u));
        ++cases;
      }
    }
  }
  const double sec = t.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d spline cases, max ratio %.6f (< 1 strictly), %.2f s (limit 10 s)",
                cases, worst_ratio, sec);
  report("criterion 6 (Hardy property suite)",
         worst_ratio < 1.0 - 1e-12 && cases == 900 && sec < 10.0, buf);
}

// --- criterion 7: Lemma margin suite ------------------------------------------
void criterion_7() {
  Timer t;
  const auto ns = uniform_grid(2.1, 10.0, 50);
  const auto Rs = uniform_grid(0.1, 10.0, 50);
  double worst = 0.0;
  for (auto kind : {ProfileKind::Sinh, ProfileKind::LinearX, ProfileKind::XExpX}) {
    for (double n : ns) {
      // one frame per (profile, n) at R_max; margins for smaller R restrict
      // the grid and use that cell's C
      const auto prof = make_builtin(kind, Rs.back());
      const auto frame = build_frame(prof, n, 0.0);
      std::vector<double> xs, S, G, Gp, scale;
      for (double x : frame.grid()) {
        if (x <= 0.0) continue;
        xs.push_back(x);
        S.push_back(frame.S(x));
        G.push_back(frame.G(x));
        Gp.push_back(frame.Gprime(x));
        // S is a difference of these two; quadrature roundoff scales with them
        scale.push_back(std::abs(G.back() * prof.da(x) / prof.a(x)) +
                        Gp.back() / n);
      }
      for (double R : Rs) {
        const auto rep = compute_thresholds(make_builtin(kind, R), n);
        for (std::size_t i = 0; i < xs.size() && xs[i] <= R; ++i) {
          const double margin = S[i] - rep.C * G[i] * G[i] / Gp[i];
          const double tol =
              std::max(1e-9, 1e-12 * (scale[i] + rep.C * G[i] * G[i] / Gp[i]));
          worst = std::min(worst, margin / tol);  // pass iff >= -1
        }
      }
    }
  }
  const double sec = t.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "min margin/tolerance %.3e over 3x50x50 cells (>= -1 passes; "
                "tolerance max(1e-9, 1e-12 x term size)), %.1f s",
                worst, sec);
  report("criterion 7 (lemma margin suite)", worst >= -1.0, buf);
}

// --- criterion 8: solver oracles ------------------------------------------------
void criterion_8() {
  const double l1_sinc = first_eigenvalue(make_builtin(ProfileKind::LinearX, M_PI), 3.0);
  bool pass = std::abs(l1_sinc - 1.0) < 1e-8;
  double worst_fd = 0.0;
  for (auto kind : {ProfileKind::Sinh, ProfileKind::LinearX, ProfileKind::XExpX}) {
    for (double n : {3.0, 4.0}) {
      for (double R : {1.0, 2.0}) {
        const auto prof = make_builtin(kind, R);
        const double shot = first_eigenvalue(prof, n);
        const double fd = bnrad_test::fd_first_eigenvalue(prof, n);
        worst_fd = std::max(worst_fd, rel_err(shot, fd));
      }
    }
  }
  pass = pass && worst_fd < 1e-6;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "lambda1(sinc)=%.10f (|err|<1e-8), max FD-oracle rel err %.2e (tol 1e-6)",
                l1_sinc, worst_fd);
  report("criterion 8 (solver eigenvalue oracles)", pass, buf);
}

// --- criteria 9 and 10: shooting consistency and identity residuals -----------
void criteria_9_10() {
  struct Accepted {
    ProfileKind kind;
    double n, R;
    ShootingResult res;
  };
  std::vector<Accepted> accepted;
  bool pass9 = true;
  std::string detail9;

  for (auto kind : {ProfileKind::Sinh, ProfileKind::LinearX, ProfileKind::XExpX}) {
    for (double n : {3.0, 4.0}) {
      for (double R : {0.5, 1.0, 2.0}) {
        const auto prof = make_builtin(kind, R);
        const auto rep = compute_thresholds(prof, n);
        const double t = std::min(rep.mu_star, rep.lambda_star);
        const double hi = std::max(rep.mu_star, rep.lambda_star);
        for (double lambda : {0.0, 0.5 * t, t}) {
          const ProblemSpec spec(prof, n, R, lambda);
          if (shoot(spec, {1e-3, 1e3}).has_value()) {
            pass9 = false;
            char b[120];
            std::snprintf(b, sizeof b, " unexpected solution at %s n=%g R=%g l=%g;",
                          profile_kind_name(kind), n, R, lambda);
            detail9 += b;
          }
        }
        // probes above the thresholds; found solutions must satisfy the
        // sandwich threshold < lambda < lambda1
        const double l1 = first_eigenvalue(prof, n);
        for (double lambda : {0.5 * (hi + l1), 0.75 * l1}) {
          if (lambda <= hi || lambda >= l1) continue;
          const ProblemSpec spec(prof, n, R, lambda);
          auto res = shoot(spec, {1e-3, 1e3});
          if (!res) continue;
          if (!(lambda > hi && lambda < l1)) {
            pass9 = false;
            detail9 += " sandwich violated;";
          }
          accepted.push_back({kind, n, R, std::move(*res)});
        }
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "no solutions at lambda in {0, t/2, t}; %zu accepted above thresholds, "
                "all inside (max(mu*,lambda*), lambda1)%s",
                accepted.size(), detail9.c_str());
  report("criterion 9 (non-existence consistency)", pass9 && !accepted.empty(), buf);

  // criterion 10 on every accepted solution
  double worst_poho = 0.0, worst_vir = 0.0;
  for (const auto& acc : accepted) {
    const auto prof = make_builtin(acc.kind, acc.R);
    const ProblemSpec spec(prof, acc.n, acc.R, acc.res.lambda);
    const auto frame = build_frame(prof, acc.n, compute_thresholds(prof, acc.n).C);
    auto [plhs, prhs] = pohozaev_balance(frame, spec, acc.res.solution);
    worst_poho = std::max(worst_poho, rel_mismatch(plhs, prhs));
    const auto map = build_map(prof);
    const auto v = to_conformal(map, acc.n, acc.res.solution);
    auto [vlhs, vrhs] = virial_balance(map, spec, v);
    worst_vir = std::max(worst_vir, rel_mismatch(vlhs, vrhs));
  }
  std::snprintf(buf, sizeof buf,
                "%zu solutions: max pohozaev mismatch %.2e (tol 1e-4), max virial "
                "mismatch %.2e (tol 1e-3)",
                accepted.size(), worst_poho, worst_vir);
  report("criterion 10 (identity residuals on solutions)",
         !accepted.empty() && worst_poho < 1e-4 && worst_vir < 1e-3, buf);
}

// --- criterion 11: conformal construction --------------------------------------
void criterion_11() {
  // hyperbolic conformal factor after theta0 normalization
  double worst_p = 0.0;
  {
    const auto map = build_map(make_builtin(ProfileKind::Sinh, 2.0),
                               2.0 * std::atanh(0.5));
    const double k = std::tanh(map.theta0() / 2.0);
    for (std::size_t i = 0; i < map.grid().size(); ++i) {
      const double rt = k * map.r_cache()[i];
      worst_p = std::max(worst_p,
                         std::abs(map.p_cache()[i] / k - 2.0 / (1.0 - rt * rt)));
    }
  }
  // operator equivalence on the smooth suite
  double worst_res = 0.0;
  {
    const auto map = build_map(make_builtin(ProfileKind::Sinh, 1.0));
    RadialFunction u;
    u.grid = uniform_grid(0.0, 1.0, 4096);
    for (double x : u.grid) {
      u.values.push_back(std::cos(x));
      u.derivs.push_back(-std::sin(x));
    }
    worst_res = std::max(worst_res, operator_equivalence_residual(map, u, 3.0));

    // even profile near 0 keeps the test function in the u'(0) = 0 class the
    // operator acts on (otherwise H and L both diverge like 1/theta)
    RadialFunction w;
    w.grid = uniform_grid(0.0, 1.0, 4096);
    for (double x : w.grid) {
      w.values.push_back(std::exp(-x * x) + 0.3 * x * x * x * x);
      w.derivs.push_back(-2.0 * x * std::exp(-x * x) + 1.2 * x * x * x);
    }
    worst_res = std::max(worst_res, operator_equivalence_residual(map, w, 4.0));

    const auto lin = build_map(make_builtin(ProfileKind::LinearX, 1.0));
    RadialFunction quad;
    quad.grid = uniform_grid(0.0, 1.0, 4096);
    for (double x : quad.grid) {
      quad.values.push_back(x * x);
      quad.derivs.push_back(2.0 * x);
    }
    worst_res = std::max(worst_res, operator_equivalence_residual(lin, quad, 3.0));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max |p - 2/(1-r^2)| %.2e (tol 1e-9); max operator residual %.2e "
                "(tol 1e-5)",
                worst_p, worst_res);
  report("criterion 11 (conformal construction)", worst_p < 1e-9 && worst_res < 1e-5,
         buf);
}

}  // namespace

int main() {
  Timer total;
  criterion_1();
  criterion_2();
  Timer sweep_timer;
  const auto cells = xexp_sweep_50x50();
  const double sweep_sec = sweep_timer.seconds();
  criterion_3(cells, sweep_sec);
  criterion_4();
  criterion_5(cells);
  criterion_6();
  criterion_7();
  criterion_8();
  criteria_9_10();
  criterion_11();
  std::printf("acceptance: %s (%d unexpected failure%s, %.1f s)\n",
              failures == 0 ? "PASS" : "FAIL", failures, failures == 1 ? "" : "s",
              total.seconds());
  return failures == 0 ? 0 : 1;
}
