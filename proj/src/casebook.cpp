#include "bnrad/casebook.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "bnrad/errors.hpp"
#include "bnrad/solver.hpp"

namespace bnrad {

double closed_mu_star(double n, double R) {
  return 0.25 * (n - 2.0) * (n + 2.0 * (n * (1.0 + R) - 1.0) / (R * (1.0 + R)));
}

double closed_D(double n, double R) {
  return (1.0 + 2.0 / R) * (2.0 * n - 3.0) + (3.0 + R) / (1.0 + R);
}

double closed_omega(double R) { return 1.0 + 2.0 / R; }

ClosedLambdaStar closed_lambda_star(double n, double R) {
  const double s = (1.0 + R) * (2.0 + R);
  ClosedLambdaStar out;
  if (n >= crossover(s).n_hat) {
    out.value = n * (n - 1.0) / (8.0 * (n + 2.0)) *
                ((1.0 + 2.0 / R) * (2.0 * n - 1.0) + (3.0 + R) / (1.0 + R));
    out.closed_form_valid = true;
  } else {
    // active branch is D/4; still closed-form, but not the headline formula
    out.value = n * (n - 1.0) / 16.0 * closed_D(n, R);
    out.closed_form_valid = false;
  }
  return out;
}

CrossoverPoint crossover(double s) {
  if (!(s > 1.0)) throw ConfigError("crossover: s must exceed 1");
  CrossoverPoint c;
  c.s = s;
  const double t = 1.0 + 1.0 / s;
  c.n_hat = 0.5 * (t + std::sqrt(t * t + 8.0));
  c.n_tilde =
      ((4.0 * s + 1.0) + std::sqrt(16.0 * s * s - 24.0 * s + 33.0)) / (2.0 * (s - 1.0));
  return c;
}

double comparison_F(double n, double R) {
  return 2.0 * (R * R + 3.0 * R) * (4.0 - n) * n + 2.0 * (8.0 - n) * (n - 1.0);
}

std::vector<SweepCell> sweep(const std::function<ProfileFunction(double)>& profile_for_R,
                             const std::vector<double>& n_grid,
                             const std::vector<double>& R_grid,
                             bool with_eigenvalue, unsigned threads) {
  if (n_grid.empty() || R_grid.empty())
    throw ConfigError("sweep: grids must be nonempty");
  const std::size_t total = n_grid.size() * R_grid.size();
  std::vector<SweepCell> cells(total);

  auto run_cell = [&](std::size_t idx) {
    SweepCell& cell = cells[idx];
    const double n = n_grid[idx / R_grid.size()];
    const double R = R_grid[idx % R_grid.size()];
    cell.n = n;
    cell.R = R;
    cell.s = (1.0 + R) * (2.0 + R);
    cell.F = comparison_F(n, R);
    const CrossoverPoint xo = crossover(cell.s);
    cell.n_hat = xo.n_hat;
    cell.n_tilde = xo.n_tilde;
    cell.lambda1 = std::nan("");
    try {
      const ProfileFunction prof = profile_for_R(R);
      cell.report = compute_thresholds(prof, n);
      if (with_eigenvalue) cell.lambda1 = first_eigenvalue(prof, n);
      const double mu = cell.report.mu_star;
      const double ls = cell.report.lambda_star;
      if (std::abs(mu - ls) <= 1e-12 * std::max(std::abs(mu), std::abs(ls)))
        cell.winner = "tie";
      else
        cell.winner = ls > mu ? "lambda_star" : "mu_star";
    } catch (const Error& e) {
      cell.error = std::string(e.code()) + ": " + e.what();
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  unsigned nthreads = threads;
  if (nthreads == 0) {
    nthreads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("BNRAD_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) nthreads = static_cast<unsigned>(v);
    }
  }
  nthreads = std::max(1u, std::min<unsigned>(nthreads, total));

  if (nthreads == 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= total) return;
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return cells;
}

std::string sweep_csv_header() {
  return "n,R,s,mu_star,lambda_star,D,omega,C,C_branch,winner,F,n_hat,n_tilde,"
         "lambda1,error";
}

std::string sweep_csv_row(const SweepCell& cell) {
  std::ostringstream os;
  os.precision(17);
  os << cell.n << ',' << cell.R << ',' << cell.s << ',' << cell.report.mu_star << ','
     << cell.report.lambda_star << ',' << cell.report.D << ',' << cell.report.omega
     << ',' << cell.report.C << ',' << c_branch_name(cell.report.C_branch) << ','
     << cell.winner << ',' << cell.F << ',' << cell.n_hat << ',' << cell.n_tilde
     << ',';
  if (std::isfinite(cell.lambda1)) os << cell.lambda1;
  os << ',' << cell.error;
  return os.str();
}

}  // namespace bnrad
