// bnrad: thresholds, conformal transform, shooting solver, and identity
// checks for the generalized radial Brezis-Nirenberg problem
//   -u'' - (n-1)(a'/a)u' = lambda u + |u|^{q-1}u,  u'(0) = u(R) = 0.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bnrad/casebook.hpp"
#include "bnrad/conformal.hpp"
#include "bnrad/errors.hpp"
#include "bnrad/identities.hpp"
#include "bnrad/numerics.hpp"
#include "bnrad/profile.hpp"
#include "bnrad/radial.hpp"
#include "bnrad/solver.hpp"
#include "bnrad/thresholds.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Common {
  std::string profile = "sinh";
  double n = 3.0;
  double R = 1.0;
  double lambda = 0.0;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
};

// reproducibility header carried by every output
ordered_json meta_block(const std::string& subcommand, const json& config,
                        std::uint64_t seed) {
  ordered_json m;
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["config_hash"] = hex64(fnv1a(config.dump()));
  m["seed"] = seed;
  return m;
}

void emit(const Common& c, const ordered_json& doc) {
  if (c.out.empty()) {
    std::cout << doc.dump() << "\n";
  } else {
    std::ofstream os(c.out);
    if (!os) throw bnrad::ConfigError("cannot open --out path '" + c.out + "'");
    os << doc.dump() << "\n";
  }
}

void emit_csv(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(c.out);
    if (!os) throw bnrad::ConfigError("cannot open --out path '" + c.out + "'");
    os << text;
  }
}

bnrad::ProfileFunction resolve_profile(const Common& c) {
  return bnrad::make_profile(c.profile, c.R);
}

void require_hypotheses(const bnrad::ProfileFunction& p) {
  const auto rep = bnrad::validate_hypotheses(p);
  if (!rep.ok()) throw bnrad::HypothesisViolation(rep.message);
}

json config_json(const Common& c, std::initializer_list<std::pair<std::string, json>> extra) {
  json cfg;  // nlohmann::json orders keys lexicographically: canonical hash input
  cfg["profile"] = c.profile;
  cfg["n"] = c.n;
  cfg["R"] = c.R;
  cfg["lambda"] = c.lambda;
  cfg["format"] = c.format;
  cfg["seed"] = c.seed;
  for (const auto& [k, v] : extra) cfg[k] = v;
  return cfg;
}

std::string csv_header_line(const ordered_json& meta) {
  std::string s;
  s += "# version=" + meta["version"].get<std::string>() + "\n";
  s += "# config_hash=" + meta["config_hash"].get<std::string>() + "\n";
  s += "# seed=" + std::to_string(meta["seed"].get<std::uint64_t>()) + "\n";
  return s;
}

int cmd_validate(const Common& c) {
  const auto cfg = config_json(c, {});
  const auto p = resolve_profile(c);
  const auto rep = bnrad::validate_hypotheses(p);
  ordered_json doc;
  doc["meta"] = meta_block("validate", cfg, c.seed);
  doc["profile"] = p.source();
  doc["R"] = c.R;
  doc["pass_i"] = rep.pass_i;
  doc["pass_ii"] = rep.pass_ii;
  doc["pass_iii"] = rep.pass_iii;
  doc["ok"] = rep.ok();
  doc["a_at_zero"] = rep.a_at_zero;
  doc["min_da"] = rep.min_da;
  doc["min_da_location"] = rep.min_da_location;
  doc["omega"] = std::isfinite(rep.omega) ? json(rep.omega) : json();
  doc["omega_location"] = rep.omega_location;
  doc["message"] = rep.message;
  emit(c, doc);
  return 0;
}

int cmd_thresholds(const Common& c, bool lambda_given) {
  const auto cfg = config_json(c, {{"lambda_given", lambda_given}});
  const auto p = resolve_profile(c);
  require_hypotheses(p);
  const auto rep = bnrad::compute_thresholds(p, c.n);
  const auto meta = meta_block("thresholds", cfg, c.seed);

  if (c.format == "csv") {
    std::string text = csv_header_line(meta);
    text += "profile,n,R," + bnrad::ThresholdReport::csv_header() + "\n";
    text += p.source() + "," + std::to_string(c.n) + "," + std::to_string(c.R) + "," +
            rep.to_csv_row() + "\n";
    emit_csv(c, text);
    return 0;
  }

  ordered_json doc;
  doc["meta"] = meta;
  doc["profile"] = p.source();
  doc["n"] = c.n;
  doc["R"] = c.R;
  doc["D"] = rep.D;
  doc["omega"] = rep.omega;
  doc["C"] = rep.C;
  doc["C_branch"] = bnrad::c_branch_name(rep.C_branch);
  doc["mu_star"] = rep.mu_star;
  doc["lambda_star"] = rep.lambda_star;
  doc["argmin_D"] = rep.argmin_D;
  doc["argmin_mu"] = rep.argmin_mu;
  if (lambda_given) {
    doc["lambda"] = c.lambda;
    // the theorems are non-strict; absorb threshold roundoff so that lambda
    // "exactly at" the threshold reads as no-solution
    auto at_most = [](double x, double bound) {
      return x <= bound + 1e-12 * std::max(1.0, std::abs(bound));
    };
    const bool thm1 = at_most(c.lambda, rep.mu_star);
    const bool thm2 = at_most(c.lambda, rep.lambda_star);
    doc["nonexistence_thm1"] = thm1;
    doc["nonexistence_thm2"] = thm2;
    doc["verdict"] = (thm1 || thm2) ? "no-solution" : "above-both-thresholds";
  }
  emit(c, doc);
  return 0;
}

int cmd_conformal(const Common& c, double theta0, std::size_t points) {
  const auto cfg = config_json(c, {{"theta0", theta0}, {"points", points}});
  const auto p = resolve_profile(c);
  require_hypotheses(p);
  const auto map = bnrad::build_map(p, theta0, points);
  const auto pe = bnrad::potential_eval(map, c.n);
  const auto meta = meta_block("conformal", cfg, c.seed);

  if (c.format == "csv") {
    std::string text = csv_header_line(meta);
    text += "theta,r,p,B,V,T\n";
    char buf[256];
    for (std::size_t i = 0; i < map.grid().size(); ++i) {
      const double th = map.grid()[i];
      std::snprintf(buf, sizeof buf,
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", th,
                    map.r_cache()[i], map.p_cache()[i], map.B_cache()[i], pe.V(th),
                    pe.T(th));
      text += buf;
    }
    emit_csv(c, text);
    return 0;
  }

  ordered_json doc;
  doc["meta"] = meta;
  doc["profile"] = p.source();
  doc["n"] = c.n;
  doc["R"] = c.R;
  doc["theta0"] = map.theta0();
  doc["columns"] = {"theta", "r", "p", "B", "V", "T"};
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < map.grid().size(); ++i) {
    const double th = map.grid()[i];
    rows.push_back({th, map.r_cache()[i], map.p_cache()[i], map.B_cache()[i],
                    pe.V(th), pe.T(th)});
  }
  doc["rows"] = std::move(rows);
  emit(c, doc);
  return 0;
}

int cmd_solve(const Common& c, double alpha_min, double alpha_max,
              const std::string& mode_name, double ode_tol) {
  const auto cfg = config_json(c, {{"alpha_min", alpha_min},
                                   {"alpha_max", alpha_max},
                                   {"mode", mode_name},
                                   {"ode_tol", ode_tol}});
  const auto p = resolve_profile(c);
  require_hypotheses(p);
  const bnrad::ProblemSpec spec(p, c.n, c.R, c.lambda);
  const auto mode = mode_name == "linear" ? bnrad::SolveMode::Linear
                                          : bnrad::SolveMode::Nonlinear;
  bnrad::SolverOptions opt;
  opt.ode_rtol = ode_tol;
  const auto rep = bnrad::compute_thresholds(p, c.n);
  const auto res = bnrad::shoot(spec, {alpha_min, alpha_max}, mode, opt);

  ordered_json doc;
  doc["meta"] = meta_block("solve", cfg, c.seed);
  doc["profile"] = p.source();
  doc["n"] = c.n;
  doc["R"] = c.R;
  doc["lambda"] = c.lambda;
  doc["mode"] = mode_name;
  doc["mu_star"] = rep.mu_star;
  doc["lambda_star"] = rep.lambda_star;
  doc["found"] = res.has_value();
  if (res) {
    doc["alpha"] = res->alpha;
    doc["residual"] = res->residual;
    doc["n_sign_changes"] = res->n_sign_changes;
    doc["u_at_zero"] = res->solution.values.front();
    doc["du_at_R"] = res->solution.derivs.back();
    if (!c.out.empty()) {
      res->solution.save_csv(c.out);
      doc["solution_csv"] = c.out;
    }
    doc["note"] = c.lambda > std::max(rep.mu_star, rep.lambda_star)
                      ? "found above both thresholds"
                      : "found below a threshold: numerical contradiction, inspect";
  } else {
    // evidence, not proof: the scan is one-parameter
    std::string note = "none-found";
    if (c.lambda <= rep.mu_star && c.lambda <= rep.lambda_star)
      note += " (lambda at or below both non-existence thresholds)";
    else if (c.lambda <= rep.mu_star)
      note += " (lambda at or below the mu_star threshold)";
    else if (c.lambda <= rep.lambda_star)
      note += " (lambda at or below the lambda_star threshold)";
    else
      note += " (above both thresholds; search evidence only)";
    doc["note"] = note;
  }
  Common c_stdout = c;
  c_stdout.out.clear();  // --out holds the solution CSV; the report goes to stdout
  emit(c_stdout, doc);
  return 0;
}

int cmd_eig(const Common& c) {
  const auto cfg = config_json(c, {});
  const auto p = resolve_profile(c);
  require_hypotheses(p);
  const double l1 = bnrad::first_eigenvalue(p, c.n);
  ordered_json doc;
  doc["meta"] = meta_block("eig", cfg, c.seed);
  doc["profile"] = p.source();
  doc["n"] = c.n;
  doc["R"] = c.R;
  doc["lambda1"] = l1;
  emit(c, doc);
  return 0;
}

int cmd_verify(const Common& c, const std::string& solution_path,
               std::size_t spline_suite) {
  const auto cfg =
      config_json(c, {{"solution", solution_path}, {"spline_suite", spline_suite}});
  const auto p = resolve_profile(c);
  require_hypotheses(p);
  const bnrad::ProblemSpec spec(p, c.n, c.R, c.lambda);
  const auto trep = bnrad::compute_thresholds(p, c.n);
  const auto frame = bnrad::build_frame(p, c.n, trep.C);
  const auto map = bnrad::build_map(p);

  bnrad::IdentityReport rep;
  ordered_json doc;
  doc["meta"] = meta_block("verify", cfg, c.seed);
  doc["profile"] = p.source();
  doc["n"] = c.n;
  doc["R"] = c.R;
  doc["lambda"] = c.lambda;

  if (!solution_path.empty()) {
    const auto u = bnrad::RadialFunction::load_csv(solution_path);
    auto [plhs, prhs] = bnrad::pohozaev_balance(frame, spec, u);
    rep.pohozaev_lhs = plhs;
    rep.pohozaev_rhs = prhs;
    rep.hardy_ratio = bnrad::hardy_check(frame, u);
    const auto v = bnrad::to_conformal(map, c.n, u);
    auto [vlhs, vrhs] = bnrad::virial_balance(map, spec, v);
    rep.virial_lhs = vlhs;
    rep.virial_rhs = vrhs;
  }
  auto [margin, margin_at] = bnrad::lemma32_margin(frame);
  rep.lemma32_min_margin = margin;

  doc["identity_report"] = ordered_json::parse(rep.to_json());
  doc["lemma32_argmin"] = margin_at;
  if (!solution_path.empty()) {
    auto mismatch = [](double a, double b) {
      return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
    };
    doc["pohozaev_rel_mismatch"] = mismatch(rep.pohozaev_lhs, rep.pohozaev_rhs);
    doc["virial_rel_mismatch"] = mismatch(rep.virial_lhs, rep.virial_rhs);
  }

  if (spline_suite > 0) {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < spline_suite; ++k) {
      std::vector<double> knots, vals;
      for (int j = 0; j <= 8; ++j) {
        knots.push_back(c.R * j / 8.0);
        vals.push_back(j == 8 ? 0.0
                              : 2.0 * bnrad::splitmix64_unit(c.seed, k * 8 + j) - 1.0);
      }
      bnrad::CubicSpline sp(knots, vals);
      bnrad::RadialFunction u;
      u.grid = bnrad::uniform_grid(0.0, c.R, 1025);
      for (double x : u.grid) {
        u.values.push_back(sp.value(x));
        u.derivs.push_back(sp.derivative(x));
      }
      u.values.back() = 0.0;
      worst = std::max(worst, bnrad::hardy_check(frame, u));
    }
    ordered_json suite;
    suite["count"] = spline_suite;
    suite["max_hardy_ratio"] = worst;
    suite["all_strictly_below_one"] = worst < 1.0;
    doc["spline_suite"] = suite;
  }
  emit(c, doc);
  return 0;
}

struct GridArgs {
  double n_min = 2.1, n_max = 9.0;
  std::size_t n_steps = 10;
  double R_min = 0.1, R_max = 5.0;
  std::size_t R_steps = 10;
};

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps == 1) return {lo};
  return bnrad::uniform_grid(lo, hi, steps);
}

int cmd_sweep(const Common& c, const GridArgs& g, bool with_eig, bool casebook_cols) {
  const auto cfg = config_json(
      c, {{"n_min", g.n_min}, {"n_max", g.n_max}, {"n_steps", g.n_steps},
          {"R_min", g.R_min}, {"R_max", g.R_max}, {"R_steps", g.R_steps},
          {"with_eig", with_eig}, {"casebook", casebook_cols}});
  const std::string name = casebook_cols ? "casebook" : "sweep";
  const auto meta = meta_block(name, cfg, c.seed);
  const std::string profile_text = c.profile;
  auto factory = [&profile_text](double R) {
    return bnrad::make_profile(profile_text, R);
  };
  const auto cells = bnrad::sweep(factory, linspace(g.n_min, g.n_max, g.n_steps),
                                  linspace(g.R_min, g.R_max, g.R_steps), with_eig);

  if (c.format == "csv") {
    std::string text = csv_header_line(meta);
    char buf[512];
    if (casebook_cols) {
      text += "n,R,s,mu_star,lambda_star,D,omega,C,C_branch,winner,F,n_hat,n_tilde,error\n";
      for (const auto& cell : cells) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s,%.17g,"
                      "%.17g,%.17g,%s\n",
                      cell.n, cell.R, cell.s, cell.report.mu_star,
                      cell.report.lambda_star, cell.report.D, cell.report.omega,
                      cell.report.C, bnrad::c_branch_name(cell.report.C_branch),
                      cell.winner.c_str(), cell.F, cell.n_hat, cell.n_tilde,
                      cell.error.c_str());
        text += buf;
      }
    } else {
      text += "n,R,D,omega,C,C_branch,mu_star,lambda_star,argmin_D,argmin_mu,winner,"
              "lambda1,error\n";
      for (const auto& cell : cells) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%s,",
                      cell.n, cell.R, cell.report.D, cell.report.omega, cell.report.C,
                      bnrad::c_branch_name(cell.report.C_branch), cell.report.mu_star,
                      cell.report.lambda_star, cell.report.argmin_D,
                      cell.report.argmin_mu, cell.winner.c_str());
        text += buf;
        if (std::isfinite(cell.lambda1)) {
          std::snprintf(buf, sizeof buf, "%.17g", cell.lambda1);
          text += buf;
        }
        text += "," + cell.error + "\n";
      }
    }
    emit_csv(c, text);
    return 0;
  }

  ordered_json doc;
  doc["meta"] = meta;
  doc["profile"] = c.profile;
  ordered_json rows = ordered_json::array();
  for (const auto& cell : cells) {
    ordered_json r;
    r["n"] = cell.n;
    r["R"] = cell.R;
    r["s"] = cell.s;
    r["mu_star"] = cell.report.mu_star;
    r["lambda_star"] = cell.report.lambda_star;
    r["D"] = cell.report.D;
    r["omega"] = cell.report.omega;
    r["C"] = cell.report.C;
    r["C_branch"] = bnrad::c_branch_name(cell.report.C_branch);
    r["winner"] = cell.winner;
    if (casebook_cols) {
      r["F"] = cell.F;
      r["n_hat"] = cell.n_hat;
      r["n_tilde"] = cell.n_tilde;
    } else {
      r["argmin_D"] = cell.report.argmin_D;
      r["argmin_mu"] = cell.report.argmin_mu;
      if (std::isfinite(cell.lambda1)) r["lambda1"] = cell.lambda1;
    }
    r["error"] = cell.error;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  emit(c, doc);
  return 0;
}

}  // namespace

static int run_main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for the generalized radial Brezis-Nirenberg problem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common c;
  GridArgs g;
  double theta0 = 0.0;
  std::size_t conformal_points = 2048;
  double alpha_min = 1e-3, alpha_max = 1e3;
  std::string mode_name = "nonlinear";
  double ode_tol = 1e-10;
  std::string solution_path;
  std::size_t spline_suite = 0;
  bool with_eig = false;

  auto add_common = [&](CLI::App* sub, bool needs_n) {
    sub->add_option("--profile", c.profile,
                    "builtin (sinh|x|xexp) or expression in x");
    if (needs_n)
      sub->add_option("--n", c.n, "dimension parameter (> 2)")
          ->check(CLI::Range(2.0 + 1e-12, 1e6));
    sub->add_option("--R", c.R, "interval radius")->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out, "output path (stdout when omitted)");
    sub->add_option("--seed", c.seed, "seed for randomized suites");
  };

  auto* validate = app.add_subcommand("validate", "check hypotheses (i)-(iii)");
  add_common(validate, false);

  auto* thresholds =
      app.add_subcommand("thresholds", "non-existence thresholds mu* and lambda*");
  add_common(thresholds, true);
  auto* lambda_opt =
      thresholds->add_option("--lambda", c.lambda, "spectral parameter for a verdict");

  auto* conformal = app.add_subcommand("conformal", "emit theta,r,p,B,V,T table");
  add_common(conformal, true);
  conformal->add_option("--theta0", theta0, "anchor of the r integral (default R/2)");
  conformal->add_option("--points", conformal_points, "grid size")
      ->check(CLI::Range(std::size_t(64), std::size_t(1 << 20)));

  auto* solve = app.add_subcommand("solve", "shooting search for a BVP solution");
  add_common(solve, true);
  solve->add_option("--lambda", c.lambda, "spectral parameter");
  solve->add_option("--alpha-min", alpha_min, "scan lower bound")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--alpha-max", alpha_max, "scan upper bound")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--mode", mode_name, "nonlinear|linear")
      ->check(CLI::IsMember({"nonlinear", "linear"}));
  solve->add_option("--ode-tol", ode_tol, "integrator relative tolerance")
      ->check(CLI::PositiveNumber);

  auto* eig = app.add_subcommand("eig", "first eigenvalue of the linear operator");
  add_common(eig, true);

  auto* verify = app.add_subcommand("verify", "identity checks on a solution");
  add_common(verify, true);
  verify->add_option("--lambda", c.lambda, "spectral parameter");
  verify->add_option("--solution", solution_path, "solution CSV from solve");
  verify->add_option("--spline-suite", spline_suite,
                     "run N seeded Hardy spline checks");

  auto* sweep = app.add_subcommand("sweep", "threshold sweep over (n, R)");
  auto* casebook =
      app.add_subcommand("casebook", "sweep with crossover/comparison columns");
  for (auto* sub : {sweep, casebook}) {
    add_common(sub, false);
    sub->add_option("--n-min", g.n_min)->check(CLI::Range(2.0 + 1e-12, 1e6));
    sub->add_option("--n-max", g.n_max)->check(CLI::Range(2.0 + 1e-12, 1e6));
    sub->add_option("--n-steps", g.n_steps)->check(CLI::Range(std::size_t(1), std::size_t(100000)));
    sub->add_option("--R-min", g.R_min)->check(CLI::PositiveNumber);
    sub->add_option("--R-max", g.R_max)->check(CLI::PositiveNumber);
    sub->add_option("--R-steps", g.R_steps)->check(CLI::Range(std::size_t(1), std::size_t(100000)));
  }
  sweep->add_flag("--with-eig", with_eig, "add the first eigenvalue per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(c);
    if (app.got_subcommand(thresholds)) return cmd_thresholds(c, lambda_opt->count() > 0);
    if (app.got_subcommand(conformal)) return cmd_conformal(c, theta0, conformal_points);
    if (app.got_subcommand(solve))
      return cmd_solve(c, alpha_min, alpha_max, mode_name, ode_tol);
    if (app.got_subcommand(eig)) return cmd_eig(c);
    if (app.got_subcommand(verify)) return cmd_verify(c, solution_path, spline_suite);
    if (app.got_subcommand(sweep)) return cmd_sweep(c, g, with_eig, false);
    if (app.got_subcommand(casebook)) {
      if (casebook->get_option("--profile")->count() == 0) c.profile = "xexp";
      return cmd_sweep(c, g, false, true);
    }
  } catch (const bnrad::Error& e) {
    nlohmann::ordered_json err;
    err["error"] = e.code();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = "Internal";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (...) {
    std::cerr << "internal error\n";
    return 1;
  }
}
