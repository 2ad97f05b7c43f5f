#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "support/schema_check.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/bnrad_cli_out.txt";
  const std::string err_path = "/tmp/bnrad_cli_err.txt";
  const std::string cmd =
      std::string(BNRAD_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

json load_schema(const std::string& name) {
  const std::string path = std::string(BNRAD_SCHEMA_DIR) + "/" + name;
  std::ifstream is(path);
  REQUIRE_MESSAGE(is.good(), ("missing schema " + path).c_str());
  return json::parse(is);
}

void expect_valid(const std::string& doc_text, const std::string& schema_name) {
  const json doc = json::parse(doc_text);
  const std::string err = bnrad_test::check_schema(doc, load_schema(schema_name));
  CHECK_MESSAGE(err.empty(), err.c_str());
}

}  // namespace

TEST_CASE("thresholds subcommand: values, schema, exit code") {
  const auto r = run_cli("thresholds --profile sinh --n 3 --R 1");
  REQUIRE(r.exit_code == 0);
  expect_valid(r.out, "thresholds.schema.json");
  const json doc = json::parse(r.out);
  CHECK(doc["mu_star"].get<double>() == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(doc["lambda_star"].get<double>() == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("verdict fields appear when lambda is given") {
  const auto r = run_cli("thresholds --profile sinh --n 3 --R 1 --lambda 0.9");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  // lambda exactly at the threshold: still "no solution" (non-strict bound)
  CHECK(doc["verdict"] == "no-solution");
  CHECK(doc["nonexistence_thm2"] == true);
  expect_valid(r.out, "thresholds.schema.json");
}

TEST_CASE("hypothesis violations exit 1 with structured error") {
  const auto r = run_cli("thresholds --profile \"sin(x)\" --n 3 --R 1");
  CHECK(r.exit_code == 1);
  const json err = json::parse(r.err);
  CHECK(err["error"] == "HypothesisViolation");
}

TEST_CASE("x^2 satisfies the hypotheses and exits 0") {
  const auto r = run_cli("thresholds --profile \"x^2\" --n 3 --R 1");
  CHECK(r.exit_code == 0);
}

TEST_CASE("usage errors exit 2 and name the flag") {
  const auto r = run_cli("thresholds --profile sinh --n 1.5 --R 1");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("--n") != std::string::npos);
  const auto r2 = run_cli("thresholds --R -1");
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("--R") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical output") {
  const std::string args = "casebook --n-min 2.5 --n-max 6 --n-steps 4 "
                           "--R-min 0.5 --R-max 2 --R-steps 3 --seed 11";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  expect_valid(a.out, "casebook.schema.json");
}

TEST_CASE("validate subcommand reports failures without failing") {
  const auto r = run_cli("validate --profile \"sin(x)\" --R 1");
  REQUIRE(r.exit_code == 0);
  expect_valid(r.out, "validate.schema.json");
  const json doc = json::parse(r.out);
  CHECK(doc["ok"] == false);
  CHECK(doc["pass_iii"] == false);

  const auto good = run_cli("validate --profile sinh --R 1");
  CHECK(json::parse(good.out)["ok"] == true);
  CHECK(json::parse(good.out)["omega"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("conformal subcommand emits matching json and csv") {
  const auto j = run_cli("conformal --profile x --n 3 --R 1 --points 128");
  REQUIRE(j.exit_code == 0);
  expect_valid(j.out, "conformal.schema.json");
  const json doc = json::parse(j.out);
  CHECK(doc["rows"].size() == 128);

  const auto csv = run_cli("conformal --profile x --n 3 --R 1 --points 128 --format csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.find("theta,r,p,B,V,T") != std::string::npos);
  CHECK(csv.out.find("# config_hash=") != std::string::npos);
}

TEST_CASE("solve + verify round trip through the solution csv") {
  const std::string sol = "/tmp/bnrad_cli_solution.csv";
  const auto s = run_cli("solve --profile sinh --n 3 --R 1 --lambda 5 --out " + sol);
  REQUIRE(s.exit_code == 0);
  expect_valid(s.out, "solve.schema.json");
  const json sdoc = json::parse(s.out);
  REQUIRE(sdoc["found"] == true);
  CHECK(sdoc["note"] == "found above both thresholds");

  const auto v = run_cli("verify --profile sinh --n 3 --R 1 --lambda 5 --solution " +
                         sol + " --spline-suite 10 --seed 3");
  REQUIRE(v.exit_code == 0);
  expect_valid(v.out, "verify.schema.json");
  const json vdoc = json::parse(v.out);
  CHECK(vdoc["pohozaev_rel_mismatch"].get<double>() < 1e-4);
  CHECK(vdoc["virial_rel_mismatch"].get<double>() < 1e-3);
  CHECK(vdoc["spline_suite"]["all_strictly_below_one"] == true);
}

TEST_CASE("solve reports none-found consistently below the threshold") {
  const auto r = run_cli("solve --profile sinh --n 3 --R 1 --lambda 0.5");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["found"] == false);
  CHECK(doc["note"].get<std::string>().find("at or below both non-existence thresholds") !=
        std::string::npos);
}

TEST_CASE("eig subcommand matches the sinc oracle") {
  const auto r = run_cli("eig --profile x --n 3 --R 3.141592653589793");
  REQUIRE(r.exit_code == 0);
  expect_valid(r.out, "eig.schema.json");
  CHECK(json::parse(r.out)["lambda1"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("profile defaults: sinh everywhere, xexp for casebook") {
  const auto t = run_cli("thresholds --n 3 --R 1");
  REQUIRE(t.exit_code == 0);
  CHECK(json::parse(t.out)["profile"] == "sinh");
  const auto cb = run_cli("casebook --n-steps 2 --R-steps 2");
  REQUIRE(cb.exit_code == 0);
  CHECK(json::parse(cb.out)["profile"] == "xexp");
}

TEST_CASE("sweep subcommand json validates and carries eigenvalues on demand") {
  const auto r = run_cli("sweep --profile sinh --n-min 3 --n-max 4 --n-steps 2 "
                         "--R-min 1 --R-max 2 --R-steps 2 --with-eig");
  REQUIRE(r.exit_code == 0);
  expect_valid(r.out, "sweep.schema.json");
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 4);
  for (const auto& row : doc["rows"]) {
    CHECK(row.contains("lambda1"));
    CHECK(row["error"] == "");
  }
}
