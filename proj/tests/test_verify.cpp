#include <cmath>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "skf/chart.hpp"
#include "skf/verify.hpp"

using namespace skf;

namespace {

const CheckRecord* find_check(const ResidualReport& report,
                              const std::string& name) {
  for (const auto& check : report.checks)
    if (check.name == name) return &check;
  return nullptr;
}

}  // namespace

TEST_CASE("the flat-space suite passes at rounding-error tolerances") {
  VerifyOptions opt;
  opt.samples = 25;
  const ResidualReport report = run_verify_flat3(opt);
  CHECK(report.pass);
  CHECK(report.chart == "flat3");
  for (const auto& check : report.checks) {
    INFO(check.name, " residual ", check.max_residual);
    CHECK(check.pass);
  }
  const auto* fit = find_check(report, "special_c");
  REQUIRE(fit != nullptr);
  REQUIRE(fit->c.has_value());
  CHECK(std::abs(*fit->c) < 1e-12);
}

TEST_CASE("the Y^{p,q} suite passes end to end") {
  VerifyOptions opt;
  opt.samples = 12;
  const ResidualReport report = run_verify_ypq(0.5, opt);
  for (const auto& check : report.checks) {
    INFO(check.name, " residual ", check.max_residual, " note ", check.note);
    CHECK(check.pass);
  }
  CHECK(report.pass);
  CHECK(report.params.at("a") == 0.5);
  CHECK(report.samples == 12);

  // The fitted constants land on their integer values.
  for (const auto& [name, expected] :
       std::vector<std::pair<std::string, double>>{{"eta_special_c", -2.0},
                                                   {"psi1_special_c", -4.0},
                                                   {"xi_special_c", -3.0},
                                                   {"upsilon_special_c", -3.0}}) {
    const auto* check = find_check(report, name);
    REQUIRE(check != nullptr);
    REQUIRE(check->c.has_value());
    CHECK(std::abs(*check->c - expected) < 1e-6);
  }
}

TEST_CASE("an impossible tolerance scale fails the suite") {
  // flat3 residuals are exactly zero, so use a chart with rounding noise.
  VerifyOptions opt;
  opt.samples = 2;
  opt.tolerance_scale = 1e-30;
  const ResidualReport report = run_verify_ypq(0.6, opt);
  CHECK_FALSE(report.pass);
  bool strict_failure = false;
  for (const auto& check : report.checks)
    strict_failure = strict_failure ||
                     (!check.pass && std::isfinite(check.max_residual) &&
                      check.max_residual > 0.0);
  CHECK(strict_failure);
}

TEST_CASE("reports serialize to parseable JSON") {
  VerifyOptions opt;
  opt.samples = 6;
  const ResidualReport report = run_verify_flat3(opt);
  const auto j = nlohmann::json::parse(report.to_json_text());
  CHECK(j.at("chart") == "flat3");
  CHECK(j.at("samples") == 6);
  CHECK(j.at("pass") == true);
  CHECK(j.at("version") == "0.1.0");
  REQUIRE(j.at("checks").is_array());
  CHECK(j.at("checks").size() == report.checks.size());
  for (const auto& check : j.at("checks")) {
    CHECK(check.contains("name"));
    CHECK(check.contains("tolerance"));
    CHECK(check.contains("pass"));
  }
}

TEST_CASE("generic verification covers loader-built charts") {
  const std::string text = R"json({
    "name": "round_sphere",
    "coords": ["theta", "phi"],
    "metric": {
      "0,0": "1",
      "1,1": "sin(theta)^2"
    },
    "domain": {"theta": [0.2, 2.9], "phi": [0, 6.28]},
    "foliation": {
      "n": 1,
      "x": ["ln(r)"],
      "f": [],
      "angles": ["t"]
    }
  })json";
  const LoadedChart loaded = load_chart_json_text(text);
  VerifyOptions opt;
  opt.samples = 10;
  const ResidualReport report = run_verify_generic(loaded, opt, 1.0);
  for (const auto& check : report.checks) {
    INFO(check.name, " residual ", check.max_residual, " note ", check.note);
    CHECK(check.pass);
  }
  CHECK(report.pass);
  CHECK(find_check(report, "einstein") != nullptr);
  CHECK(find_check(report, "extract_vs_oracle") != nullptr);

  const ResidualReport no_lambda =
      run_verify_generic(loaded, opt, std::nullopt);
  CHECK(no_lambda.pass);
  CHECK(find_check(no_lambda, "einstein") == nullptr);
}
