#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skf/builtins.hpp"
#include "skf/errors.hpp"
#include "skf/killing.hpp"
#include "skf/toric.hpp"
#include "skf/verify.hpp"
#include "skf/ypq.hpp"

namespace {

int report_and_print(const skf::ResidualReport& report,
                     const std::string& out_path) {
  for (const auto& rec : report.checks) {
    std::printf("%-24s %s  max=%-12.4g tol=%.1g", rec.name.c_str(),
                rec.pass ? "pass" : "FAIL", rec.max_residual, rec.tolerance);
    if (rec.c)
      std::printf("  c=%.9g (expected %.9g)", *rec.c, *rec.expected_c);
    if (!rec.note.empty()) std::printf("  [%s]", rec.note.c_str());
    std::printf("\n");
  }
  std::printf("%s: %s (%d samples, seed %llu, %.0f ms)\n",
              report.chart.c_str(), report.pass ? "PASS" : "FAIL",
              report.samples, static_cast<unsigned long long>(report.seed),
              report.duration_ms);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    out << report.to_json_text() << "\n";
  }
  return report.pass ? 0 : 1;
}

std::vector<double> parse_point(const std::string& spec,
                                const skf::Chart& chart, double& r) {
  std::vector<double> pt(chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    pt[i] = 0.5 * (chart.domain[i].lo + chart.domain[i].hi);
  if (spec.empty()) return pt;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw skf::ChartError("point entry '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw skf::ChartError("point entry '" + item + "' has a bad number");
    }
    if (key == "r")
      r = value;
    else
      pt[chart.coord_index(key)] = value;
  }
  return pt;
}

int run_extract(double a, const std::string& point_spec) {
  const skf::YpqParams params = skf::ypq_params(a);
  const skf::Chart chart = skf::ypq_chart(params);
  const skf::FoliationMap fol = skf::ypq_foliation(params);

  double r = 1.0;
  const std::vector<double> pt = parse_point(point_spec, chart, r);
  chart.require_inside(pt);
  const std::vector<double> fpt = skf::ypq_foliated_point(pt, r);

  const auto names = fol.coord_names();
  std::printf("foliated point:");
  for (std::size_t i = 0; i < names.size(); ++i)
    std::printf(" %s=%.9g", names[i].c_str(), fpt[i]);
  std::printf("\n");

  const auto jets = skf::seed_point(fpt);
  const skf::FormValue omega = skf::extract_special_form(fol, jets);
  std::printf("omega coefficients (coframe d%s):\n", "<coord>");
  for (const auto& [idx, coeff] : omega.coeffs) {
    const std::complex<double> z = coeff.value();
    if (std::abs(z) < 1e-15) continue;
    std::string label;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (s) label += "^";
      label += "d" + names[idx[s]];
    }
    std::printf("  %-18s % .12e %+.12e i\n", label.c_str(), z.real(), z.imag());
  }

  const skf::OmegaPair oracle = skf::direct_expansion_oracle(fol, jets);
  const double dist = skf::euclid_dist(omega, oracle.omega_base) /
                      (1.0 + skf::euclid_norm(oracle.omega_base));
  std::printf("relative distance to expansion oracle: %.3e\n", dist);

  const auto [xi_p, ups_p] = skf::closed_xi_upsilon_primed(params);
  const std::span<const skf::Jet2> base = std::span(jets).subspan(1);
  const skf::FormValue closed = skf::shift_indices(
      xi_p.eval(base) +
          skf::scale(ups_p.eval(base), std::complex<double>(0.0, 1.0)),
      1, 6);
  const double cdist = skf::euclid_dist(omega, closed) /
                       (1.0 + skf::euclid_norm(closed));
  std::printf("relative distance to closed form Xi + i Upsilon: %.3e\n", cdist);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"special Killing form construction and verification"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand(
      "verify", "run the residual checks for a chart and report pass/fail");
  std::string chart_name;
  verify->add_option("chart", chart_name,
                     "ypq, flat3, or a name for a --file chart")
      ->required();
  double a = 0.5;
  verify->add_option("--a", a, "Y^{p,q} parameter in (0,1)");
  std::string file;
  verify->add_option("--file", file, "chart description JSON");
  skf::VerifyOptions opt;
  verify->add_option("--samples", opt.samples, "sample points per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", opt.seed, "RNG seed");
  verify->add_option("--tol", opt.tolerance_scale,
                     "scale factor on every pinned tolerance")
      ->check(CLI::PositiveNumber);
  std::optional<double> lambda;
  verify->add_option("--lambda", lambda,
                     "check Ric = lambda g on a --file chart");
  std::string out_path;
  verify->add_option("--out", out_path, "write the JSON report here");

  auto* extract = app.add_subcommand(
      "extract", "print the extracted form at one foliated point");
  std::string extract_chart;
  extract->add_option("chart", extract_chart, "only 'ypq' is built in")
      ->required();
  double extract_a = 0.5;
  extract->add_option("--a", extract_a, "Y^{p,q} parameter in (0,1)");
  std::string point_spec;
  extract->add_option("--point", point_spec,
                      "comma-separated coordinate overrides, e.g. "
                      "\"theta=1.2,y=0.1,r=1.5\"");

  auto* roots = app.add_subcommand(
      "roots", "print the cubic roots that bound the y coordinate");
  double roots_a = 0.5;
  roots->add_option("--a", roots_a, "Y^{p,q} parameter in (0,1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      skf::ResidualReport report;
      if (!file.empty()) {
        report = skf::run_verify_generic(skf::load_chart_file(file), opt, lambda);
        report.chart = chart_name;
      } else if (chart_name == "ypq") {
        report = skf::run_verify_ypq(a, opt);
      } else if (chart_name == "flat3") {
        report = skf::run_verify_flat3(opt);
      } else {
        std::cerr << "error: unknown chart '" << chart_name
                  << "' (use --file for a chart description)\n";
        return 2;
      }
      return report_and_print(report, out_path);
    }
    if (extract->parsed()) {
      if (extract_chart != "ypq") {
        std::cerr << "error: extract supports only the ypq chart\n";
        return 2;
      }
      return run_extract(extract_a, point_spec);
    }
    if (roots->parsed()) {
      const auto r = skf::cubic_roots(roots_a);
      std::printf("a=%.12g roots: y1=%.15g y2=%.15g y3=%.15g\n", roots_a, r[0],
                  r[1], r[2]);
      std::printf("sum=%.15g (expect 1.5) product=%.15g (expect %.15g)\n",
                  r[0] + r[1] + r[2], r[0] * r[1] * r[2], -roots_a / 2.0);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
