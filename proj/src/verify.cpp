#include "skf/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "json.hpp"
#include "skf/builtins.hpp"
#include "skf/killing.hpp"
#include "skf/toric.hpp"
#include "skf/ypq.hpp"

namespace skf {

namespace {

using Clock = std::chrono::steady_clock;

struct Runner {
  ResidualReport& report;
  const VerifyOptions& opt;
  int counter = 0;

  std::uint64_t next_seed() {
    return report.seed * 1000003ull + static_cast<std::uint64_t>(++counter);
  }

  // Evaluates `worst` (a maximum residual over its own samples) against a
  // scaled tolerance; exceptions become failed checks instead of aborting
  // the whole report.
  void check(const std::string& name, double tol,
             const std::function<double(std::uint64_t)>& worst) {
    CheckRecord rec;
    rec.name = name;
    rec.tolerance = tol * opt.tolerance_scale;
    try {
      rec.max_residual = worst(next_seed());
      rec.pass = std::isfinite(rec.max_residual) &&
                 rec.max_residual <= rec.tolerance;
    } catch (const std::exception& e) {
      rec.max_residual = std::numeric_limits<double>::quiet_NaN();
      rec.note = e.what();
      rec.pass = false;
    }
    report.pass = report.pass && rec.pass;
    report.checks.push_back(std::move(rec));
  }

  void check_fit(const std::string& name, double res_tol, double expected,
                 double c_tol,
                 const std::function<SpecialFit(std::uint64_t)>& fit_fn) {
    CheckRecord rec;
    rec.name = name;
    rec.tolerance = res_tol * opt.tolerance_scale;
    rec.expected_c = expected;
    rec.c_tolerance = c_tol * opt.tolerance_scale;
    try {
      const SpecialFit fit = fit_fn(next_seed());
      rec.max_residual = fit.residual;
      rec.c = fit.c;
      rec.pass = std::isfinite(fit.residual) &&
                 fit.residual <= rec.tolerance &&
                 std::abs(fit.c - expected) <= *rec.c_tolerance &&
                 std::abs(fit.c_complex.imag()) <= *rec.c_tolerance;
    } catch (const std::exception& e) {
      rec.max_residual = std::numeric_limits<double>::quiet_NaN();
      rec.note = e.what();
      rec.pass = false;
    }
    report.pass = report.pass && rec.pass;
    report.checks.push_back(std::move(rec));
  }
};

double identity_defect(const Matrix<double>& a, const Matrix<double>& b) {
  const int n = static_cast<int>(a.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double e = (i == j) ? -1.0 : 0.0;
      for (int k = 0; k < n; ++k) e += a[i][k] * b[k][j];
      s += e * e;
    }
  return std::sqrt(s);
}

double max_over_points(const Chart& chart, int samples, std::uint64_t seed,
                       const std::function<double(std::span<const double>)>& f) {
  double worst = 0.0;
  for (const auto& pt : sample_points(chart, samples, seed))
    worst = std::max(worst, f(pt));
  return worst;
}

double max_over_foliated(const FoliationMap& m, int samples,
                         std::uint64_t seed,
                         const std::function<double(std::span<const double>)>& f) {
  double worst = 0.0;
  for (const auto& pt : sample_foliated_points(m, samples, seed))
    worst = std::max(worst, f(pt));
  return worst;
}

double closedness_residual(const FormField& field, std::span<const Jet2> jets) {
  const FormValue val = field.eval(jets);
  return euclid_norm(ext_deriv(val)) / (1.0 + euclid_norm(val));
}

void finish(ResidualReport& report, Clock::time_point start) {
  report.duration_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

ResidualReport run_verify_ypq(double a, const VerifyOptions& opt) {
  const auto start = Clock::now();
  const YpqParams params = ypq_params(a);
  const Chart chart = ypq_chart(params);
  const FoliationMap fol = ypq_foliation(params);

  ResidualReport report;
  report.chart = "ypq";
  report.params = {{"a", a}};
  report.samples = opt.samples;
  report.seed = opt.seed;
  report.tolerance_scale = opt.tolerance_scale;
  report.r_lo = opt.r_lo;
  report.r_hi = opt.r_hi;
  Runner run{report, opt};

  run.check("metric_inverse", 1e-12, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      const MetricData md = metric_at(chart, pt);
      return identity_defect(md.g_val, md.ginv_val);
    });
  });

  run.check("einstein_ric_4g", 1e-8, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      return einstein_residual(chart, pt, kYpqEinsteinLambda);
    });
  });

  const ReebContact rc = reeb_contact(chart);
  run.check("reeb_unit", 1e-8, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      const MetricData md = metric_at(chart, pt);
      double norm2 = 0.0;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          norm2 += rc.xi[i] * rc.xi[j] * md.g_val[i][j];
      return std::abs(norm2 - 1.0);
    });
  });

  run.check("reeb_killing", 1e-9, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      return killing_residual(chart, rc.eta, pt);
    });
  });

  const FormField psi1 = sasaki_psi(chart, 1);
  const FormField psi2 = sasaki_psi(chart, 2);
  const FormField phi1 = sasaki_phi(chart, 1);
  const FormField phi2 = sasaki_phi(chart, 2);
  const auto [xi_form, upsilon_form] = closed_xi_upsilon(params);

  const auto killing_check = [&](const FormField& field) {
    return [&chart, field, &opt](std::uint64_t seed) {
      return max_over_points(chart, opt.samples, seed, [&](auto pt) {
        return killing_residual(chart, field, pt);
      });
    };
  };
  run.check("psi1_killing", 1e-8, killing_check(psi1));
  run.check("psi2_killing", 1e-8, killing_check(psi2));
  run.check("xi_killing", 1e-8, killing_check(xi_form));
  run.check("upsilon_killing", 1e-8, killing_check(upsilon_form));

  const auto cky_check = [&](const FormField& field) {
    return [&chart, field, &opt](std::uint64_t seed) {
      return max_over_points(chart, opt.samples, seed, [&](auto pt) {
        return cky_residual(chart, field, pt);
      });
    };
  };
  run.check("phi1_cky", 1e-8, cky_check(phi1));
  run.check("phi2_cky", 1e-8, cky_check(phi2));

  const auto closed_check = [&](const FormField& field) {
    return [&chart, field, &opt](std::uint64_t seed) {
      return max_over_points(chart, opt.samples, seed, [&](auto pt) {
        return closedness_residual(field, chart.seed(pt));
      });
    };
  };
  run.check("phi1_closed", 1e-10, closed_check(phi1));
  run.check("phi2_closed", 1e-10, closed_check(phi2));

  const auto fit_check = [&](const FormField& field) {
    return [&chart, field, &opt](std::uint64_t seed) {
      return special_killing_fit(chart, field,
                                 sample_points(chart, opt.samples, seed));
    };
  };
  run.check_fit("eta_special_c", 1e-8, -2.0, 1e-6, fit_check(rc.eta));
  run.check_fit("psi1_special_c", 1e-8, -4.0, 1e-6, fit_check(psi1));
  run.check_fit("xi_special_c", 1e-8, -3.0, 1e-6, fit_check(xi_form));
  run.check_fit("upsilon_special_c", 1e-8, -3.0, 1e-6,
                fit_check(upsilon_form));

  const Chart cone = cone_extend(chart, Interval{opt.r_lo, opt.r_hi});
  const auto lift_check = [&](const FormField& field) {
    const FormField lift = semmelmann_lift(field);
    return [&cone, lift, &opt](std::uint64_t seed) {
      return max_over_points(cone, opt.samples, seed, [&](auto pt) {
        return parallel_residual(cone, lift, pt);
      });
    };
  };
  run.check("lift_parallel_eta", 1e-8, lift_check(rc.eta));
  run.check("lift_parallel_psi1", 1e-8, lift_check(psi1));
  run.check("lift_parallel_xi", 1e-8, lift_check(xi_form));
  run.check("lift_parallel_upsilon", 1e-8, lift_check(upsilon_form));

  run.check("extract_vs_oracle", 1e-11, [&](std::uint64_t seed) {
    return max_over_foliated(fol, opt.samples, seed, [&](auto pt) {
      const auto jets = seed_point(pt);
      const FormValue ex = extract_special_form(fol, jets);
      const OmegaPair oracle = direct_expansion_oracle(fol, jets);
      return euclid_dist(ex, oracle.omega_base) /
             (1.0 + euclid_norm(oracle.omega_base));
    });
  });

  const auto [xi_primed, upsilon_primed] = closed_xi_upsilon_primed(params);
  run.check("extract_vs_closed_form", 1e-10, [&](std::uint64_t seed) {
    return max_over_foliated(fol, opt.samples, seed, [&](auto pt) {
      const auto jets = seed_point(pt);
      const std::span<const Jet2> base = std::span(jets).subspan(1);
      const FormValue ex = extract_special_form(fol, jets);
      const FormValue closed = shift_indices(
          xi_primed.eval(base) +
              scale(upsilon_primed.eval(base), std::complex<double>(0.0, 1.0)),
          1, 6);
      return euclid_dist(ex, closed) / (1.0 + euclid_norm(closed));
    });
  });

  run.check("omega_identity", 1e-10, [&](std::uint64_t seed) {
    return max_over_foliated(fol, opt.samples, seed, [&](auto pt) {
      return omega_identity_residual(fol, pt);
    });
  });

  const FormField extracted = extracted_form_field(fol);
  run.check("r_independence", 1e-10, [&](std::uint64_t seed) {
    const double radii[] = {opt.r_lo, 0.5 * (opt.r_lo + opt.r_hi), opt.r_hi};
    return max_over_foliated(fol, opt.samples, seed, [&](auto pt) {
      return r_independence_residual(extracted, pt, radii);
    });
  });

  finish(report, start);
  return report;
}

ResidualReport run_verify_flat3(const VerifyOptions& opt) {
  const auto start = Clock::now();
  const Chart chart = make_flat_chart(3);
  const FormField psi = flat3_killing_form();

  ResidualReport report;
  report.chart = "flat3";
  report.samples = opt.samples;
  report.seed = opt.seed;
  report.tolerance_scale = opt.tolerance_scale;
  report.r_lo = opt.r_lo;
  report.r_hi = opt.r_hi;
  Runner run{report, opt};

  run.check("metric_inverse", 1e-14, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      const MetricData md = metric_at(chart, pt);
      return identity_defect(md.g_val, md.ginv_val);
    });
  });

  run.check("killing_2form", 1e-12, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      return killing_residual(chart, psi, pt);
    });
  });

  run.check_fit("special_c", 1e-12, 0.0, 1e-12, [&](std::uint64_t seed) {
    return special_killing_fit(chart, psi,
                               sample_points(chart, opt.samples, seed));
  });

  finish(report, start);
  return report;
}

ResidualReport run_verify_generic(const LoadedChart& loaded,
                                  const VerifyOptions& opt,
                                  std::optional<double> einstein_lambda) {
  const auto start = Clock::now();
  const Chart& chart = loaded.chart;

  ResidualReport report;
  report.chart = chart.name;
  report.params = chart.params;
  report.samples = opt.samples;
  report.seed = opt.seed;
  report.tolerance_scale = opt.tolerance_scale;
  report.r_lo = opt.r_lo;
  report.r_hi = opt.r_hi;
  Runner run{report, opt};

  run.check("metric_inverse", 1e-12, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      const MetricData md = metric_at(chart, pt);
      return identity_defect(md.g_val, md.ginv_val);
    });
  });

  run.check("metric_compatibility", 1e-10, [&](std::uint64_t seed) {
    return max_over_points(chart, opt.samples, seed, [&](auto pt) {
      return metricity_residual(chart, pt);
    });
  });

  if (einstein_lambda) {
    run.check("einstein", 1e-8, [&](std::uint64_t seed) {
      return max_over_points(chart, opt.samples, seed, [&](auto pt) {
        return einstein_residual(chart, pt, *einstein_lambda);
      });
    });
  }

  if (loaded.foliation) {
    const FoliationMap& fol = *loaded.foliation;
    run.check("extract_vs_oracle", 1e-11, [&](std::uint64_t seed) {
      return max_over_foliated(fol, opt.samples, seed, [&](auto pt) {
        const auto jets = seed_point(pt);
        const FormValue ex = extract_special_form(fol, jets);
        const OmegaPair oracle = direct_expansion_oracle(fol, jets);
        return euclid_dist(ex, oracle.omega_base) /
               (1.0 + euclid_norm(oracle.omega_base));
      });
    });
  }

  finish(report, start);
  return report;
}

std::string ResidualReport::to_json_text() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["chart"] = chart;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : params) j["params"][key] = value;
  j["samples"] = samples;
  j["seed"] = seed;
  j["tolerance_scale"] = tolerance_scale;
  j["radial_range"] = {r_lo, r_hi};
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckRecord& rec : checks) {
    nlohmann::ordered_json c;
    c["name"] = rec.name;
    if (std::isfinite(rec.max_residual)) c["max_residual"] = rec.max_residual;
    c["tolerance"] = rec.tolerance;
    if (rec.c) c["c"] = *rec.c;
    if (rec.expected_c) c["expected_c"] = *rec.expected_c;
    if (rec.c_tolerance) c["c_tolerance"] = *rec.c_tolerance;
    if (!rec.note.empty()) c["note"] = rec.note;
    c["pass"] = rec.pass;
    j["checks"].push_back(std::move(c));
  }
  j["pass"] = pass;
  j["duration_ms"] = duration_ms;
  return j.dump(2);
}

}  // namespace skf
