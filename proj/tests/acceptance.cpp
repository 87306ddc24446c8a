// Acceptance gate: every property the library claims, checked end to end
// with pinned tolerances. Prints one line per criterion and exits nonzero
// if any of them fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "skf/builtins.hpp"
#include "skf/chart.hpp"
#include "skf/killing.hpp"
#include "skf/toric.hpp"
#include "skf/ypq.hpp"
#include "testutil.hpp"

using namespace skf;

namespace {

struct Criterion {
  std::string name;
  double tolerance = 0.0;
  std::function<double()> worst;  // largest residual observed
};

FoliationMap random_foliation(std::mt19937_64& rng, int n) {
  std::vector<std::string> fs, angles, vars = {"r"};
  for (int t = 2; t <= n; ++t) {
    fs.push_back("f" + std::to_string(t));
    vars.push_back(fs.back());
  }
  for (int t = 1; t <= n; ++t) angles.push_back("t" + std::to_string(t));
  std::vector<std::string> xs;
  for (int i = 0; i < n; ++i)
    xs.push_back(testutil::random_expr_source(rng, vars, 2));
  std::vector<Interval> dom;
  dom.push_back({0.5, 2.0});
  for (int t = 2; t <= n; ++t) dom.push_back({-1.0, 1.0});
  for (int t = 1; t <= n; ++t) dom.push_back({0.0, 6.28});
  return make_foliation(n, xs, fs, angles, {}, dom);
}

double flat3_killing_worst() {
  const Chart chart = make_flat_chart(3);
  const FormField psi = flat3_killing_form();
  double worst = 0.0;
  for (const auto& pt : sample_points(chart, 50, 1001))
    worst = std::max(worst, killing_residual(chart, psi, pt));
  return worst;
}

double ypq_einstein_worst() {
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7}) {
    const Chart chart = ypq_chart(ypq_params(a));
    for (const auto& pt : sample_points(chart, 100, 1002))
      worst = std::max(worst, einstein_residual(chart, pt, kYpqEinsteinLambda));
  }
  return worst;
}

double extract_vs_oracle_worst() {
  double worst = 0.0;
  const auto run = [&worst](const FoliationMap& m, int count,
                            std::uint64_t seed) {
    for (const auto& pt : sample_foliated_points(m, count, seed)) {
      const auto jets = seed_point(pt);
      const FormValue w = extract_special_form(m, jets);
      const OmegaPair oracle = direct_expansion_oracle(m, jets);
      worst = std::max(worst, euclid_dist(w, oracle.omega_base) /
                                  (1.0 + euclid_norm(oracle.omega_base)));
    }
  };
  run(ypq_foliation(ypq_params(0.5)), 100, 1003);
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 20; ++trial)
    run(random_foliation(rng, 2 + trial % 3), 50, 2000 + trial);
  return worst;
}

double extract_vs_closed_worst() {
  const YpqParams params = ypq_params(0.5);
  const Chart chart = ypq_chart(params);
  const FoliationMap fol = ypq_foliation(params);
  const auto [xi_p, ups_p] = closed_xi_upsilon_primed(params);
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (const auto& pt : sample_points(chart, 100, 1006)) {
    const auto cone_pt =
        ypq_foliated_point(pt, testutil::uniform(rng, 0.5, 2.0));
    const FormValue w = extract_special_form_at(fol, cone_pt);
    const auto base = seed_point(std::span(cone_pt).subspan(1));
    const FormValue closed =
        xi_p.eval(base) +
        scale(ups_p.eval(base), std::complex<double>(0.0, 1.0));
    const FormValue lifted = shift_indices(closed, 1, 6);
    worst = std::max(worst, euclid_dist(w, lifted) /
                                (1.0 + euclid_norm(lifted)));
  }
  return worst;
}

double special_fits_worst() {
  const YpqParams params = ypq_params(0.5);
  const Chart chart = ypq_chart(params);
  const auto pts = sample_points(chart, 100, 1007);
  const auto [xi_form, ups_form] = closed_xi_upsilon(params);
  double worst = 0.0;
  const auto fit_one = [&](const FormField& f, double expected) {
    const SpecialFit fit = special_killing_fit(chart, f, pts);
    // Count a constant off by more than 1e-6 as an outright failure.
    if (std::abs(fit.c - expected) > 1e-6 ||
        std::abs(fit.c_complex.imag()) > 1e-6)
      worst = std::max(worst, 1.0);
    worst = std::max(worst, fit.residual);
  };
  fit_one(sasaki_psi(chart, 0), -2.0);
  fit_one(sasaki_psi(chart, 1), -4.0);
  fit_one(xi_form, -3.0);
  fit_one(ups_form, -3.0);
  return worst;
}

double lifts_parallel_worst() {
  const YpqParams params = ypq_params(0.5);
  const Chart chart = ypq_chart(params);
  const Chart cone = cone_extend(chart, Interval{0.5, 2.0});
  const auto [xi_form, ups_form] = closed_xi_upsilon(params);
  const std::vector<FormField> lifts = {
      semmelmann_lift(sasaki_psi(chart, 0)),
      semmelmann_lift(sasaki_psi(chart, 1)),
      semmelmann_lift(xi_form),
      semmelmann_lift(ups_form),
  };
  double worst = 0.0;
  for (const auto& pt : sample_points(cone, 50, 1008))
    for (const auto& lift : lifts)
      worst = std::max(worst, parallel_residual(cone, lift, pt));
  return worst;
}

double omega_identity_worst() {
  const FoliationMap fol = ypq_foliation(ypq_params(0.5));
  double worst = 0.0;
  for (const auto& pt : sample_foliated_points(fol, 50, 1009))
    worst = std::max(worst, omega_identity_residual(fol, pt));
  return worst;
}

double r_independence_worst() {
  const FoliationMap fol = ypq_foliation(ypq_params(0.5));
  const FormField w = extracted_form_field(fol);
  const std::vector<double> radii = {0.5, 1.0, 2.0};
  double worst = 0.0;
  for (const auto& pt : sample_foliated_points(fol, 50, 1010))
    worst = std::max(worst, r_independence_residual(w, pt, radii));
  return worst;
}

double jacobian_closed_form_worst() {
  const YpqParams params = ypq_params(0.5);
  const FoliationMap fol = ypq_foliation(params);
  double worst = 0.0;
  for (const auto& pt : sample_foliated_points(fol, 100, 1011)) {
    const auto A = jacobian_at(fol, seed_point(pt));
    const double r = pt[0], theta = pt[1], y = pt[2];
    const double P = params.a - 3.0 * y * y + 2.0 * y * y * y;
    const double cot = std::cos(theta) / std::sin(theta);
    const double expected[3][3] = {
        {3.0 / r, cot, 3.0 * y * (y - 1.0) / P},
        {0.0, 1.0 / (3.0 * std::sqrt(3.0) * std::sin(theta)), 0.0},
        {0.0, -cot / 6.0, (1.0 - y) / (2.0 * P)},
    };
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst, std::abs(A[i][c].value() - expected[i][c]) /
                                    (1.0 + std::abs(expected[i][c])));
  }
  return worst;
}

double minors_closed_form_worst() {
  const YpqParams params = ypq_params(0.5);
  const FoliationMap fol = ypq_foliation(params);
  double worst = 0.0;
  for (const auto& pt : sample_foliated_points(fol, 100, 1012)) {
    const auto A = jacobian_at(fol, seed_point(pt));
    const double theta = pt[1], y = pt[2];
    const double P = params.a - 3.0 * y * y + 2.0 * y * y * y;
    const double s3 = std::sqrt(3.0);
    const double sin_t = std::sin(theta);
    const double cot = std::cos(theta) / sin_t;
    const double dx3dy = (1.0 - y) / (2.0 * P);

    // The six dr-carrying terms of the three-dimensional extraction sum.
    struct Case {
      std::vector<int> K, L;
      double expected;
    };
    const std::vector<Case> cases = {
        {{}, {2, 3}, 1.0 / (3.0 * s3 * sin_t) * dx3dy},
        {{2}, {2}, -cot / 6.0},
        {{2}, {3}, dx3dy},
        {{3}, {2}, 1.0 / (3.0 * s3 * sin_t)},
        {{3}, {3}, 0.0},
        {{2, 3}, {}, 1.0},
    };
    for (const auto& c : cases) {
      IndexTriple t;
      t.i = 1;
      t.K = c.K;
      t.L = c.L;
      const double got = minor_det(A, t).value();
      worst = std::max(worst,
                       std::abs(got - c.expected) / (1.0 + std::abs(c.expected)));
    }
  }
  return worst;
}

double exterior_algebra_worst() {
  std::mt19937_64 rng(1013);
  double worst = 0.0;
  for (int trial = 0; trial < 120; ++trial) {
    const int dim = 2 + int(testutil::uniform(rng, 0.0, 3.0));
    const int p = int(testutil::uniform(rng, 0.0, double(dim)));
    const int q = int(testutil::uniform(rng, 0.0, double(dim - p) + 1.0));
    const auto jets = seed_point(testutil::random_point(rng, dim, -1.0, 1.0));
    const FormValue a = testutil::random_form(rng, dim, p, jets);
    const FormValue b = testutil::random_form(rng, dim, q, jets);

    // Products against the brute-force permutation expansion.
    const FormValue ab = wedge(a, b);
    for (const auto& idx : all_increasing_indices(dim, p + q)) {
      const auto direct = testutil::wedge_component_oracle(a, b, idx);
      worst = std::max(worst, std::abs(ab.coeff(idx).value() - direct));
    }

    // Graded commutativity.
    const FormValue ba = wedge(b, a);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    worst = std::max(worst, euclid_dist(ab, scale(ba, sign)));

    // Contraction is an antiderivation and squares to zero.
    const double psign = p % 2 == 0 ? 1.0 : -1.0;
    const auto v = testutil::random_point(rng, dim, -1.0, 1.0);
    if (p >= 1) {
      const FormValue iv = interior(v, a);
      if (p >= 2)
        worst = std::max(worst, euclid_norm(interior(v, iv)));
      const FormValue lhs = interior(v, ab);
      FormValue rhs = wedge(iv, b);
      if (q >= 1) rhs = rhs + scale(wedge(a, interior(v, b)), psign);
      worst = std::max(worst, euclid_dist(lhs, rhs));
    }

    // d is a differential and a graded derivation.
    const FormValue da = ext_deriv(a);
    worst = std::max(worst, euclid_norm(ext_deriv(da)));
    const FormValue leib_lhs = ext_deriv(ab);
    const FormValue leib_rhs =
        wedge(da, b) + scale(wedge(a, ext_deriv(b)), psign);
    worst = std::max(worst, euclid_dist(leib_lhs, leib_rhs));
  }
  return worst;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"flat rotation 2-form satisfies the Killing equation", 1e-12,
       flat3_killing_worst},
      {"Y^{p,q} metrics are Einstein with Ric = 4g (a = 0.3, 0.5, 0.7)", 1e-8,
       ypq_einstein_worst},
      {"extracted form matches the direct expansion oracle", 1e-11,
       extract_vs_oracle_worst},
      {"extracted form matches the closed-form transverse pair", 1e-10,
       extract_vs_closed_worst},
      {"special constants fit -2, -4, -3, -3 along the tower", 1e-8,
       special_fits_worst},
      {"cone lifts of the Killing tower are parallel", 1e-8,
       lifts_parallel_worst},
      {"holomorphic volume identity on the cone", 1e-10, omega_identity_worst},
      {"extracted coefficients are independent of the radius", 1e-10,
       r_independence_worst},
      {"foliation Jacobian matches its closed form", 1e-10,
       jacobian_closed_form_worst},
      {"extraction minors match their closed forms", 1e-12,
       minors_closed_form_worst},
      {"exterior algebra laws against brute-force oracles", 1e-11,
       exterior_algebra_worst},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    double worst = 0.0;
    std::string note;
    try {
      worst = c.worst();
    } catch (const std::exception& e) {
      worst = std::numeric_limits<double>::infinity();
      note = std::string(" (") + e.what() + ")";
    }
    const bool ok = worst <= c.tolerance;
    if (!ok) ++failures;
    std::printf("[%2zu/%zu] %s  %s  (max %.3e, tol %.1e)%s\n", i + 1,
                criteria.size(), ok ? "PASS" : "FAIL", c.name.c_str(), worst,
                c.tolerance, note.c_str());
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria hold\n", criteria.size());
  else
    std::printf("%d of %zu acceptance criteria failed\n", failures,
                criteria.size());
  return failures == 0 ? 0 : 1;
}
