#include "skf/ypq.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "skf/errors.hpp"
#include "skf/expr.hpp"

namespace skf {

std::array<double, 3> cubic_roots(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw ChartError("the parameter a must lie in (0,1)");
  const auto P = [a](double y) { return 2.0 * y * y * y - 3.0 * y * y + a; };
  const auto dP = [](double y) { return 6.0 * y * y - 6.0 * y; };
  const auto solve = [&](double lo, double hi) {
    double flo = P(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = P(mid);
      if ((fm <= 0.0) == (flo <= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) y -= P(y) / dP(y);
    return y;
  };
  return {solve(-1.0, 0.0), solve(0.0, 1.0), solve(1.0, 2.0)};
}

YpqParams ypq_params(double a, double theta_margin, double y_margin) {
  const auto roots = cubic_roots(a);
  YpqParams params;
  params.a = a;
  params.y1 = roots[0];
  params.y2 = roots[1];
  params.y3 = roots[2];
  params.theta_margin = theta_margin;
  params.y_margin = y_margin;
  return params;
}

namespace {

const std::string kW = "(2*(a - y^2)/(1 - y))";
const std::string kQ = "((a - 3*y^2 + 2*y^3)/(a - y^2))";
const std::string kF = "((a - 2*y + y^2)/(6*(a - y^2)))";

}  // namespace

Chart ypq_chart(const YpqParams& params) {
  const double pi = std::acos(-1.0);
  Chart chart;
  chart.name = "ypq";
  chart.dim = 5;
  chart.coords = {"theta", "phi", "y", "psi", "alpha"};
  chart.params = {{"a", params.a}};

  const std::string round = kQ + "/9 + " + kW + "*" + kF + "^2";
  const std::string entries[5][5] = {
      {"(1 - y)/6",
       "",
       "",
       "",
       ""},
      {"",
       "(1 - y)/6*sin(theta)^2 + (" + round + ")*cos(theta)^2",
       "",
       "-(" + round + ")*cos(theta)",
       "-" + kW + "*" + kF + "*cos(theta)"},
      {"", "", "(1 - y)/(2*(a - 3*y^2 + 2*y^3))", "", ""},
      {"", "", "", round, kW + "*" + kF},
      {"", "", "", "", kW},
  };
  chart.metric = make_matrix<ScalarField>(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) {
      if (entries[i][j].empty()) continue;
      auto field = expr::compile_field(expr::parse(entries[i][j]), chart.coords,
                                       chart.params);
      chart.metric[i][j] = field;
      chart.metric[j][i] = std::move(field);
    }

  const double yspan = params.y2 - params.y1;
  chart.domain = {Interval{params.theta_margin, pi - params.theta_margin},
                  Interval{0.0, 2.0 * pi},
                  Interval{params.y1 + params.y_margin * yspan,
                           params.y2 - params.y_margin * yspan},
                  Interval{0.0, 2.0 * pi},
                  Interval{0.0, 2.0 * pi}};
  return chart;
}

FoliationMap ypq_foliation(const YpqParams& params) {
  const double pi = std::acos(-1.0);
  const double yspan = params.y2 - params.y1;
  const std::vector<std::string> x = {
      "3*ln(r) + ln(sin(theta)) + 0.5*ln(a - 3*y^2 + 2*y^3)",
      "ln(tan(theta/2))/(3*sqrt(3))",
      "-ln(sin(theta))/6 - c1*ln(y - y1v) - c2*ln(y2v - y) - c3*ln(y3v - y)",
  };
  const std::map<std::string, double> fparams = {
      {"a", params.a},
      {"y1v", params.y1},
      {"y2v", params.y2},
      {"y3v", params.y3},
      {"c1", 1.0 / (12.0 * params.y1)},
      {"c2", 1.0 / (12.0 * params.y2)},
      {"c3", 1.0 / (12.0 * params.y3)},
  };
  const std::vector<Interval> domain = {
      Interval{0.5, 2.0},
      Interval{params.theta_margin, pi - params.theta_margin},
      Interval{params.y1 + params.y_margin * yspan,
               params.y2 - params.y_margin * yspan},
      Interval{0.0, 2.0 * pi},
      Interval{0.0, 2.0 * pi / (3.0 * std::sqrt(3.0))},
      Interval{-2.0 * pi - pi / 3.0, 0.0},
  };
  return make_foliation(3, x, {"theta", "y"}, {"psi_p", "phi_p", "beta_p"},
                        fparams, domain);
}

std::vector<double> ypq_foliated_point(std::span<const double> chart_pt,
                                       double r) {
  if (chart_pt.size() != 5)
    throw DomainError("expected a 5-coordinate chart point");
  const double theta = chart_pt[0], phi = chart_pt[1], y = chart_pt[2],
               psi = chart_pt[3], alpha = chart_pt[4];
  return {r,   theta, y, psi, phi / (3.0 * std::sqrt(3.0)),
          -alpha - psi / 6.0};
}

ReebContact reeb_contact(const Chart& chart) {
  ReebContact rc;
  rc.xi = {0.0, 0.0, 0.0, 3.0, -0.5};
  FormField eta;
  eta.dim = 5;
  eta.degree = 1;
  const auto ch = std::make_shared<const Chart>(chart);
  const auto xi = rc.xi;
  eta.eval = [ch, xi](std::span<const Jet2> jets) {
    return flat(metric_at_jets(*ch, jets).g, xi);
  };
  rc.eta = std::move(eta);
  return rc;
}

FormField sasaki_psi(const Chart& chart, int k) {
  if (k < 0 || k > 2) throw DomainError("eta ^ (d eta)^k supports k = 0, 1, 2");
  const FormField eta = reeb_contact(chart).eta;
  if (k == 0) return eta;
  const FormField phi1 = eta.d();
  if (k == 1) {
    FormField psi1 = wedge(eta, phi1);
    psi1.exact_d = std::make_shared<const FormField>(sasaki_phi(chart, 2));
    return psi1;
  }
  FormField psi2 = wedge(eta, sasaki_phi(chart, 2));
  psi2.exact_d = std::make_shared<const FormField>(zero_field(5, 6));
  return psi2;
}

FormField sasaki_phi(const Chart& chart, int k) {
  if (k < 1 || k > 2) throw DomainError("(d eta)^k supports k = 1, 2");
  const FormField phi1 = reeb_contact(chart).eta.d();
  if (k == 1) return phi1;
  FormField phi2 = wedge(phi1, phi1);
  phi2.exact_d = std::make_shared<const FormField>(zero_field(5, 5));
  return phi2;
}

namespace {

// Xi and Upsilon in the primed coframe (theta, y, psi', phi', beta') with
// coefficients as functions of (theta, y, psi') jets.
FormValue xi_upsilon_primed_value(double a, const Jet2& theta, const Jet2& y,
                                  const Jet2& psi, bool upsilon) {
  const double s3 = std::sqrt(3.0);
  const Jet2 cubic = a - 3.0 * y * y + 2.0 * y * y * y;
  const Jet2 p = 2.0 * cubic / (1.0 - y);
  const Jet2 common = sqrt((1.0 - y) / (6.0 * p));
  const Jet2 ca = common * (upsilon ? sin(psi) : cos(psi));
  const Jet2 cb = upsilon ? common * cos(psi) : -1.0 * common * sin(psi);

  FormValue v = zero_form(5, 2, 2);
  v.coeffs[{0, 1}] = CJet(ca);
  v.coeffs[{3, 4}] = CJet(ca * (-3.0 * s3) * p * sin(theta));
  v.coeffs[{0, 3}] = CJet(cb * (s3 / 2.0) * cos(theta) * p);
  v.coeffs[{1, 3}] = CJet(cb * (-3.0 * s3) * sin(theta));
  v.coeffs[{0, 4}] = CJet(cb * p);
  return v;
}

std::pair<FormField, FormField> xi_upsilon_fields(double a, bool primed) {
  // Chart coframe rows for the primed basis: dtheta, dy, dpsi' = dpsi,
  // dphi' = dphi/(3 sqrt 3), dbeta' = -dalpha - dpsi/6.
  const CoframeRows rows = {
      {{0, 1.0}},
      {{2, 1.0}},
      {{3, 1.0}},
      {{1, 1.0 / (3.0 * std::sqrt(3.0))}},
      {{4, -1.0}, {3, -1.0 / 6.0}},
  };
  auto build = [a, primed, rows](bool upsilon) {
    FormField f;
    f.dim = 5;
    f.degree = 2;
    f.eval = [a, primed, rows, upsilon](std::span<const Jet2> jets) {
      if (primed)
        return xi_upsilon_primed_value(a, jets[0], jets[1], jets[2], upsilon);
      const FormValue v =
          xi_upsilon_primed_value(a, jets[0], jets[2], jets[3], upsilon);
      return substitute_coframe(v, rows, 5);
    };
    return f;
  };
  return {build(false), build(true)};
}

}  // namespace

std::pair<FormField, FormField> closed_xi_upsilon(const YpqParams& params) {
  return xi_upsilon_fields(params.a, false);
}

std::pair<FormField, FormField> closed_xi_upsilon_primed(
    const YpqParams& params) {
  return xi_upsilon_fields(params.a, true);
}

}  // namespace skf
