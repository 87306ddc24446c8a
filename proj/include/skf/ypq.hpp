#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "skf/chart.hpp"
#include "skf/forms.hpp"
#include "skf/toric.hpp"

// The Y^{p,q} family of five-dimensional Sasaki-Einstein metrics on a
// coordinate chart (theta, phi, y, psi, alpha), parametrised by a in (0,1):
//
//   ds^2 = (1-y)/6 (dtheta^2 + sin^2 theta dphi^2) + dy^2/(w q)
//        + q/9 (dpsi - cos theta dphi)^2
//        + w [dalpha + f (dpsi - cos theta dphi)]^2,
//
//   w = 2(a - y^2)/(1 - y),  q = (a - 3y^2 + 2y^3)/(a - y^2),
//   f = (a - 2y + y^2)/(6(a - y^2)),
//
// with y between the two smallest roots of 2y^3 - 3y^2 + a. The metric is
// Einstein with Ric = 4 g. The Reeb field 3 d_psi - (1/2) d_alpha is unit
// Killing; its dual contact form eta and the tower eta ^ (d eta)^k are the
// Killing forms the rest of the library is exercised on.

namespace skf {

struct YpqParams {
  double a = 0.5;
  double y1 = 0.0, y2 = 0.0, y3 = 0.0;  // roots of 2y^3 - 3y^2 + a, ascending
  double theta_margin = 0.05;
  double y_margin = 0.05;  // relative to y2 - y1
};

// Roots of 2y^3 - 3y^2 + a = 0 in ascending order; requires 0 < a < 1.
std::array<double, 3> cubic_roots(double a);

YpqParams ypq_params(double a, double theta_margin = 0.05,
                     double y_margin = 0.05);

Chart ypq_chart(const YpqParams& params);

inline constexpr double kYpqEinsteinLambda = 4.0;

// Foliated cone coordinates (r, theta, y, psi', phi', beta') with
// psi' = psi, phi' = phi/(3 sqrt 3), beta' = -alpha - psi/6, and the leaf
// coordinates x^1..x^3 that make z^i = x^i + i angle^i holomorphic on the
// cone.
FoliationMap ypq_foliation(const YpqParams& params);

// Maps a chart point (theta, phi, y, psi, alpha) at radius r to the
// foliated cone coordinates above.
std::vector<double> ypq_foliated_point(std::span<const double> chart_pt,
                                       double r);

struct ReebContact {
  std::vector<double> xi;  // Reeb components in chart coordinates
  FormField eta;           // g(xi, .) as a field on the chart
};

ReebContact reeb_contact(const Chart& chart);

// eta ^ (d eta)^k for k = 0, 1, 2 (degrees 1, 3, 5).
FormField sasaki_psi(const Chart& chart, int k);
// (d eta)^k for k = 1, 2 (degrees 2, 4): closed conformal Killing-Yano.
FormField sasaki_phi(const Chart& chart, int k);

// The transverse 2-forms Xi and Upsilon with omega = Xi + i Upsilon, given
// in closed form. `closed_xi_upsilon` lives on the chart coframe;
// `closed_xi_upsilon_primed` on the foliated base coframe
// (theta, y, psi', phi', beta') for direct comparison with the extractor.
std::pair<FormField, FormField> closed_xi_upsilon(const YpqParams& params);
std::pair<FormField, FormField> closed_xi_upsilon_primed(
    const YpqParams& params);

}  // namespace skf
