#pragma once

#include "skf/chart.hpp"
#include "skf/forms.hpp"

// Small reference charts and closed-form fields used by tests and the CLI:
// flat space, the round 2-sphere, and a curved-but-explicit 3-dimensional
// chart whose geometry is easy to cross-check by hand or finite differences.

namespace skf {

Chart make_flat_chart(int n, double half_width = 1.0);
Chart make_sphere2_chart(double margin = 0.05);
Chart make_bumpy_chart();

// x3 dx1^dx2 - x2 dx1^dx3 + x1 dx2^dx3 on flat 3-space: a Killing 2-form
// with constant-coefficient exterior derivative.
FormField flat3_killing_form();

// sin(theta)^2 dphi on the round sphere, the coclosed half of the area
// form's primitive; its special constant is -2.
FormField sphere_killing_one_form();

}  // namespace skf
