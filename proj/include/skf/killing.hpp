#pragma once

#include <complex>
#include <span>
#include <vector>

#include "skf/chart.hpp"
#include "skf/forms.hpp"

// Residuals of the conformal Killing-Yano equation and its refinements. For
// a p-form F on an n-manifold the equation reads, for every vector X,
//
//   nabla_X F - (1/(p+1)) X -| dF + (1/(n-p+1)) X^flat ^ d*F = 0,
//
// and F is a Killing form when additionally d*F = 0. A Killing form is
// special when nabla_X (dF) = c X^flat ^ F for a constant c; equivalently
// its cone lift r^p dr ^ F + r^{p+1}/(p+1) dF is parallel.

namespace skf {

struct KillingBreakdown {
  double cky = 0.0;       // conformal Killing-Yano residual
  double coclosed = 0.0;  // || d* F ||
  double value() const { return cky > coclosed ? cky : coclosed; }
};

KillingBreakdown killing_residual_detail(const Chart& chart,
                                         const FormField& field,
                                         std::span<const double> pt);
double killing_residual(const Chart& chart, const FormField& field,
                        std::span<const double> pt);
double cky_residual(const Chart& chart, const FormField& field,
                    std::span<const double> pt);

// Least-squares fit of the constant in nabla_X (dF) = c X^flat ^ F over the
// coordinate frame at the given points. `spread` is the largest deviation
// of a single-point fit from the joint one. Throws DomainError when
// X^flat ^ F vanishes identically (top-degree F).
struct SpecialFit {
  std::complex<double> c_complex;
  double c = 0.0;
  double residual = 0.0;  // relative l2 residual of the fitted equation
  double spread = 0.0;
};

SpecialFit special_killing_fit(const Chart& chart, const FormField& field,
                               const std::vector<std::vector<double>>& pts);

// || nabla F || / (1 + || F ||) at a point; zero iff F is parallel there.
double parallel_residual(const Chart& chart, const FormField& field,
                         std::span<const double> pt);

// Cone lift r^p dr ^ F + r^{p+1}/(p+1) dF of a p-form field on the base;
// closed by construction, parallel exactly when F is special Killing.
FormField semmelmann_lift(const FormField& base_field);

// How far the coefficients of a field on a cone chart drift as r varies
// with the base point fixed: max pairwise distance over the r values,
// relative to the largest coefficient norm.
double r_independence_residual(const FormField& cone_field,
                               std::span<const double> cone_pt,
                               std::span<const double> r_values);

}  // namespace skf
