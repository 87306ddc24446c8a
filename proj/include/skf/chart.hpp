#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "skf/forms.hpp"
#include "skf/interval.hpp"
#include "skf/jet.hpp"
#include "skf/linalg.hpp"

namespace skf {

struct FoliationMap;

using ScalarField = std::function<Jet2(std::span<const Jet2>)>;

// A single coordinate chart with a Riemannian metric given entrywise by
// scalar fields of the coordinates. Domains are open boxes, optionally
// trimmed by a predicate (used to keep clear of coordinate degeneracies).
struct Chart {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  std::map<std::string, double> params;
  Matrix<ScalarField> metric;
  std::vector<Interval> domain;
  std::function<bool(std::span<const double>)> predicate;

  int coord_index(const std::string& coord) const;  // throws ChartError
  bool contains(std::span<const double> pt) const;
  void require_inside(std::span<const double> pt) const;
  // Coordinates as active jet variables at a point inside the domain.
  std::vector<Jet2> seed(std::span<const double> pt) const;
};

struct MetricData {
  Matrix<Jet2> g, ginv;
  Matrix<double> g_val, ginv_val;
};

// Evaluates the metric and its inverse at a point. Checks symmetry of the
// entry table and positive definiteness of the value.
MetricData metric_at(const Chart& chart, std::span<const double> pt);
MetricData metric_at_jets(const Chart& chart, std::span<const Jet2> jets);

// Christoffel symbols as first-order jets: at(k, i, j) = Gamma^k_{ij}.
struct Connection {
  int dim = 0;
  std::vector<Jet2> gamma;
  const Jet2& at(int k, int i, int j) const;
  Jet2& at(int k, int i, int j);
};

Connection christoffels(const MetricData& md);

// Ricci tensor from the jet-valued Christoffel symbols.
Matrix<double> ricci(const Connection& conn);

// Frobenius residuals, normalised by ||g||_F.
double einstein_residual(const Chart& chart, std::span<const double> pt,
                         double lambda);
double metricity_residual(const Chart& chart, std::span<const double> pt);

// Componentwise covariant derivative: result[k] = nabla_k F as a form
// value with order reduced by one.
std::vector<FormValue> cov_deriv_form(const FormValue& f,
                                      const Connection& conn);

// Rows of an orthonormal coframe-dual frame: frame[a] are the coordinate
// components of e_a, built from the Cholesky factor of g.
Matrix<double> orthonormal_frame(const Matrix<double>& g_val);

// Codifferential d* F = - sum_a e_a -| nabla_{e_a} F over an orthonormal
// frame; `framed` accepts any frame satisfying g(e_a, e_b) = delta_ab.
FormValue codifferential(const FormValue& f, const Connection& conn,
                         const Matrix<double>& frame);
FormValue codifferential(const Chart& chart, std::span<const double> pt,
                         const FormValue& f);

// Index lowering/raising at a point.
FormValue flat(const Matrix<Jet2>& g, std::span<const double> v);
std::vector<std::complex<double>> sharp(const Matrix<double>& ginv_val,
                                        const FormValue& one_form);

// Metric cone over a chart: coordinate r prepended, g = dr^2 + r^2 g_base.
Chart cone_extend(const Chart& base, Interval r_range);
// Pulls a form field on the base back to the cone chart (indices shifted by
// one; r-independent coefficients).
FormField cone_extend_field(const FormField& base_field);

std::vector<std::vector<double>> sample_points(const Chart& chart, int count,
                                               std::uint64_t seed);

struct LoadedChart {
  Chart chart;
  std::shared_ptr<const FoliationMap> foliation;  // may be null
};

// Chart description files: JSON with name, coords, params, metric entries
// keyed "i,j" (0-based, symmetric completion), per-coordinate domain, and an
// optional foliation block. Expressions may reference coords and params.
LoadedChart load_chart_json_text(const std::string& text);
LoadedChart load_chart_file(const std::string& path);

}  // namespace skf
