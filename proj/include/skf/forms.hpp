#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skf/jet.hpp"
#include "skf/linalg.hpp"

// Exterior algebra over a coordinate coframe with sparse coefficients.
// Components are stored on strictly increasing multi-indices; every
// operation routes through that canonical storage, so antisymmetry is
// structural rather than numerical.

namespace skf {

using MultiIndex = std::vector<int>;

// Canonical (sorted) index and permutation sign, or nullopt when an index
// repeats and the component vanishes.
std::optional<std::pair<MultiIndex, int>> normalize_index(std::span<const int> idx);

// All strictly increasing index tuples of the given length.
std::vector<MultiIndex> all_increasing_indices(int dim, int degree);

// A differential form evaluated at one point. `order` records how many
// derivative levels of the coefficient jets are trustworthy: 2 for closed
// forms evaluated on a seeded chart, 1 after one exterior derivative, 0
// after pointwise operations that keep values only.
struct FormValue {
  int dim = 0;
  int degree = 0;
  int order = 2;
  std::map<MultiIndex, CJet> coeffs;

  CJet coeff(const MultiIndex& idx) const {
    auto it = coeffs.find(idx);
    return it == coeffs.end() ? CJet{} : it->second;
  }
  // Normalizes idx and accumulates sign * c onto the canonical component.
  void add(std::span<const int> idx, const CJet& c);
};

FormValue zero_form(int dim, int degree, int order = 2);

FormValue operator+(const FormValue& a, const FormValue& b);
FormValue operator-(const FormValue& a, const FormValue& b);
FormValue scale(const FormValue& a, std::complex<double> z);
// Scales by a jet-valued factor; c_order caps the validity of the result.
FormValue scale_jet(const FormValue& a, const CJet& c, int c_order = 2);

FormValue wedge(const FormValue& a, const FormValue& b);
FormValue interior(std::span<const double> v, const FormValue& a);
FormValue ext_deriv(const FormValue& a);  // needs a.order >= 1

// Hermitian pairing sum_{I,J} a_I conj(b_J) det(ginv[I,J]) over increasing
// indices, with no 1/p! factor.
std::complex<double> form_inner(const Matrix<double>& ginv, const FormValue& a,
                                const FormValue& b);
double form_norm(const Matrix<double>& ginv, const FormValue& a);

// Coefficientwise Euclidean norms on values, for metric-free comparisons.
double euclid_norm(const FormValue& a);
double euclid_dist(const FormValue& a, const FormValue& b);

// Reindexing helpers: shift all indices by a fixed offset (embedding a base
// form into a cone chart and back) and restriction that drops every
// component containing a given index.
FormValue shift_indices(const FormValue& a, int offset, int new_dim);
FormValue drop_index_components(const FormValue& a, int index);

// Index shift plus a matching embed_active on every coefficient jet, for
// values computed on canonically seeded base-chart jets that must live on a
// chart with `offset` extra leading coordinates.
FormValue embed_form(const FormValue& a, int offset, int new_dim);

// Rewrites a form through a constant linear coframe substitution
// e'_a = sum_b rows[a][b].second * e_{rows[a][b].first}.
using CoframeRows = std::vector<std::vector<std::pair<int, double>>>;
FormValue substitute_coframe(const FormValue& a, const CoframeRows& rows,
                             int new_dim);

// A form-valued field: evaluation takes the seeded coordinate jets of a
// chart point. `exact_d` optionally carries a structurally known exterior
// derivative (e.g. d(eta ^ d eta) = d eta ^ d eta); d() falls back to
// jet-based differentiation, which costs one derivative level.
struct FormField {
  int dim = 0;
  int degree = 0;
  int order = 2;
  std::function<FormValue(std::span<const Jet2>)> eval;
  std::shared_ptr<const FormField> exact_d;

  FormField d() const;
};

FormField zero_field(int dim, int degree);
FormField wedge(const FormField& a, const FormField& b);
FormField scale(const FormField& a, std::complex<double> z);
FormField add(const FormField& a, const FormField& b);

}  // namespace skf
