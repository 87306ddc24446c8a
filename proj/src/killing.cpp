#include "skf/killing.hpp"

#include <cmath>

#include "skf/errors.hpp"

namespace skf {

namespace {

// (e_i)^flat as a value-only 1-form.
FormValue coordinate_flat(const Matrix<double>& g_val, int i) {
  const int n = static_cast<int>(g_val.size());
  FormValue out = zero_form(n, 1, 0);
  for (int j = 0; j < n; ++j)
    if (g_val[i][j] != 0.0) out.coeffs[{j}] = CJet(Jet2(g_val[i][j]));
  return out;
}

// sqrt of sum_{ij} g^{ij} <A_i, A_j>, the metric norm of a 1-form-valued
// family of forms.
double frame_norm(const Matrix<double>& ginv_val,
                  const std::vector<FormValue>& a) {
  const int n = static_cast<int>(ginv_val.size());
  std::complex<double> s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (ginv_val[i][j] != 0.0)
        s += ginv_val[i][j] * form_inner(ginv_val, a[i], a[j]);
  return std::sqrt(std::abs(s));
}

}  // namespace

KillingBreakdown killing_residual_detail(const Chart& chart,
                                         const FormField& field,
                                         std::span<const double> pt) {
  if (field.dim != chart.dim)
    throw DomainError("field dimension does not match the chart");
  const auto jets = chart.seed(pt);
  const MetricData md = metric_at_jets(chart, jets);
  const Connection conn = christoffels(md);
  const Matrix<double> frame = orthonormal_frame(md.g_val);
  const int n = chart.dim;
  const int p = field.degree;

  const FormValue psi = field.eval(jets);
  const FormValue dpsi = field.d().eval(jets);
  const FormValue dstar = codifferential(psi, conn, frame);
  const std::vector<FormValue> covs = cov_deriv_form(psi, conn);

  std::vector<FormValue> residuals;
  residuals.reserve(n);
  std::vector<double> e(n, 0.0);
  for (int i = 0; i < n; ++i) {
    e.assign(n, 0.0);
    e[i] = 1.0;
    FormValue r = covs[i] -
                  scale(interior(e, dpsi), 1.0 / double(p + 1)) +
                  scale(wedge(coordinate_flat(md.g_val, i), dstar),
                        1.0 / double(n - p + 1));
    residuals.push_back(std::move(r));
  }

  const double scale_den = 1.0 + form_norm(md.ginv_val, psi);
  KillingBreakdown out;
  out.cky = frame_norm(md.ginv_val, residuals) / scale_den;
  out.coclosed = form_norm(md.ginv_val, dstar) / scale_den;
  return out;
}

double killing_residual(const Chart& chart, const FormField& field,
                        std::span<const double> pt) {
  return killing_residual_detail(chart, field, pt).value();
}

double cky_residual(const Chart& chart, const FormField& field,
                    std::span<const double> pt) {
  return killing_residual_detail(chart, field, pt).cky;
}

SpecialFit special_killing_fit(const Chart& chart, const FormField& field,
                               const std::vector<std::vector<double>>& pts) {
  if (pts.empty()) throw DomainError("special fit needs at least one point");
  const int n = chart.dim;

  std::complex<double> num_total = 0.0;
  double den_total = 0.0, lhs_total = 0.0;
  std::vector<std::complex<double>> point_num;
  std::vector<double> point_den;
  // Per point and frame direction k: L_k = nabla_k dF, R_k = (e_k)^flat ^ F.
  std::vector<std::vector<FormValue>> all_lhs, all_rhs;
  std::vector<Matrix<double>> all_ginv;

  for (const auto& pt : pts) {
    const auto jets = chart.seed(pt);
    const MetricData md = metric_at_jets(chart, jets);
    const Connection conn = christoffels(md);
    const FormValue psi = field.eval(jets);
    const FormValue dpsi = field.d().eval(jets);
    const std::vector<FormValue> lhs = cov_deriv_form(dpsi, conn);

    std::vector<FormValue> rhs;
    rhs.reserve(n);
    std::complex<double> num = 0.0;
    double den = 0.0, lhs_norm2 = 0.0;
    for (int k = 0; k < n; ++k) {
      rhs.push_back(wedge(coordinate_flat(md.g_val, k), psi));
      num += form_inner(md.ginv_val, lhs[k], rhs[k]);
      den += std::real(form_inner(md.ginv_val, rhs[k], rhs[k]));
      lhs_norm2 += std::real(form_inner(md.ginv_val, lhs[k], lhs[k]));
    }
    num_total += num;
    den_total += den;
    lhs_total += lhs_norm2;
    point_num.push_back(num);
    point_den.push_back(den);
    all_lhs.push_back(std::move(lhs));
    all_rhs.push_back(std::move(rhs));
    all_ginv.push_back(md.ginv_val);
  }

  if (den_total < 1e-12 * double(pts.size()))
    throw DomainError(
        "special fit is degenerate: X^flat ^ F vanishes on the samples");

  SpecialFit fit;
  fit.c_complex = num_total / den_total;
  fit.c = fit.c_complex.real();

  double res2 = 0.0;
  for (std::size_t s = 0; s < pts.size(); ++s) {
    for (int k = 0; k < n; ++k) {
      const FormValue diff =
          all_lhs[s][k] - scale(all_rhs[s][k], fit.c_complex);
      res2 += std::real(form_inner(all_ginv[s], diff, diff));
    }
    if (point_den[s] > 1e-12) {
      const std::complex<double> c_pt = point_num[s] / point_den[s];
      fit.spread = std::max(fit.spread, std::abs(c_pt - fit.c_complex));
    }
  }
  fit.residual = std::sqrt(std::abs(res2)) / (1.0 + std::sqrt(lhs_total));
  return fit;
}

double parallel_residual(const Chart& chart, const FormField& field,
                         std::span<const double> pt) {
  const auto jets = chart.seed(pt);
  const MetricData md = metric_at_jets(chart, jets);
  const Connection conn = christoffels(md);
  const FormValue psi = field.eval(jets);
  const std::vector<FormValue> covs = cov_deriv_form(psi, conn);
  return frame_norm(md.ginv_val, covs) / (1.0 + form_norm(md.ginv_val, psi));
}

FormField semmelmann_lift(const FormField& base_field) {
  const int p = base_field.degree;
  const int dim = base_field.dim + 1;
  FormField out;
  out.dim = dim;
  out.degree = p + 1;
  out.order = base_field.order;
  const FormField base = base_field;  // owns eval and exact_d
  out.eval = [base, p, dim](std::span<const Jet2> jets) {
    const Jet2 r = jets[0];
    // The base field (and any jet-based exterior derivative nested in it)
    // expects its own canonically seeded jets, so reseed from the values and
    // re-home the results onto the cone slot layout afterwards.
    std::vector<double> base_pt(dim - 1);
    for (int t = 1; t < dim; ++t) base_pt[t - 1] = jets[t].value();
    const auto base_jets = seed_point(base_pt);
    const FormValue psi = embed_form(base.eval(base_jets), 1, dim);
    const FormValue dpsi = embed_form(base.d().eval(base_jets), 1, dim);
    FormValue dr = zero_form(dim, 1, 2);
    dr.coeffs[{0}] = CJet(Jet2(1.0));
    // dr gets the seeded r-jet structure through the scale factors.
    const FormValue radial = scale_jet(wedge(dr, psi), CJet(pow(r, double(p))));
    const FormValue tangential =
        scale_jet(dpsi, CJet(pow(r, double(p + 1)) / double(p + 1)));
    return radial + tangential;
  };
  // d(r^p dr ^ F) = -r^p dr ^ dF cancels d(r^{p+1}/(p+1) dF) = r^p dr ^ dF.
  out.exact_d = std::make_shared<const FormField>(zero_field(dim, p + 2));
  return out;
}

double r_independence_residual(const FormField& cone_field,
                               std::span<const double> cone_pt,
                               std::span<const double> r_values) {
  if (r_values.size() < 2)
    throw DomainError("r-independence needs at least two radii");
  std::vector<FormValue> vals;
  double biggest = 0.0;
  std::vector<double> pt(cone_pt.begin(), cone_pt.end());
  for (double r : r_values) {
    pt[0] = r;
    vals.push_back(cone_field.eval(seed_point(pt)));
    biggest = std::max(biggest, euclid_norm(vals.back()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = i + 1; j < vals.size(); ++j)
      worst = std::max(worst, euclid_dist(vals[i], vals[j]));
  return worst / (1.0 + biggest);
}

}  // namespace skf
