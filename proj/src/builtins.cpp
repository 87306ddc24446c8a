#include "skf/builtins.hpp"

#include <cmath>

#include "skf/expr.hpp"

namespace skf {

Chart make_flat_chart(int n, double half_width) {
  if (n < 1 || n > kMaxActive)
    throw ChartError("flat chart dimension out of range");
  Chart chart;
  chart.name = "flat" + std::to_string(n);
  chart.dim = n;
  for (int i = 1; i <= n; ++i) chart.coords.push_back("x" + std::to_string(i));
  chart.domain.assign(n, Interval{-half_width, half_width});
  chart.metric = make_matrix<ScalarField>(n);
  for (int i = 0; i < n; ++i)
    chart.metric[i][i] = [](std::span<const Jet2>) { return Jet2(1.0); };
  return chart;
}

Chart make_sphere2_chart(double margin) {
  Chart chart;
  chart.name = "sphere2";
  chart.dim = 2;
  chart.coords = {"theta", "phi"};
  chart.domain = {Interval{margin, std::acos(-1.0) - margin},
                  Interval{0.0, 2.0 * std::acos(-1.0)}};
  chart.metric = make_matrix<ScalarField>(2);
  chart.metric[0][0] = [](std::span<const Jet2>) { return Jet2(1.0); };
  chart.metric[1][1] = [](std::span<const Jet2> jets) {
    const Jet2 s = sin(jets[0]);
    return s * s;
  };
  return chart;
}

Chart make_bumpy_chart() {
  Chart chart;
  chart.name = "bumpy3";
  chart.dim = 3;
  chart.coords = {"u", "v", "w"};
  chart.domain.assign(3, Interval{-1.0, 1.0});
  chart.metric = make_matrix<ScalarField>(3);
  const char* entries[3][3] = {
      {"3 + sin(u)", "0.2*sin(u + v)", "0.1*cos(w)"},
      {nullptr, "2.5 + 0.5*cos(v) + 0.1*u^2", "0.15*u*v"},
      {nullptr, nullptr, "2 + 0.3*exp(0.2*w)"},
  };
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      auto field = expr::compile_field(expr::parse(entries[i][j]), chart.coords,
                                       {});
      chart.metric[i][j] = field;
      chart.metric[j][i] = std::move(field);
    }
  return chart;
}

FormField flat3_killing_form() {
  FormField f;
  f.dim = 3;
  f.degree = 2;
  f.eval = [](std::span<const Jet2> jets) {
    FormValue v = zero_form(3, 2);
    v.coeffs[{0, 1}] = CJet(jets[2]);
    v.coeffs[{0, 2}] = CJet(-jets[1]);
    v.coeffs[{1, 2}] = CJet(jets[0]);
    return v;
  };
  FormField df;
  df.dim = 3;
  df.degree = 3;
  df.eval = [](std::span<const Jet2>) {
    FormValue v = zero_form(3, 3);
    v.coeffs[{0, 1, 2}] = CJet(Jet2(3.0));
    return v;
  };
  df.exact_d = std::make_shared<const FormField>(zero_field(3, 4));
  f.exact_d = std::make_shared<const FormField>(std::move(df));
  return f;
}

FormField sphere_killing_one_form() {
  FormField f;
  f.dim = 2;
  f.degree = 1;
  f.eval = [](std::span<const Jet2> jets) {
    FormValue v = zero_form(2, 1);
    const Jet2 s = sin(jets[0]);
    v.coeffs[{1}] = CJet(s * s);
    return v;
  };
  FormField df;
  df.dim = 2;
  df.degree = 2;
  df.eval = [](std::span<const Jet2> jets) {
    FormValue v = zero_form(2, 2);
    v.coeffs[{0, 1}] = CJet(sin(2.0 * jets[0]));
    return v;
  };
  df.exact_d = std::make_shared<const FormField>(zero_field(2, 3));
  f.exact_d = std::make_shared<const FormField>(std::move(df));
  return f;
}

}  // namespace skf
