#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "skf/forms.hpp"
#include "skf/jet.hpp"

// Shared helpers for the test binaries: finite-difference oracles for the
// jet derivatives, a permutation-expansion oracle for the wedge product,
// and generators of random-but-domain-safe expressions and forms.

namespace testutil {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n, double lo,
                                        double hi) {
  std::vector<double> pt(n);
  for (auto& x : pt) x = uniform(rng, lo, hi);
  return pt;
}

using RealFn = std::function<double(std::span<const double>)>;

// Five-point central differences; accurate to O(h^4).
inline double fd_grad(const RealFn& f, std::vector<double> x, int i,
                      double h = 3e-3) {
  const double x0 = x[i];
  const auto at = [&](double step) {
    x[i] = x0 + step;
    return f(x);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

inline double fd_hess(const RealFn& f, std::vector<double> x, int i, int j,
                      double h = 3e-3) {
  if (i == j) {
    const double x0 = x[i];
    const auto at = [&](double step) {
      x[i] = x0 + step;
      return f(x);
    };
    return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) /
           (12 * h * h);
  }
  const double xi = x[i], xj = x[j];
  const auto at = [&](double si, double sj) {
    x[i] = xi + si;
    x[j] = xj + sj;
    return f(x);
  };
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
}

// Checks an order-2 jet against finite differences of the plain function.
// Tolerances are framed relative to the magnitude of each derivative.
inline bool jet_matches_fd(const skf::Jet2& jet, const RealFn& f,
                           const std::vector<double>& x, double tol = 5e-7) {
  const int n = static_cast<int>(x.size());
  if (std::abs(jet.value() - f(x)) > tol * (1.0 + std::abs(jet.value())))
    return false;
  for (int i = 0; i < n; ++i) {
    const double g = fd_grad(f, x, i);
    if (std::abs(jet.grad(i) - g) > tol * (1.0 + std::abs(g))) return false;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double h = fd_hess(f, x, i, j);
      if (std::abs(jet.hess(i, j) - h) > 100 * tol * (1.0 + std::abs(h)))
        return false;
    }
  return true;
}

// Dense component lookup with the antisymmetric sign.
inline std::complex<double> dense_component(const skf::FormValue& a,
                                            std::span<const int> idx) {
  const auto norm = skf::normalize_index(idx);
  if (!norm) return 0.0;
  return double(norm->second) * a.coeff(norm->first).value();
}

// (a ^ b)_I by the permutation expansion
//   1/(p! q!) sum_{sigma} sgn(sigma) a_{I sigma(1..p)} b_{I sigma(p+1..)},
// entirely independent of the sparse wedge implementation.
inline std::complex<double> wedge_component_oracle(const skf::FormValue& a,
                                                   const skf::FormValue& b,
                                                   std::span<const int> idx) {
  const int p = a.degree, q = b.degree;
  if (static_cast<int>(idx.size()) != p + q) return 0.0;
  std::vector<int> perm(idx.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end());
  std::complex<double> total = 0.0;
  do {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) sign = -sign;
    std::vector<int> ia, ib;
    for (int s = 0; s < p; ++s) ia.push_back(idx[perm[s]]);
    for (int s = p; s < p + q; ++s) ib.push_back(idx[perm[s]]);
    total += double(sign) * dense_component(a, ia) * dense_component(b, ib);
  } while (std::next_permutation(perm.begin(), perm.end()));
  double fact = 1.0;
  for (int s = 2; s <= p; ++s) fact *= s;
  for (int s = 2; s <= q; ++s) fact *= s;
  return total / fact;
}

// A random form whose coefficients are polynomials in the seeded jets, so
// every derivative the library takes is meaningful.
inline skf::FormValue random_form(std::mt19937_64& rng, int dim, int degree,
                                  std::span<const skf::Jet2> jets,
                                  bool complex_coeffs = true) {
  skf::FormValue out = skf::zero_form(dim, degree, 2);
  for (const auto& idx : skf::all_increasing_indices(dim, degree)) {
    if (uniform(rng, 0.0, 1.0) < 0.3) continue;
    skf::Jet2 re(uniform(rng, -1.0, 1.0));
    skf::Jet2 im(0.0);
    for (int k = 0; k < dim; ++k) {
      re = re + uniform(rng, -1.0, 1.0) * jets[k] +
           uniform(rng, -0.5, 0.5) * jets[k] * jets[(k + 1) % dim];
      if (complex_coeffs)
        im = im + uniform(rng, -1.0, 1.0) * jets[k] * jets[k];
    }
    out.coeffs[idx] = skf::CJet(re, im);
  }
  return out;
}

// Random expression sources that stay inside every function's domain for
// arguments in [-1, 1]: denominators are bounded away from zero, logs and
// square roots see arguments >= 0.5, tan stays away from its poles.
inline std::string random_expr_source(std::mt19937_64& rng,
                                      std::span<const std::string> vars,
                                      int depth = 3) {
  const auto pick_var = [&]() -> std::string {
    return vars[static_cast<std::size_t>(uniform(rng, 0.0, 1.0) *
                                         double(vars.size())) %
                vars.size()];
  };
  const auto num = [&]() {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", uniform(rng, 0.1, 1.5));
    return std::string(buf);
  };
  if (depth == 0)
    return uniform(rng, 0.0, 1.0) < 0.5 ? pick_var() : num();
  const auto sub = [&]() { return random_expr_source(rng, vars, depth - 1); };
  switch (static_cast<int>(uniform(rng, 0.0, 10.0))) {
    case 0: return "(" + sub() + " + " + sub() + ")";
    case 1: return "(" + sub() + " - " + sub() + ")";
    case 2: return "(0.5*" + sub() + " * " + sub() + ")";
    case 3: return "(" + sub() + " / (2 + cos(" + sub() + ")))";
    case 4: return "sin(" + sub() + ")";
    case 5: return "cos(" + sub() + ")";
    case 6: return "exp(0.3*" + sub() + ")";
    case 7: return "ln(1.5 + sin(" + sub() + "))";
    case 8: return "sqrt(1.5 + cos(" + sub() + "))";
    default: return "tan(0.4*sin(" + sub() + "))";
  }
}

}  // namespace testutil
