#include "skf/forms.hpp"

#include <algorithm>
#include <cmath>

#include "skf/errors.hpp"

namespace skf {

namespace {

void require_same_space(const FormValue& a, const FormValue& b) {
  if (a.dim != b.dim)
    throw DomainError("forms live on different dimensions");
}

void require_index_range(std::span<const int> idx, int dim) {
  for (int i : idx)
    if (i < 0 || i >= dim) throw DomainError("form index out of range");
}

bool zero_jet(const CJet& c) {
  if (c.re.value() != 0.0 || c.im.value() != 0.0) return false;
  for (int i = 0; i < std::max(c.re.active(), c.im.active()); ++i)
    if (c.re.grad(i) != 0.0 || c.im.grad(i) != 0.0) return false;
  return true;
}

}  // namespace

std::optional<std::pair<MultiIndex, int>> normalize_index(std::span<const int> idx) {
  MultiIndex sorted(idx.begin(), idx.end());
  // Insertion sort with transposition count; tuples have length <= 6.
  int sign = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    int v = sorted[i];
    std::size_t j = i;
    while (j > 0 && sorted[j - 1] > v) {
      sorted[j] = sorted[j - 1];
      sign = -sign;
      --j;
    }
    sorted[j] = v;
  }
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) return std::nullopt;
  return std::make_pair(std::move(sorted), sign);
}

std::vector<MultiIndex> all_increasing_indices(int dim, int degree) {
  std::vector<MultiIndex> out;
  if (degree < 0 || degree > dim) return out;
  MultiIndex cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == degree) {
      out.push_back(cur);
      return;
    }
    const int need = degree - static_cast<int>(cur.size());
    for (int i = start; i + need <= dim; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

void FormValue::add(std::span<const int> idx, const CJet& c) {
  if (static_cast<int>(idx.size()) != degree)
    throw DomainError("form component has the wrong degree");
  require_index_range(idx, dim);
  auto norm = normalize_index(idx);
  if (!norm) return;
  const CJet signed_c = norm->second > 0 ? c : -c;
  auto [it, inserted] = coeffs.emplace(std::move(norm->first), signed_c);
  if (!inserted) it->second += signed_c;
}

FormValue zero_form(int dim, int degree, int order) {
  FormValue f;
  f.dim = dim;
  f.degree = degree;
  f.order = order;
  return f;
}

FormValue operator+(const FormValue& a, const FormValue& b) {
  require_same_space(a, b);
  if (a.degree != b.degree) throw DomainError("adding forms of different degree");
  FormValue out = a;
  out.order = std::min(a.order, b.order);
  for (const auto& [idx, c] : b.coeffs) {
    auto [it, inserted] = out.coeffs.emplace(idx, c);
    if (!inserted) it->second += c;
  }
  return out;
}

FormValue operator-(const FormValue& a, const FormValue& b) {
  return a + scale(b, -1.0);
}

FormValue scale(const FormValue& a, std::complex<double> z) {
  FormValue out = zero_form(a.dim, a.degree, a.order);
  for (const auto& [idx, c] : a.coeffs) out.coeffs.emplace(idx, c * z);
  return out;
}

FormValue scale_jet(const FormValue& a, const CJet& c, int c_order) {
  FormValue out = zero_form(a.dim, a.degree, std::min(a.order, c_order));
  for (const auto& [idx, v] : a.coeffs) out.coeffs.emplace(idx, v * c);
  return out;
}

FormValue wedge(const FormValue& a, const FormValue& b) {
  require_same_space(a, b);
  FormValue out = zero_form(a.dim, a.degree + b.degree, std::min(a.order, b.order));
  if (out.degree > a.dim) return out;  // canonical zero past top degree
  std::vector<int> idx;
  for (const auto& [ia, ca] : a.coeffs) {
    if (zero_jet(ca)) continue;
    for (const auto& [ib, cb] : b.coeffs) {
      idx.assign(ia.begin(), ia.end());
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(idx, ca * cb);
    }
  }
  return out;
}

FormValue interior(std::span<const double> v, const FormValue& a) {
  if (static_cast<int>(v.size()) != a.dim)
    throw DomainError("vector dimension does not match form");
  if (a.degree == 0)
    throw DomainError("interior product of a 0-form");
  FormValue out = zero_form(a.dim, a.degree - 1, a.order);
  for (const auto& [idx, c] : a.coeffs) {
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (v[idx[s]] == 0.0) continue;
      MultiIndex rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t t = 0; t < idx.size(); ++t)
        if (t != s) rest.push_back(idx[t]);
      const double f = (s % 2 == 0) ? v[idx[s]] : -v[idx[s]];
      auto [it, inserted] = out.coeffs.emplace(std::move(rest), c * std::complex<double>(f));
      if (!inserted) it->second += c * std::complex<double>(f);
    }
  }
  return out;
}

FormValue ext_deriv(const FormValue& a) {
  if (a.order < 1)
    throw DomainError("exterior derivative needs first-order coefficient jets");
  FormValue out = zero_form(a.dim, a.degree + 1, a.order - 1);
  if (out.degree > a.dim) return out;
  std::vector<int> idx;
  for (const auto& [ia, c] : a.coeffs) {
    for (int k = 0; k < a.dim; ++k) {
      const CJet dk{partial(c.re, k), partial(c.im, k)};
      if (zero_jet(dk)) continue;
      idx.assign(1, k);
      idx.insert(idx.end(), ia.begin(), ia.end());
      out.add(idx, dk);
    }
  }
  return out;
}

std::complex<double> form_inner(const Matrix<double>& ginv, const FormValue& a,
                                const FormValue& b) {
  require_same_space(a, b);
  if (a.degree != b.degree)
    throw DomainError("inner product of forms of different degree");
  const int p = a.degree;
  std::complex<double> acc = 0.0;
  Matrix<double> minor(p, std::vector<double>(p));
  for (const auto& [ia, ca] : a.coeffs) {
    for (const auto& [ib, cb] : b.coeffs) {
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) minor[r][c] = ginv[ia[r]][ib[c]];
      acc += ca.value() * std::conj(cb.value()) * laplace_det(minor);
    }
  }
  return acc;
}

double form_norm(const Matrix<double>& ginv, const FormValue& a) {
  return std::sqrt(std::max(0.0, form_inner(ginv, a, a).real()));
}

double euclid_norm(const FormValue& a) {
  double s = 0.0;
  for (const auto& [idx, c] : a.coeffs) s += std::norm(c.value());
  return std::sqrt(s);
}

double euclid_dist(const FormValue& a, const FormValue& b) {
  require_same_space(a, b);
  double s = 0.0;
  for (const auto& [idx, c] : a.coeffs)
    s += std::norm(c.value() - b.coeff(idx).value());
  for (const auto& [idx, c] : b.coeffs)
    if (a.coeffs.find(idx) == a.coeffs.end()) s += std::norm(c.value());
  return std::sqrt(s);
}

FormValue shift_indices(const FormValue& a, int offset, int new_dim) {
  FormValue out = zero_form(new_dim, a.degree, a.order);
  for (const auto& [idx, c] : a.coeffs) {
    MultiIndex shifted = idx;
    for (int& i : shifted) {
      i += offset;
      if (i < 0 || i >= new_dim) throw DomainError("index shift out of range");
    }
    out.coeffs.emplace(std::move(shifted), c);
  }
  return out;
}

FormValue embed_form(const FormValue& a, int offset, int new_dim) {
  FormValue out = zero_form(new_dim, a.degree, a.order);
  for (const auto& [idx, c] : a.coeffs) {
    MultiIndex shifted = idx;
    for (int& i : shifted) {
      i += offset;
      if (i < 0 || i >= new_dim) throw DomainError("index shift out of range");
    }
    out.coeffs.emplace(std::move(shifted),
                       CJet{embed_active(c.re, offset, new_dim),
                            embed_active(c.im, offset, new_dim)});
  }
  return out;
}

FormValue drop_index_components(const FormValue& a, int index) {
  FormValue out = zero_form(a.dim, a.degree, a.order);
  for (const auto& [idx, c] : a.coeffs)
    if (std::find(idx.begin(), idx.end(), index) == idx.end())
      out.coeffs.emplace(idx, c);
  return out;
}

FormValue substitute_coframe(const FormValue& a, const CoframeRows& rows,
                             int new_dim) {
  FormValue out = zero_form(new_dim, a.degree, a.order);
  std::vector<int> idx(a.degree);
  for (const auto& [ia, c] : a.coeffs) {
    // Expand the product of substituted basis covectors term by term.
    std::function<void(std::size_t, double)> expand = [&](std::size_t s, double f) {
      if (s == ia.size()) {
        out.add(idx, c * std::complex<double>(f));
        return;
      }
      for (const auto& [tgt, w] : rows[ia[s]]) {
        idx[s] = tgt;
        expand(s + 1, f * w);
      }
    };
    expand(0, 1.0);
  }
  return out;
}

FormField FormField::d() const {
  if (exact_d) return *exact_d;
  FormField out;
  out.dim = dim;
  out.degree = degree + 1;
  out.order = order - 1;
  out.eval = [self = *this](std::span<const Jet2> jets) {
    return ext_deriv(self.eval(jets));
  };
  // d of this numeric derivative vanishes identically.
  out.exact_d = std::make_shared<const FormField>(zero_field(dim, degree + 2));
  return out;
}

FormField zero_field(int dim, int degree) {
  FormField f;
  f.dim = dim;
  f.degree = degree;
  f.order = 2;
  f.eval = [dim, degree](std::span<const Jet2>) { return zero_form(dim, degree); };
  return f;
}

FormField wedge(const FormField& a, const FormField& b) {
  if (a.dim != b.dim) throw DomainError("fields live on different dimensions");
  FormField out;
  out.dim = a.dim;
  out.degree = a.degree + b.degree;
  out.order = std::min(a.order, b.order);
  out.eval = [ea = a.eval, eb = b.eval](std::span<const Jet2> jets) {
    return wedge(ea(jets), eb(jets));
  };
  return out;
}

FormField scale(const FormField& a, std::complex<double> z) {
  FormField out = a;
  out.eval = [ea = a.eval, z](std::span<const Jet2> jets) {
    return scale(ea(jets), z);
  };
  if (a.exact_d) {
    auto d = std::make_shared<FormField>(scale(*a.exact_d, z));
    out.exact_d = d;
  }
  return out;
}

FormField add(const FormField& a, const FormField& b) {
  if (a.dim != b.dim || a.degree != b.degree)
    throw DomainError("adding incompatible fields");
  FormField out;
  out.dim = a.dim;
  out.degree = a.degree;
  out.order = std::min(a.order, b.order);
  out.eval = [ea = a.eval, eb = b.eval](std::span<const Jet2> jets) {
    return ea(jets) + eb(jets);
  };
  return out;
}

}  // namespace skf
