#include "skf/toric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "skf/errors.hpp"

namespace skf {

std::vector<std::string> FoliationMap::coord_names() const {
  std::vector<std::string> names;
  names.reserve(2 * n);
  names.push_back("r");
  names.insert(names.end(), f_names.begin(), f_names.end());
  names.insert(names.end(), angle_names.begin(), angle_names.end());
  return names;
}

void FoliationMap::validate() const {
  if (n < 1) throw DomainError("foliation needs n >= 1");
  if (2 * n > kMaxActive)
    throw DomainError("foliation dimension 2n exceeds the jet variable limit");
  if (static_cast<int>(x.size()) != n)
    throw DomainError("foliation needs exactly n maps x^1..x^n");
  if (static_cast<int>(f_names.size()) != n - 1)
    throw DomainError("foliation needs n-1 leafwise coordinate names");
  if (static_cast<int>(angle_names.size()) != n)
    throw DomainError("foliation needs n angle names");
  if (static_cast<int>(domain.size()) != 2 * n)
    throw DomainError("foliation needs a domain interval per coordinate");
  const auto names = coord_names();
  std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size())
    throw DomainError("foliation coordinate names collide");
  std::set<std::string> allowed;
  allowed.insert("r");
  allowed.insert(f_names.begin(), f_names.end());
  for (const auto& [key, _] : params) allowed.insert(key);
  for (int i = 0; i < n; ++i)
    for (const auto& name : expr::free_vars(x[i]))
      if (!allowed.count(name))
        throw DomainError("foliation map x^" + std::to_string(i + 1) +
                          " references unknown name '" + name + "'");
}

FoliationMap make_foliation(int n, const std::vector<std::string>& x_sources,
                            std::vector<std::string> f_names,
                            std::vector<std::string> angle_names,
                            std::map<std::string, double> params,
                            std::vector<Interval> domain) {
  FoliationMap m;
  m.n = n;
  for (const auto& src : x_sources) m.x.push_back(expr::parse(src));
  m.f_names = std::move(f_names);
  m.angle_names = std::move(angle_names);
  m.params = std::move(params);
  m.domain = std::move(domain);
  m.validate();
  return m;
}

std::vector<IndexTriple> index_triples(int n) {
  std::vector<IndexTriple> out;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> left, right;
    for (int j = 1; j < i; ++j) left.push_back(j);
    for (int k = i + 1; k <= n; ++k) right.push_back(k);
    for (unsigned jm = 0; jm < (1u << left.size()); ++jm)
      for (unsigned km = 0; km < (1u << right.size()); ++km) {
        IndexTriple t;
        t.i = i;
        for (std::size_t b = 0; b < left.size(); ++b)
          if (jm & (1u << b)) t.J.push_back(left[b]);
        for (std::size_t b = 0; b < right.size(); ++b)
          if (km & (1u << b)) t.K.push_back(right[b]);
        const int want = n - 1 - static_cast<int>(t.J.size() + t.K.size());
        if (want < 0) continue;
        // L runs over subsets of the leafwise labels {2..n} of size `want`.
        std::vector<int> leaf;
        for (int l = 2; l <= n; ++l) leaf.push_back(l);
        std::vector<int> mask(leaf.size(), 0);
        std::fill(mask.begin(), mask.begin() + want, 1);
        std::sort(mask.begin(), mask.end());
        do {
          IndexTriple full = t;
          for (std::size_t b = 0; b < leaf.size(); ++b)
            if (mask[b]) full.L.push_back(leaf[b]);
          out.push_back(std::move(full));
        } while (std::next_permutation(mask.begin(), mask.end()));
      }
  }
  return out;
}

std::pair<long, int> term_sign(int n, int p, int q, std::span<const int> J,
                               std::span<const int> K) {
  long sum_j = 0, sum_k = 0;
  for (int j : J) sum_j += j;
  for (int k : K) sum_k += k;
  const long S = long(n) * q - sum_k + long(n) * p - sum_j -
                 long(q) * (q - 1) / 2 - long(p) * (p - 1) / 2 -
                 long(p) * (q + 1);
  return {S, (p + q) % 4};
}

namespace {

// Evaluates the foliation maps x^1..x^n on the seeded cone jets.
std::vector<Jet2> eval_maps(const FoliationMap& m, std::span<const Jet2> jets) {
  if (static_cast<int>(jets.size()) != 2 * m.n)
    throw DomainError("foliated point has the wrong dimension");
  std::function<Jet2(const std::string&, std::size_t)> lookup =
      [&m, jets](const std::string& name, std::size_t off) -> Jet2 {
    if (name == "r") return jets[0];
    for (int t = 0; t < m.n - 1; ++t)
      if (m.f_names[t] == name) return jets[1 + t];
    auto it = m.params.find(name);
    if (it != m.params.end()) return Jet2(it->second);
    throw EvalError("unbound variable '" + name + "' (at byte " +
                    std::to_string(off) + ")");
  };
  std::vector<Jet2> vals;
  vals.reserve(m.n);
  for (int i = 0; i < m.n; ++i)
    vals.push_back(expr::detail::eval_with<Jet2>(*m.x[i], lookup));
  return vals;
}

std::complex<double> unit_power(int k) {
  static const std::complex<double> table[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return table[((k % 4) + 4) % 4];
}

CJet holomorphic_prefactor(const FoliationMap& m, const Jet2& x1,
                           std::span<const Jet2> jets) {
  // e^{z^1} with z^1 = x^1 + i phi^1.
  const Jet2 mag = exp(x1);
  const Jet2 phi1 = jets[m.n];
  return CJet(mag * cos(phi1), mag * sin(phi1));
}

}  // namespace

Matrix<Jet2> jacobian_at(const FoliationMap& m, std::span<const Jet2> jets) {
  const auto vals = eval_maps(m, jets);
  Matrix<Jet2> A(m.n, std::vector<Jet2>(m.n, Jet2(0.0)));
  for (int i = 0; i < m.n; ++i)
    for (int c = 0; c < m.n; ++c) A[i][c] = partial(vals[i], c);
  return A;
}

Jet2 minor_det(const Matrix<Jet2>& A, const IndexTriple& t) {
  const int n = static_cast<int>(A.size());
  std::vector<bool> suppressed(n + 1, false);
  suppressed[t.i] = true;
  for (int j : t.J) suppressed[j] = true;
  for (int k : t.K) suppressed[k] = true;
  std::vector<int> rows;
  for (int r = 1; r <= n; ++r)
    if (!suppressed[r]) rows.push_back(r);
  if (rows.size() != t.L.size())
    throw DomainError("index triple does not balance");
  const int msize = static_cast<int>(rows.size());
  Matrix<Jet2> sub(msize, std::vector<Jet2>(msize, Jet2(0.0)));
  for (int a = 0; a < msize; ++a)
    for (int b = 0; b < msize; ++b) sub[a][b] = A[rows[a] - 1][t.L[b] - 1];
  return laplace_det(sub);
}

FormValue extract_special_form(const FoliationMap& m,
                               std::span<const Jet2> jets) {
  const int n = m.n;
  const int dim = 2 * n;
  const auto vals = eval_maps(m, jets);
  Matrix<Jet2> A(n, std::vector<Jet2>(n, Jet2(0.0)));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) A[i][c] = partial(vals[i], c);

  const CJet pref = holomorphic_prefactor(m, vals[0], jets) *
                    CJet(pow(jets[0], double(-(n - 1))));

  FormValue out = zero_form(dim, n - 1, 1);
  for (const IndexTriple& t : index_triples(n)) {
    const int p = static_cast<int>(t.J.size());
    const int q = static_cast<int>(t.K.size());
    const auto [S, ipow] = term_sign(n, p, q, t.J, t.K);
    // Moving dr from wedge slot i to the front contributes (-1)^{i-1} on
    // top of the label-driven parity S.
    const long parity = S + t.i - 1;
    std::complex<double> factor = unit_power(ipow);
    if (((parity % 2) + 2) % 2 == 1) factor = -factor;

    const CJet coeff = pref * (A[t.i - 1][0] * minor_det(A, t)) * factor;

    MultiIndex idx;
    for (int l : t.L) idx.push_back(l - 1);
    for (int j : t.J) idx.push_back(n - 1 + j);
    for (int k : t.K) idx.push_back(n - 1 + k);
    auto [it, inserted] = out.coeffs.try_emplace(idx, coeff);
    if (!inserted) it->second = it->second + coeff;
  }
  return out;
}

FormValue extract_special_form_at(const FoliationMap& m,
                                  std::span<const double> cone_pt) {
  return extract_special_form(m, seed_point(cone_pt));
}

OmegaPair direct_expansion_oracle(const FoliationMap& m,
                                  std::span<const Jet2> jets) {
  const int n = m.n;
  const int dim = 2 * n;
  const auto vals = eval_maps(m, jets);

  FormValue omega = zero_form(dim, 0, 1);
  omega.coeffs[{}] = CJet(Jet2(1.0));
  for (int i = 0; i < n; ++i) {
    FormValue dz = zero_form(dim, 1, 1);
    for (int c = 0; c < n; ++c) dz.coeffs[{c}] = CJet(partial(vals[i], c));
    dz.coeffs[{n + i}] = CJet(Jet2(0.0), Jet2(1.0));
    omega = wedge(omega, dz);
  }

  OmegaPair pair;
  pair.omega_full = scale_jet(omega, holomorphic_prefactor(m, vals[0], jets), 1);

  const CJet r_scale = CJet(pow(jets[0], double(-(n - 1))));
  pair.omega_base = zero_form(dim, n - 1, 1);
  for (const auto& [idx, coeff] : pair.omega_full.coeffs) {
    if (idx.empty() || idx[0] != 0) continue;
    MultiIndex rest(idx.begin() + 1, idx.end());
    pair.omega_base.coeffs[rest] = coeff * r_scale;
  }
  return pair;
}

FormField extracted_form_field(const FoliationMap& m) {
  FormField out;
  out.dim = 2 * m.n;
  out.degree = m.n - 1;
  out.order = 1;
  out.eval = [m](std::span<const Jet2> jets) {
    return extract_special_form(m, jets);
  };
  return out;
}

double omega_identity_residual(const FoliationMap& m,
                               std::span<const double> cone_pt) {
  const int n = m.n;
  const int dim = 2 * n;
  const auto jets = seed_point(cone_pt);
  const OmegaPair oracle = direct_expansion_oracle(m, jets);
  const FormValue omega = extract_special_form(m, jets);

  FormValue dr = zero_form(dim, 1, 1);
  dr.coeffs[{0}] = CJet(Jet2(1.0));
  const Jet2 r = jets[0];
  const FormValue radial =
      scale_jet(wedge(dr, omega), CJet(pow(r, double(n - 1))), 1);
  const FormValue d_base = drop_index_components(ext_deriv(omega), 0);
  const FormValue tangential =
      scale_jet(d_base, CJet(pow(r, double(n)) / double(n)), 0);

  const FormValue claim = radial + tangential;
  const double norm = euclid_norm(oracle.omega_full);
  return euclid_dist(oracle.omega_full, claim) / (norm > 0.0 ? norm : 1.0);
}

std::vector<std::vector<double>> sample_foliated_points(const FoliationMap& m,
                                                        int count,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    std::vector<double> pt(2 * m.n);
    for (int i = 0; i < 2 * m.n; ++i) {
      std::uniform_real_distribution<double> dist(m.domain[i].lo,
                                                  m.domain[i].hi);
      pt[i] = dist(rng);
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

}  // namespace skf
