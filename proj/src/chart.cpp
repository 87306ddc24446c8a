#include "skf/chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "skf/errors.hpp"
#include "skf/toric.hpp"

namespace skf {

namespace {

void require_dim(const Chart& chart, std::size_t got, const char* what) {
  if (static_cast<int>(got) != chart.dim)
    throw ChartError("chart '" + chart.name + "': " + what + " has size " +
                     std::to_string(got) + ", expected " +
                     std::to_string(chart.dim));
}

}  // namespace

int Chart::coord_index(const std::string& coord) const {
  for (int i = 0; i < dim; ++i)
    if (coords[i] == coord) return i;
  throw ChartError("chart '" + name + "' has no coordinate '" + coord + "'");
}

bool Chart::contains(std::span<const double> pt) const {
  if (static_cast<int>(pt.size()) != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (!domain[i].contains(pt[i])) return false;
  return !predicate || predicate(pt);
}

void Chart::require_inside(std::span<const double> pt) const {
  require_dim(*this, pt.size(), "point");
  if (!contains(pt))
    throw ChartError("point outside the domain of chart '" + name + "'");
}

std::vector<Jet2> Chart::seed(std::span<const double> pt) const {
  require_inside(pt);
  return seed_point(pt);
}

MetricData metric_at_jets(const Chart& chart, std::span<const Jet2> jets) {
  require_dim(chart, jets.size(), "jet tuple");
  require_dim(chart, chart.metric.size(), "metric table");
  const int n = chart.dim;
  MetricData md;
  md.g = make_matrix<Jet2>(n, Jet2(0.0));
  md.g_val = make_matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i) {
    require_dim(chart, chart.metric[i].size(), "metric row");
    for (int j = i; j < n; ++j) {
      const ScalarField& lo = chart.metric[i][j];
      const ScalarField& hi = chart.metric[j][i];
      if (!lo && !hi) continue;
      const Jet2 gij = lo ? lo(jets) : hi(jets);
      if (lo && hi && i != j) {
        const double other = hi(jets).value();
        if (std::abs(other - gij.value()) > 1e-9 * (1.0 + std::abs(gij.value())))
          throw ChartError("chart '" + chart.name + "': metric entry (" +
                           std::to_string(i) + "," + std::to_string(j) +
                           ") is not symmetric");
      }
      md.g[i][j] = gij;
      md.g[j][i] = gij;
      md.g_val[i][j] = gij.value();
      md.g_val[j][i] = gij.value();
    }
  }
  cholesky_lower(md.g_val);  // positive definiteness check
  md.ginv = gauss_jordan_inverse(md.g);
  md.ginv_val = make_matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) md.ginv_val[i][j] = md.ginv[i][j].value();
  return md;
}

MetricData metric_at(const Chart& chart, std::span<const double> pt) {
  return metric_at_jets(chart, chart.seed(pt));
}

const Jet2& Connection::at(int k, int i, int j) const {
  return gamma[(k * dim + i) * dim + j];
}

Jet2& Connection::at(int k, int i, int j) {
  return gamma[(k * dim + i) * dim + j];
}

Connection christoffels(const MetricData& md) {
  const int n = static_cast<int>(md.g.size());
  Connection conn;
  conn.dim = n;
  conn.gamma.assign(static_cast<std::size_t>(n) * n * n, Jet2(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}),
      // carried as first-order jets so Ricci can differentiate once more.
      std::vector<Jet2> bracket(n, Jet2(0.0));
      for (int l = 0; l < n; ++l)
        bracket[l] = partial(md.g[j][l], i) + partial(md.g[i][l], j) -
                     partial(md.g[i][j], l);
      for (int k = 0; k < n; ++k) {
        Jet2 sum(0.0);
        for (int l = 0; l < n; ++l) sum += md.ginv[k][l] * bracket[l];
        conn.at(k, i, j) = 0.5 * sum;
        conn.at(k, j, i) = conn.at(k, i, j);
      }
    }
  return conn;
}

Matrix<double> ricci(const Connection& conn) {
  const int n = conn.dim;
  Matrix<double> ric = make_matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double r = 0.0;
      for (int k = 0; k < n; ++k) {
        r += conn.at(k, i, j).grad(k) - conn.at(k, k, j).grad(i);
        for (int l = 0; l < n; ++l)
          r += conn.at(k, k, l).value() * conn.at(l, i, j).value() -
               conn.at(k, i, l).value() * conn.at(l, k, j).value();
      }
      ric[i][j] = r;
      ric[j][i] = r;
    }
  return ric;
}

namespace {

double frobenius(const Matrix<double>& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double einstein_residual(const Chart& chart, std::span<const double> pt,
                         double lambda) {
  const MetricData md = metric_at(chart, pt);
  const Matrix<double> ric = ricci(christoffels(md));
  const int n = chart.dim;
  Matrix<double> diff = make_matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) diff[i][j] = ric[i][j] - lambda * md.g_val[i][j];
  return frobenius(diff) / frobenius(md.g_val);
}

double metricity_residual(const Chart& chart, std::span<const double> pt) {
  const MetricData md = metric_at(chart, pt);
  const Connection conn = christoffels(md);
  const int n = chart.dim;
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double cov = md.g[i][j].grad(k);
        for (int l = 0; l < n; ++l)
          cov -= conn.at(l, k, i).value() * md.g_val[l][j] +
                 conn.at(l, k, j).value() * md.g_val[i][l];
        s += cov * cov;
      }
  return std::sqrt(s) / frobenius(md.g_val);
}

std::vector<FormValue> cov_deriv_form(const FormValue& f,
                                      const Connection& conn) {
  if (f.order < 1) throw DomainError("covariant derivative needs order >= 1");
  if (f.dim != conn.dim)
    throw DomainError("covariant derivative: dimension mismatch");
  const int n = f.dim;
  std::vector<FormValue> out(n, zero_form(n, f.degree, f.order - 1));
  const auto support = all_increasing_indices(n, f.degree);
  for (int k = 0; k < n; ++k) {
    // Connection terms reach outside the stored support of f, so the loop
    // runs over every increasing index of the degree.
    for (const MultiIndex& idx : support) {
      const CJet fi = f.coeff(idx);
      CJet val{partial(fi.re, k), partial(fi.im, k)};
      for (std::size_t s = 0; s < idx.size(); ++s)
        for (int l = 0; l < n; ++l) {
          MultiIndex swapped = idx;
          swapped[s] = l;
          const auto norm = normalize_index(swapped);
          if (!norm) continue;
          const auto it = f.coeffs.find(norm->first);
          if (it == f.coeffs.end()) continue;
          const Jet2 gam = conn.at(l, k, idx[s]) * double(norm->second);
          val = val - gam * it->second;
        }
      out[k].coeffs[idx] = val;
    }
  }
  return out;
}

Matrix<double> orthonormal_frame(const Matrix<double>& g_val) {
  return lower_inverse(cholesky_lower(g_val));
}

FormValue codifferential(const FormValue& f, const Connection& conn,
                         const Matrix<double>& frame) {
  if (f.degree == 0) return zero_form(f.dim, 0, std::max(0, f.order - 1));
  const std::vector<FormValue> covs = cov_deriv_form(f, conn);
  FormValue out = zero_form(f.dim, f.degree - 1, std::max(0, f.order - 1));
  for (int a = 0; a < f.dim; ++a) {
    FormValue dir = zero_form(f.dim, f.degree, std::max(0, f.order - 1));
    for (int i = 0; i < f.dim; ++i)
      if (frame[a][i] != 0.0)
        dir = dir + scale(covs[i], std::complex<double>(frame[a][i], 0.0));
    out = out - interior(frame[a], dir);
  }
  return out;
}

FormValue codifferential(const Chart& chart, std::span<const double> pt,
                         const FormValue& f) {
  const MetricData md = metric_at(chart, pt);
  return codifferential(f, christoffels(md), orthonormal_frame(md.g_val));
}

FormValue flat(const Matrix<Jet2>& g, std::span<const double> v) {
  const int n = static_cast<int>(g.size());
  if (static_cast<int>(v.size()) != n)
    throw DomainError("flat: vector size does not match the metric");
  FormValue out = zero_form(n, 1, 2);
  for (int i = 0; i < n; ++i) {
    Jet2 sum(0.0);
    for (int j = 0; j < n; ++j) sum += g[i][j] * v[j];
    out.coeffs[{i}] = CJet(sum);
  }
  return out;
}

std::vector<std::complex<double>> sharp(const Matrix<double>& ginv_val,
                                        const FormValue& one_form) {
  if (one_form.degree != 1) throw DomainError("sharp expects a 1-form");
  const int n = one_form.dim;
  std::vector<std::complex<double>> v(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v[i] += ginv_val[i][j] * one_form.coeff({j}).value();
  return v;
}

Chart cone_extend(const Chart& base, Interval r_range) {
  for (const auto& c : base.coords)
    if (c == "r")
      throw ChartError("cone_extend: base chart already has a coordinate 'r'");
  Chart cone;
  cone.name = base.name + "_cone";
  cone.dim = base.dim + 1;
  cone.coords.push_back("r");
  cone.coords.insert(cone.coords.end(), base.coords.begin(), base.coords.end());
  cone.params = base.params;
  cone.domain.push_back(r_range);
  cone.domain.insert(cone.domain.end(), base.domain.begin(), base.domain.end());
  if (base.predicate) {
    auto pred = base.predicate;
    cone.predicate = [pred](std::span<const double> pt) {
      return pred(pt.subspan(1));
    };
  }
  cone.metric = make_matrix<ScalarField>(cone.dim);
  cone.metric[0][0] = [](std::span<const Jet2>) { return Jet2(1.0); };
  for (int i = 0; i < base.dim; ++i)
    for (int j = 0; j < base.dim; ++j) {
      if (!base.metric[i][j]) continue;
      auto entry = base.metric[i][j];
      cone.metric[i + 1][j + 1] = [entry](std::span<const Jet2> jets) {
        return jets[0] * jets[0] * entry(jets.subspan(1));
      };
    }
  return cone;
}

FormField cone_extend_field(const FormField& base_field) {
  FormField out;
  out.dim = base_field.dim + 1;
  out.degree = base_field.degree;
  out.order = base_field.order;
  const auto eval = base_field.eval;
  const int new_dim = out.dim;
  out.eval = [eval, new_dim](std::span<const Jet2> jets) {
    // Reseed so the base field sees its own slot layout, then re-home.
    std::vector<double> base_pt(new_dim - 1);
    for (int t = 1; t < new_dim; ++t) base_pt[t - 1] = jets[t].value();
    return embed_form(eval(seed_point(base_pt)), 1, new_dim);
  };
  // Pullbacks along the cone projection commute with d: the coefficients do
  // not depend on r and no dr component appears.
  if (base_field.exact_d)
    out.exact_d =
        std::make_shared<const FormField>(cone_extend_field(*base_field.exact_d));
  return out;
}

std::vector<std::vector<double>> sample_points(const Chart& chart, int count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  int attempts = 0;
  while (static_cast<int>(pts.size()) < count) {
    if (++attempts > 1000 * count + 1000)
      throw ChartError("sampling the domain of chart '" + chart.name +
                       "' keeps hitting the predicate");
    std::vector<double> pt(chart.dim);
    for (int i = 0; i < chart.dim; ++i) {
      std::uniform_real_distribution<double> dist(chart.domain[i].lo,
                                                  chart.domain[i].hi);
      pt[i] = dist(rng);
    }
    if (chart.contains(pt)) pts.push_back(std::move(pt));
  }
  return pts;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad_chart(const std::string& msg) {
  throw ChartError("chart description: " + msg);
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad_chart(std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* what,
                                     bool allow_empty = false) {
  if (!j.is_array() || (!allow_empty && j.empty()))
    bad_chart(std::string(what) + (allow_empty
                                       ? " must be an array of strings"
                                       : " must be a non-empty array of strings"));
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string())
      bad_chart(std::string(what) + " must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Interval parse_interval(const json& j, const std::string& coord) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad_chart("domain of '" + coord + "' must be [lo, hi]");
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  if (!(iv.lo < iv.hi)) bad_chart("domain of '" + coord + "' is empty");
  return iv;
}

expr::ExprPtr parse_entry(const std::string& src, const std::string& where,
                          const std::vector<std::string>& known) {
  expr::ExprPtr e;
  try {
    e = expr::parse(src);
  } catch (const ParseError& err) {
    bad_chart(where + ": " + err.what());
  }
  for (const auto& name : expr::free_vars(e)) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      bad_chart(where + ": unknown name '" + name + "'");
  }
  return e;
}

}  // namespace

LoadedChart load_chart_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& err) {
    bad_chart(std::string("invalid JSON: ") + err.what());
  }
  if (!j.is_object()) bad_chart("top level must be an object");

  LoadedChart loaded;
  Chart& chart = loaded.chart;
  const json& jname = need(j, "name");
  if (!jname.is_string()) bad_chart("'name' must be a string");
  chart.name = jname.get<std::string>();
  chart.coords = string_list(need(j, "coords"), "'coords'");
  chart.dim = static_cast<int>(chart.coords.size());
  {
    auto sorted = chart.coords;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      bad_chart("duplicate coordinate name");
  }
  if (chart.dim > kMaxActive)
    bad_chart("at most " + std::to_string(kMaxActive) + " coordinates");

  if (auto it = j.find("params"); it != j.end()) {
    if (!it->is_object()) bad_chart("'params' must be an object");
    for (const auto& [key, val] : it->items()) {
      if (!val.is_number()) bad_chart("parameter '" + key + "' must be a number");
      if (std::find(chart.coords.begin(), chart.coords.end(), key) !=
          chart.coords.end())
        bad_chart("parameter '" + key + "' shadows a coordinate");
      chart.params[key] = val.get<double>();
    }
  }

  std::vector<std::string> known = chart.coords;
  for (const auto& [key, _] : chart.params) known.push_back(key);

  const json& dom = need(j, "domain");
  if (!dom.is_object()) bad_chart("'domain' must be an object");
  chart.domain.resize(chart.dim);
  for (int i = 0; i < chart.dim; ++i) {
    auto it = dom.find(chart.coords[i]);
    if (it == dom.end()) bad_chart("missing domain for '" + chart.coords[i] + "'");
    chart.domain[i] = parse_interval(*it, chart.coords[i]);
  }

  const json& met = need(j, "metric");
  if (!met.is_object() || met.empty())
    bad_chart("'metric' must be a non-empty object");
  chart.metric = make_matrix<ScalarField>(chart.dim);
  std::set<std::pair<int, int>> seen;
  for (const auto& [key, val] : met.items()) {
    int a = -1, b = -1;
    char comma = 0;
    std::istringstream is(key);
    if (!(is >> a >> comma >> b) || comma != ',' || !is.eof() || a < 0 ||
        b < 0 || a >= chart.dim || b >= chart.dim)
      bad_chart("metric key '" + key + "' is not an index pair 'i,j' in range");
    const auto canon = std::minmax(a, b);
    if (!seen.insert(canon).second)
      bad_chart("metric entry (" + std::to_string(canon.first) + "," +
                std::to_string(canon.second) + ") given twice");
    if (!val.is_string()) bad_chart("metric entry '" + key + "' must be a string");
    const auto e = parse_entry(val.get<std::string>(), "metric entry '" + key + "'",
                               known);
    auto field = expr::compile_field(e, chart.coords, chart.params);
    chart.metric[a][b] = field;
    chart.metric[b][a] = std::move(field);
  }
  for (int i = 0; i < chart.dim; ++i)
    if (!chart.metric[i][i]) bad_chart("metric entry (" + std::to_string(i) + "," +
                                       std::to_string(i) + ") is required");

  if (auto it = j.find("foliation"); it != j.end()) {
    const json& fol = *it;
    if (!fol.is_object()) bad_chart("'foliation' must be an object");
    if (!need(fol, "n").is_number_integer())
      bad_chart("foliation 'n' must be an integer");
    const int n = fol["n"].get<int>();
    auto x_src = string_list(need(fol, "x"), "foliation 'x'");
    // A 1-dimensional foliation has no leafwise coordinates at all.
    auto f_names = string_list(need(fol, "f"), "foliation 'f'", true);
    auto angle_names = string_list(need(fol, "angles"), "foliation 'angles'");

    std::vector<std::string> names;
    names.push_back("r");
    names.insert(names.end(), f_names.begin(), f_names.end());
    names.insert(names.end(), angle_names.begin(), angle_names.end());
    std::vector<std::optional<Interval>> fdom(names.size());
    fdom[0] = Interval{0.5, 2.0};
    for (std::size_t s = 0; s < f_names.size(); ++s)
      for (int i = 0; i < chart.dim; ++i)
        if (chart.coords[i] == f_names[s]) fdom[1 + s] = chart.domain[i];
    for (std::size_t s = 0; s < angle_names.size(); ++s)
      fdom[1 + f_names.size() + s] = Interval{0.0, 2.0 * std::acos(-1.0)};
    if (auto dit = fol.find("domain"); dit != fol.end()) {
      if (!dit->is_object()) bad_chart("foliation 'domain' must be an object");
      for (const auto& [key, val] : dit->items()) {
        auto pos = std::find(names.begin(), names.end(), key);
        if (pos == names.end())
          bad_chart("foliation domain names unknown coordinate '" + key + "'");
        fdom[pos - names.begin()] = parse_interval(val, key);
      }
    }
    std::vector<Interval> resolved;
    for (std::size_t s = 0; s < names.size(); ++s) {
      if (!fdom[s])
        bad_chart("missing foliation domain for '" + names[s] + "'");
      resolved.push_back(*fdom[s]);
    }

    try {
      loaded.foliation = std::make_shared<const FoliationMap>(make_foliation(
          n, x_src, f_names, angle_names, chart.params, std::move(resolved)));
    } catch (const DomainError& err) {
      bad_chart(std::string("foliation: ") + err.what());
    }
  }

  return loaded;
}

LoadedChart load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChartError("cannot open chart file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_chart_json_text(buf.str());
}

}  // namespace skf
