#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "skf/errors.hpp"

namespace skf {

// Hard cap on the number of active coordinates a jet can carry. The largest
// chart in the library is the 6-dimensional metric cone over a 5-dimensional
// base; 8 leaves headroom for user charts.
inline constexpr int kMaxActive = 8;

// Second-order forward-mode scalar: value, gradient and Hessian with respect
// to a fixed ordered set of active coordinates. Jets combined in one
// expression must share the active set; constants (active() == 0) broadcast.
// The Hessian is stored as its upper triangle, so symmetry of mixed partials
// holds exactly by construction.
class Jet2 {
public:
  Jet2() = default;
  Jet2(double value) : v_(value) {}  // constant, broadcasts

  static Jet2 constant(double value, int n_active = 0) {
    Jet2 j;
    j.v_ = value;
    j.n_ = n_active;
    return j;
  }

  // Coordinate k of an n_active-dimensional active set.
  static Jet2 seed(double value, int k, int n_active) {
    if (n_active < 1 || n_active > kMaxActive || k < 0 || k >= n_active)
      throw DomainError("jet seed index out of range");
    Jet2 j;
    j.v_ = value;
    j.n_ = n_active;
    j.g_[k] = 1.0;
    return j;
  }

  double value() const { return v_; }
  int active() const { return n_; }
  double grad(int i) const { return g_[i]; }
  double hess(int i, int j) const {
    return i <= j ? h_[hidx(i, j)] : h_[hidx(j, i)];
  }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    assert(compatible(a, b));
    Jet2 r;
    r.n_ = std::max(a.n_, b.n_);
    r.v_ = a.v_ + b.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.g_[i] + b.g_[i];
    for (int i = 0; i < r.n_; ++i)
      for (int j = i; j < r.n_; ++j)
        r.h_[hidx(i, j)] = a.h_[hidx(i, j)] + b.h_[hidx(i, j)];
    return r;
  }

  friend Jet2 operator-(const Jet2& a, const Jet2& b) {
    assert(compatible(a, b));
    Jet2 r;
    r.n_ = std::max(a.n_, b.n_);
    r.v_ = a.v_ - b.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.g_[i] - b.g_[i];
    for (int i = 0; i < r.n_; ++i)
      for (int j = i; j < r.n_; ++j)
        r.h_[hidx(i, j)] = a.h_[hidx(i, j)] - b.h_[hidx(i, j)];
    return r;
  }

  friend Jet2 operator-(const Jet2& a) {
    Jet2 r;
    r.n_ = a.n_;
    r.v_ = -a.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = -a.g_[i];
    for (int i = 0; i < r.n_; ++i)
      for (int j = i; j < r.n_; ++j) r.h_[hidx(i, j)] = -a.h_[hidx(i, j)];
    return r;
  }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    assert(compatible(a, b));
    Jet2 r;
    r.n_ = std::max(a.n_, b.n_);
    r.v_ = a.v_ * b.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
    for (int i = 0; i < r.n_; ++i)
      for (int j = i; j < r.n_; ++j)
        r.h_[hidx(i, j)] = a.v_ * b.h_[hidx(i, j)] + b.v_ * a.h_[hidx(i, j)] +
                           a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
    return r;
  }

  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.v_ == 0.0) throw DomainError("division by zero");
    // 1/x has derivatives -1/x^2 and 2/x^3.
    const double inv = 1.0 / b.v_;
    return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
  Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

  friend Jet2 sin(const Jet2& a) {
    return chain(a, std::sin(a.v_), std::cos(a.v_), -std::sin(a.v_));
  }
  friend Jet2 cos(const Jet2& a) {
    return chain(a, std::cos(a.v_), -std::sin(a.v_), -std::cos(a.v_));
  }
  friend Jet2 tan(const Jet2& a) {
    if (std::abs(std::cos(a.v_)) < 1e-12)
      throw DomainError("tan evaluated at a pole");
    const double t = std::tan(a.v_);
    const double s = 1.0 + t * t;
    return chain(a, t, s, 2.0 * t * s);
  }
  friend Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v_);
    return chain(a, e, e, e);
  }
  friend Jet2 log(const Jet2& a) {
    if (a.v_ <= 0.0) throw DomainError("log of a nonpositive value");
    const double inv = 1.0 / a.v_;
    return chain(a, std::log(a.v_), inv, -inv * inv);
  }
  friend Jet2 sqrt(const Jet2& a) {
    if (a.v_ < 0.0) throw DomainError("sqrt of a negative value");
    if (a.v_ == 0.0) throw DomainError("sqrt at zero has unbounded derivative");
    const double s = std::sqrt(a.v_);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v_));
  }
  friend Jet2 abs(const Jet2& a) {
    if (a.v_ == 0.0) throw DomainError("abs is not differentiable at zero");
    return a.v_ > 0.0 ? a : -a;
  }

  // Power with a constant real exponent. Integral exponents admit any base
  // (negative bases included); fractional exponents require a positive base.
  friend Jet2 pow(const Jet2& a, double c) {
    if (c == 0.0) return Jet2::constant(1.0, a.n_);
    if (c == 1.0) return a;
    double ipart;
    const bool integral = std::modf(c, &ipart) == 0.0;
    if (!integral && a.v_ <= 0.0)
      throw DomainError("pow of a nonpositive base with fractional exponent");
    if (integral && c < 0.0 && a.v_ == 0.0)
      throw DomainError("pow of zero with negative exponent");
    const double f = std::pow(a.v_, c);
    const double df = c * std::pow(a.v_, c - 1.0);
    const double ddf = c * (c - 1.0) * std::pow(a.v_, c - 2.0);
    return chain(a, f, df, ddf);
  }

private:
  static constexpr int hidx(int i, int j) {  // requires i <= j
    return i * kMaxActive - i * (i - 1) / 2 + (j - i);
  }
  static bool compatible(const Jet2& a, const Jet2& b) {
    return a.n_ == 0 || b.n_ == 0 || a.n_ == b.n_;
  }
  // f, df, ddf are the outer function's value and derivatives at a.value().
  static Jet2 chain(const Jet2& a, double f, double df, double ddf) {
    Jet2 r;
    r.n_ = a.n_;
    r.v_ = f;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = df * a.g_[i];
    for (int i = 0; i < r.n_; ++i)
      for (int j = i; j < r.n_; ++j)
        r.h_[hidx(i, j)] = df * a.h_[hidx(i, j)] + ddf * a.g_[i] * a.g_[j];
    return r;
  }

  friend Jet2 partial(const Jet2&, int);
  friend Jet2 embed_active(const Jet2&, int, int);

  double v_ = 0.0;
  int n_ = 0;
  std::array<double, kMaxActive> g_{};
  std::array<double, kMaxActive*(kMaxActive + 1) / 2> h_{};
};

// First-order jet of the partial derivative d_k f: value is f's k-th gradient
// entry, gradient is the k-th Hessian row. The result's Hessian is zero
// (third derivatives are outside Jet2's reach), so it must only feed
// value/gradient arithmetic.
inline Jet2 partial(const Jet2& f, int k) {
  Jet2 r;
  r.n_ = f.n_;
  r.v_ = f.g_[k];
  for (int i = 0; i < r.n_; ++i) r.g_[i] = f.hess(k, i);
  return r;
}

// Re-homes a jet onto a wider active set, moving slot i to slot i + offset.
// Derivatives with respect to the new leading slots are zero, which is exact
// when the quantity does not depend on the inserted coordinates (a base-chart
// value viewed on the cone whose slot 0 is the radius). Constants widen.
inline Jet2 embed_active(const Jet2& f, int offset, int n_active) {
  if (offset < 0 || n_active > kMaxActive || f.n_ + offset > n_active)
    throw DomainError("embed_active: slots out of range");
  Jet2 r;
  r.n_ = n_active;
  r.v_ = f.v_;
  for (int i = 0; i < f.n_; ++i) r.g_[i + offset] = f.g_[i];
  for (int i = 0; i < f.n_; ++i)
    for (int j = i; j < f.n_; ++j)
      r.h_[Jet2::hidx(i + offset, j + offset)] = f.hess(i, j);
  return r;
}

// Seeds every entry of pt as an active coordinate.
inline std::vector<Jet2> seed_point(std::span<const double> pt) {
  const int n = static_cast<int>(pt.size());
  std::vector<Jet2> jets;
  jets.reserve(pt.size());
  for (int k = 0; k < n; ++k) jets.push_back(Jet2::seed(pt[k], k, n));
  return jets;
}

// Complex scalar built from a pair of real jets.
struct CJet {
  Jet2 re, im;

  CJet() = default;
  CJet(const Jet2& r) : re(r) {}
  CJet(const Jet2& r, const Jet2& i) : re(r), im(i) {}
  explicit CJet(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> value() const { return {re.value(), im.value()}; }
  std::complex<double> grad(int i) const { return {re.grad(i), im.grad(i)}; }

  friend CJet operator+(const CJet& a, const CJet& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend CJet operator-(const CJet& a, const CJet& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend CJet operator-(const CJet& a) { return {-a.re, -a.im}; }
  friend CJet operator*(const CJet& a, const CJet& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CJet operator*(const CJet& a, const std::complex<double>& z) {
    return a * CJet(z);
  }
  friend CJet operator*(const std::complex<double>& z, const CJet& a) {
    return CJet(z) * a;
  }
  friend CJet operator/(const CJet& a, const CJet& b) {
    const Jet2 d = b.re * b.re + b.im * b.im;
    if (d.value() == 0.0) throw DomainError("division by complex zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  CJet& operator+=(const CJet& o) { return *this = *this + o; }
  CJet& operator-=(const CJet& o) { return *this = *this - o; }
  CJet& operator*=(const CJet& o) { return *this = *this * o; }

  friend CJet conj(const CJet& a) { return {a.re, -a.im}; }
  friend Jet2 abs2(const CJet& a) { return a.re * a.re + a.im * a.im; }
};

}  // namespace skf
