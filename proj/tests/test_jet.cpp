#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "skf/errors.hpp"
#include "skf/jet.hpp"
#include "testutil.hpp"

using skf::CJet;
using skf::Jet2;

TEST_CASE("constants broadcast and seeds carry unit gradients") {
  const Jet2 c(2.5);
  CHECK(c.value() == 2.5);
  CHECK(c.active() == 0);

  const Jet2 x = Jet2::seed(1.5, 1, 3);
  CHECK(x.value() == 1.5);
  CHECK(x.grad(0) == 0.0);
  CHECK(x.grad(1) == 1.0);
  CHECK(x.grad(2) == 0.0);
  CHECK(x.hess(1, 1) == 0.0);

  CHECK_THROWS_AS(Jet2::seed(0.0, 3, 3), skf::DomainError);
  CHECK_THROWS_AS(Jet2::seed(0.0, 0, skf::kMaxActive + 1), skf::DomainError);
}

TEST_CASE("arithmetic matches finite differences on random compositions") {
  std::mt19937_64 rng(1234);
  const auto f = [](std::span<const double> x) {
    return std::sin(x[0]) * std::exp(0.5 * x[1]) + x[2] / (2.0 + x[0] * x[0]) -
           std::log(2.0 + x[1]) * std::sqrt(1.5 + std::cos(x[2]));
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto pt = testutil::random_point(rng, 3, -1.0, 1.0);
    const auto jets = skf::seed_point(pt);
    const Jet2 y = sin(jets[0]) * exp(0.5 * jets[1]) +
                   jets[2] / (2.0 + jets[0] * jets[0]) -
                   log(2.0 + jets[1]) * sqrt(1.5 + cos(jets[2]));
    CHECK(testutil::jet_matches_fd(y, f, pt));
  }
}

TEST_CASE("product, quotient and chain rules are exact on polynomials") {
  // Polynomials have exactly representable derivatives, so the comparison
  // can be exact instead of FD-approximate.
  const auto pt = std::vector<double>{2.0, -3.0};
  const auto jets = skf::seed_point(pt);
  const Jet2 p = jets[0] * jets[0] * jets[1] + 3.0 * jets[1] * jets[1];
  CHECK(p.value() == 2.0 * 2.0 * -3.0 + 3.0 * 9.0);
  CHECK(p.grad(0) == 2.0 * 2.0 * -3.0);        // 2 x y
  CHECK(p.grad(1) == 2.0 * 2.0 + 6.0 * -3.0);  // x^2 + 6 y
  CHECK(p.hess(0, 0) == 2.0 * -3.0);
  CHECK(p.hess(0, 1) == 2.0 * 2.0);
  CHECK(p.hess(1, 0) == p.hess(0, 1));
  CHECK(p.hess(1, 1) == 6.0);
}

TEST_CASE("pow handles integral and fractional exponents") {
  const auto jets = skf::seed_point(std::vector<double>{-1.5});
  const Jet2 cube = pow(jets[0], 3.0);
  CHECK(cube.value() == doctest::Approx(-3.375));
  CHECK(cube.grad(0) == doctest::Approx(3.0 * 2.25));
  CHECK(cube.hess(0, 0) == doctest::Approx(6.0 * -1.5));
  CHECK_THROWS_AS(pow(jets[0], 0.5), skf::DomainError);

  const auto pos = skf::seed_point(std::vector<double>{2.0});
  const Jet2 frac = pow(pos[0], 1.5);
  CHECK(frac.value() == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(frac.grad(0) == doctest::Approx(1.5 * std::pow(2.0, 0.5)));
}

TEST_CASE("domain guards throw instead of producing garbage") {
  const auto jets = skf::seed_point(std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(jets[1] / jets[0], skf::DomainError);
  CHECK_THROWS_AS(log(jets[0]), skf::DomainError);
  CHECK_THROWS_AS(sqrt(Jet2(-1.0)), skf::DomainError);
  CHECK_THROWS_AS(sqrt(jets[0]), skf::DomainError);  // derivative blows up
  CHECK_THROWS_AS(abs(jets[0]), skf::DomainError);
  CHECK_THROWS_AS(tan(Jet2(std::acos(-1.0) / 2.0)), skf::DomainError);
}

TEST_CASE("partial produces the derivative jet one level down") {
  const auto jets = skf::seed_point(std::vector<double>{0.7, -0.4});
  const Jet2 y = sin(jets[0]) * jets[1];
  const Jet2 d0 = partial(y, 0);
  CHECK(d0.value() == y.grad(0));
  CHECK(d0.grad(0) == y.hess(0, 0));
  CHECK(d0.grad(1) == y.hess(0, 1));
  CHECK(d0.hess(0, 0) == 0.0);
}

TEST_CASE("complex jets agree with std::complex arithmetic on values") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::complex<double> a(testutil::uniform(rng, -2, 2),
                                 testutil::uniform(rng, -2, 2));
    const std::complex<double> b(testutil::uniform(rng, 1, 2),
                                 testutil::uniform(rng, -2, 2));
    const CJet ja{Jet2(a.real()), Jet2(a.imag())};
    const CJet jb{Jet2(b.real()), Jet2(b.imag())};
    CHECK(std::abs((ja * jb).value() - a * b) < 1e-14);
    CHECK(std::abs((ja / jb).value() - a / b) < 1e-14);
    CHECK(std::abs((ja + jb).value() - (a + b)) < 1e-14);
    CHECK(std::abs((ja - jb).value() - (a - b)) < 1e-14);
    CHECK(std::abs(conj(ja).value() - std::conj(a)) < 1e-14);
    CHECK(abs2(ja).value() == doctest::Approx(std::norm(a)));
  }
}

TEST_CASE("complex jet derivatives follow the product rule") {
  const auto jets = skf::seed_point(std::vector<double>{0.3, 1.2});
  const CJet z{jets[0], jets[1]};           // z = x + i y
  const CJet w = z * z;                     // w = x^2 - y^2 + 2 i x y
  CHECK(w.re.value() == doctest::Approx(0.09 - 1.44));
  CHECK(w.re.grad(0) == doctest::Approx(2 * 0.3));
  CHECK(w.re.grad(1) == doctest::Approx(-2 * 1.2));
  CHECK(w.im.grad(0) == doctest::Approx(2 * 1.2));
  CHECK(w.im.grad(1) == doctest::Approx(2 * 0.3));
  CHECK_THROWS_AS(z / CJet(Jet2(0.0)), skf::DomainError);
}
