#include <map>
#include <random>
#include <string>

#include "doctest.h"
#include "skf/errors.hpp"
#include "skf/expr.hpp"
#include "testutil.hpp"

using namespace skf;

namespace {

double eval_d(const std::string& src, std::map<std::string, double> env) {
  return expr::eval<double>(expr::parse(src), env);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval_d("2+3*4", {}) == 14.0);
  CHECK(eval_d("2*3+4", {}) == 10.0);
  CHECK(eval_d("2-3-4", {}) == -5.0);
  CHECK(eval_d("12/3/2", {}) == 2.0);
  CHECK(eval_d("2^3^2", {}) == 512.0);     // right-associative
  CHECK(eval_d("-2^2", {}) == -4.0);       // ^ binds tighter than unary -
  CHECK(eval_d("-x^2", {{"x", 3.0}}) == -9.0);
  CHECK(eval_d("(-x)^2", {{"x", 3.0}}) == 9.0);
  CHECK(eval_d("2*-3", {}) == -6.0);
  CHECK(eval_d("--4", {}) == 4.0);
  CHECK(eval_d("2^-1", {}) == 0.5);
  CHECK(eval_d("pow(2, -2)", {}) == 0.25);
}

TEST_CASE("functions evaluate and check their arity") {
  CHECK(eval_d("sin(0)", {}) == 0.0);
  CHECK(eval_d("exp(ln(5))", {}) == doctest::Approx(5.0));
  CHECK(eval_d("sqrt(abs(-9))", {}) == doctest::Approx(3.0));
  CHECK(eval_d("tan(0.5)", {}) == doctest::Approx(std::tan(0.5)));
  CHECK_THROWS_AS(expr::parse("sin(1, 2)"), ParseError);
  CHECK_THROWS_AS(expr::parse("pow(2)"), ParseError);
  CHECK_THROWS_AS(expr::parse("frobnicate(1)"), ParseError);
}

TEST_CASE("parse errors carry byte offsets") {
  const auto offset_of = [](const std::string& src) {
    try {
      expr::parse(src);
    } catch (const ParseError& e) {
      const std::string what = e.what();
      const auto pos = what.rfind("byte ");
      REQUIRE(pos != std::string::npos);
      return std::stoul(what.substr(pos + 5));
    }
    REQUIRE(false);
    return 0ul;
  };
  CHECK(offset_of("1 + ") == 4);
  CHECK(offset_of("1 + * 2") == 4);
  CHECK(offset_of("(1 + 2") == 6);
  CHECK(offset_of("1 ~ 2") == 2);
  CHECK_THROWS_AS(expr::parse(""), ParseError);
  CHECK_THROWS_AS(expr::parse("1 2"), ParseError);
  CHECK_THROWS_AS(expr::parse("1..5"), ParseError);
}

TEST_CASE("exponents must be variable-free") {
  CHECK_THROWS_AS(expr::parse("x^y"), ParseError);
  CHECK_THROWS_AS(expr::parse("pow(x, y)"), ParseError);
  CHECK_NOTHROW(expr::parse("x^(1 + 2)"));
  CHECK(eval_d("x^(2*2)", {{"x", 2.0}}) == 16.0);
}

TEST_CASE("unbound variables and domain failures are reported") {
  CHECK_THROWS_AS(eval_d("x + y", {{"x", 1.0}}), EvalError);
  CHECK_THROWS_WITH_AS(eval_d("1/(x - x)", {{"x", 3.0}}),
                       doctest::Contains("division by zero"), DomainError);
  CHECK_THROWS_WITH_AS(eval_d("ln(-x)", {{"x", 2.0}}),
                       doctest::Contains("in 'ln(-x)'"), DomainError);
}

TEST_CASE("to_string round trips through the parser") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int trial = 0; trial < 150; ++trial) {
    const std::string src = testutil::random_expr_source(rng, vars);
    const auto e = expr::parse(src);
    const auto again = expr::parse(expr::to_string(e));
    CHECK(expr::equal(*e, *again));
    std::map<std::string, double> env;
    std::mt19937_64 prng(trial);
    for (const auto& v : vars) env[v] = testutil::uniform(prng, -1.0, 1.0);
    CHECK(expr::eval<double>(e, env) ==
          doctest::Approx(expr::eval<double>(again, env)));
  }
}

TEST_CASE("jet evaluation differentiates the same function") {
  std::mt19937_64 rng(21);
  const std::vector<std::string> vars = {"x", "y"};
  for (int trial = 0; trial < 100; ++trial) {
    const std::string src = testutil::random_expr_source(rng, vars);
    const auto e = expr::parse(src);
    const auto pt = testutil::random_point(rng, 2, -1.0, 1.0);
    const testutil::RealFn f = [&](std::span<const double> x) {
      return expr::eval<double>(e, {{"x", x[0]}, {"y", x[1]}});
    };
    const auto jets = seed_point(pt);
    const Jet2 jy =
        expr::eval<Jet2>(e, {{"x", jets[0]}, {"y", jets[1]}});
    CHECK(testutil::jet_matches_fd(jy, f, pt));
  }
}

TEST_CASE("compile_field folds parameters and binds slots") {
  const auto e = expr::parse("a*x + y^2");
  const std::vector<std::string> coords = {"x", "y"};
  const auto field = expr::compile_field(e, coords, {{"a", 3.0}});
  const auto jets = seed_point(std::vector<double>{2.0, -1.0});
  const Jet2 v = field(jets);
  CHECK(v.value() == doctest::Approx(7.0));
  CHECK(v.grad(0) == doctest::Approx(3.0));
  CHECK(v.grad(1) == doctest::Approx(-2.0));

  const auto real = expr::compile_real(e, coords, {{"a", 3.0}});
  CHECK(real(std::vector<double>{2.0, -1.0}) == doctest::Approx(7.0));

  CHECK_THROWS_AS(expr::compile_field(expr::parse("q + x"), coords, {}),
                  ChartError);
}

TEST_CASE("free_vars and structural equality") {
  const auto e = expr::parse("sin(x)*a + x/y");
  const auto vars = expr::free_vars(e);
  CHECK(vars == std::set<std::string>{"a", "x", "y"});
  CHECK(expr::equal(*expr::parse("1 + x*2"), *expr::parse("1+x*2")));
  CHECK_FALSE(expr::equal(*expr::parse("1 + x*2"), *expr::parse("1 + 2*x")));
}
