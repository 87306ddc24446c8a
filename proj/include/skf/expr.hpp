#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skf/errors.hpp"
#include "skf/jet.hpp"

// A small arithmetic expression language used for metric entries and
// foliation maps. Grammar (precedence ^ > unary - > *,/ > +,-; ^ is
// right-associative, the other binary operators left-associative):
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | base
//   base   := atom ("^" factor)?
//   atom   := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
//
// Functions: sin cos tan ln exp sqrt abs pow. Both "^" and pow(x, c)
// require a constant (variable-free) exponent so differentiation stays
// closed over the scalar types.

namespace skf::expr {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Var, Neg, Binary, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;           // variable or function name
  char op = 0;                // '+','-','*','/','^' for Binary
  std::vector<ExprPtr> args;  // Neg: 1, Binary: 2, Call: 1 or 2
  std::size_t offset = 0;     // byte offset in the source, for diagnostics
};

ExprPtr parse(std::string_view src);
std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }
std::set<std::string> free_vars(const Expr& e);
inline std::set<std::string> free_vars(const ExprPtr& e) { return free_vars(*e); }
bool equal(const Expr& a, const Expr& b);

namespace detail {

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.value(); }

template <class S>
struct ScalarOps {
  static S number(double v) { return S(v); }
  static S neg(const S& a) { return -a; }
  static S add(const S& a, const S& b) { return a + b; }
  static S sub(const S& a, const S& b) { return a - b; }
  static S mul(const S& a, const S& b) { return a * b; }
  static S div(const S& a, const S& b) {
    if (value_of(b) == 0.0) throw DomainError("division by zero");
    return a / b;
  }
  static S sin(const S& a) { using std::sin; return sin(a); }
  static S cos(const S& a) { using std::cos; return cos(a); }
  static S tan(const S& a) {
    if (std::abs(std::cos(value_of(a))) < 1e-12)
      throw DomainError("tan evaluated at a pole");
    using std::tan;
    return tan(a);
  }
  static S ln(const S& a) {
    if (value_of(a) <= 0.0) throw DomainError("log of a nonpositive value");
    using std::log;
    return log(a);
  }
  static S exp(const S& a) { using std::exp; return exp(a); }
  static S sqrt(const S& a) {
    if (value_of(a) < 0.0) throw DomainError("sqrt of a negative value");
    using std::sqrt;
    return sqrt(a);
  }
  static S abs(const S& a) { using std::abs; return abs(a); }
  static S pow_const(const S& a, double c) { using std::pow; return pow(a, c); }
};

// Evaluates e with variables resolved through lookup(name, offset).
template <class S>
S eval_with(const Expr& e, const std::function<S(const std::string&, std::size_t)>& lookup);

double const_eval(const Expr& e);  // for exponents; expects no variables

}  // namespace detail

// Evaluates over any scalar with the usual arithmetic and elementary
// functions (double and Jet2 are the two instantiations used).
template <class S>
S eval(const Expr& e, const std::map<std::string, S>& env) {
  return detail::eval_with<S>(e, [&env](const std::string& name, std::size_t off) -> S {
    auto it = env.find(name);
    if (it == env.end())
      throw EvalError("unbound variable '" + name + "' (at byte " +
                      std::to_string(off) + ")");
    return it->second;
  });
}

template <class S>
S eval(const ExprPtr& e, const std::map<std::string, S>& env) {
  return eval<S>(*e, env);
}

// Binds variable names to coordinate slots once, folding parameters to
// constants; the result evaluates directly on a coordinate span. Names that
// are neither coordinates nor parameters are reported immediately.
std::function<Jet2(std::span<const Jet2>)> compile_field(
    const ExprPtr& e, std::span<const std::string> coords,
    const std::map<std::string, double>& params);
std::function<double(std::span<const double>)> compile_real(
    const ExprPtr& e, std::span<const std::string> coords,
    const std::map<std::string, double>& params);

namespace detail {

template <class S>
S eval_with(const Expr& e,
            const std::function<S(const std::string&, std::size_t)>& lookup) {
  using Ops = ScalarOps<S>;
  try {
    switch (e.kind) {
      case Expr::Kind::Number:
        return Ops::number(e.number);
      case Expr::Kind::Var:
        return lookup(e.name, e.offset);
      case Expr::Kind::Neg:
        return Ops::neg(eval_with<S>(*e.args[0], lookup));
      case Expr::Kind::Binary: {
        if (e.op == '^')
          return Ops::pow_const(eval_with<S>(*e.args[0], lookup),
                                const_eval(*e.args[1]));
        const S a = eval_with<S>(*e.args[0], lookup);
        const S b = eval_with<S>(*e.args[1], lookup);
        switch (e.op) {
          case '+': return Ops::add(a, b);
          case '-': return Ops::sub(a, b);
          case '*': return Ops::mul(a, b);
          default:  return Ops::div(a, b);
        }
      }
      case Expr::Kind::Call: {
        if (e.name == "pow")
          return Ops::pow_const(eval_with<S>(*e.args[0], lookup),
                                const_eval(*e.args[1]));
        const S a = eval_with<S>(*e.args[0], lookup);
        if (e.name == "sin") return Ops::sin(a);
        if (e.name == "cos") return Ops::cos(a);
        if (e.name == "tan") return Ops::tan(a);
        if (e.name == "ln") return Ops::ln(a);
        if (e.name == "exp") return Ops::exp(a);
        if (e.name == "sqrt") return Ops::sqrt(a);
        if (e.name == "abs") return Ops::abs(a);
        throw EvalError("unknown function '" + e.name + "'");
      }
    }
    throw EvalError("malformed expression node");
  } catch (DomainError& err) {
    const std::string what = err.what();
    if (what.find(" in '") != std::string::npos) throw;
    throw DomainError(what + " in '" + to_string(e) + "'");
  }
}

}  // namespace detail

}  // namespace skf::expr
