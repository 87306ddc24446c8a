#include "skf/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>

namespace skf::expr {

namespace {

const std::map<std::string, int>& function_arities() {
  static const std::map<std::string, int> table = {
      {"sin", 1}, {"cos", 1}, {"tan", 1}, {"ln", 1},
      {"exp", 1}, {"sqrt", 1}, {"abs", 1}, {"pow", 2}};
  return table;
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

private:
  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        const std::size_t at = pos_;
        const char op = src_[pos_++];
        lhs = binary(op, lhs, parse_term(), at);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      skip_ws();
      if (peek() == '*' || peek() == '/') {
        const std::size_t at = pos_;
        const char op = src_[pos_++];
        lhs = binary(op, lhs, parse_factor(), at);
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^, so -x^2 parses as -(x^2) while the
  // exponent itself may still be negated (x^-2).
  ExprPtr parse_factor() {
    skip_ws();
    if (peek() == '-') {
      const std::size_t at = pos_++;
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Neg;
      node->offset = at;
      node->args = {parse_factor()};
      return node;
    }
    return parse_base();
  }

  ExprPtr parse_base() {
    ExprPtr lhs = parse_atom();
    skip_ws();
    if (peek() == '^') {
      const std::size_t at = pos_++;
      ExprPtr rhs = parse_factor();  // right-associative
      require_const_exponent(rhs, at);
      return binary('^', lhs, rhs, at);
    }
    return lhs;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr parse_number() {
    const std::size_t at = pos_;
    double value = 0.0;
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) throw ParseError("malformed number", at);
    pos_ += static_cast<std::size_t>(ptr - begin);
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Number;
    node->number = value;
    node->offset = at;
    return node;
  }

  ExprPtr parse_ident() {
    const std::size_t at = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(at, pos_ - at));
    skip_ws();
    if (peek() != '(') {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Var;
      node->name = std::move(name);
      node->offset = at;
      return node;
    }
    ++pos_;  // '('
    auto it = function_arities().find(name);
    if (it == function_arities().end())
      throw ParseError("unknown function '" + name + "'", at);
    std::vector<ExprPtr> args;
    args.push_back(parse_expr());
    skip_ws();
    while (peek() == ',') {
      ++pos_;
      args.push_back(parse_expr());
      skip_ws();
    }
    expect(')');
    if (static_cast<int>(args.size()) != it->second)
      throw ParseError("function '" + name + "' expects " +
                           std::to_string(it->second) + " argument(s)",
                       at);
    if (name == "pow") require_const_exponent(args[1], at);
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Call;
    node->name = std::move(name);
    node->args = std::move(args);
    node->offset = at;
    return node;
  }

  static ExprPtr binary(char op, ExprPtr lhs, ExprPtr rhs, std::size_t at) {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Binary;
    node->op = op;
    node->args = {std::move(lhs), std::move(rhs)};
    node->offset = at;
    return node;
  }

  static void require_const_exponent(const ExprPtr& rhs, std::size_t at) {
    if (!free_vars(*rhs).empty())
      throw ParseError("exponent must be a constant expression", at);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      if (e.op == '+' || e.op == '-') return 1;
      if (e.op == '*' || e.op == '/') return 2;
      return 4;  // '^'
    case Expr::Kind::Neg:
      return 3;
    default:
      return 5;  // atoms
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Expr& e, std::string& out) {
  auto child = [&out](const Expr& c, bool parens) {
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::Number:
      if (e.number < 0) {
        out += '(';
        out += format_number(e.number);
        out += ')';
      } else {
        out += format_number(e.number);
      }
      return;
    case Expr::Kind::Var:
      out += e.name;
      return;
    case Expr::Kind::Neg:
      out += '-';
      child(*e.args[0], precedence(*e.args[0]) < precedence(e));
      return;
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const Expr& l = *e.args[0];
      const Expr& r = *e.args[1];
      // Left-associative operators need parens on an equal-precedence right
      // child; the right-associative '^' needs them on the left instead.
      const bool lp = e.op == '^' ? precedence(l) <= p : precedence(l) < p;
      const bool rp = e.op == '^' ? precedence(r) < p : precedence(r) <= p;
      child(l, lp);
      out += e.op;
      child(r, rp);
      return;
    }
    case Expr::Kind::Call:
      out += e.name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ',';
        print_node(*e.args[i], out);
      }
      out += ')';
      return;
  }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  for (const auto& a : e.args) collect_vars(*a, out);
}

}  // namespace

ExprPtr parse(std::string_view src) { return Parser(src).run(); }

std::string to_string(const Expr& e) {
  std::string out;
  print_node(e, out);
  return out;
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      if (a.number != b.number) return false;
      break;
    case Expr::Kind::Var:
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Expr::Kind::Neg:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace detail {

double const_eval(const Expr& e) {
  return eval_with<double>(e, [](const std::string& name, std::size_t off) -> double {
    throw EvalError("exponent contains variable '" + name + "' (at byte " +
                    std::to_string(off) + ")");
  });
}

}  // namespace detail

namespace {

// Shared resolution logic for the two compiled forms: coordinates become
// slot indices, parameters become literals, anything else is an error.
void check_names(const Expr& e, std::span<const std::string> coords,
                 const std::map<std::string, double>& params) {
  for (const auto& name : free_vars(e)) {
    bool is_coord = false;
    for (const auto& c : coords) is_coord = is_coord || c == name;
    if (!is_coord && params.find(name) == params.end())
      throw ChartError("expression references unknown name '" + name + "' in '" +
                       to_string(e) + "'");
  }
}

template <class S>
S eval_compiled(const Expr& e, std::span<const S> pt,
                const std::map<std::string, int>& slots,
                const std::map<std::string, double>& params) {
  return detail::eval_with<S>(
      e, [&](const std::string& name, std::size_t off) -> S {
        auto it = slots.find(name);
        if (it != slots.end()) return pt[it->second];
        auto pit = params.find(name);
        if (pit != params.end()) return S(pit->second);
        throw EvalError("unbound variable '" + name + "' (at byte " +
                        std::to_string(off) + ")");
      });
}

std::map<std::string, int> slot_map(std::span<const std::string> coords) {
  std::map<std::string, int> slots;
  for (std::size_t i = 0; i < coords.size(); ++i)
    slots.emplace(coords[i], static_cast<int>(i));
  return slots;
}

}  // namespace

std::function<Jet2(std::span<const Jet2>)> compile_field(
    const ExprPtr& e, std::span<const std::string> coords,
    const std::map<std::string, double>& params) {
  check_names(*e, coords, params);
  auto slots = slot_map(coords);
  return [e, slots = std::move(slots), params](std::span<const Jet2> pt) {
    return eval_compiled<Jet2>(*e, pt, slots, params);
  };
}

std::function<double(std::span<const double>)> compile_real(
    const ExprPtr& e, std::span<const std::string> coords,
    const std::map<std::string, double>& params) {
  check_names(*e, coords, params);
  auto slots = slot_map(coords);
  return [e, slots = std::move(slots), params](std::span<const double> pt) {
    return eval_compiled<double>(*e, pt, slots, params);
  };
}

}  // namespace skf::expr
