// Recursive-descent parser and evaluator for the user-metric expression grammar.

#include "geonet/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

enum class Op { constant, var_u, var_v, add, sub, mul, div, pow, neg, sin, cos, sinh, cosh, exp };

}  // namespace

struct Expression::Node {
  Op op = Op::constant;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->value = value;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw GeonetError(ErrorCode::invalid_input,
                      "expression parse error at offset " + std::to_string(pos_) + ": " + why +
                          " in \"" + text_ + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make_node(Op::add, lhs, term());
      else if (eat('-')) lhs = make_node(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make_node(Op::mul, lhs, unary());
      else if (eat('/')) lhs = make_node(Op::div, lhs, unary());
      else return lhs;
    }
  }

  // '^' binds tighter than unary minus (so -u^2 is -(u^2)) and is
  // right-associative; the exponent may itself carry a sign.
  NodePtr unary() {
    if (eat('-')) return make_node(Op::neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make_node(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    double val = std::strtod(start, &end);
    if (end == start) fail("bad numeric literal");
    pos_ += static_cast<std::size_t>(end - start);
    return make_node(Op::constant, nullptr, nullptr, val);
  }

  NodePtr word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "u") return make_node(Op::var_u);
    if (name == "v") return make_node(Op::var_v);
    if (name == "pi") return make_node(Op::constant, nullptr, nullptr, M_PI);
    Op op;
    if (name == "sin") op = Op::sin;
    else if (name == "cos") op = Op::cos;
    else if (name == "sinh") op = Op::sinh;
    else if (name == "cosh") op = Op::cosh;
    else if (name == "exp") op = Op::exp;
    else fail("unknown identifier \"" + name + "\"");
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!eat(')')) fail("expected ')'");
    return make_node(op, arg);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& n, double u, double v) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::var_u: return u;
    case Op::var_v: return v;
    case Op::add: return eval_node(*n.lhs, u, v) + eval_node(*n.rhs, u, v);
    case Op::sub: return eval_node(*n.lhs, u, v) - eval_node(*n.rhs, u, v);
    case Op::mul: return eval_node(*n.lhs, u, v) * eval_node(*n.rhs, u, v);
    case Op::div: return eval_node(*n.lhs, u, v) / eval_node(*n.rhs, u, v);
    case Op::pow: return std::pow(eval_node(*n.lhs, u, v), eval_node(*n.rhs, u, v));
    case Op::neg: return -eval_node(*n.lhs, u, v);
    case Op::sin: return std::sin(eval_node(*n.lhs, u, v));
    case Op::cos: return std::cos(eval_node(*n.lhs, u, v));
    case Op::sinh: return std::sinh(eval_node(*n.lhs, u, v));
    case Op::cosh: return std::cosh(eval_node(*n.lhs, u, v));
    case Op::exp: return std::exp(eval_node(*n.lhs, u, v));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return Expression(p.run(), text);
}

double Expression::eval(double u, double v) const { return eval_node(*root_, u, v); }

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::~Expression() = default;

}  // namespace geonet
