#include "freeze/experiments/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

#include "freeze/error.hpp"

namespace freeze {

struct Expression::Node {
  enum class Kind { number, var_x, var_y, unary_minus, binary, call } kind = Kind::number;
  double value = 0.0;
  std::string op;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr leaf(Kind kind, double value = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->value = value;
  return n;
}

NodePtr combine(Kind kind, std::string op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->op = std::move(op);
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse() {
    NodePtr n = comparison();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression '" << s_ << "' at position " << pos_ << ": " << what;
    throw Error(ErrorCode::config, msg.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip();
    if (s_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  NodePtr comparison() {
    NodePtr lhs = additive();
    for (std::string_view op : {"<=", ">=", "<", ">"}) {
      if (accept(op)) return combine(Kind::binary, std::string(op), {lhs, additive()});
    }
    return lhs;
  }

  NodePtr additive() {
    NodePtr lhs = multiplicative();
    while (true) {
      if (accept("+")) {
        lhs = combine(Kind::binary, "+", {lhs, multiplicative()});
      } else if (accept("-")) {
        lhs = combine(Kind::binary, "-", {lhs, multiplicative()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr multiplicative() {
    NodePtr lhs = unary();
    while (true) {
      if (accept("*")) {
        lhs = combine(Kind::binary, "*", {lhs, unary()});
      } else if (accept("/")) {
        lhs = combine(Kind::binary, "/", {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept("-")) return combine(Kind::unary_minus, "-", {unary()});
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return combine(Kind::binary, "^", {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return leaf(Kind::number, v);
    }
    if (accept("(")) {
      NodePtr inner = comparison();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string name(s_.substr(pos_, end - pos_));
      pos_ = end;
      if (name == "x") return leaf(Kind::var_x);
      if (name == "y") return leaf(Kind::var_y);
      if (name == "pi") return leaf(Kind::number, std::numbers::pi);
      static const char* const functions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "tanh"};
      for (const char* f : functions) {
        if (name == f) {
          if (!accept("(")) fail("expected '(' after " + name);
          NodePtr arg = comparison();
          if (!accept(")")) fail("expected ')'");
          return combine(Kind::call, name, {arg});
        }
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const Point& xi) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::var_x: return xi[0];
    case Kind::var_y: return xi[1];
    case Kind::unary_minus: return -eval(*n.args[0], xi);
    case Kind::call: {
      const double a = eval(*n.args[0], xi);
      if (n.op == "sin") return std::sin(a);
      if (n.op == "cos") return std::cos(a);
      if (n.op == "tan") return std::tan(a);
      if (n.op == "exp") return std::exp(a);
      if (n.op == "log") return std::log(a);
      if (n.op == "sqrt") return std::sqrt(a);
      if (n.op == "abs") return std::abs(a);
      return std::tanh(a);
    }
    case Kind::binary: {
      const double a = eval(*n.args[0], xi);
      const double b = eval(*n.args[1], xi);
      const std::string& op = n.op;
      if (op == "+") return a + b;
      if (op == "-") return a - b;
      if (op == "*") return a * b;
      if (op == "/") return a / b;
      if (op == "^") return std::pow(a, b);
      if (op == "<") return a < b ? 1.0 : 0.0;
      if (op == "<=") return a <= b ? 1.0 : 0.0;
      if (op == ">") return a > b ? 1.0 : 0.0;
      return a >= b ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(const Point& xi) const { return eval(*root_, xi); }

}  // namespace freeze
