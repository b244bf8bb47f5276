#include "rpde/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string_view>

#include "rpde/error.hpp"

namespace rpde {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind = Kind::Number;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(double u) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Var: return u;
      case Kind::Neg: return -a->eval(u);
      case Kind::Add: return a->eval(u) + b->eval(u);
      case Kind::Sub: return a->eval(u) - b->eval(u);
      case Kind::Mul: return a->eval(u) * b->eval(u);
      case Kind::Div: return a->eval(u) / b->eval(u);
      case Kind::Pow: return std::pow(a->eval(u), b->eval(u));
      case Kind::Call: return fn(a->eval(u));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Function {
  std::string_view name;
  double (*fn)(double);
};

const Function kFunctions[] = {
    {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},   {"tanh", [](double x) { return std::tanh(x); }},
    {"exp", [](double x) { return std::exp(x); }},   {"log", [](double x) { return std::log(x); }},
    {"sqrt", [](double x) { return std::sqrt(x); }}, {"abs", [](double x) { return std::abs(x); }},
    {"atan", [](double x) { return std::atan(x); }},
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidArgument("expression: " + msg + " at position " + std::to_string(pos_) + " in '" +
                          std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Kind::Add, lhs, term());
      else if (eat('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make(Kind::Mul, lhs, unary());
      else if (eat('/')) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  // Right associative; binds tighter than unary minus on its left: -u^2 = -(u^2).
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string tail(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(tail.c_str(), &end);
      if (end == tail.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - tail.c_str());
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "u") return make(Kind::Var);
      if (name == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->value = std::numbers::pi;
        return n;
      }
      for (const auto& f : kFunctions) {
        if (f.name != name) continue;
        if (!eat('(')) fail("expected '(' after " + std::string(name));
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Call;
        n->fn = f.fn;
        n->a = std::move(arg);
        return n;
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    fail("unexpected character");
  }
};

}  // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source).parse()) {}
Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(double u) const { return root_->eval(u); }

}  // namespace rpde
