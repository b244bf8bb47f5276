#pragma once

#include <memory>
#include <string>

namespace rpde {

/// Compiled scalar expression in one variable `u`.
///
/// Grammar: numbers, `u`, `pi`, + - * / ^, parentheses, unary minus, and the
/// functions sin cos tan tanh exp log sqrt abs atan.
class Expression {
 public:
  /// Throws InvalidArgument with the offending position on parse errors.
  explicit Expression(const std::string& source);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(double u) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace rpde
