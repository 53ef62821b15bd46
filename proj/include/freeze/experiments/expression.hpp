#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "freeze/mesh.hpp"

namespace freeze {

/// A parsed scalar expression in the coordinates x and y.
///
/// Grammar: numbers, the variables x and y, the constant pi, binary
/// + - * / ^, unary minus, comparisons < <= > >= (yielding 1 or 0) and the
/// functions sin cos tan exp log sqrt abs tanh. `^` is right associative.
/// Example: "(x >= 0) * (x <= pi) * sin(x)".
class Expression {
 public:
  /// Throws config with the offending position on a syntax error.
  static Expression parse(std::string_view text);

  double operator()(const Point& xi) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace freeze
