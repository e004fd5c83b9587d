#pragma once

#include <memory>
#include <string>

namespace geonet {

// Parsed arithmetic expression in the chart variables u and v.
// Grammar: + - * / ^ (right-assoc), unary minus, parentheses, numeric
// literals, the constant pi, and sin cos sinh cosh exp.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double u, double v) const;
  const std::string& text() const { return text_; }

  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  ~Expression();

  struct Node;  // opaque; defined by the implementation

 private:
  Expression(std::shared_ptr<const Node> root, std::string text);

  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace geonet
