#pragma once

// Scalar expressions of y (and, for dissipation factors, x).
//
// Grammar (precedence high to low: ^, unary -, * /, + -):
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = ("-" | "+") unary | power ;
//   power    = primary [ "^" exponent ] ;          (* right associative *)
//   exponent = "-" exponent | power ;              (* must not contain x or y *)
//   primary  = number | "y" | "x" | "pi" | "$" ident
//            | func "(" expr ")" | "(" expr ")" ;
//   func     = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt" ;
//   number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//
// `$name` parameters are substituted at parse time. Expressions are immutable
// and can be shared across threads.

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "lagstab/jet.hpp"

namespace lagstab {

using ParameterMap = std::map<std::string, double, std::less<>>;

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

class Expr {
 public:
  enum class Kind { Constant, VariableY, VariableX, Unary, Binary };

  /// The constant 0.
  Expr();

  static Expr constant(double c);
  static Expr y();
  static Expr x();
  static Expr unary(UnaryOp op, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  Kind kind() const;
  double constant_value() const;  // Kind::Constant only
  UnaryOp unary_op() const;       // Kind::Unary only
  BinaryOp binary_op() const;     // Kind::Binary only
  const Expr& operand() const;    // Kind::Unary only
  const Expr& lhs() const;        // Kind::Binary only
  const Expr& rhs() const;        // Kind::Binary only

  bool depends_on_y() const;
  bool depends_on_x() const;
  int depth() const;

  /// Structural equality (constants compared exactly).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view source, const ParameterMap& params = {});

/// Fully parenthesized canonical text; parse(print(e)) == e.
std::string print(const Expr& e);

/// Value and the first N derivatives in y at the given point. x is held fixed.
template <int N>
Jet<N> eval_jet(const Expr& e, double y, double x = 0.0);

inline Jet2 eval2(const Expr& e, double y) { return eval_jet<2>(e, y); }

double eval(const Expr& e, double y, double x = 0.0);

extern template Jet<0> eval_jet<0>(const Expr&, double, double);
extern template Jet<1> eval_jet<1>(const Expr&, double, double);
extern template Jet<2> eval_jet<2>(const Expr&, double, double);
extern template Jet<3> eval_jet<3>(const Expr&, double, double);
extern template Jet<4> eval_jet<4>(const Expr&, double, double);

}  // namespace lagstab
