#include "lagstab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

#include "lagstab/error.hpp"

namespace lagstab {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  // Children stay empty for leaves; the empty handle is never dereferenced.
  Expr a{std::shared_ptr<const Node>{}};
  Expr b{std::shared_ptr<const Node>{}};
  bool dep_y = false;
  bool dep_x = false;
  int depth = 1;
};

namespace {

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr Expr::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = c;
  return Expr(std::move(n));
}

Expr Expr::y() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::VariableY;
  n->dep_y = true;
  return Expr(std::move(n));
}

Expr Expr::x() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::VariableX;
  n->dep_x = true;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->dep_y = operand.depends_on_y();
  n->dep_x = operand.depends_on_x();
  n->depth = operand.depth() + 1;
  n->a = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->dep_y = lhs.depends_on_y() || rhs.depends_on_y();
  n->dep_x = lhs.depends_on_x() || rhs.depends_on_x();
  n->depth = std::max(lhs.depth(), rhs.depth()) + 1;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
UnaryOp Expr::unary_op() const { return node_->uop; }
BinaryOp Expr::binary_op() const { return node_->bop; }
const Expr& Expr::operand() const { return node_->a; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
bool Expr::depends_on_y() const { return node_->dep_y; }
bool Expr::depends_on_x() const { return node_->dep_x; }
int Expr::depth() const { return node_->depth; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Constant: return a.constant_value() == b.constant_value();
    case Expr::Kind::VariableY:
    case Expr::Kind::VariableX: return true;
    case Expr::Kind::Unary: return a.unary_op() == b.unary_op() && a.operand() == b.operand();
    case Expr::Kind::Binary:
      return a.binary_op() == b.binary_op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, const ParameterMap& params) : src_(src), params_(params) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError(pos_, "operator or end of input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(pos_, std::string("'") + c + "'");
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(UnaryOp::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) {
      Expr exponent = parse_exponent();
      if (exponent.depends_on_y() || exponent.depends_on_x())
        throw SyntaxError(at + 1, "constant exponent", "exponents may not depend on x or y");
      return Expr::binary(BinaryOp::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  Expr parse_exponent() {
    if (accept('-')) return Expr::unary(UnaryOp::Neg, parse_exponent());
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "number, variable, function or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '$') {
      ++pos_;
      const std::size_t start = pos_;
      std::string name = identifier();
      if (name.empty()) throw SyntaxError(start, "parameter name after '$'");
      auto it = params_.find(name);
      if (it == params_.end()) throw UnboundParameter(name);
      return substitute(it->second, name);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      std::string name = identifier();
      if (name == "y") return Expr::y();
      if (name == "x") return Expr::x();
      if (name == "pi") return Expr::constant(std::numbers::pi);
      static const std::pair<const char*, UnaryOp> functions[] = {
          {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos}, {"tan", UnaryOp::Tan},
          {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log}, {"sqrt", UnaryOp::Sqrt}};
      for (const auto& [fname, op] : functions) {
        if (name == fname) {
          expect('(');
          Expr arg = parse_expr();
          expect(')');
          return Expr::unary(op, std::move(arg));
        }
      }
      throw SyntaxError(start, "y, x, pi or a function name", "unknown identifier '" + name + "'");
    }
    throw SyntaxError(pos_, "number, variable, function or '('");
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ > s;
    };
    bool any = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) throw SyntaxError(start, "number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (!digits()) throw SyntaxError(pos_, "exponent digits");
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) throw SyntaxError(start, "finite number");
    return Expr::constant(v);
  }

  Expr substitute(double v, const std::string& name) const {
    if (!std::isfinite(v)) throw SyntaxError(pos_, "finite value", "parameter $" + name + " is not finite");
    if (std::signbit(v)) return Expr::unary(UnaryOp::Neg, Expr::constant(-v));
    return Expr::constant(v);
  }

  std::string_view src_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, const ParameterMap& params) {
  return Parser(source, params).parse_all();
}

// ---------------------------------------------------------------------------
// printer

namespace {

void print_to(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Constant: {
      char buf[40];
      const double v = e.constant_value();
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      (void)ec;
      // Negative constants cannot come out of parse(); keep them re-parseable anyway.
      if (std::signbit(v)) out += '(';
      out.append(buf, ptr);
      if (std::signbit(v)) out += ')';
      return;
    }
    case Expr::Kind::VariableY: out += 'y'; return;
    case Expr::Kind::VariableX: out += 'x'; return;
    case Expr::Kind::Unary:
      if (e.unary_op() == UnaryOp::Neg) {
        out += "(-";
        print_to(e.operand(), out);
        out += ')';
      } else {
        out += unary_name(e.unary_op());
        out += '(';
        print_to(e.operand(), out);
        out += ')';
      }
      return;
    case Expr::Kind::Binary:
      out += '(';
      print_to(e.lhs(), out);
      out += binary_symbol(e.binary_op());
      print_to(e.rhs(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

[[noreturn]] void domain(const char* what, const Expr& node, double y) {
  throw DomainError(std::string(what) + " in " + print(node), y);
}

template <int N>
Jet<N> eval_node(const Expr& e, double y, double x) {
  using J = Jet<N>;
  J r;
  switch (e.kind()) {
    case Expr::Kind::Constant: return J(e.constant_value());
    case Expr::Kind::VariableY: return J::variable(y);
    case Expr::Kind::VariableX: return J(x);
    case Expr::Kind::Unary: {
      const J a = eval_node<N>(e.operand(), y, x);
      switch (e.unary_op()) {
        case UnaryOp::Neg: r = -a; break;
        case UnaryOp::Sin: r = sin(a); break;
        case UnaryOp::Cos: r = cos(a); break;
        case UnaryOp::Tan:
          if (std::cos(a.value()) == 0.0) domain("tan at a pole", e, y);
          r = tan(a);
          break;
        case UnaryOp::Exp: r = exp(a); break;
        case UnaryOp::Log:
          if (!(a.value() > 0.0)) domain("log of a non-positive argument", e, y);
          r = log(a);
          break;
        case UnaryOp::Sqrt:
          if (a.value() < 0.0 || (N > 0 && a.value() == 0.0)) domain("sqrt of a non-positive argument", e, y);
          r = sqrt(a);
          break;
      }
      break;
    }
    case Expr::Kind::Binary: {
      const J a = eval_node<N>(e.lhs(), y, x);
      if (e.binary_op() == BinaryOp::Pow) {
        const double p = eval_node<0>(e.rhs(), y, x).value();
        const double base = a.value();
        if (p == std::trunc(p) && std::abs(p) <= 1024.0) {
          if (p < 0.0 && base == 0.0) domain("zero raised to a negative power", e, y);
          r = pow(a, static_cast<int>(p));
        } else {
          if (base < 0.0 || (N > 0 && base == 0.0)) domain("non-integer power of a non-positive base", e, y);
          r = pow(a, p);
        }
        break;
      }
      const J b = eval_node<N>(e.rhs(), y, x);
      switch (e.binary_op()) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
          if (b.value() == 0.0) domain("division by zero", e, y);
          r = a / b;
          break;
        case BinaryOp::Pow: break;  // handled above
      }
      break;
    }
  }
  if (!r.finite()) domain("non-finite value", e, y);
  return r;
}

}  // namespace

template <int N>
Jet<N> eval_jet(const Expr& e, double y, double x) {
  return eval_node<N>(e, y, x);
}

double eval(const Expr& e, double y, double x) { return eval_node<0>(e, y, x).value(); }

template Jet<0> eval_jet<0>(const Expr&, double, double);
template Jet<1> eval_jet<1>(const Expr&, double, double);
template Jet<2> eval_jet<2>(const Expr&, double, double);
template Jet<3> eval_jet<3>(const Expr&, double, double);
template Jet<4> eval_jet<4>(const Expr&, double, double);

}  // namespace lagstab
