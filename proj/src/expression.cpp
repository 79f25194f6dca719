#include "shadowgeo/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shadowgeo/error.hpp"

namespace shadowgeo {

struct Expression::Node {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Log };
  Kind kind;
  double value = 0.0;
  std::size_t index = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr make(Kind kind, NodePtr a = nullptr, NodePtr b = nullptr) {
  return std::make_shared<const Node>(Node{kind, 0.0, 0, std::move(a), std::move(b)});
}
NodePtr make_const(double v) { return std::make_shared<const Node>(Node{Kind::Const, v, 0, nullptr, nullptr}); }
NodePtr make_var(std::size_t i) { return std::make_shared<const Node>(Node{Kind::Var, 0.0, i, nullptr, nullptr}); }

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::Const && n->value == v; }

// Builders with light constant folding so derivative trees stay small.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const) return make_const(a->value + b->value);
  return make(Kind::Add, std::move(a), std::move(b));
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const) return make_const(a->value - b->value);
  if (is_const(a, 0.0)) return make(Kind::Neg, std::move(b));
  return make(Kind::Sub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const) return make_const(a->value * b->value);
  return make(Kind::Mul, std::move(a), std::move(b));
}
NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  return make(Kind::Div, std::move(a), std::move(b));
}
NodePtr neg(NodePtr a) {
  if (a->kind == Kind::Const) return make_const(-a->value);
  return make(Kind::Neg, std::move(a));
}

double eval(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::Var: return x[n.index];
    case Kind::Add: return eval(*n.a, x) + eval(*n.b, x);
    case Kind::Sub: return eval(*n.a, x) - eval(*n.b, x);
    case Kind::Mul: return eval(*n.a, x) * eval(*n.b, x);
    case Kind::Div: return eval(*n.a, x) / eval(*n.b, x);
    case Kind::Pow: {
      const double base = eval(*n.a, x);
      if (n.b->kind == Kind::Const && n.b->value == 2.0) return base * base;
      return std::pow(base, eval(*n.b, x));
    }
    case Kind::Neg: return -eval(*n.a, x);
    case Kind::Sin: return std::sin(eval(*n.a, x));
    case Kind::Cos: return std::cos(eval(*n.a, x));
    case Kind::Exp: return std::exp(eval(*n.a, x));
    case Kind::Sqrt: return std::sqrt(eval(*n.a, x));
    case Kind::Log: return std::log(eval(*n.a, x));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, std::size_t v) {
  switch (n->kind) {
    case Kind::Const: return make_const(0.0);
    case Kind::Var: return make_const(n->index == v ? 1.0 : 0.0);
    case Kind::Add: return add(diff(n->a, v), diff(n->b, v));
    case Kind::Sub: return sub(diff(n->a, v), diff(n->b, v));
    case Kind::Mul: return add(mul(diff(n->a, v), n->b), mul(n->a, diff(n->b, v)));
    case Kind::Div:
      return div(sub(mul(diff(n->a, v), n->b), mul(n->a, diff(n->b, v))), mul(n->b, n->b));
    case Kind::Pow: {
      const NodePtr da = diff(n->a, v);
      if (n->b->kind == Kind::Const) {
        const double k = n->b->value;
        return mul(mul(make_const(k), make(Kind::Pow, n->a, make_const(k - 1.0))), da);
      }
      // d(a^b) = a^b (b' log a + b a'/a)
      const NodePtr db = diff(n->b, v);
      return mul(n, add(mul(db, make(Kind::Log, n->a)), div(mul(n->b, da), n->a)));
    }
    case Kind::Neg: return neg(diff(n->a, v));
    case Kind::Sin: return mul(make(Kind::Cos, n->a), diff(n->a, v));
    case Kind::Cos: return neg(mul(make(Kind::Sin, n->a), diff(n->a, v)));
    case Kind::Exp: return mul(n, diff(n->a, v));
    case Kind::Sqrt: return div(diff(n->a, v), mul(make_const(2.0), n));
    case Kind::Log: return div(diff(n->a, v), n->a);
  }
  return make_const(0.0);
}

void print(const Node& n, const std::vector<std::string>& vars, std::ostream& os) {
  auto fn = [&](const char* name) {
    os << name << '(';
    print(*n.a, vars, os);
    os << ')';
  };
  auto bin = [&](const char* op) {
    os << '(';
    print(*n.a, vars, os);
    os << op;
    print(*n.b, vars, os);
    os << ')';
  };
  switch (n.kind) {
    case Kind::Const: os << n.value; break;
    case Kind::Var: os << vars[n.index]; break;
    case Kind::Add: bin("+"); break;
    case Kind::Sub: bin("-"); break;
    case Kind::Mul: bin("*"); break;
    case Kind::Div: bin("/"); break;
    case Kind::Pow: bin("^"); break;
    case Kind::Neg: os << "(-"; print(*n.a, vars, os); os << ')'; break;
    case Kind::Sin: fn("sin"); break;
    case Kind::Cos: fn("cos"); break;
    case Kind::Exp: fn("exp"); break;
    case Kind::Sqrt: fn("sqrt"); break;
    case Kind::Log: fn("log"); break;
  }
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream msg;
    msg << "expression parse error at offset " << pos_ << ": " << why << " in '" << text_ << "'";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // Returns the operator character at the cursor, mapping the UTF-8 glyphs
  // for middle dot and minus sign onto '*' and '-'.
  char peek_op() {
    skip_space();
    if (pos_ >= text_.size()) return '\0';
    if (text_.compare(pos_, 2, "\xC2\xB7") == 0) return '*';
    if (text_.compare(pos_, 3, "\xE2\x88\x92") == 0) return '-';
    return text_[pos_];
  }

  void consume_op() {
    if (text_.compare(pos_, 2, "\xC2\xB7") == 0) pos_ += 2;
    else if (text_.compare(pos_, 3, "\xE2\x88\x92") == 0) pos_ += 3;
    else ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      const char op = peek_op();
      if (op != '+' && op != '-') return lhs;
      consume_op();
      NodePtr rhs = term();
      lhs = make(op == '+' ? Kind::Add : Kind::Sub, lhs, rhs);
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      const char op = peek_op();
      if (op != '*' && op != '/') return lhs;
      consume_op();
      NodePtr rhs = unary();
      lhs = make(op == '*' ? Kind::Mul : Kind::Div, lhs, rhs);
    }
  }

  NodePtr unary() {
    const char op = peek_op();
    if (op == '-') {
      consume_op();
      return make(Kind::Neg, unary());
    }
    if (op == '+') {
      consume_op();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek_op() == '^') {
      consume_op();
      return make(Kind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string ident = text_.substr(start, pos_ - start);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        Kind kind;
        if (ident == "sin") kind = Kind::Sin;
        else if (ident == "cos") kind = Kind::Cos;
        else if (ident == "exp") kind = Kind::Exp;
        else if (ident == "sqrt") kind = Kind::Sqrt;
        else if (ident == "log") kind = Kind::Log;
        else fail("unknown function '" + ident + "'");
        ++pos_;
        NodePtr arg = expr();
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')' after function argument");
        ++pos_;
        return make(kind, arg);
      }
      if (ident == "pi") return make_const(std::numbers::pi);
      if (ident == "e") return make_const(std::numbers::e);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == ident) return make_var(i);
      fail("unknown variable '" + ident + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  return Expression(Parser(text, variables).parse(), variables);
}

Expression Expression::constant(double value) { return Expression(make_const(value), {}); }

double Expression::evaluate(std::span<const double> values) const {
  if (values.size() < variables_.size())
    throw Error(ErrorKind::InvalidInput, "expression: too few variable values");
  return eval(*root_, values);
}

Expression Expression::derivative(std::size_t variable) const {
  return Expression(diff(root_, variable), variables_);
}

std::string Expression::to_string() const {
  std::ostringstream os;
  os.precision(17);
  print(*root_, variables_, os);
  return os.str();
}

}  // namespace shadowgeo
