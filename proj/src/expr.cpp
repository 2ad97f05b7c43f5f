#include "bnrad/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "bnrad/errors.hpp"

namespace bnrad {

enum class Op { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Func };

class ExprNode {
public:
  Op op;
  double value = 0.0;  // Op::Number
  std::string func;    // Op::Func
  ExprPtr a, b;
};

namespace {

ExprPtr number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Number;
  n->value = v;
  return n;
}

ExprPtr var() {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  return n;
}

bool is_const(const ExprPtr& e, double v) {
  return e->op == Op::Number && e->value == v;
}

ExprPtr binary(Op op, ExprPtr a, ExprPtr b);

ExprPtr neg(ExprPtr a) {
  if (a->op == Op::Number) return number(-a->value);
  if (a->op == Op::Neg) return a->a;
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Neg;
  n->a = std::move(a);
  return n;
}

ExprPtr binary(Op op, ExprPtr a, ExprPtr b) {
  if (a->op == Op::Number && b->op == Op::Number) {
    switch (op) {
      case Op::Add: return number(a->value + b->value);
      case Op::Sub: return number(a->value - b->value);
      case Op::Mul: return number(a->value * b->value);
      case Op::Div: return number(a->value / b->value);
      case Op::Pow: return number(std::pow(a->value, b->value));
      default: break;
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case Op::Sub:
      if (is_const(b, 0)) return a;
      if (is_const(a, 0)) return neg(b);
      break;
    case Op::Mul:
      if (is_const(a, 0) || is_const(b, 0)) return number(0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case Op::Div:
      if (is_const(a, 0)) return number(0);
      if (is_const(b, 1)) return a;
      break;
    case Op::Pow:
      if (is_const(b, 0)) return number(1);
      if (is_const(b, 1)) return a;
      break;
    default:
      break;
  }
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr fn(const std::string& name, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Func;
  n->func = name;
  n->a = std::move(a);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ < s_.size())
      throw ParseError(pos_, "unexpected trailing input '" + s_.substr(pos_) + "'");
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = binary(Op::Add, e, term());
      else if (eat('-'))
        e = binary(Op::Sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*'))
        e = binary(Op::Mul, e, factor());
      else if (eat('/'))
        e = binary(Op::Div, e, factor());
      else
        return e;
    }
  }

  ExprPtr factor() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '-') {  // unary minus convenience: -x^2 = -(x^2)
      ++pos_;
      return neg(factor());
    }
    ExprPtr b = base();
    if (eat('^')) return binary(Op::Pow, b, factor());  // right associative
    return b;
  }

  ExprPtr base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok = s_.substr(start, pos_ - start);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      throw ParseError(start, "malformed number '" + tok + "'");
    return number(v);
  }

  ExprPtr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return var();
    static const char* kFuncs[] = {"sin", "cos", "sinh", "cosh", "tanh", "exp", "log", "sqrt"};
    for (const char* f : kFuncs) {
      if (name == f) {
        if (!eat('(')) throw ParseError(pos_, "expected '(' after '" + name + "'");
        ExprPtr arg = expr();
        if (!eat(')')) throw ParseError(pos_, "expected ')'");
        return fn(name, arg);
      }
    }
    throw ParseError(start, "unknown identifier '" + name + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

int precedence(const ExprNode& e) {
  switch (e.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Pow: return 3;
    case Op::Neg: return 0;  // always printed parenthesized
    default: return 4;
  }
}

void print_rec(const ExprPtr& e, std::string& out, int parent_prec) {
  const int prec = (e->op == Op::Number && e->value < 0) ? 0 : precedence(*e);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e->op) {
    case Op::Number: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      out += buf;
      break;
    }
    case Op::Var:
      out += 'x';
      break;
    case Op::Add:
      print_rec(e->a, out, 1);
      out += '+';
      print_rec(e->b, out, 1);
      break;
    case Op::Sub:
      print_rec(e->a, out, 1);
      out += '-';
      print_rec(e->b, out, 2);  // right side binds tighter: a-(b+c) keeps parens
      break;
    case Op::Mul:
      print_rec(e->a, out, 2);
      out += '*';
      print_rec(e->b, out, 2);
      break;
    case Op::Div:
      print_rec(e->a, out, 2);
      out += '/';
      print_rec(e->b, out, 3);
      break;
    case Op::Pow:
      print_rec(e->a, out, 4);  // left operand of ^ must be a base
      out += '^';
      print_rec(e->b, out, 3);
      break;
    case Op::Neg:
      out += '-';
      print_rec(e->a, out, 4);
      break;
    case Op::Func:
      out += e->func;
      out += '(';
      print_rec(e->a, out, 0);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

ExprPtr parse_expression(const std::string& text) { return Parser(text).run(); }

double eval_expression(const ExprPtr& e, double x) {
  switch (e->op) {
    case Op::Number: return e->value;
    case Op::Var: return x;
    case Op::Add: return eval_expression(e->a, x) + eval_expression(e->b, x);
    case Op::Sub: return eval_expression(e->a, x) - eval_expression(e->b, x);
    case Op::Mul: return eval_expression(e->a, x) * eval_expression(e->b, x);
    case Op::Div: return eval_expression(e->a, x) / eval_expression(e->b, x);
    case Op::Pow: return std::pow(eval_expression(e->a, x), eval_expression(e->b, x));
    case Op::Neg: return -eval_expression(e->a, x);
    case Op::Func: {
      const double v = eval_expression(e->a, x);
      if (e->func == "sin") return std::sin(v);
      if (e->func == "cos") return std::cos(v);
      if (e->func == "sinh") return std::sinh(v);
      if (e->func == "cosh") return std::cosh(v);
      if (e->func == "tanh") return std::tanh(v);
      if (e->func == "exp") return std::exp(v);
      if (e->func == "log") return std::log(v);
      return std::sqrt(v);  // "sqrt"
    }
  }
  return 0.0;
}

ExprPtr differentiate(const ExprPtr& e) {
  switch (e->op) {
    case Op::Number: return number(0);
    case Op::Var: return number(1);
    case Op::Add: return binary(Op::Add, differentiate(e->a), differentiate(e->b));
    case Op::Sub: return binary(Op::Sub, differentiate(e->a), differentiate(e->b));
    case Op::Mul:
      return binary(Op::Add, binary(Op::Mul, differentiate(e->a), e->b),
                    binary(Op::Mul, e->a, differentiate(e->b)));
    case Op::Div:
      return binary(Op::Div,
                    binary(Op::Sub, binary(Op::Mul, differentiate(e->a), e->b),
                           binary(Op::Mul, e->a, differentiate(e->b))),
                    binary(Op::Pow, e->b, number(2)));
    case Op::Pow: {
      if (e->b->op == Op::Number) {  // power rule
        const double k = e->b->value;
        return binary(Op::Mul, number(k),
                      binary(Op::Mul, binary(Op::Pow, e->a, number(k - 1)),
                             differentiate(e->a)));
      }
      // general case: a^b * (b' log a + b a'/a)
      return binary(
          Op::Mul, binary(Op::Pow, e->a, e->b),
          binary(Op::Add, binary(Op::Mul, differentiate(e->b), fn("log", e->a)),
                 binary(Op::Div, binary(Op::Mul, e->b, differentiate(e->a)), e->a)));
    }
    case Op::Neg: return neg(differentiate(e->a));
    case Op::Func: {
      const ExprPtr da = differentiate(e->a);
      ExprPtr outer;
      if (e->func == "sin")
        outer = fn("cos", e->a);
      else if (e->func == "cos")
        outer = neg(fn("sin", e->a));
      else if (e->func == "sinh")
        outer = fn("cosh", e->a);
      else if (e->func == "cosh")
        outer = fn("sinh", e->a);
      else if (e->func == "tanh")
        outer = binary(Op::Sub, number(1), binary(Op::Pow, fn("tanh", e->a), number(2)));
      else if (e->func == "exp")
        outer = fn("exp", e->a);
      else if (e->func == "log")
        outer = binary(Op::Div, number(1), e->a);
      else  // sqrt
        outer = binary(Op::Div, number(0.5), fn("sqrt", e->a));
      return binary(Op::Mul, outer, da);
    }
  }
  return number(0);
}

std::string print_expression(const ExprPtr& e) {
  std::string out;
  print_rec(e, out, 0);
  return out;
}

double eval_at_zero_or_nan(const ExprPtr& e) {
  const double v = eval_expression(e, 0.0);
  return std::isfinite(v) ? v : std::nan("");
}

}  // namespace bnrad
