#pragma once

// Small arithmetic expression language for closed-form maps and metrics.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('-' | '+') unary | power
//   power := atom (('^' | '**') unary)?
//   atom  := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Names resolve to positional variables first, then named parameters, then
// the constants pi and e.  Subtrees without variables are folded at parse time.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "polyharm/scalar.hpp"

namespace polyharm {

class Expr {
 public:
  enum class Op {
    constant, variable, add, sub, mul, div, neg, pow, sin, cos, tan, exp, log, sqrt,
    atan, asin, acos, sinh, cosh, tanh, sexp, abs
  };

  Expr() = default;
  static Expr parse(const std::string& text, const std::vector<std::string>& vars,
                    const std::map<std::string, double>& params = {});

  const std::string& text() const { return text_; }
  bool is_constant() const { return nodes_[root_].op == Op::constant; }
  double constant_value() const { return nodes_[root_].c; }
  // Highest variable index used, -1 if none.
  int max_variable() const;

  // Evaluate with x[i] bound to variable i.  T is double or Jet; x is nonempty.
  template <class T>
  T eval(const std::vector<T>& x) const {
    return eval_node<T>(root_, x);
  }

 private:
  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    double c = 0.0;
  };
  friend class ExprParser;

  template <class T>
  T eval_node(int i, const std::vector<T>& x) const;

  std::string text_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

template <class T>
T Expr::eval_node(int i, const std::vector<T>& x) const {
  using std::abs, std::acos, std::asin, std::atan, std::cos, std::cosh, std::exp, std::log, std::pow,
      std::sin, std::sinh, std::sqrt, std::tan, std::tanh;
  const Node& n = nodes_[i];
  switch (n.op) {
    case Op::constant: return like(x[0], n.c);
    case Op::variable: return x[static_cast<std::size_t>(n.c)];
    case Op::add: return eval_node<T>(n.a, x) + eval_node<T>(n.b, x);
    case Op::sub: return eval_node<T>(n.a, x) - eval_node<T>(n.b, x);
    case Op::mul: {
      const Node& na = nodes_[n.a];
      if (na.op == Op::constant) return eval_node<T>(n.b, x) * na.c;
      return eval_node<T>(n.a, x) * eval_node<T>(n.b, x);
    }
    case Op::div: {
      const Node& nb = nodes_[n.b];
      if (nb.op == Op::constant) return eval_node<T>(n.a, x) / nb.c;
      return eval_node<T>(n.a, x) / eval_node<T>(n.b, x);
    }
    case Op::neg: return -eval_node<T>(n.a, x);
    case Op::pow: {
      const Node& nb = nodes_[n.b];
      if (nb.op == Op::constant) return pow(eval_node<T>(n.a, x), nb.c);
      return exp(eval_node<T>(n.b, x) * log(eval_node<T>(n.a, x)));
    }
    case Op::sin: return sin(eval_node<T>(n.a, x));
    case Op::cos: return cos(eval_node<T>(n.a, x));
    case Op::tan: return tan(eval_node<T>(n.a, x));
    case Op::exp: return exp(eval_node<T>(n.a, x));
    case Op::log: return log(eval_node<T>(n.a, x));
    case Op::sqrt: return sqrt(eval_node<T>(n.a, x));
    case Op::atan: return atan(eval_node<T>(n.a, x));
    case Op::asin: return asin(eval_node<T>(n.a, x));
    case Op::acos: return acos(eval_node<T>(n.a, x));
    case Op::sinh: return sinh(eval_node<T>(n.a, x));
    case Op::cosh: return cosh(eval_node<T>(n.a, x));
    case Op::tanh: return tanh(eval_node<T>(n.a, x));
    case Op::sexp: return sexp(eval_node<T>(n.a, x));
    case Op::abs: return abs(eval_node<T>(n.a, x));
  }
  return like(x[0], 0.0);
}

}  // namespace polyharm
