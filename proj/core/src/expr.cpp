#include "polyharm/expr.hpp"

#include <cctype>
#include <numbers>

#include "polyharm/errors.hpp"

namespace polyharm {

namespace {

struct Function {
  const char* name;
  Expr::Op op;
};

constexpr Function kFunctions[] = {
    {"sin", Expr::Op::sin},     {"cos", Expr::Op::cos},   {"tan", Expr::Op::tan},   {"exp", Expr::Op::exp},
    {"log", Expr::Op::log},     {"sqrt", Expr::Op::sqrt}, {"atan", Expr::Op::atan}, {"asin", Expr::Op::asin},
    {"acos", Expr::Op::acos},   {"sinh", Expr::Op::sinh}, {"cosh", Expr::Op::cosh}, {"tanh", Expr::Op::tanh},
    {"sexp", Expr::Op::sexp},   {"abs", Expr::Op::abs},
};

double fold(Expr::Op op, double a, double b) {
  switch (op) {
    case Expr::Op::add: return a + b;
    case Expr::Op::sub: return a - b;
    case Expr::Op::mul: return a * b;
    case Expr::Op::div: return a / b;
    case Expr::Op::neg: return -a;
    case Expr::Op::pow: return std::pow(a, b);
    case Expr::Op::sin: return std::sin(a);
    case Expr::Op::cos: return std::cos(a);
    case Expr::Op::tan: return std::tan(a);
    case Expr::Op::exp: return std::exp(a);
    case Expr::Op::log: return std::log(a);
    case Expr::Op::sqrt: return std::sqrt(a);
    case Expr::Op::atan: return std::atan(a);
    case Expr::Op::asin: return std::asin(a);
    case Expr::Op::acos: return std::acos(a);
    case Expr::Op::sinh: return std::sinh(a);
    case Expr::Op::cosh: return std::cosh(a);
    case Expr::Op::tanh: return std::tanh(a);
    case Expr::Op::sexp: return sexp(a);
    case Expr::Op::abs: return std::abs(a);
    default: return 0.0;
  }
}

}  // namespace

class ExprParser {
 public:
  ExprParser(Expr& e, const std::string& s, const std::vector<std::string>& vars,
             const std::map<std::string, double>& params)
      : e_(e), s_(s), vars_(vars), params_(params) {}

  int parse() {
    int r = expr();
    skip();
    if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("expression \"" + s_ + "\": " + why + " at offset " + std::to_string(p_));
  }

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }

  bool eat(const char* tok) {
    skip();
    const std::size_t n = std::char_traits<char>::length(tok);
    if (s_.compare(p_, n, tok) == 0) {
      p_ += n;
      return true;
    }
    return false;
  }

  int push(Expr::Op op, int a = -1, int b = -1, double c = 0.0) {
    auto& nodes = e_.nodes_;
    auto is_c = [&](int i) { return i >= 0 && nodes[i].op == Expr::Op::constant; };
    if (op != Expr::Op::constant && op != Expr::Op::variable && is_c(a) && (b < 0 || is_c(b))) {
      const double v = fold(op, nodes[a].c, b < 0 ? 0.0 : nodes[b].c);
      nodes.push_back({Expr::Op::constant, -1, -1, v});
    } else {
      nodes.push_back({op, a, b, c});
    }
    return static_cast<int>(nodes.size()) - 1;
  }

  int expr() {
    int a = term();
    for (;;) {
      if (eat("+"))
        a = push(Expr::Op::add, a, term());
      else if (eat("-"))
        a = push(Expr::Op::sub, a, term());
      else
        return a;
    }
  }

  int term() {
    int a = unary();
    for (;;) {
      skip();
      if (s_.compare(p_, 2, "**") == 0) return a;
      if (eat("*"))
        a = push(Expr::Op::mul, a, unary());
      else if (eat("/"))
        a = push(Expr::Op::div, a, unary());
      else
        return a;
    }
  }

  int unary() {
    if (eat("-")) return push(Expr::Op::neg, unary());
    if (eat("+")) return unary();
    return power();
  }

  int power() {
    int a = atom();
    if (eat("**") || eat("^")) return push(Expr::Op::pow, a, unary());
    return a;
  }

  int atom() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end");
    const char c = s_[p_];
    if (c == '(') {
      ++p_;
      int r = expr();
      if (!eat(")")) fail("missing ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + p_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      p_ += static_cast<std::size_t>(end - begin);
      return push(Expr::Op::constant, -1, -1, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t q = p_;
      while (q < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[q])) || s_[q] == '_')) ++q;
      const std::string name = s_.substr(p_, q - p_);
      p_ = q;
      if (eat("(")) return call(name);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return push(Expr::Op::variable, -1, -1, static_cast<double>(i));
      if (auto it = params_.find(name); it != params_.end()) return push(Expr::Op::constant, -1, -1, it->second);
      if (name == "pi") return push(Expr::Op::constant, -1, -1, std::numbers::pi);
      if (name == "e") return push(Expr::Op::constant, -1, -1, std::numbers::e);
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int call(const std::string& name) {
    std::vector<int> args{expr()};
    while (eat(",")) args.push_back(expr());
    if (!eat(")")) fail("missing ')' after arguments of " + name);
    if (name == "pow") {
      if (args.size() != 2) fail("pow takes two arguments");
      return push(Expr::Op::pow, args[0], args[1]);
    }
    for (const auto& f : kFunctions) {
      if (name == f.name) {
        if (args.size() != 1) fail(name + " takes one argument");
        return push(f.op, args[0]);
      }
    }
    fail("unknown function '" + name + "'");
  }

  Expr& e_;
  const std::string& s_;
  const std::vector<std::string>& vars_;
  const std::map<std::string, double>& params_;
  std::size_t p_ = 0;
};

Expr Expr::parse(const std::string& text, const std::vector<std::string>& vars,
                 const std::map<std::string, double>& params) {
  Expr e;
  e.text_ = text;
  ExprParser p(e, e.text_, vars, params);
  e.root_ = p.parse();
  return e;
}

int Expr::max_variable() const {
  int r = -1;
  for (const auto& n : nodes_)
    if (n.op == Op::variable) r = std::max(r, static_cast<int>(n.c));
  return r;
}

}  // namespace polyharm
