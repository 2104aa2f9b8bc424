#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A Jet over a JetSpace(vars, D) stores the Taylor coefficients of a smooth
// function of `vars` variables about a base point, up to total degree d <= D.
// Coefficients are stored in graded order, so truncating to a lower degree is a
// prefix.  Differentiation lowers the degree by one; products truncate to the
// smaller degree of the operands.

#include <cstdint>
#include <vector>

namespace polyharm {

class JetSpace {
 public:
  struct Pair {
    int j;
    int k;
  };

  static const JetSpace& get(int vars, int degree);

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  // Number of monomials of total degree <= d.
  int count(int d) const { return d < 0 ? 0 : count_[d]; }
  int deg(int idx) const { return deg_[idx]; }
  int exponent(int idx, int v) const { return exps_[idx * vars_ + v]; }
  // Index of the monomial idx * x_v, or -1 if it exceeds the space degree.
  int raise(int idx, int v) const { return raise_[idx * vars_ + v]; }
  // Index of the monomial with the given exponents (size vars).
  int index(const int* e) const;
  // (j, k) with monomial(i) * monomial(j) = monomial(k), ordered by j.
  const std::vector<Pair>& pairs(int i) const { return pairs_[i]; }

 private:
  JetSpace(int vars, int degree);

  int vars_;
  int degree_;
  std::vector<int> count_;
  std::vector<int> deg_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> raise_;
  std::vector<int> lookup_;
  std::vector<std::vector<Pair>> pairs_;
};

class Jet {
 public:
  Jet() = default;
  // Constant with the full degree of the space.
  Jet(const JetSpace& sp, double c0);
  Jet(const JetSpace& sp, int d, double c0);
  // x_v about the base point x0.
  static Jet variable(const JetSpace& sp, int v, double x0);

  const JetSpace* space() const { return sp_; }
  int degree() const { return d_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }
  double coeff(int idx) const { return c_[idx]; }
  bool is_zero() const;
  // Mixed partial derivative at the base point, exponents e (size vars).
  double derivative(const int* e) const;

  // Drop all coefficients above degree d (d <= degree()).
  void truncate(int d);

  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  Jet& operator*=(const Jet& b);
  Jet& operator+=(double b);
  Jet& operator-=(double b);
  Jet& operator*=(double b);
  Jet& operator/=(double b);

  friend Jet partial(const Jet& a, int v);
  friend void add_mul(Jet& out, const Jet& a, const Jet& b);

 private:
  const JetSpace* sp_ = nullptr;
  int d_ = -1;
  std::vector<double> c_;
};

Jet operator-(const Jet& a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double b);
Jet operator+(double a, Jet b);
Jet operator-(Jet a, double b);
Jet operator-(double a, const Jet& b);
Jet operator*(Jet a, double b);
Jet operator*(double a, Jet b);
Jet operator/(Jet a, double b);
Jet operator/(double a, const Jet& b);

Jet partial(const Jet& a, int v);
Jet partial2(const Jet& a, int v, int w);
// out += a * b, truncating out to the product degree when necessary.
void add_mul(Jet& out, const Jet& a, const Jet& b);

Jet inv(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double r);
Jet pow(const Jet& a, int k);
Jet atan(const Jet& a);
Jet asin(const Jet& a);
Jet acos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet abs(const Jet& a);
// exp(-1/a) for a > 0, 0 otherwise (smooth, flat at 0).
Jet sexp(const Jet& a);
Jet sexp_d(const Jet& a);
Jet sign_of(const Jet& a);

inline double value_of(const Jet& a) { return a.value(); }
inline Jet like(const Jet& ref, double v) { return Jet(*ref.space(), v); }
inline bool is_zero(const Jet& a) { return a.is_zero(); }

}  // namespace polyharm
