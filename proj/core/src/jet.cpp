#include "polyharm/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "polyharm/errors.hpp"

namespace polyharm {

namespace {

std::vector<std::vector<int>> monomials_of_degree(int vars, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(vars, 0);
  // lexicographic with the first variable carrying the largest power
  auto rec = [&](auto&& self, int v, int left) -> void {
    if (v == vars - 1) {
      e[v] = left;
      out.push_back(e);
      return;
    }
    for (int p = left; p >= 0; --p) {
      e[v] = p;
      self(self, v + 1, left - p);
    }
  };
  rec(rec, 0, d);
  return out;
}

}  // namespace

JetSpace::JetSpace(int vars, int degree) : vars_(vars), degree_(degree) {
  if (vars < 1 || degree < 0) throw ConfigError("jet space needs vars >= 1 and degree >= 0");
  std::vector<std::vector<int>> all;
  count_.resize(degree + 1);
  for (int d = 0; d <= degree; ++d) {
    auto md = monomials_of_degree(vars, d);
    for (auto& e : md) {
      all.push_back(e);
      deg_.push_back(d);
    }
    count_[d] = static_cast<int>(all.size());
  }
  const int nm = static_cast<int>(all.size());
  exps_.resize(static_cast<std::size_t>(nm) * vars);
  for (int i = 0; i < nm; ++i)
    for (int v = 0; v < vars; ++v) exps_[i * vars + v] = static_cast<std::uint8_t>(all[i][v]);

  std::size_t lsize = 1;
  for (int v = 0; v < vars; ++v) lsize *= static_cast<std::size_t>(degree + 1);
  lookup_.assign(lsize, -1);
  for (int i = 0; i < nm; ++i) {
    std::size_t key = 0;
    for (int v = 0; v < vars; ++v) key = key * (degree + 1) + all[i][v];
    lookup_[key] = i;
  }

  raise_.assign(static_cast<std::size_t>(nm) * vars, -1);
  for (int i = 0; i < nm; ++i) {
    if (deg_[i] == degree) continue;
    for (int v = 0; v < vars; ++v) {
      auto e = all[i];
      e[v] += 1;
      raise_[i * vars + v] = index(e.data());
    }
  }

  pairs_.resize(nm);
  for (int i = 0; i < nm; ++i) {
    const int lim = count(degree - deg_[i]);
    pairs_[i].reserve(lim);
    std::vector<int> e(vars);
    for (int j = 0; j < lim; ++j) {
      for (int v = 0; v < vars; ++v) e[v] = all[i][v] + all[j][v];
      pairs_[i].push_back({j, index(e.data())});
    }
  }
}

int JetSpace::index(const int* e) const {
  std::size_t key = 0;
  for (int v = 0; v < vars_; ++v) {
    if (e[v] < 0 || e[v] > degree_) return -1;
    key = key * (degree_ + 1) + e[v];
  }
  return lookup_[key];
}

const JetSpace& JetSpace::get(int vars, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{vars, degree}];
  if (!slot) slot.reset(new JetSpace(vars, degree));
  return *slot;
}

Jet::Jet(const JetSpace& sp, double c0) : Jet(sp, sp.degree(), c0) {}

Jet::Jet(const JetSpace& sp, int d, double c0) : sp_(&sp), d_(d), c_(sp.count(d), 0.0) {
  if (!c_.empty()) c_[0] = c0;
}

Jet Jet::variable(const JetSpace& sp, int v, double x0) {
  Jet j(sp, x0);
  if (sp.degree() >= 1) j.c_[1 + v] = 1.0;
  return j;
}

bool Jet::is_zero() const {
  for (double x : c_)
    if (x != 0.0) return false;
  return true;
}

double Jet::derivative(const int* e) const {
  const int idx = sp_->index(e);
  if (idx < 0 || idx >= static_cast<int>(c_.size()))
    throw ContractError("jet derivative beyond available degree");
  double f = 1.0;
  for (int v = 0; v < sp_->vars(); ++v)
    for (int p = 2; p <= e[v]; ++p) f *= p;
  return c_[idx] * f;
}

void Jet::truncate(int d) {
  if (d >= d_) return;
  if (d < 0) throw ContractError("jet degree exhausted: more derivatives requested than the jet carries");
  d_ = d;
  c_.resize(sp_->count(d));
}

Jet& Jet::operator+=(const Jet& b) {
  if (b.d_ < d_) truncate(b.d_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& b) {
  if (b.d_ < d_) truncate(b.d_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& b) {
  *this = *this * b;
  return *this;
}

Jet& Jet::operator+=(double b) {
  if (!c_.empty()) c_[0] += b;
  return *this;
}

Jet& Jet::operator-=(double b) {
  if (!c_.empty()) c_[0] -= b;
  return *this;
}

Jet& Jet::operator*=(double b) {
  for (double& x : c_) x *= b;
  return *this;
}

Jet& Jet::operator/=(double b) {
  for (double& x : c_) x /= b;
  return *this;
}

void add_mul(Jet& out, const Jet& a, const Jet& b) {
  const int d = std::min(a.d_, b.d_);
  if (d < out.d_) out.truncate(d);
  const JetSpace& sp = *a.sp_;
  const int na = sp.count(out.d_);
  for (int i = 0; i < na; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const int lim = sp.count(out.d_ - sp.deg(i));
    const auto& pr = sp.pairs(i);
    for (int t = 0; t < lim; ++t) out.c_[pr[t].k] += ai * b.c_[pr[t].j];
  }
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& x : r.coeffs()) x = -x;
  return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(*a.space(), std::min(a.degree(), b.degree()), 0.0);
  add_mul(r, a, b);
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }
Jet operator+(Jet a, double b) { return a += b; }
Jet operator+(double a, Jet b) { return b += a; }
Jet operator-(Jet a, double b) { return a -= b; }
Jet operator-(double a, const Jet& b) {
  Jet r = -b;
  return r += a;
}
Jet operator*(Jet a, double b) { return a *= b; }
Jet operator*(double a, Jet b) { return b *= a; }
Jet operator/(Jet a, double b) { return a /= b; }
Jet operator/(double a, const Jet& b) { return inv(b) *= a; }

Jet partial(const Jet& a, int v) {
  if (a.d_ <= 0) throw ContractError("jet degree exhausted: more derivatives requested than the jet carries");
  const JetSpace& sp = *a.sp_;
  Jet r(sp, a.d_ - 1, 0.0);
  const int n = sp.count(a.d_ - 1);
  for (int k = 0; k < n; ++k) {
    const int src = sp.raise(k, v);
    r.c_[k] = (sp.exponent(k, v) + 1) * a.c_[src];
  }
  return r;
}

Jet partial2(const Jet& a, int v, int w) { return partial(partial(a, v), w); }

namespace {

// Univariate power series helpers (coefficients of t^0..t^d).
using Series = std::vector<double>;

Series ser_div(const Series& a, const Series& b) {
  Series r(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    double s = a[n];
    for (std::size_t j = 1; j <= n; ++j) s -= b[j] * r[n - j];
    r[n] = s / b[0];
  }
  return r;
}

// p(t)^r for p(0) != 0, via p y' = r p' y.
Series ser_pow(const Series& p, double r) {
  const std::size_t N = p.size();
  Series y(N, 0.0);
  y[0] = std::pow(p[0], r);
  for (std::size_t n = 1; n < N; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += (r * k - (n - k)) * p[k] * y[n - k];
    y[n] = s / (n * p[0]);
  }
  return y;
}

Series ser_integrate(const Series& a, double c0) {
  Series r(a.size(), 0.0);
  r[0] = c0;
  for (std::size_t n = 1; n < a.size(); ++n) r[n] = a[n - 1] / static_cast<double>(n);
  return r;
}

// f(a) where c holds the Taylor coefficients of f at a.value().
Jet compose(const Series& c, const Jet& a) {
  const int d = a.degree();
  Jet h = a;
  h.coeffs()[0] = 0.0;
  Jet r(*a.space(), d, c[d]);
  for (int n = d - 1; n >= 0; --n) {
    r = r * h;
    r += c[n];
  }
  return r;
}

Series base(const Jet& a) { return Series(a.degree() + 1, 0.0); }

}  // namespace

Jet inv(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw ContractError("jet division by a quantity vanishing at the base point");
  Series c = base(a);
  double p = 1.0 / a0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n] = p;
    p *= -1.0 / a0;
  }
  return compose(c, a);
}

Jet sin(const Jet& a) {
  Series c = base(a);
  const double s = std::sin(a.value()), co = std::cos(a.value());
  double f = 1.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n > 0) f /= static_cast<double>(n);
    const double v = (n % 4 == 0) ? s : (n % 4 == 1) ? co : (n % 4 == 2) ? -s : -co;
    c[n] = v * f;
  }
  return compose(c, a);
}

Jet cos(const Jet& a) {
  Series c = base(a);
  const double s = std::sin(a.value()), co = std::cos(a.value());
  double f = 1.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n > 0) f /= static_cast<double>(n);
    const double v = (n % 4 == 0) ? co : (n % 4 == 1) ? -s : (n % 4 == 2) ? -co : s;
    c[n] = v * f;
  }
  return compose(c, a);
}

Jet tan(const Jet& a) { return sin(a) * inv(cos(a)); }

Jet exp(const Jet& a) {
  Series c = base(a);
  double f = std::exp(a.value());
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n > 0) f /= static_cast<double>(n);
    c[n] = f;
  }
  return compose(c, a);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw ContractError("jet log of a non-positive quantity");
  Series c = base(a);
  c[0] = std::log(a0);
  double p = 1.0 / a0;
  for (std::size_t n = 1; n < c.size(); ++n) {
    c[n] = ((n % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(n);
    p /= a0;
  }
  return compose(c, a);
}

Jet pow(const Jet& a, double r) {
  const double a0 = a.value();
  if (r == std::floor(r) && std::abs(r) < 64) return pow(a, static_cast<int>(r));
  if (!(a0 > 0.0)) throw ContractError("jet fractional power of a non-positive quantity");
  Series c = base(a);
  c[0] = std::pow(a0, r);
  for (std::size_t n = 1; n < c.size(); ++n) c[n] = c[n - 1] * (r - static_cast<double>(n - 1)) / (n * a0);
  return compose(c, a);
}

Jet pow(const Jet& a, int k) {
  if (k < 0) return inv(pow(a, -k));
  Jet r(*a.space(), a.degree(), 1.0);
  Jet b = a;
  while (k > 0) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet atan(const Jet& a) {
  const double a0 = a.value();
  Series q = base(a), one = base(a);
  one[0] = 1.0;
  q[0] = 1.0 + a0 * a0;
  if (q.size() > 1) q[1] = 2.0 * a0;
  if (q.size() > 2) q[2] = 1.0;
  return compose(ser_integrate(ser_div(one, q), std::atan(a0)), a);
}

Jet asin(const Jet& a) {
  const double a0 = a.value();
  if (!(std::abs(a0) < 1.0)) throw ContractError("jet asin outside (-1, 1)");
  Series p = base(a);
  p[0] = 1.0 - a0 * a0;
  if (p.size() > 1) p[1] = -2.0 * a0;
  if (p.size() > 2) p[2] = -1.0;
  return compose(ser_integrate(ser_pow(p, -0.5), std::asin(a0)), a);
}

Jet acos(const Jet& a) { return std::numbers::pi / 2 - asin(a); }

Jet sinh(const Jet& a) {
  Series c = base(a);
  const double s = std::sinh(a.value()), co = std::cosh(a.value());
  double f = 1.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n > 0) f /= static_cast<double>(n);
    c[n] = ((n % 2 == 0) ? s : co) * f;
  }
  return compose(c, a);
}

Jet cosh(const Jet& a) {
  Series c = base(a);
  const double s = std::sinh(a.value()), co = std::cosh(a.value());
  double f = 1.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n > 0) f /= static_cast<double>(n);
    c[n] = ((n % 2 == 0) ? co : s) * f;
  }
  return compose(c, a);
}

Jet tanh(const Jet& a) { return sinh(a) * inv(cosh(a)); }

Jet abs(const Jet& a) {
  if (a.value() == 0.0) throw ContractError("jet abs at a zero of its argument");
  return a.value() > 0 ? a : -a;
}

Jet sexp(const Jet& a) {
  if (!(a.value() > 0.0)) return Jet(*a.space(), a.degree(), 0.0);
  return exp(-inv(a));
}

Jet sexp_d(const Jet& a) {
  if (!(a.value() > 0.0)) return Jet(*a.space(), a.degree(), 0.0);
  Jet ia = inv(a);
  return sexp(a) * ia * ia;
}

Jet sign_of(const Jet& a) {
  const double v = a.value();
  return Jet(*a.space(), v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0));
}

}  // namespace polyharm
