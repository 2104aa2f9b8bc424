#include "polyharm/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "polyharm/errors.hpp"
#include "polyharm/expr.hpp"
#include "polyharm/scalar.hpp"
#include "polyharm/tensor.hpp"

namespace polyharm {

namespace {

std::vector<std::string> coordinate_names(const char* prefix, int k) {
  std::vector<std::string> v;
  for (int i = 1; i <= k; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

// Parse a symmetric matrix from k*k or k(k+1)/2 (upper triangle) expressions.
std::vector<Expr> parse_symmetric(int k, const std::vector<std::string>& src, const char* prefix,
                                  const std::map<std::string, double>& params) {
  const auto names = coordinate_names(prefix, k);
  std::vector<Expr> out(static_cast<std::size_t>(k) * k);
  if (src.size() == static_cast<std::size_t>(k) * k) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out[i * k + j] = Expr::parse(src[i * k + j], names, params);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (out[i * k + j].text() != out[j * k + i].text())
          throw ConfigError("metric expressions must be symmetric: entry (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ") differs from its transpose");
  } else if (src.size() == static_cast<std::size_t>(k) * (k + 1) / 2) {
    std::size_t t = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        out[i * k + j] = Expr::parse(src[t++], names, params);
        out[j * k + i] = out[i * k + j];
      }
  } else {
    throw ConfigError("metric needs " + std::to_string(k * k) + " or " + std::to_string(k * (k + 1) / 2) +
                      " expressions, got " + std::to_string(src.size()));
  }
  return out;
}

Jet zero_like(const Jet& ref) {
  Jet z = like(ref, 0.0);
  z.truncate(ref.degree());
  return z;
}

// Conformally flat metric e^{2f} δ: Γ^a_{bc} = δ^a_b f_c + δ^a_c f_b − δ_{bc} f_a.
void conformal_christoffel(std::vector<Jet>& G, int n, int offset, int k, const std::vector<Jet>& df) {
  auto at = [&](int a, int b, int c) -> Jet& { return G[(a * n + b) * n + c]; };
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        Jet& g = at(offset + a, offset + b, offset + c);
        if (a == b) g += df[c];
        if (a == c) g += df[b];
        if (b == c) g -= df[a];
      }
}

// Stereographic chart of the unit sphere S^k: g = 4/(1+|x|²)² δ.  Returns the
// conformal factor 4/(1+|x|²)² and fills df_a = −2x_a/(1+|x|²).
Jet stereo_factor(const std::vector<Jet>& x, int offset, int k, std::vector<Jet>* df) {
  Jet q = like(x[offset], 1.0);
  for (int a = 0; a < k; ++a) add_mul(q, x[offset + a], x[offset + a]);
  Jet iq = inv(q);
  if (df) {
    df->clear();
    for (int a = 0; a < k; ++a) df->push_back(x[offset + a] * iq * -2.0);
  }
  return iq * iq * 4.0;
}

std::vector<Jet> sphere_metric(const std::vector<Jet>& y, int n) {
  const Jet& s = y[n - 1];
  Jet z = zero_like(s);
  std::vector<Jet> h(static_cast<std::size_t>(n) * n, z);
  Jet sn = sin(s);
  Jet s2 = sn * sn;
  if (n == 2) {
    h[0] = s2;
  } else {
    Jet f = stereo_factor(y, 0, n - 1, nullptr) * s2;
    for (int a = 0; a < n - 1; ++a) h[a * n + a] = f;
  }
  h[n * n - 1] = like(s, 1.0);
  return h;
}

}  // namespace

std::vector<Jet> sphere_polar_christoffel(const std::vector<Jet>& y) {
  const int n = static_cast<int>(y.size());
  const Jet& s = y[n - 1];
  Jet z = zero_like(s);
  std::vector<Jet> G(static_cast<std::size_t>(pow_int(n, 3)), z);
  auto at = [&](int a, int b, int c) -> Jet& { return G[(a * n + b) * n + c]; };
  const int q = n - 1;
  Jet sn = sin(s), cs = cos(s);
  Jet sc = sn * cs;
  Jet cot = cs * inv(sn);
  if (q == 1) {
    // angle chart on S^1: g̃ = 1, Γ̃ = 0
    at(q, 0, 0) = -sc;
  } else {
    std::vector<Jet> df;
    Jet gt = stereo_factor(y, 0, q, &df);
    conformal_christoffel(G, n, 0, q, df);
    for (int b = 0; b < q; ++b) at(q, b, b) = -(sc * gt);
  }
  for (int a = 0; a < q; ++a) {
    at(a, a, q) = cot;
    at(a, q, a) = cot;
  }
  return G;
}

// ---------------------------------------------------------------- domain

struct DomainModel::Impl {
  Kind kind;
  int m;
  std::vector<double> periods;
  std::vector<Expr> g;
  double radius = 1.0;
};

DomainModel DomainModel::flat_torus(std::vector<double> periods) {
  if (periods.empty()) throw ConfigError("flat_torus needs at least one period");
  for (double p : periods)
    if (!(p > 0)) throw ConfigError("flat_torus periods must be positive");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::flat_torus;
  p->m = static_cast<int>(periods.size());
  p->periods = std::move(periods);
  DomainModel d;
  d.p_ = p;
  return d;
}

DomainModel DomainModel::user_metric(int m, const std::vector<std::string>& g, std::vector<double> periods,
                                     const std::map<std::string, double>& params) {
  if (m < 1) throw ConfigError("domain dimension must be positive");
  if (static_cast<int>(periods.size()) != m) throw ConfigError("user_metric domain needs one period per axis");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::user_metric;
  p->m = m;
  p->periods = std::move(periods);
  p->g = parse_symmetric(m, g, "x", params);
  DomainModel d;
  d.p_ = p;
  return d;
}

DomainModel DomainModel::sphere_stereo(int m, double radius) {
  if (m < 1) throw ConfigError("domain dimension must be positive");
  if (!(radius > 0)) throw ConfigError("sphere radius must be positive");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::sphere_stereo;
  p->m = m;
  p->radius = radius;
  DomainModel d;
  d.p_ = p;
  return d;
}

int DomainModel::dim() const { return p_->m; }
DomainModel::Kind DomainModel::kind() const { return p_->kind; }
bool DomainModel::gridable() const { return p_->kind != Kind::sphere_stereo; }
const std::vector<double>& DomainModel::periods() const { return p_->periods; }

std::string DomainModel::kind_name() const {
  switch (p_->kind) {
    case Kind::flat_torus: return "flat_torus";
    case Kind::user_metric: return "user_metric";
    case Kind::sphere_stereo: return "round_sphere_stereo";
  }
  return "";
}

std::vector<Jet> DomainModel::metric(const std::vector<Jet>& x) const {
  const int m = p_->m;
  Jet z = zero_like(x[0]);
  std::vector<Jet> g(static_cast<std::size_t>(m) * m, z);
  switch (p_->kind) {
    case Kind::flat_torus:
      for (int i = 0; i < m; ++i) g[i * m + i] = like(x[0], 1.0);
      break;
    case Kind::user_metric:
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          g[i * m + j] = p_->g[i * m + j].eval(x);
          if (j != i) g[j * m + i] = g[i * m + j];
        }
      break;
    case Kind::sphere_stereo: {
      const double r2 = p_->radius * p_->radius;
      Jet f = m == 1 ? like(x[0], r2) : stereo_factor(x, 0, m, nullptr) * r2;
      for (int i = 0; i < m; ++i) g[i * m + i] = f;
      break;
    }
  }
  return g;
}

namespace {

std::vector<Jet> point_vars(int m, int degree, const double* x) {
  const JetSpace& sp = JetSpace::get(m, degree);
  std::vector<Jet> v;
  for (int i = 0; i < m; ++i) v.push_back(Jet::variable(sp, i, x[i]));
  return v;
}

}  // namespace

std::vector<double> DomainModel::metric_at(const double* x) const { return values_of(metric(point_vars(dim(), 0, x))); }

std::vector<double> DomainModel::metric_inv_at(const double* x) const {
  return values_of(inverse_spd(metric(point_vars(dim(), 0, x)), dim()));
}

std::vector<double> DomainModel::christoffel_at(const double* x) const {
  return values_of(christoffel_from_metric(metric(point_vars(dim(), 1, x)), dim()));
}

std::vector<double> DomainModel::christoffel_jet_at(const double* x) const {
  const int m = dim();
  auto G = christoffel_from_metric(metric(point_vars(m, 2, x)), m);
  std::vector<double> r;
  for (const auto& g : G)
    for (int l = 0; l < m; ++l) r.push_back(partial(g, l).value());
  return r;
}

std::vector<double> DomainModel::ricci_at(const double* x) const {
  const int m = dim();
  auto G = christoffel_from_metric(metric(point_vars(m, 2, x)), m);
  return values_of(ricci_from_riemann(riemann_from_christoffel(G, m), m));
}

// ---------------------------------------------------------------- target

struct TargetModel::Impl {
  Kind kind;
  int n;
  double collar = 1e-3;
  double c = 0.0;
  int jet_order = INT_MAX;
  std::vector<Expr> h;
};

TargetModel TargetModel::euclidean(int n) {
  if (n < 1) throw ConfigError("target dimension must be positive");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::euclidean;
  p->n = n;
  TargetModel t;
  t.p_ = p;
  return t;
}

TargetModel TargetModel::round_sphere_polar(int n, double collar) {
  if (n < 2) throw ConfigError("round_sphere_polar needs dimension at least 2");
  if (!(collar > 0) || !(collar < 0.5)) throw ConfigError("pole collar must lie in (0, 0.5)");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::round_sphere_polar;
  p->n = n;
  p->collar = collar;
  p->c = 1.0;
  TargetModel t;
  t.p_ = p;
  return t;
}

TargetModel TargetModel::space_form(int n, double c) {
  if (n < 1) throw ConfigError("target dimension must be positive");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::space_form;
  p->n = n;
  p->c = c;
  TargetModel t;
  t.p_ = p;
  return t;
}

TargetModel TargetModel::user_metric(int n, const std::vector<std::string>& h,
                                     const std::map<std::string, double>& params, int jet_order) {
  if (n < 1) throw ConfigError("target dimension must be positive");
  if (jet_order < 1) throw ConfigError("user_metric jet_order must be at least 1");
  auto p = std::make_shared<Impl>();
  p->kind = Kind::user_metric;
  p->n = n;
  p->jet_order = jet_order;
  p->h = parse_symmetric(n, h, "y", params);
  TargetModel t;
  t.p_ = p;
  return t;
}

int TargetModel::dim() const { return p_->n; }
TargetModel::Kind TargetModel::kind() const { return p_->kind; }
double TargetModel::collar() const { return p_->collar; }
int TargetModel::jet_order() const { return p_->jet_order; }

std::string TargetModel::kind_name() const {
  switch (p_->kind) {
    case Kind::euclidean: return "euclidean";
    case Kind::round_sphere_polar: return "round_sphere_polar";
    case Kind::space_form: return "space_form";
    case Kind::user_metric: return "user_metric";
  }
  return "";
}

std::optional<double> TargetModel::constant_curvature() const {
  switch (p_->kind) {
    case Kind::euclidean: return 0.0;
    case Kind::round_sphere_polar:
    case Kind::space_form: return p_->c;
    case Kind::user_metric: return std::nullopt;
  }
  return std::nullopt;
}

void TargetModel::require_jet_order(int order, const std::string& what) const {
  if (order > p_->jet_order)
    throw CapabilityError(what + " needs Christoffel jets of order " + std::to_string(order) +
                          ", target model supplies order " + std::to_string(p_->jet_order));
}

bool TargetModel::in_chart(const double* y) const {
  const int n = p_->n;
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(y[i])) return false;
  switch (p_->kind) {
    case Kind::euclidean: return true;
    case Kind::round_sphere_polar: {
      const double s = y[n - 1];
      return s > p_->collar && s < std::numbers::pi - p_->collar;
    }
    case Kind::space_form: {
      double r2 = 0;
      for (int i = 0; i < n; ++i) r2 += y[i] * y[i];
      return 1.0 + p_->c * r2 / 4.0 > 1e-12;
    }
    case Kind::user_metric: {
      const JetSpace& sp = JetSpace::get(n, 0);
      std::vector<Jet> v;
      for (int i = 0; i < n; ++i) v.push_back(Jet::variable(sp, i, y[i]));
      std::vector<double> h = values_of(metric(v));
      // Cholesky positivity test
      for (int j = 0; j < n; ++j) {
        double d = h[j * n + j];
        for (int k = 0; k < j; ++k) d -= h[j * n + k] * h[j * n + k];
        if (!(d > 0)) return false;
        d = std::sqrt(d);
        h[j * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
          double s = h[i * n + j];
          for (int k = 0; k < j; ++k) s -= h[i * n + k] * h[j * n + k];
          h[i * n + j] = s / d;
        }
      }
      return true;
    }
  }
  return false;
}

void TargetModel::check_chart(const double* y) const {
  if (in_chart(y)) return;
  std::ostringstream os;
  os.precision(17);
  os << "point (";
  for (int i = 0; i < p_->n; ++i) os << (i ? ", " : "") << y[i];
  os << ") is outside the chart of the " << kind_name() << " target";
  if (p_->kind == Kind::round_sphere_polar) os << " (pole collar " << p_->collar << ")";
  throw ChartError(os.str());
}

std::vector<Jet> TargetModel::metric(const std::vector<Jet>& y) const {
  const int n = p_->n;
  Jet z = zero_like(y[0]);
  std::vector<Jet> h(static_cast<std::size_t>(n) * n, z);
  switch (p_->kind) {
    case Kind::euclidean:
      for (int i = 0; i < n; ++i) h[i * n + i] = like(y[0], 1.0);
      break;
    case Kind::round_sphere_polar: return sphere_metric(y, n);
    case Kind::space_form: {
      Jet q = like(y[0], 1.0);
      for (int i = 0; i < n; ++i) add_mul(q, y[i], y[i] * (p_->c / 4.0));
      Jet iq = inv(q);
      Jet f = iq * iq;
      for (int i = 0; i < n; ++i) h[i * n + i] = f;
      break;
    }
    case Kind::user_metric:
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          h[i * n + j] = p_->h[i * n + j].eval(y);
          if (j != i) h[j * n + i] = h[i * n + j];
        }
      break;
  }
  return h;
}

int TargetModel::christoffel_loss() const { return p_->kind == Kind::user_metric ? 1 : 0; }

std::vector<Jet> TargetModel::christoffel(const std::vector<Jet>& y) const {
  const int n = p_->n;
  switch (p_->kind) {
    case Kind::euclidean:
      return std::vector<Jet>(static_cast<std::size_t>(pow_int(n, 3)), zero_like(y[0]));
    case Kind::round_sphere_polar: return sphere_polar_christoffel(y);
    case Kind::space_form: {
      Jet q = like(y[0], 1.0);
      for (int i = 0; i < n; ++i) add_mul(q, y[i], y[i] * (p_->c / 4.0));
      Jet iq = inv(q);
      std::vector<Jet> df;
      for (int i = 0; i < n; ++i) df.push_back(y[i] * iq * (-p_->c / 2.0));
      std::vector<Jet> G(static_cast<std::size_t>(pow_int(n, 3)), zero_like(y[0]));
      conformal_christoffel(G, n, 0, n, df);
      return G;
    }
    case Kind::user_metric: return christoffel_from_metric(metric(y), n);
  }
  return {};
}

int TargetModel::christoffel_order(const LocalRequest& req) const {
  const bool cc = constant_curvature().has_value();
  const int dR_need = cc ? -1 : std::max(req.dR, req.ddR + 1);
  const int R_need = std::max({req.R, cc ? -1 : dR_need + 1});
  return std::max({req.gamma, req.S + 1, cc ? 0 : R_need + 1});
}

TargetLocal TargetModel::local(const double* y0, const LocalRequest& req) const {
  check_chart(y0);
  const int n = p_->n;
  const auto cc = constant_curvature();
  TargetLocal L;
  L.n = n;
  L.dR_zero = cc.has_value();

  const int dR_need = cc ? -1 : std::max(req.dR, req.ddR + 1);
  const int R_need = std::max({req.R, cc ? -1 : dR_need + 1});
  const int gd = christoffel_order(req);
  int space = std::max(gd + christoffel_loss(), cc ? std::max(R_need, 0) : 0);
  if (p_->kind == Kind::user_metric) require_jet_order(gd, "requested target data");

  const JetSpace& sp = JetSpace::get(n, space);
  std::vector<Jet> y;
  for (int i = 0; i < n; ++i) y.push_back(Jet::variable(sp, i, y0[i]));

  L.h = metric(y);
  L.gamma = christoffel(y);
  truncate_all(L.gamma, gd);

  if (req.S >= 0) {
    std::vector<Jet> G = L.gamma;
    truncate_all(G, req.S + 1);
    L.S = s_tensor(G, n);
  }
  if (R_need >= 0) {
    if (cc) {
      std::vector<Jet> h = L.h;
      truncate_all(h, R_need);
      L.R = riemann_constant_curvature(h, *cc, n);
    } else {
      std::vector<Jet> G = L.gamma;
      truncate_all(G, R_need + 1);
      L.R = riemann_from_christoffel(G, n);
      if (dR_need >= 0) {
        std::vector<Jet> R = L.R, G1 = L.gamma;
        truncate_all(R, dR_need + 1);
        truncate_all(G1, dR_need);
        L.dR = covariant_derivative(R, 3, G1, n);
        if (req.ddR >= 0) {
          std::vector<Jet> dR = L.dR, G2 = L.gamma;
          truncate_all(dR, req.ddR + 1);
          truncate_all(G2, req.ddR);
          L.ddR = covariant_derivative(dR, 4, G2, n);
        }
        if (req.dR >= 0)
          truncate_all(L.dR, req.dR);
        else
          L.dR.clear();
      }
    }
    if (req.R >= 0)
      truncate_all(L.R, req.R);
    else
      L.R.clear();
  }
  return L;
}

}  // namespace polyharm
