#include "polyharm/map.hpp"

#include <algorithm>
#include <cmath>

#include "polyharm/errors.hpp"

namespace polyharm {

const char* to_string(EvalMode m) { return m == EvalMode::grid_fd ? "grid_fd" : "analytic_jet"; }

EvalMode eval_mode_from_string(const std::string& s) {
  if (s == "grid_fd") return EvalMode::grid_fd;
  if (s == "analytic_jet") return EvalMode::analytic_jet;
  throw ConfigError("unknown eval_mode '" + s + "' (expected grid_fd or analytic_jet)");
}

MapExpr::MapExpr(int m, const std::vector<std::string>& components, const std::map<std::string, double>& params)
    : m_(m), src_(components), params_(params) {
  if (m < 1) throw ConfigError("map needs a domain dimension of at least 1");
  if (components.empty()) throw ConfigError("map needs at least one component");
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
  for (const auto& c : components) comp_.push_back(Expr::parse(c, names, params));
}

std::vector<double> MapExpr::eval_at(const double* x) const {
  std::vector<double> xs(x, x + m_);
  return eval(xs);
}

std::vector<double> GridMap::value(std::size_t node) const {
  std::vector<double> r;
  for (const auto& f : phi) r.push_back(f[node]);
  return r;
}

namespace {

// A component may wind across a period only where the target metric is
// invariant under the shift: any Euclidean coordinate, or the S^1 angle of the
// polar sphere chart when the jump is a multiple of 2π.
void check_jumps(const TargetModel& tgt, const std::vector<std::vector<double>>& jumps) {
  for (std::size_t a = 0; a < jumps.size(); ++a)
    for (std::size_t i = 0; i < jumps[a].size(); ++i) {
      const double j = jumps[a][i];
      if (j == 0.0 || tgt.kind() == TargetModel::Kind::euclidean) continue;
      const bool angle = tgt.kind() == TargetModel::Kind::round_sphere_polar && tgt.dim() == 2 && a == 0;
      const double turns = j / (2 * M_PI);
      if (angle && std::abs(turns - std::round(turns)) < 1e-9) continue;
      throw ConfigError("map component " + std::to_string(a + 1) + " winds by " + std::to_string(j) +
                        " along axis " + std::to_string(i + 1) + ", which the target chart does not allow");
    }
}

}  // namespace

GridMap GridMap::sample(const DomainModel& dom, const TargetModel& tgt, std::shared_ptr<const Grid> grid,
                        const MapExpr& expr, EvalMode mode) {
  const int m = grid->dim(), n = expr.dim_out();
  if (m != dom.dim() || expr.dim_in() != m) throw ConfigError("map, grid and domain dimensions disagree");
  if (n != tgt.dim()) throw ConfigError("map has " + std::to_string(n) + " components, target dimension is " +
                                        std::to_string(tgt.dim()));
  if (mode == EvalMode::grid_fd && !dom.gridable())
    throw CapabilityError("domain " + dom.kind_name() + " supports analytic_jet evaluation only");
  std::vector<std::vector<double>> vals(n, std::vector<double>(grid->size()));
  std::vector<double> x(m);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    grid->coords(k, x.data());
    auto y = expr.eval(x);
    for (int a = 0; a < n; ++a) vals[a][k] = y[a];
  }
  // jump of each component across one period, checked at two base points
  std::vector<std::vector<double>> jumps(n, std::vector<double>(m, 0.0));
  if (dom.gridable()) {
    for (int i = 0; i < m; ++i) {
      for (int probe = 0; probe < 2; ++probe) {
        std::vector<double> x0(m), x1(m);
        for (int j = 0; j < m; ++j) x0[j] = grid->lo()[j] + (probe ? 0.37 * grid->period()[j] : 0.0);
        x1 = x0;
        x1[i] += grid->period()[i];
        auto y0 = expr.eval(x0), y1 = expr.eval(x1);
        for (int a = 0; a < n; ++a) {
          double jmp = y1[a] - y0[a];
          if (probe == 0) {
            jumps[a][i] = std::abs(jmp) < 1e-12 ? 0.0 : jmp;
          } else if (std::abs(jmp - jumps[a][i]) > 1e-9 * (1.0 + std::abs(jmp))) {
            throw ConfigError("map component " + std::to_string(a + 1) + " is not periodic along axis " +
                              std::to_string(i + 1));
          }
        }
      }
    }
  }
  check_jumps(tgt, jumps);
  GridMap g;
  g.dom = dom;
  g.tgt = tgt;
  g.grid = grid;
  g.mode = mode;
  g.expr = expr;
  for (int a = 0; a < n; ++a) g.phi.emplace_back(grid, std::move(vals[a]), jumps[a]);
  g.check_chart();
  return g;
}

GridMap GridMap::from_values(const DomainModel& dom, const TargetModel& tgt, std::shared_ptr<const Grid> grid,
                             const std::vector<double>& values, const std::vector<std::vector<double>>& jumps) {
  const int n = tgt.dim();
  if (values.size() != grid->size() * n) throw ConfigError("grid map value count does not match grid and target");
  if (!dom.gridable()) throw CapabilityError("domain " + dom.kind_name() + " cannot carry a grid map");
  if (!jumps.empty()) check_jumps(tgt, jumps);
  GridMap g;
  g.dom = dom;
  g.tgt = tgt;
  g.grid = grid;
  g.mode = EvalMode::grid_fd;
  for (int a = 0; a < n; ++a) {
    std::vector<double> v(grid->size());
    for (std::size_t k = 0; k < grid->size(); ++k) v[k] = values[k * n + a];
    g.phi.emplace_back(grid, std::move(v), jumps.empty() ? std::vector<double>{} : jumps[a]);
  }
  g.check_chart();
  return g;
}

void GridMap::check_chart() const {
  std::vector<double> y(n());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    for (int a = 0; a < n(); ++a) y[a] = phi[a][k];
    if (!tgt.in_chart(y.data())) {
      try {
        tgt.check_chart(y.data());
      } catch (const ChartError& e) {
        throw ChartError(std::string(e.what()) + " at grid node " + std::to_string(k));
      }
    }
  }
}

GridMap GridMap::displaced(const std::vector<double>& V, double t) const {
  if (V.size() != grid->size() * n()) throw ConfigError("variation field has the wrong size");
  GridMap g = *this;
  g.expr.reset();
  g.mode = EvalMode::grid_fd;
  for (int a = 0; a < n(); ++a)
    for (std::size_t k = 0; k < grid->size(); ++k) g.phi[a][k] += t * V[k * n() + a];
  g.check_chart();
  return g;
}

GridField BundleSection::component(int a) const {
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values[k * n + a];
  return GridField(grid, std::move(v));
}

BundleSection BundleSection::sample(std::shared_ptr<const Grid> g, const MapExpr& e) {
  if (e.dim_in() != g->dim()) throw ConfigError("section expression and grid dimensions disagree");
  BundleSection s(g, e.dim_out());
  std::vector<double> x(g->dim());
  for (std::size_t k = 0; k < g->size(); ++k) {
    g->coords(k, x.data());
    auto v = e.eval(x);
    for (int a = 0; a < s.n; ++a) s.at(k, a) = v[a];
  }
  s.expr = e;
  return s;
}

double BundleSection::max_abs() const {
  double r = 0;
  for (double x : values) r = std::max(r, std::abs(x));
  return r;
}

double FormSection::max_abs() const {
  double r = 0;
  for (double x : values) r = std::max(r, std::abs(x));
  return r;
}

double max_abs_difference(const BundleSection& a, const BundleSection& b) {
  if (a.values.size() != b.values.size()) throw ContractError("sections of different shape");
  double r = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) r = std::max(r, std::abs(a.values[i] - b.values[i]));
  return r;
}

}  // namespace polyharm
