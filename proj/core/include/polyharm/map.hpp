#pragma once

// Maps between the domain and target charts, and node-valued sections over them.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyharm/expr.hpp"
#include "polyharm/grid.hpp"
#include "polyharm/models.hpp"

namespace polyharm {

enum class EvalMode { grid_fd, analytic_jet };

const char* to_string(EvalMode m);
EvalMode eval_mode_from_string(const std::string& s);

// Closed-form map x ↦ (φ^1(x), ..., φ^n(x)) with expressions in x1..xm.
class MapExpr {
 public:
  MapExpr() = default;
  MapExpr(int m, const std::vector<std::string>& components, const std::map<std::string, double>& params = {});

  int dim_in() const { return m_; }
  int dim_out() const { return static_cast<int>(comp_.size()); }
  const std::vector<std::string>& sources() const { return src_; }
  const std::map<std::string, double>& params() const { return params_; }

  template <class T>
  std::vector<T> eval(const std::vector<T>& x) const {
    std::vector<T> r;
    r.reserve(comp_.size());
    for (const auto& e : comp_) r.push_back(e.eval(x));
    return r;
  }
  std::vector<double> eval_at(const double* x) const;

 private:
  int m_ = 0;
  std::vector<std::string> src_;
  std::map<std::string, double> params_;
  std::vector<Expr> comp_;
};

// A discretized map on a periodic grid.  φ^α is stored per node; a target
// coordinate may wind (an angle) with a constant jump across each period.
struct GridMap {
  DomainModel dom;
  TargetModel tgt;
  std::shared_ptr<const Grid> grid;
  std::vector<GridField> phi;  // n fields
  EvalMode mode = EvalMode::grid_fd;
  std::optional<MapExpr> expr;

  int m() const { return grid->dim(); }
  int n() const { return static_cast<int>(phi.size()); }
  std::vector<double> value(std::size_t node) const;

  // Samples `expr` on the grid; jumps are detected from the expression.
  static GridMap sample(const DomainModel& dom, const TargetModel& tgt, std::shared_ptr<const Grid> grid,
                        const MapExpr& expr, EvalMode mode);
  // Grid map from node-major values (n per node) and per-component jumps.
  static GridMap from_values(const DomainModel& dom, const TargetModel& tgt, std::shared_ptr<const Grid> grid,
                             const std::vector<double>& values, const std::vector<std::vector<double>>& jumps = {});

  // Throws ChartError at the first node outside the target chart.
  void check_chart() const;
  // Same map with every stored value displaced by t·V (chart-line variation).
  GridMap displaced(const std::vector<double>& V, double t) const;
};

// n-component fibers per node, node-major.
struct BundleSection {
  std::shared_ptr<const Grid> grid;
  int n = 0;
  std::vector<double> values;
  // Closed form in x1..xm, used for analytic_jet evaluation.
  std::optional<MapExpr> expr;

  BundleSection() = default;
  BundleSection(std::shared_ptr<const Grid> g, int n_) : grid(std::move(g)), n(n_), values(grid->size() * n_, 0.0) {}
  double at(std::size_t node, int a) const { return values[node * n + a]; }
  double& at(std::size_t node, int a) { return values[node * n + a]; }
  GridField component(int a) const;
  double max_abs() const;

  static BundleSection sample(std::shared_ptr<const Grid> g, const MapExpr& e);
};

// Section-valued 1-forms: n*m entries per node at a*m + i.
struct FormSection {
  std::shared_ptr<const Grid> grid;
  int n = 0;
  int m = 0;
  std::vector<double> values;

  FormSection() = default;
  FormSection(std::shared_ptr<const Grid> g, int n_, int m_)
      : grid(std::move(g)), n(n_), m(m_), values(grid->size() * n_ * m_, 0.0) {}
  double at(std::size_t node, int a, int i) const { return values[(node * n + a) * m + i]; }
  double& at(std::size_t node, int a, int i) { return values[(node * n + a) * m + i]; }
  double max_abs() const;
};

double max_abs_difference(const BundleSection& a, const BundleSection& b);

}  // namespace polyharm
