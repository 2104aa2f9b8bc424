#include "polyharm/grid.hpp"

#include <cmath>

#include "polyharm/errors.hpp"

namespace polyharm {

Grid::Grid(std::vector<int> shape, std::vector<double> period, std::vector<double> lo, int stencil_order)
    : shape_(std::move(shape)), period_(std::move(period)), lo_(std::move(lo)), order_(stencil_order) {
  const int m = dim();
  if (m == 0) throw ConfigError("grid needs at least one axis");
  if (static_cast<int>(period_.size()) != m) throw ConfigError("grid period count does not match shape");
  if (lo_.empty()) lo_.assign(m, 0.0);
  if (static_cast<int>(lo_.size()) != m) throw ConfigError("grid origin count does not match shape");
  if (order_ != 2 && order_ != 4 && order_ != 6 && order_ != 8)
    throw ConfigError("stencil order must be 2, 4, 6 or 8");
  stride_.assign(m, 1);
  size_ = 1;
  for (int i = m - 1; i >= 0; --i) {
    if (shape_[i] < order_ + 1)
      throw ConfigError("grid axis " + std::to_string(i) + " has " + std::to_string(shape_[i]) +
                        " nodes, stencil of order " + std::to_string(order_) + " needs at least " +
                        std::to_string(order_ + 1));
    if (!(period_[i] > 0)) throw ConfigError("grid period must be positive");
    stride_[i] = size_;
    size_ *= static_cast<std::size_t>(shape_[i]);
  }
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= spacing(i);
  return v;
}

void Grid::index(std::size_t node, int* idx) const {
  for (int i = 0; i < dim(); ++i) {
    idx[i] = static_cast<int>(node / stride_[i]);
    node -= static_cast<std::size_t>(idx[i]) * stride_[i];
  }
}

std::size_t Grid::node(const int* idx) const {
  std::size_t n = 0;
  for (int i = 0; i < dim(); ++i) n += static_cast<std::size_t>(idx[i]) * stride_[i];
  return n;
}

void Grid::coords(std::size_t node, double* x) const {
  std::vector<int> idx(dim());
  index(node, idx.data());
  for (int i = 0; i < dim(); ++i) x[i] = lo_[i] + idx[i] * spacing(i);
}

std::shared_ptr<const Grid> Grid::refined(int factor) const {
  std::vector<int> s = shape_;
  for (auto& n : s) n *= factor;
  return std::make_shared<Grid>(s, period_, lo_, order_);
}

const std::vector<double>& first_stencil(int order) {
  static const std::vector<double> s2{-0.5, 0.0, 0.5};
  static const std::vector<double> s4{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  static const std::vector<double> s6{-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static const std::vector<double> s8{1.0 / 280, -4.0 / 105, 1.0 / 5,  -4.0 / 5,  0.0,
                                      4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    case 8: return s8;
  }
  throw ConfigError("unsupported stencil order " + std::to_string(order));
}

const std::vector<double>& second_stencil(int order) {
  static const std::vector<double> s2{1.0, -2.0, 1.0};
  static const std::vector<double> s4{-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  static const std::vector<double> s6{1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  static const std::vector<double> s8{-1.0 / 560, 8.0 / 315, -1.0 / 5,  8.0 / 5,   -205.0 / 72,
                                      8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
    case 8: return s8;
  }
  throw ConfigError("unsupported stencil order " + std::to_string(order));
}

GridField::GridField(std::shared_ptr<const Grid> g, double c) : g_(std::move(g)) { v_.assign(g_->size(), c); }

GridField::GridField(std::shared_ptr<const Grid> g, std::vector<double> v, std::vector<double> jump)
    : g_(std::move(g)), v_(std::move(v)), jump_(std::move(jump)) {
  if (v_.size() != g_->size()) throw ConfigError("field size does not match grid");
  bool any = false;
  for (double j : jump_) any = any || j != 0.0;
  if (!any) jump_.clear();
}

bool GridField::is_zero() const {
  for (double x : v_)
    if (x != 0.0) return false;
  return jump_.empty();
}

double GridField::max_abs() const {
  double r = 0.0;
  for (double x : v_) r = std::max(r, std::abs(x));
  return r;
}

GridField& GridField::operator+=(const GridField& b) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += b.v_[i];
  if (!b.jump_.empty()) {
    jump_.resize(b.jump_.size(), 0.0);
    for (std::size_t i = 0; i < jump_.size(); ++i) jump_[i] += b.jump_[i];
  }
  return *this;
}

GridField& GridField::operator-=(const GridField& b) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= b.v_[i];
  if (!b.jump_.empty()) {
    jump_.resize(b.jump_.size(), 0.0);
    for (std::size_t i = 0; i < jump_.size(); ++i) jump_[i] -= b.jump_[i];
  }
  return *this;
}

GridField& GridField::operator*=(const GridField& b) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] *= b.v_[i];
  jump_.clear();
  return *this;
}

GridField& GridField::operator+=(double b) {
  for (double& x : v_) x += b;
  return *this;
}

GridField& GridField::operator*=(double b) {
  for (double& x : v_) x *= b;
  for (double& j : jump_) j *= b;
  return *this;
}

GridField operator-(const GridField& a) { return a * -1.0; }
GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(GridField a, const GridField& b) { return a *= b; }
GridField operator/(const GridField& a, const GridField& b) { return a * inv(b); }
GridField operator+(GridField a, double b) { return a += b; }
GridField operator+(double a, GridField b) { return b += a; }
GridField operator-(GridField a, double b) { return a += -b; }
GridField operator-(double a, const GridField& b) { return (-b) + a; }
GridField operator*(GridField a, double b) { return a *= b; }
GridField operator*(double a, GridField b) { return b *= a; }
GridField operator/(GridField a, double b) { return a *= 1.0 / b; }

GridField inv(const GridField& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (a[i] == 0.0) throw ContractError("grid division by zero");
    v[i] = 1.0 / a[i];
  }
  return GridField(a.grid(), std::move(v));
}

void add_mul(GridField& out, const GridField& a, const GridField& b) {
  auto& o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += a[i] * b[i];
}

namespace {

// Apply a centered stencil along `axis`, scaled by `scale`.  A winding field
// is split into its periodic part and the slope jump/period; `slope_weight`
// is what the stencil makes of the linear part (1 for ∂, 0 for ∂²), so
// sampled linear maps differentiate without roundoff.
GridField apply(const GridField& a, int axis, const std::vector<double>& w, double scale, double slope_weight) {
  const Grid& g = *a.grid();
  const int n = g.shape()[axis];
  const int r = static_cast<int>(w.size() / 2);
  const std::size_t st = g.stride(axis);
  const double slope = a.jump(axis) / g.period()[axis];
  const double lo = g.lo()[axis], h = g.spacing(axis);
  auto periodic = [&](std::size_t node, int i) {
    const double v = a[node];
    return slope == 0.0 ? v : v - slope * (lo + i * h);
  };
  std::vector<double> out(g.size(), 0.0);
  std::vector<int> idx(g.dim());
  for (std::size_t node = 0; node < g.size(); ++node) {
    g.index(node, idx.data());
    const int i0 = idx[axis];
    const std::size_t base = node - static_cast<std::size_t>(i0) * st;
    // weights sum to zero; differencing against the center keeps constants exact
    const double c = periodic(node, i0);
    double s = 0.0;
    for (int k = -r; k <= r; ++k) {
      const double wk = w[k + r];
      if (wk == 0.0 || k == 0) continue;
      const int i = ((i0 + k) % n + n) % n;
      s += wk * (periodic(base + static_cast<std::size_t>(i) * st, i) - c);
    }
    out[node] = s * scale + slope * slope_weight;
  }
  return GridField(a.grid(), std::move(out));
}

}  // namespace

GridField partial(const GridField& a, int axis) {
  const Grid& g = *a.grid();
  return apply(a, axis, first_stencil(g.stencil_order()), 1.0 / g.spacing(axis), 1.0);
}

GridField partial2(const GridField& a, int i, int j) {
  const Grid& g = *a.grid();
  if (i == j) {
    const double h = g.spacing(i);
    return apply(a, i, second_stencil(g.stencil_order()), 1.0 / (h * h), 0.0);
  }
  return partial(partial(a, i), j);
}

}  // namespace polyharm
