#pragma once

// Periodic tensor-product grids and node-valued scalar fields with centered
// finite-difference stencils.

#include <cstddef>
#include <memory>
#include <vector>

namespace polyharm {

class Grid {
 public:
  // lo[i] is the coordinate of node 0 on axis i; period[i] the axis length.
  Grid(std::vector<int> shape, std::vector<double> period, std::vector<double> lo, int stencil_order);

  int dim() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return size_; }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& period() const { return period_; }
  const std::vector<double>& lo() const { return lo_; }
  int stencil_order() const { return order_; }
  double spacing(int axis) const { return period_[axis] / shape_[axis]; }
  double cell_volume() const;

  std::size_t stride(int axis) const { return stride_[axis]; }
  void index(std::size_t node, int* idx) const;
  std::size_t node(const int* idx) const;
  void coords(std::size_t node, double* x) const;

  // Same periods and origin, `factor` times as many nodes per axis.
  std::shared_ptr<const Grid> refined(int factor) const;

 private:
  std::vector<int> shape_;
  std::vector<double> period_;
  std::vector<double> lo_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
  int order_;
};

// Centered first/second derivative weights, offsets -p/2..p/2.
const std::vector<double>& first_stencil(int order);
const std::vector<double>& second_stencil(int order);

// Scalar field on a grid.  `jump[i]` is the increment of the field across
// one period of axis i (nonzero for winding angle coordinates); derivatives
// account for it, products drop it.
class GridField {
 public:
  GridField() = default;
  GridField(std::shared_ptr<const Grid> g, double c);
  GridField(std::shared_ptr<const Grid> g, std::vector<double> v, std::vector<double> jump = {});

  const std::shared_ptr<const Grid>& grid() const { return g_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& jump() const { return jump_; }
  double jump(int axis) const { return jump_.empty() ? 0.0 : jump_[axis]; }
  bool is_zero() const;
  double max_abs() const;

  GridField& operator+=(const GridField& b);
  GridField& operator-=(const GridField& b);
  GridField& operator*=(const GridField& b);
  GridField& operator+=(double b);
  GridField& operator*=(double b);

 private:
  std::shared_ptr<const Grid> g_;
  std::vector<double> v_;
  std::vector<double> jump_;
};

GridField operator-(const GridField& a);
GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(GridField a, const GridField& b);
GridField operator/(const GridField& a, const GridField& b);
GridField operator+(GridField a, double b);
GridField operator+(double a, GridField b);
GridField operator-(GridField a, double b);
GridField operator-(double a, const GridField& b);
GridField operator*(GridField a, double b);
GridField operator*(double a, GridField b);
GridField operator/(GridField a, double b);

GridField partial(const GridField& a, int axis);
GridField partial2(const GridField& a, int i, int j);
void add_mul(GridField& out, const GridField& a, const GridField& b);
GridField inv(const GridField& a);

inline GridField like(const GridField& ref, double c) { return GridField(ref.grid(), c); }
inline bool is_zero(const GridField& a) { return a.is_zero(); }

}  // namespace polyharm
