#pragma once

// Pointwise geometric data of the models as plain component arrays (layouts
// as in tensor.hpp).

#include <vector>

#include "polyharm/grid.hpp"
#include "polyharm/models.hpp"

namespace polyharm {

// Christoffel symbols of the unit S^n in polar coordinates (ỹ, s), n = ỹ.size() + 1.
// Throws ChartError unless 0 < s < π.
std::vector<double> sphere_christoffels(double s, const std::vector<double>& ytilde);

std::vector<double> target_metric_at(const TargetModel& tgt, const std::vector<double>& y);
std::vector<double> christoffel_at(const TargetModel& tgt, const std::vector<double>& y);
std::vector<double> riemann_at(const TargetModel& tgt, const std::vector<double>& y);
// Identically zero for locally symmetric models; user metrics need jet order >= 2 (resp. 3).
std::vector<double> nabla_riemann_at(const TargetModel& tgt, const std::vector<double>& y);
std::vector<double> nabla2_riemann_at(const TargetModel& tgt, const std::vector<double>& y);

struct DerivedTensors {
  std::vector<double> S;  // n^4
  std::vector<double> C;  // n^4
  std::vector<double> E;  // n^5
};
DerivedTensors derived_tensors_at(const TargetModel& tgt, const std::vector<double>& y);

// c(h_{cd}δ^a_b − h_{bd}δ^a_c) for a metric h at a point.
std::vector<double> constant_curvature_riemann(const std::vector<double>& h, double c, int n);

}  // namespace polyharm
