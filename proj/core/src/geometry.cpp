#include "polyharm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "polyharm/errors.hpp"
#include "polyharm/tensor.hpp"

namespace polyharm {

namespace {

void check_dim(const TargetModel& tgt, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != tgt.dim())
    throw ConfigError("point has " + std::to_string(y.size()) + " coordinates, target dimension is " +
                      std::to_string(tgt.dim()));
}

TargetLocal local0(const TargetModel& tgt, const std::vector<double>& y, LocalRequest q) {
  check_dim(tgt, y);
  return tgt.local(y.data(), q);
}

}  // namespace

std::vector<double> sphere_christoffels(double s, const std::vector<double>& ytilde) {
  if (!(s > 0.0 && s < std::numbers::pi)) {
    std::ostringstream os;
    os.precision(17);
    os << "latitude s = " << s << " is outside the polar chart (0, pi)";
    throw ChartError(os.str());
  }
  const int n = static_cast<int>(ytilde.size()) + 1;
  const JetSpace& sp = JetSpace::get(n, 0);
  std::vector<Jet> y;
  for (int i = 0; i < n - 1; ++i) y.push_back(Jet::variable(sp, i, ytilde[i]));
  y.push_back(Jet::variable(sp, n - 1, s));
  return values_of(sphere_polar_christoffel(y));
}

std::vector<double> target_metric_at(const TargetModel& tgt, const std::vector<double>& y) {
  LocalRequest q;
  return values_of(local0(tgt, y, q).h);
}

std::vector<double> christoffel_at(const TargetModel& tgt, const std::vector<double>& y) {
  LocalRequest q;
  return values_of(local0(tgt, y, q).gamma);
}

std::vector<double> riemann_at(const TargetModel& tgt, const std::vector<double>& y) {
  LocalRequest q;
  q.R = 0;
  return values_of(local0(tgt, y, q).R);
}

std::vector<double> nabla_riemann_at(const TargetModel& tgt, const std::vector<double>& y) {
  check_dim(tgt, y);
  if (tgt.locally_symmetric()) return std::vector<double>(static_cast<std::size_t>(pow_int(tgt.dim(), 5)), 0.0);
  tgt.require_jet_order(2, "nabla_riemann_at");
  LocalRequest q;
  q.dR = 0;
  return values_of(local0(tgt, y, q).dR);
}

std::vector<double> nabla2_riemann_at(const TargetModel& tgt, const std::vector<double>& y) {
  check_dim(tgt, y);
  if (tgt.locally_symmetric()) return std::vector<double>(static_cast<std::size_t>(pow_int(tgt.dim(), 6)), 0.0);
  tgt.require_jet_order(3, "nabla2_riemann_at");
  LocalRequest q;
  q.ddR = 0;
  return values_of(local0(tgt, y, q).ddR);
}

DerivedTensors derived_tensors_at(const TargetModel& tgt, const std::vector<double>& y) {
  LocalRequest q;
  q.gamma = 0;
  q.S = 0;
  q.R = 0;
  TargetLocal L = local0(tgt, y, q);
  const int n = tgt.dim();
  std::vector<Jet> G = L.gamma;
  truncate_all(G, 0);
  DerivedTensors d;
  d.S = values_of(L.S);
  d.C = values_of(c_tensor(G, L.S, n));
  d.E = values_of(e_tensor(L.R, G, n));
  return d;
}

std::vector<double> constant_curvature_riemann(const std::vector<double>& h, double c, int n) {
  std::vector<double> R(static_cast<std::size_t>(pow_int(n, 4)), 0.0);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc) {
          double& r = R[((a * n + d) * n + b) * n + cc];
          if (a == b) r += c * h[cc * n + d];
          if (a == cc) r -= c * h[b * n + d];
        }
  return R;
}

}  // namespace polyharm
