#include "suite.hpp"

#include <numbers>

namespace polyharm::testing {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

DomainModel torus(int m) { return DomainModel::flat_torus(std::vector<double>(m, kTwoPi)); }

std::string fmt_coef(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", c);
  return buf;
}

}  // namespace

std::shared_ptr<const Grid> torus_grid(const std::vector<int>& shape, int stencil_order) {
  return std::make_shared<const Grid>(shape, std::vector<double>(shape.size(), kTwoPi),
                                      std::vector<double>(shape.size(), 0.0), stencil_order);
}

GridMap make_map(const DomainModel& dom, const TargetModel& tgt, const std::vector<int>& shape, int stencil_order,
                 const std::vector<std::string>& components, EvalMode mode,
                 const std::map<std::string, double>& params) {
  MapExpr e(static_cast<int>(shape.size()), components, params);
  return GridMap::sample(dom, tgt, torus_grid(shape, stencil_order), e, mode);
}

GridMap latitude_circle(double alpha, int nodes, int stencil_order, EvalMode mode) {
  auto dom = DomainModel::user_metric(1, {"sin(a)^2"}, {kTwoPi}, {{"a", alpha}});
  return make_map(dom, TargetModel::round_sphere_polar(2), {nodes}, stencil_order, {"x1", "a"}, mode, {{"a", alpha}});
}

std::vector<NamedMap> specialization_suite(int nodes, EvalMode mode) {
  const int p = 2;
  std::vector<NamedMap> s;
  s.push_back({"flat-to-flat", make_map(torus(2), TargetModel::euclidean(3), {nodes, nodes}, p,
                                        {"x1+0.3*sin(x2)", "x2+0.2*cos(x1+x2)", "0.5*sin(x1)*cos(x2)"}, mode)});
  s.push_back({"flat-to-sphere", make_map(torus(2), TargetModel::space_form(2, 1.0), {nodes, nodes}, p,
                                          {"0.4*sin(x1)+0.2*cos(x2)", "0.3*cos(x1-x2)"}, mode)});
  s.push_back({"circle-to-sphere", make_map(torus(1), TargetModel::round_sphere_polar(2), {nodes}, p,
                                            {"x1+0.2*sin(2*x1)", "1.2+0.3*sin(x1)"}, mode)});
  s.push_back({"torus-to-sphere", make_map(torus(2), TargetModel::round_sphere_polar(3), {nodes, nodes}, p,
                                           {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, mode)});
  s.push_back({"latitude-inclusion", latitude_circle(std::numbers::pi / 3, nodes, p, mode)});
  return s;
}

std::vector<NamedMap> harmonic_suite(int nodes, EvalMode mode) {
  const int p = 2;
  std::vector<NamedMap> s;
  s.push_back({"constant", make_map(torus(2), TargetModel::round_sphere_polar(3), {nodes, nodes}, p,
                                    {"0.3", "-0.2", "1.1"}, mode)});
  s.push_back({"identity", make_map(torus(2), TargetModel::euclidean(2), {nodes, nodes}, p, {"x1", "x2"}, mode)});
  s.push_back({"geodesic-line", make_map(torus(1), TargetModel::euclidean(3), {nodes}, p,
                                         {"x1", "2*x1", "0.5"}, mode)});
  s.push_back({"geodesic-double-equator", make_map(torus(1), TargetModel::round_sphere_polar(2), {nodes}, p,
                                                   {"2*x1", "pi/2"}, mode)});
  s.push_back({"equator-inclusion", make_map(torus(1), TargetModel::round_sphere_polar(2), {nodes}, p,
                                             {"x1", "pi/2"}, mode)});
  return s;
}

std::vector<VariationCase> variation_suite(int nodes) {
  const int p = 2;
  std::vector<VariationCase> s;
  auto add = [&](std::string name, GridMap phi, const std::vector<std::string>& v) {
    MapExpr V(phi.m(), v);
    auto sec = BundleSection::sample(phi.grid, V);
    s.push_back({std::move(name), std::move(phi), std::move(sec)});
  };
  add("torus-to-sphere",
      make_map(torus(2), TargetModel::round_sphere_polar(3), {nodes, nodes}, p,
               {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, EvalMode::analytic_jet),
      {"0.3*cos(x1+2*x2)", "0.2*sin(x2)", "0.1*cos(x1)-0.2*sin(2*x2)"});
  add("circle-to-sphere",
      make_map(torus(1), TargetModel::round_sphere_polar(2), {4 * nodes}, p, {"x1+0.2*sin(2*x1)", "1.2+0.3*sin(x1)"},
               EvalMode::analytic_jet),
      {"0.2*cos(3*x1)", "0.1*sin(x1)+0.05*cos(2*x1)"});
  add("torus-to-hyperbolic",
      make_map(torus(2), TargetModel::space_form(3, -0.7), {nodes, nodes}, p,
               {"0.3*sin(x1)", "0.2*cos(x2)+0.1*sin(x1)", "0.25*sin(x1+x2)"}, EvalMode::analytic_jet),
      {"0.1*cos(x2)", "0.2*sin(x1-x2)", "0.15*cos(2*x1)"});
  return s;
}

TargetModel random_user_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-0.08, 0.08), freq(0.5, 1.5), phase(0.0, kTwoPi);
  std::vector<std::string> h;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::string e = a == b ? "1" : "0";
      for (int c = 0; c < n; ++c)
        e += "+" + fmt_coef(amp(rng)) + "*sin(" + fmt_coef(freq(rng)) + "*y" + std::to_string(c + 1) + "+" +
             fmt_coef(phase(rng)) + ")";
      h.push_back(e);
    }
  return TargetModel::user_metric(n, h);
}

}  // namespace polyharm::testing
