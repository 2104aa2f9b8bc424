#include "polyharm/fields.hpp"

#include <cmath>

namespace polyharm {

namespace {

BundleSection to_section(const GridMap& phi, const NodeArray& a) {
  BundleSection s(phi.grid, a.width);
  s.values = a.values;
  return s;
}

FormSection to_form(const GridMap& phi, const NodeArray& a) {
  FormSection f(phi.grid, phi.n(), phi.m());
  f.values = a.values;
  return f;
}

Needs first_order() {
  Needs nd;
  nd.degree = 2;
  return nd;
}

}  // namespace

FormSection differential(const GridMap& phi, int workers) {
  Needs nd = first_order();
  return to_form(phi, evaluate_nodes(phi, nd, [](const auto& e, std::size_t) { return e.dphi(); }, workers));
}

NodeArray second_fundamental_form(const GridMap& phi, int workers) {
  return evaluate_nodes(phi, first_order(), [](const auto& e, std::size_t) { return e.sff(); }, workers);
}

BundleSection tension(const GridMap& phi, int workers) {
  return to_section(phi, evaluate_nodes(phi, first_order(), [](const auto& e, std::size_t) { return e.tension(); },
                                        workers));
}

FormSection covariant_derivative(const GridMap& phi, const BundleSection& sigma, int workers) {
  return to_form(phi, evaluate_nodes(
                          phi, first_order(),
                          [&](const auto& e, std::size_t k) { return e.cov(section_fields(e, sigma, k)); }, workers));
}

BundleSection rough_laplacian(const GridMap& phi, const BundleSection& sigma, int workers) {
  Needs nd;
  nd.degree = 2;
  return to_section(phi, evaluate_nodes(
                             phi, nd,
                             [&](const auto& e, std::size_t k) { return e.rough_lap(section_fields(e, sigma, k)); },
                             workers));
}

GridField weitzenbock_residual(const GridMap& phi, int workers) {
  Needs nd;
  nd.degree = 3;
  nd.R = true;
  nd.ricci = true;
  NodeArray a = evaluate_nodes(
      phi, nd,
      [](const auto& e, std::size_t) {
        auto r = e.weitzenbock_residual();
        auto v = e.h_dot_form(r, r);
        return std::vector<std::decay_t<decltype(v)>>{v};
      },
      workers);
  std::vector<double> v(a.nodes);
  for (std::size_t k = 0; k < a.nodes; ++k) v[k] = std::sqrt(std::max(a.at(k, 0), 0.0));
  return GridField(phi.grid, std::move(v));
}

}  // namespace polyharm
