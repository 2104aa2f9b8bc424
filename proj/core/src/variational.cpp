#include "polyharm/variational.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "polyharm/evaluate.hpp"
#include "polyharm/parallel.hpp"
#include "polyharm/polytension.hpp"

namespace polyharm {

TensionOrder TensionOrder::order(int k) {
  if (k < 1) throw ConfigError("order k must be at least 1, got " + std::to_string(k));
  return {k, false};
}

TensionOrder TensionOrder::parse(const std::string& s) {
  if (s == "es4" || s == "ES4" || s == "ES-4") return es4_order();
  try {
    std::size_t pos = 0;
    int k = std::stoi(s, &pos);
    if (pos == s.size()) return order(k);
  } catch (const std::logic_error&) {
  }
  throw ConfigError("unknown order '" + s + "' (expected a positive integer or es4)");
}

std::string TensionOrder::name() const { return es4 ? "es4" : std::to_string(k); }

namespace {

// √det g · cell volume at every node.
std::vector<double> volume_weights(const GridMap& phi) {
  if (!phi.dom.gridable()) throw CapabilityError("domain " + phi.dom.kind_name() + " has no grid quadrature");
  const auto& g = *phi.grid;
  const int m = g.dim();
  std::vector<double> w(g.size());
  std::vector<double> x(m);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.coords(k, x.data());
    auto gm = phi.dom.metric_at(x.data());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> G(gm.data(), m, m);
    w[k] = std::sqrt(G.determinant()) * g.cell_volume();
  }
  return w;
}


void check_energy_resolution(const GridMap& phi, const TensionOrder& o) { check_resolution(phi, o.k); }

double quadrature(const std::vector<double>& w, const NodeArray& a, int col) {
  double s = 0;
  for (std::size_t k = 0; k < a.nodes; ++k) s += w[k] * a.at(k, col);
  return s;
}

template <class E>
auto density(const E& e, const TensionOrder& o) {
  return o.es4 ? e.energy_density_es4() : e.energy_density(o.k);
}

}  // namespace

Needs energy_needs(const TensionOrder& o, const TargetModel& tgt) {
  if (o.es4) {
    Needs nd;
    nd.degree = 4;
    nd.R = true;
    return nd;
  }
  Needs nd = tension_needs(o.k, false, tgt);
  nd.degree = std::max(2, o.k);
  return nd;
}

EnergyReport energy(const GridMap& phi, const TensionOrder& order, int workers) {
  check_energy_resolution(phi, order);
  auto w = volume_weights(phi);
  NodeArray a = evaluate_nodes(
      phi, energy_needs(order, phi.tgt),
      [&](const auto& e, std::size_t) {
        using Vec = std::decay_t<decltype(e.zero_sec())>;
        return Vec{density(e, order)};
      },
      workers);
  EnergyReport r;
  r.order = order;
  r.value = quadrature(w, a, 0);
  r.grid_shape = phi.grid->shape();
  return r;
}

EnergyReport energy_k(const GridMap& phi, int k, int workers) {
  return energy(phi, TensionOrder::order(k), workers);
}

EnergyReport energy_es4(const GridMap& phi, int workers) { return energy(phi, TensionOrder::es4_order(), workers); }

BundleSection tension_of(const GridMap& phi, const TensionOrder& order, int workers) {
  return order.es4 ? tau4_es(phi, workers) : tau_k(phi, order.k, workers);
}

double integrate_pairing(const GridMap& phi, const BundleSection& s, const BundleSection& r, int workers) {
  auto w = volume_weights(phi);
  Needs nd;
  // h along φ only needs the map values; a plain grid engine suffices even for closed forms
  GridMap gm = phi;
  gm.mode = EvalMode::grid_fd;
  NodeArray a = evaluate_nodes(
      gm, nd,
      [&](const auto& e, std::size_t node) {
        auto x = section_fields(e, s, node);
        auto y = section_fields(e, r, node);
        using Vec = std::decay_t<decltype(x)>;
        return Vec{e.h_dot(x, y)};
      },
      workers);
  return quadrature(w, a, 0);
}

GridMap vary(const GridMap& phi, const BundleSection& V, double t) {
  if (V.n != phi.n()) throw ConfigError("variation field has " + std::to_string(V.n) + " components, map has " +
                                        std::to_string(phi.n()));
  if (phi.mode == EvalMode::analytic_jet) {
    if (!phi.expr || !V.expr) throw CapabilityError("analytic_jet variations need closed forms for the map and V");
    auto params = phi.expr->params();
    for (const auto& [k, v] : V.expr->params()) {
      auto it = params.find(k);
      if (it != params.end() && it->second != v)
        throw ConfigError("parameter '" + k + "' has different values in the map and the variation field");
      params[k] = v;
    }
    char tb[64];
    std::snprintf(tb, sizeof tb, "%.17g", t);
    std::vector<std::string> comps;
    for (int a = 0; a < phi.n(); ++a)
      comps.push_back("(" + phi.expr->sources()[a] + ")+(" + tb + ")*(" + V.expr->sources()[a] + ")");
    return GridMap::sample(phi.dom, phi.tgt, phi.grid, MapExpr(phi.m(), comps, params), phi.mode);
  }
  return phi.displaced(V.values, t);
}

VariationReport first_variation_check(const GridMap& phi, const BundleSection& V, const TensionOrder& order,
                                      double t, int workers) {
  VariationReport r;
  r.order = order;
  r.t = t;
  const double ep = energy(vary(phi, V, t), order, workers).value;
  const double em = energy(vary(phi, V, -t), order, workers).value;
  r.lhs = (ep - em) / (2 * t);
  r.rhs = kVariationSign * integrate_pairing(phi, tension_of(phi, order, workers), V, workers);
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.discrepancy = scale > 0 ? std::abs(r.lhs - r.rhs) / scale : 0.0;
  return r;
}

int calibrate_variation_sign(const GridMap& phi, const BundleSection& V, int workers) {
  const TensionOrder o = TensionOrder::order(1);
  const double t = 1e-5;
  const double d = (energy(vary(phi, V, t), o, workers).value - energy(vary(phi, V, -t), o, workers).value) / (2 * t);
  const double p = integrate_pairing(phi, tension_of(phi, o, workers), V, workers);
  if (d == 0.0 || p == 0.0) throw DegenerateError("sign calibration needs a variation that changes E_1");
  return (d > 0) == (p > 0) ? 1 : -1;
}

// ---------------------------------------------------------------- latitude

namespace {

Engine<Jet> latitude_engine(int m, const TensionOrder& order, double alpha) {
  if (m < 1) throw ConfigError("latitude sphere dimension must be at least 1");
  if (!(alpha > 0.0) || alpha > std::numbers::pi / 2)
    throw ConfigError("latitude alpha must lie in (0, pi/2], got " + std::to_string(alpha));
  auto dom = DomainModel::sphere_stereo(m, std::sin(alpha));
  auto tgt = TargetModel::round_sphere_polar(m + 1);
  std::vector<std::string> comps;
  for (int i = 1; i <= m; ++i) comps.push_back("x" + std::to_string(i));
  comps.push_back("alpha");
  MapExpr map(m, comps, {{"alpha", alpha}});
  std::vector<double> x0(m, 0.0);
  std::vector<double> y0 = map.eval_at(x0.data());
  tgt.check_chart(y0.data());
  Needs nd = order.es4 ? tension_needs(4, true, tgt) : tension_needs(order.k, false, tgt);
  return point_engine(dom, tgt, map, x0.data(), nd);
}

double vol_unit_sphere(int m) {
  return 2 * std::pow(std::numbers::pi, (m + 1) / 2.0) / std::tgamma((m + 1) / 2.0);
}

}  // namespace

LatitudePoint latitude_tension(int m, const TensionOrder& order, double alpha) {
  auto e = latitude_engine(m, order, alpha);
  auto t = order.es4 ? e.tau4_es() : e.tau_k(order.k);
  LatitudePoint p;
  for (const auto& j : t) p.tau.push_back(j.value());
  p.value = p.tau[m];
  for (int i = 0; i < m; ++i) p.tangential = std::max(p.tangential, std::abs(p.tau[i]));
  if (p.tangential > 1e-10)
    throw ContractError("latitude tension has tangential part " + std::to_string(p.tangential) +
                        " (equivariance broken)");
  return p;
}

double latitude_reduction(int m, const TensionOrder& order, double alpha) {
  return latitude_tension(m, order, alpha).value;
}

double latitude_energy(int m, const TensionOrder& order, double alpha) {
  auto e = latitude_engine(m, order, alpha);
  const double d = (order.es4 ? e.energy_density_es4() : e.energy_density(order.k)).value();
  return d * std::pow(std::sin(alpha), m) * vol_unit_sphere(m);
}

LatitudeScan scan_latitude(int m, const TensionOrder& order, int workers) {
  if (!order.es4 && order.k < 2) throw ConfigError("latitude root search needs k >= 2");
  const double lo = 2 * TargetModel::round_sphere_polar(m + 1).collar();
  const double hi = std::numbers::pi / 2;
  LatitudeScan s;
  const int N = kLatitudeScanPoints;
  s.alpha.resize(N);
  s.value.resize(N);
  // N points in [lo, hi), the equator itself left out
  for (int i = 0; i < N; ++i) s.alpha[i] = lo + (hi - lo) * i / N;
  parallel_for(N, workers, [&](std::size_t i) { s.value[i] = latitude_reduction(m, order, s.alpha[i]); });
  auto f = [&](double a) { return latitude_reduction(m, order, a); };
  auto tol = [](double a, double b) { return std::abs(b - a) <= kLatitudeRootTolerance; };
  for (int i = 0; i + 1 < N; ++i) {
    double a = s.alpha[i], b = s.alpha[i + 1], fa = s.value[i], fb = s.value[i + 1];
    double root;
    if (fa == 0.0) {
      root = a;
    } else if (fa * fb < 0) {
      std::uintmax_t iters = 200;
      auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
      root = 0.5 * (br.first + br.second);
    } else {
      continue;
    }
    // keep roots with a sign change across them and a vanishing full tension
    const double h = 1e-6;
    if (f(root - h) * f(root + h) >= 0 && fa != 0.0) continue;
    const auto p = latitude_tension(m, order, root);
    double norm = 0;
    for (double v : p.tau) norm = std::max(norm, std::abs(v));
    if (norm > kLatitudeRootResidual) continue;
    s.roots.push_back(root);
  }
  return s;
}

std::vector<double> find_k_harmonic_latitude(int m, const TensionOrder& order, int workers) {
  return scan_latitude(m, order, workers).roots;
}

// ---------------------------------------------------------------- flow

namespace {

struct FlowState {
  double energy = 0.0;
  double tau_norm = 0.0;
  BundleSection tau;
};

FlowState flow_state(const GridMap& phi, const TensionOrder& order, const std::vector<double>& w, int workers) {
  const int n = phi.n();
  Needs nd = energy_needs(order, phi.tgt);
  nd.degree = std::max(nd.degree, 2 * order.k);
  nd.R = nd.R || order.k >= 2;
  NodeArray a = evaluate_nodes(
      phi, nd,
      [&](const auto& e, std::size_t) {
        auto t = e.tau_k(order.k);
        auto r = t;
        r.push_back(density(e, order));
        r.push_back(e.h_dot(t, t));
        return r;
      },
      workers);
  FlowState s;
  s.energy = quadrature(w, a, n);
  s.tau = BundleSection(phi.grid, n);
  for (std::size_t k = 0; k < a.nodes; ++k) {
    for (int c = 0; c < n; ++c) s.tau.at(k, c) = a.at(k, c);
    s.tau_norm = std::max(s.tau_norm, std::sqrt(std::max(0.0, a.at(k, n + 1))));
  }
  return s;
}

}  // namespace

FlowReport gradient_flow(const GridMap& phi0, const TensionOrder& order, double dt, int steps, int workers) {
  if (order.es4) throw CapabilityError("gradient flow is available for E_k only");
  if (!(dt > 0)) throw ConfigError("flow dt must be positive");
  if (steps < 0) throw ConfigError("flow steps must be nonnegative");
  check_resolution(phi0, order.k);
  GridMap phi = phi0;
  phi.mode = EvalMode::grid_fd;
  phi.expr.reset();
  const auto w = volume_weights(phi);
  FlowReport rep;
  FlowState cur = flow_state(phi, order, w, workers);
  rep.steps.push_back({0, 0.0, cur.energy, cur.tau_norm});
  for (int s = 1; s <= steps; ++s) {
    int halvings = 0;
    while (true) {
      GridMap next = phi.displaced(cur.tau.values, -kVariationSign * dt);
      FlowState ns = flow_state(next, order, w, workers);
      if (ns.energy <= cur.energy + kFlowSlack) {
        phi = std::move(next);
        cur = std::move(ns);
        break;
      }
      if (++halvings > kFlowMaxHalvings)
        throw ContractError("flow step " + std::to_string(s) + " raises the energy after " +
                            std::to_string(kFlowMaxHalvings) + " halvings of dt (dt underflow)");
      dt *= 0.5;
    }
    rep.halvings += halvings;
    if (s == 1) rep.first_accepted_dt = dt;
    rep.steps.push_back({s, dt, cur.energy, cur.tau_norm});
  }
  rep.final_map = phi;
  return rep;
}

}  // namespace polyharm
