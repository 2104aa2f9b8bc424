#include "polyharm/polytension.hpp"

#include <algorithm>
#include <cmath>

namespace polyharm {

namespace {

BundleSection section(const GridMap& phi, const NodeArray& a) {
  BundleSection s(phi.grid, a.width);
  s.values = a.values;
  return s;
}

// Split a node array into consecutive sections of the given widths.
std::vector<BundleSection> split(const GridMap& phi, const NodeArray& a, const std::vector<int>& widths) {
  std::vector<BundleSection> out;
  int off = 0;
  for (int w : widths) {
    BundleSection s(phi.grid, w);
    for (std::size_t k = 0; k < a.nodes; ++k)
      for (int c = 0; c < w; ++c) s.values[k * w + c] = a.at(k, off + c);
    out.push_back(std::move(s));
    off += w;
  }
  return out;
}

FormSection as_form(const GridMap& phi, const BundleSection& s) {
  FormSection f(phi.grid, phi.n(), phi.m());
  f.values = s.values;
  return f;
}

void require_order(int k) {
  if (k < 1) throw ConfigError("order k must be at least 1, got " + std::to_string(k));
}

BundleSection tau_k_unchecked(const GridMap& phi, int k, int workers) {
  return section(phi, evaluate_nodes(phi, tension_needs(k, false, phi.tgt),
                                     [k](const auto& e, std::size_t) { return e.tau_k(k); }, workers));
}

}  // namespace

int required_nodes_per_axis(int k) { return 16 * std::max(k, 1); }

void check_resolution(const GridMap& phi, int k) {
  if (phi.mode != EvalMode::grid_fd) return;
  const int need = required_nodes_per_axis(k);
  for (int i = 0; i < phi.m(); ++i)
    if (phi.grid->shape()[i] < need)
      throw ConfigError("grid_fd order " + std::to_string(k) + " needs at least " + std::to_string(need) +
                        " nodes per axis, axis " + std::to_string(i + 1) + " has " +
                        std::to_string(phi.grid->shape()[i]));
}

Needs tension_needs(int k, bool es4, const TargetModel& tgt) {
  Needs nd;
  nd.degree = es4 ? 8 : 2 * std::max(k, 1);
  nd.S = true;
  nd.R = es4 || k >= 2;
  nd.dR = es4 && !tgt.locally_symmetric();
  nd.ddR = nd.dR;
  return nd;
}

TensionTower build_tower(const GridMap& phi, int k, int workers) {
  require_order(k);
  check_resolution(phi, k);
  const int n = phi.n(), m = phi.m();
  Needs nd = tension_needs(k, false, phi.tgt);
  NodeArray a = evaluate_nodes(
      phi, nd,
      [k](const auto& e, std::size_t) {
        auto r = e.u(0);
        r.clear();
        for (int i = 0; i < k; ++i) append(r, e.u(i));
        for (int i = 0; i + 1 < k; ++i) append(r, e.v(i));
        for (int i = 1; i < k; ++i) append(r, e.A(i));
        return r;
      },
      workers);
  std::vector<int> widths;
  for (int i = 0; i < k; ++i) widths.push_back(n);
  for (int i = 0; i + 1 < k; ++i) widths.push_back(n * m);
  for (int i = 1; i < k; ++i) widths.push_back(n);
  auto parts = split(phi, a, widths);
  TensionTower t;
  t.k = k;
  std::size_t p = 0;
  for (int i = 0; i < k; ++i) t.u.push_back(parts[p++]);
  for (int i = 0; i + 1 < k; ++i) t.v.push_back(as_form(phi, parts[p++]));
  for (int i = 1; i < k; ++i) t.a.push_back(parts[p++]);
  return t;
}

BundleSection a_term(const GridMap& phi, const BundleSection& u_prev, int workers) {
  Needs nd;
  nd.degree = 2;
  return section(phi, evaluate_nodes(
                          phi, nd,
                          [&](const auto& e, std::size_t k) {
                            auto s = section_fields(e, u_prev, k);
                            return e.a_term(s, e.partials(s));
                          },
                          workers));
}

BundleSection tau_k(const GridMap& phi, int k, int workers) {
  require_order(k);
  check_resolution(phi, k);
  return tau_k_unchecked(phi, k, workers);
}

BundleSection bitension(const GridMap& phi, int workers) {
  check_resolution(phi, 2);
  return section(phi, evaluate_nodes(phi, tension_needs(2, false, phi.tgt),
                                     [](const auto& e, std::size_t) { return e.bitension(); }, workers));
}

BundleSection tau3_via_f3(const GridMap& phi, int workers) {
  check_resolution(phi, 3);
  return section(phi, evaluate_nodes(
                          phi, tension_needs(3, false, phi.tgt),
                          [](const auto& e, std::size_t) {
                            auto r = e.lap_sec(e.u(1));
                            auto f = e.f3_literal();
                            for (std::size_t a = 0; a < r.size(); ++a) r[a] -= f[a];
                            return r;
                          },
                          workers));
}

BundleSection tau4_explicit(const GridMap& phi, int workers) {
  check_resolution(phi, 4);
  return section(phi, evaluate_nodes(phi, tension_needs(4, false, phi.tgt),
                                     [](const auto& e, std::size_t) { return e.tau4_explicit(); }, workers));
}

BundleSection f_k(const GridMap& phi, int k, int workers) {
  if (k < 2) throw ConfigError("F^k needs k >= 2");
  check_resolution(phi, k);
  return section(phi, evaluate_nodes(phi, tension_needs(k, false, phi.tgt),
                                     [k](const auto& e, std::size_t) { return e.fk_literal(k); }, workers));
}

ES4Terms es4_terms(const GridMap& phi, int workers) {
  if (phi.mode != EvalMode::analytic_jet)
    throw CapabilityError("ES-4 terms need analytic_jet evaluation (∇²R enters through Δ̄Ω₀)");
  const int n = phi.n(), m = phi.m();
  NodeArray a = evaluate_nodes(
      phi, tension_needs(4, true, phi.tgt),
      [](const auto& e, std::size_t) {
        const auto& t = e.es4();
        auto r = t.omega0;
        append(r, t.omega1);
        append(r, t.xi1);
        append(r, t.tr_r_omega0);
        append(r, t.codiff_omega1);
        append(r, t.lap_omega0);
        append(r, e.lap_omega0_expanded());
        append(r, t.hat_tau4);
        return r;
      },
      workers);
  auto p = split(phi, a, {n, n * m, n, n, n, n, n, n});
  ES4Terms t;
  t.omega0 = p[0];
  t.omega1 = as_form(phi, p[1]);
  t.xi1 = p[2];
  t.tr_r_omega0 = p[3];
  t.codiff_omega1 = p[4];
  t.lap_omega0 = p[5];
  t.lap_omega0_expanded = p[6];
  t.hat_tau4 = p[7];
  t.lap_paths_gap = max_abs_difference(t.lap_omega0, t.lap_omega0_expanded);
  const double scale = std::max(1.0, t.lap_omega0.max_abs());
  if (t.lap_paths_gap > kLapOmegaTolerance * scale)
    throw ContractError("the two evaluations of the rough Laplacian of Omega_0 differ by " +
                        std::to_string(t.lap_paths_gap));
  return t;
}

BundleSection hat_tau4(const GridMap& phi, int workers) { return es4_terms(phi, workers).hat_tau4; }

BundleSection tau4_es(const GridMap& phi, int workers) {
  BundleSection h = hat_tau4(phi, workers);
  BundleSection t = tau_k(phi, 4, workers);
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] += h.values[i];
  return t;
}

double richardson_estimate(const GridMap& phi, int k, int workers) {
  if (phi.mode != EvalMode::grid_fd) return 0.0;
  const auto& g = *phi.grid;
  std::vector<int> cshape;
  for (int i = 0; i < g.dim(); ++i) {
    if (g.shape()[i] % 2) throw ConfigError("Richardson estimate needs an even number of nodes per axis");
    cshape.push_back(g.shape()[i] / 2);
  }
  auto cg = std::make_shared<const Grid>(cshape, g.period(), g.lo(), g.stencil_order());
  std::vector<double> vals(cg->size() * phi.n());
  std::vector<int> idx(g.dim());
  std::vector<std::size_t> fine_of(cg->size());
  for (std::size_t c = 0; c < cg->size(); ++c) {
    cg->index(c, idx.data());
    for (auto& v : idx) v *= 2;
    fine_of[c] = g.node(idx.data());
    for (int a = 0; a < phi.n(); ++a) vals[c * phi.n() + a] = phi.phi[a][fine_of[c]];
  }
  std::vector<std::vector<double>> jumps;
  for (const auto& f : phi.phi) {
    std::vector<double> j(g.dim());
    for (int i = 0; i < g.dim(); ++i) j[i] = f.jump(i);
    jumps.push_back(j);
  }
  GridMap coarse = GridMap::from_values(phi.dom, phi.tgt, cg, vals, jumps);
  BundleSection tf = tau_k_unchecked(phi, k, workers);
  BundleSection tc = tau_k_unchecked(coarse, k, workers);
  const double factor = std::pow(2.0, g.stencil_order()) - 1.0;
  double err = 0;
  for (std::size_t c = 0; c < cg->size(); ++c)
    for (int a = 0; a < phi.n(); ++a)
      err = std::max(err, std::abs(tf.at(fine_of[c], a) - tc.at(c, a)) / factor);
  return err;
}

}  // namespace polyharm
