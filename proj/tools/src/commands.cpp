#include "commands.hpp"

#include <functional>
#include <map>

#include "polyharm/fields.hpp"
#include "polyharm/polytension.hpp"
#include "polyharm/reduction.hpp"
#include "polyharm/variational.hpp"

namespace polyharm::tool {

namespace {

struct Setup {
  DomainModel dom;
  TargetModel tgt;
  std::shared_ptr<const Grid> grid;
  GridMap phi;
};

Setup setup(const ExperimentConfig& c) {
  DomainModel dom = make_domain(c);
  TargetModel tgt = make_target(c);
  auto grid = make_grid(c, dom);
  GridMap phi = make_map(c, c.map, dom, tgt, grid);
  return {dom, tgt, grid, phi};
}

std::string shape_string(const std::vector<int>& s) {
  std::string r;
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "x" : "") + std::to_string(s[i]);
  return r;
}

// node, x1..xm, then the named per-node columns
void node_records(Artifact& a, const Grid& g, const std::vector<std::pair<std::string, const BundleSection*>>& cols) {
  a.columns = {"node"};
  for (int i = 0; i < g.dim(); ++i) a.columns.push_back("x" + std::to_string(i + 1));
  for (const auto& [name, s] : cols)
    for (int c = 0; c < s->n; ++c) a.columns.push_back(s->n == 1 ? name : name + "_" + std::to_string(c + 1));
  std::vector<double> x(g.dim());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.coords(k, x.data());
    std::vector<Cell> row{static_cast<long long>(k)};
    for (double v : x) row.emplace_back(v);
    for (const auto& [name, s] : cols)
      for (int c = 0; c < s->n; ++c) row.emplace_back(s->at(k, c));
    a.rows.push_back(std::move(row));
  }
}

BundleSection scalar_section(const GridField& f) {
  BundleSection s(f.grid(), 1);
  s.values = f.values();
  return s;
}

void ratio_records(Artifact& a, const std::vector<RatioReport>& rs) {
  a.columns = {"lemma", "sup_ratio", "masked_fraction", "nodes", "argmax", "grid_shape"};
  for (const auto& r : rs)
    a.rows.push_back({r.lemma, r.sup_ratio, r.masked_fraction, static_cast<long long>(r.nodes),
                      static_cast<long long>(r.argmax), shape_string(r.grid_shape)});
}

void ratio_summary(Artifact& a, const RatioReport& r) {
  a.put("lemma", r.lemma);
  a.put("sup_ratio", r.sup_ratio);
  a.put("masked_fraction", r.masked_fraction);
  a.put("nodes", static_cast<long long>(r.nodes));
  a.put("argmax", static_cast<long long>(r.argmax));
}

int reduction_k(const ExperimentConfig& c) {
  const TensionOrder o = order_of(c);
  if (o.es4 || o.k < 2) throw ConfigError(c.command + " needs an integer order k >= 2");
  return o.k;
}

void cmd_tension(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  BundleSection t = tension(s.phi, w);
  a.put("max_abs_tau", t.max_abs());
  node_records(a, *s.grid, {{"tau", &t}});
}

void cmd_tower(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  const int k = order_of(c).k;
  TensionTower t = build_tower(s.phi, k, w);
  std::vector<std::pair<std::string, const BundleSection*>> cols;
  for (int i = 0; i < k; ++i) {
    a.put("max_abs_u" + std::to_string(i), t.u[i].max_abs());
    cols.push_back({"u" + std::to_string(i), &t.u[i]});
  }
  for (int i = 1; i < k; ++i) {
    a.put("max_abs_A" + std::to_string(i), t.a[i - 1].max_abs());
    cols.push_back({"A" + std::to_string(i), &t.a[i - 1]});
  }
  node_records(a, *s.grid, cols);
}

void cmd_tau_k(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  const int k = order_of(c).k;
  BundleSection t = tau_k(s.phi, k, w);
  a.put("k", static_cast<long long>(k));
  a.put("max_abs_tau_k", t.max_abs());
  if (s.phi.mode == EvalMode::grid_fd) a.put("richardson_error", richardson_estimate(s.phi, k, w));
  node_records(a, *s.grid, {{"tau", &t}});
}

void cmd_tau_es4(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  ES4Terms e = es4_terms(s.phi, w);
  BundleSection t4 = tau_k(s.phi, 4, w);
  BundleSection es = t4;
  for (std::size_t i = 0; i < es.values.size(); ++i) es.values[i] += e.hat_tau4.values[i];
  a.put("lap_paths_gap", e.lap_paths_gap);
  a.put("max_abs_xi1", e.xi1.max_abs());
  a.put("max_abs_hat_tau4", e.hat_tau4.max_abs());
  a.put("max_abs_tau4_es", es.max_abs());
  node_records(a, *s.grid, {{"tau4_es", &es}, {"hat_tau4", &e.hat_tau4}});
}

void cmd_energy(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  EnergyReport r = energy(s.phi, order_of(c), w);
  a.put("order", r.order.name());
  a.put("value", r.value);
  a.put("quadrature", r.quadrature);
  a.put("grid_shape", shape_string(r.grid_shape));
}

void cmd_variation(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  BundleSection V = make_variation(c, s.phi);
  VariationReport r = first_variation_check(s.phi, V, order_of(c), c.variation_t, w);
  a.put("order", r.order.name());
  a.put("sign", static_cast<long long>(kVariationSign));
  a.put("t", r.t);
  a.put("lhs", r.lhs);
  a.put("rhs", r.rhs);
  a.put("discrepancy", r.discrepancy);
  a.put("within_tolerance", static_cast<long long>(r.discrepancy <= c.tolerances.variation));
}

void cmd_residual(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  const int k = reduction_k(c);
  const ReducedKind kind = reduced_kind_from_string(c.kind);
  GridField r = residual(s.phi, k, kind, w);
  a.put("kind", std::string(to_string(kind)));
  a.put("block_count", static_cast<long long>(reduced_block_count(k, kind)));
  a.put("fiber_dim", static_cast<long long>(reduced_fiber_dim(s.phi.n(), s.phi.m(), k, kind)));
  a.put("max_residual", r.max_abs());
  BundleSection rs = scalar_section(r);
  node_records(a, *s.grid, {{"residual", &rs}});
}

void cmd_aronszajn(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  RatioReport r = aronszajn_ratio(s.phi, reduction_k(c), reduced_kind_from_string(c.kind), window_of(c), w);
  ratio_summary(a, r);
  ratio_records(a, {r});
}

void cmd_pair(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  if (!c.second_map) throw ConfigError("pair-bound needs second_map");
  GridMap psi = make_map(c, *c.second_map, s.dom, s.tgt, s.grid);
  PairReport r = pair_difference_bound(s.phi, psi, reduction_k(c), window_of(c), w);
  ratio_summary(a, r.full);
  std::vector<RatioReport> all{r.full};
  all.insert(all.end(), r.lemmas.begin(), r.lemmas.end());
  ratio_records(a, all);
}

void cmd_equator(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  EquatorReport r = equator_bound(s.phi, reduction_k(c), window_of(c), w);
  a.put("f_max_on_window", r.f_max_on_window);
  a.put("y_max_on_window", r.y_max_on_window);
  a.put("y_max_off_window", r.y_max_off_window);
  a.put("erosion", static_cast<long long>(r.erosion));
  a.put("y_vanishes_on_window", static_cast<long long>(r.y_max_on_window <= c.tolerances.equator));
  ratio_summary(a, r.full);
  std::vector<RatioReport> all{r.full};
  all.insert(all.end(), r.lemmas.begin(), r.lemmas.end());
  ratio_records(a, all);
}

void cmd_latitude(const ExperimentConfig& c, Artifact& a, int w) {
  const TensionOrder o = order_of(c);
  LatitudeScan s = scan_latitude(c.latitude_m, o, w);
  a.put("m", static_cast<long long>(c.latitude_m));
  a.put("order", o.name());
  a.put("root_count", static_cast<long long>(s.roots.size()));
  for (std::size_t i = 0; i < s.roots.size(); ++i) a.put("root_" + std::to_string(i), s.roots[i]);
  a.columns = {"alpha", "value", "is_root"};
  for (double r : s.roots) a.rows.push_back({r, latitude_reduction(c.latitude_m, o, r), 1LL});
  for (std::size_t i = 0; i < s.alpha.size(); ++i) a.rows.push_back({s.alpha[i], s.value[i], 0LL});
}

void cmd_flow(const ExperimentConfig& c, Artifact& a, int w) {
  auto s = setup(c);
  FlowReport r = gradient_flow(s.phi, order_of(c), c.flow.dt, c.flow.steps, w);
  a.put("initial_energy", r.steps.front().energy);
  a.put("final_energy", r.steps.back().energy);
  a.put("initial_tau_norm", r.steps.front().tau_norm);
  a.put("final_tau_norm", r.steps.back().tau_norm);
  a.put("halvings", static_cast<long long>(r.halvings));
  a.put("first_accepted_dt", r.first_accepted_dt);
  a.columns = {"step", "dt", "energy", "tau_norm"};
  for (const auto& st : r.steps) a.rows.push_back({static_cast<long long>(st.step), st.dt, st.energy, st.tau_norm});
}

using Handler = std::function<void(const ExperimentConfig&, Artifact&, int)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"tension", cmd_tension},       {"tower", cmd_tower},
      {"tau-k", cmd_tau_k},           {"tau-es4", cmd_tau_es4},
      {"energy", cmd_energy},         {"variation-check", cmd_variation},
      {"reduce-residual", cmd_residual}, {"aronszajn", cmd_aronszajn},
      {"pair-bound", cmd_pair},       {"equator-check", cmd_equator},
      {"latitude-search", cmd_latitude}, {"flow", cmd_flow}};
  return h;
}

}  // namespace

Artifact run(const ExperimentConfig& c, int workers) {
  auto diags = validate(c);
  if (!diags.empty()) {
    std::string msg;
    bool capability = false;
    for (const auto& d : diags) {
      msg += (msg.empty() ? "" : "; ") + d.kind + ": " + d.message;
      capability = capability || d.kind == "capability";
    }
    // capability mismatches outrank plain configuration problems
    if (capability) throw CapabilityError(msg);
    throw ConfigError(msg);
  }
  Artifact a;
  a.command = c.command;
  a.config = to_json(c);
  handlers().at(c.command)(c, a, workers);
  return a;
}

Artifact validation_artifact(const ExperimentConfig& c) {
  Artifact a;
  a.command = "validate";
  a.config = to_json(c);
  auto diags = validate(c);
  a.put("diagnostics", static_cast<long long>(diags.size()));
  a.columns = {"kind", "message"};
  for (const auto& d : diags) {
    std::string m = d.message;
    for (auto& ch : m)
      if (ch == '\n') ch = ' ';
    a.rows.push_back({d.kind, "\"" + m + "\""});
  }
  return a;
}

}  // namespace polyharm::tool
