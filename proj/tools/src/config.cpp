#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "polyharm/errors.hpp"
#include "polyharm/polytension.hpp"

namespace polyharm::tool {

using nlohmann::ordered_json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "tension",   "tower",      "tau-k",      "tau-es4",       "energy",          "variation-check",
      "reduce-residual", "aronszajn", "pair-bound", "equator-check", "latitude-search", "flow"};
  return names;
}

namespace {

// Typed access to one JSON object; leftover keys are an error.
class Obj {
 public:
  Obj(const ordered_json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + " must be an object");
  }
  ~Obj() = default;

  bool has(const std::string& k) const { return j_.contains(k); }

  template <class T>
  T get(const std::string& k, T fallback) {
    if (!j_.contains(k)) return fallback;
    seen_.insert(k);
    try {
      return j_.at(k).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + "." + k + " has the wrong type");
    }
  }
  const ordered_json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + where_ + "." + it.key());
  }

 private:
  const ordered_json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

MapSpec parse_map(const ordered_json& j, const std::string& where, bool allow_random) {
  Obj o(j, where);
  MapSpec m;
  m.components = o.get<std::vector<std::string>>("components", {});
  m.params = o.get<std::map<std::string, double>>("params", {});
  m.grid_file = o.get<std::string>("grid_file", "");
  if (o.has("random")) {
    if (!allow_random) throw ConfigError(where + ".random is only allowed for variation fields");
    Obj r(o.raw("random"), where + ".random");
    RandomFieldSpec s;
    s.modes = r.get<int>("modes", 3);
    s.amplitude = r.get<double>("amplitude", 0.1);
    r.finish();
    if (s.modes < 1) throw ConfigError(where + ".random.modes must be positive");
    m.random = s;
  }
  o.finish();
  const int kinds = !m.components.empty() + !m.grid_file.empty() + m.random.has_value();
  if (kinds != 1) throw ConfigError(where + " needs exactly one of components, grid_file or random");
  return m;
}

ordered_json map_json(const MapSpec& m) {
  ordered_json j = ordered_json::object();
  if (!m.components.empty()) {
    j["components"] = m.components;
    j["params"] = m.params;
  }
  if (!m.grid_file.empty()) j["grid_file"] = m.grid_file;
  if (m.random) j["random"] = {{"modes", m.random->modes}, {"amplitude", m.random->amplitude}};
  return j;
}

bool is_integer_string(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

std::vector<double> default_periods(int dim) { return std::vector<double>(dim, 2 * std::numbers::pi); }

}  // namespace

ExperimentConfig parse_config(const ordered_json& j) {
  Obj o(j, "config");
  ExperimentConfig c;
  c.schema_version = o.get<int>("schema_version", -1);
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("schema_version must be " + std::to_string(kSchemaVersion));
  c.command = o.get<std::string>("command", "");

  if (o.has("domain")) {
    Obj d(o.raw("domain"), "domain");
    c.domain.model = d.get<std::string>("model", "flat_torus");
    c.domain.periods = d.get<std::vector<double>>("periods", {});
    c.domain.dim = d.get<int>("dim", static_cast<int>(c.domain.periods.size()));
    c.domain.metric = d.get<std::vector<std::string>>("metric", {});
    c.domain.params = d.get<std::map<std::string, double>>("params", {});
    c.domain.radius = d.get<double>("radius", 1.0);
    d.finish();
    if (c.domain.periods.empty() && c.domain.model != "sphere_stereo") c.domain.periods = default_periods(c.domain.dim);
  }
  if (o.has("target")) {
    Obj t(o.raw("target"), "target");
    c.target.model = t.get<std::string>("model", "euclidean");
    c.target.dim = t.get<int>("dim", 0);
    c.target.metric = t.get<std::vector<std::string>>("metric", {});
    c.target.params = t.get<std::map<std::string, double>>("params", {});
    c.target.jet_order = t.get<int>("jet_order", 16);
    c.target.curvature = t.get<double>("curvature", 1.0);
    c.target.collar = t.get<double>("collar", 1e-3);
    t.finish();
  }
  if (o.has("map")) c.map = parse_map(o.raw("map"), "map", false);
  if (o.has("second_map")) c.second_map = parse_map(o.raw("second_map"), "second_map", false);
  if (o.has("variation")) c.variation = parse_map(o.raw("variation"), "variation", true);
  if (o.has("order")) {
    const auto& v = o.raw("order");
    if (v.is_number_integer())
      c.order = std::to_string(v.get<int>());
    else if (v.is_string())
      c.order = v.get<std::string>();
    else
      throw ConfigError("order must be an integer or \"es4\"");
  }
  c.eval_mode = o.get<std::string>("eval_mode", "grid_fd");
  if (o.has("grid")) {
    Obj g(o.raw("grid"), "grid");
    c.grid.shape = g.get<std::vector<int>>("shape", {});
    c.grid.stencil_order = g.get<int>("stencil_order", 4);
    c.grid.lo = g.get<std::vector<double>>("lo", std::vector<double>(c.grid.shape.size(), 0.0));
    g.finish();
  }
  if (o.has("window")) {
    for (const auto& r : o.raw("window")) {
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) throw ConfigError("window entries must be [lo, hi] index pairs");
      c.window.push_back({r[0].get<int>(), r[1].get<int>()});
    }
  }
  c.kind = o.get<std::string>("kind", "plain");
  c.variation_t = o.get<double>("variation_t", 1e-5);
  if (o.has("latitude")) {
    Obj l(o.raw("latitude"), "latitude");
    c.latitude_m = l.get<int>("m", 2);
    l.finish();
  }
  if (o.has("flow")) {
    Obj f(o.raw("flow"), "flow");
    c.flow.dt = f.get<double>("dt", 1e-3);
    c.flow.steps = f.get<int>("steps", 100);
    f.finish();
  }
  if (o.has("tolerances")) {
    Obj t(o.raw("tolerances"), "tolerances");
    c.tolerances.variation = t.get<double>("variation", 1e-4);
    c.tolerances.equator = t.get<double>("equator", 1e-10);
    c.tolerances.root = t.get<double>("root", 1e-8);
    t.finish();
  }
  c.output = o.get<std::string>("output", "");
  c.seed = o.get<std::uint64_t>("seed", 0);
  o.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

ordered_json to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["schema_version"] = c.schema_version;
  j["command"] = c.command;
  j["domain"] = {{"model", c.domain.model}, {"dim", c.domain.dim},       {"periods", c.domain.periods},
                 {"metric", c.domain.metric}, {"params", c.domain.params}, {"radius", c.domain.radius}};
  j["target"] = {{"model", c.target.model},         {"dim", c.target.dim},
                 {"metric", c.target.metric},       {"params", c.target.params},
                 {"jet_order", c.target.jet_order}, {"curvature", c.target.curvature},
                 {"collar", c.target.collar}};
  if (!(c.map == MapSpec{})) j["map"] = map_json(c.map);
  if (c.second_map) j["second_map"] = map_json(*c.second_map);
  if (c.variation) j["variation"] = map_json(*c.variation);
  if (is_integer_string(c.order))
    j["order"] = std::stoi(c.order);
  else
    j["order"] = c.order;
  j["eval_mode"] = c.eval_mode;
  j["grid"] = {{"shape", c.grid.shape}, {"stencil_order", c.grid.stencil_order}, {"lo", c.grid.lo}};
  j["window"] = ordered_json::array();
  for (const auto& r : c.window) j["window"].push_back({r[0], r[1]});
  j["kind"] = c.kind;
  j["variation_t"] = c.variation_t;
  j["latitude"] = {{"m", c.latitude_m}};
  j["flow"] = {{"dt", c.flow.dt}, {"steps", c.flow.steps}};
  j["tolerances"] = {
      {"variation", c.tolerances.variation}, {"equator", c.tolerances.equator}, {"root", c.tolerances.root}};
  j["output"] = c.output;
  j["seed"] = c.seed;
  return j;
}

DomainModel make_domain(const ExperimentConfig& c) {
  const auto& d = c.domain;
  if (d.model == "flat_torus") return DomainModel::flat_torus(d.periods);
  if (d.model == "user_metric") return DomainModel::user_metric(d.dim, d.metric, d.periods, d.params);
  if (d.model == "sphere_stereo") return DomainModel::sphere_stereo(d.dim, d.radius);
  throw ConfigError("unknown domain model '" + d.model + "' (flat_torus, user_metric, sphere_stereo)");
}

TargetModel make_target(const ExperimentConfig& c) {
  const auto& t = c.target;
  if (t.model == "euclidean") return TargetModel::euclidean(t.dim);
  if (t.model == "round_sphere_polar") return TargetModel::round_sphere_polar(t.dim, t.collar);
  if (t.model == "space_form") return TargetModel::space_form(t.dim, t.curvature);
  if (t.model == "user_metric") return TargetModel::user_metric(t.dim, t.metric, t.params, t.jet_order);
  throw ConfigError("unknown target model '" + t.model + "' (euclidean, round_sphere_polar, space_form, user_metric)");
}

std::shared_ptr<const Grid> make_grid(const ExperimentConfig& c, const DomainModel& dom) {
  if (!dom.gridable()) throw CapabilityError("domain " + dom.kind_name() + " cannot carry a grid");
  const int m = dom.dim();
  if (static_cast<int>(c.grid.shape.size()) != m)
    throw ConfigError("grid.shape has " + std::to_string(c.grid.shape.size()) + " axes, domain dimension is " +
                      std::to_string(m));
  std::vector<double> lo = c.grid.lo;
  if (lo.empty()) lo.assign(m, 0.0);
  if (static_cast<int>(lo.size()) != m) throw ConfigError("grid.lo must have one entry per axis");
  return std::make_shared<const Grid>(c.grid.shape, dom.periods(), lo, c.grid.stencil_order);
}

GridMap make_map(const ExperimentConfig& c, const MapSpec& spec, const DomainModel& dom, const TargetModel& tgt,
                 const std::shared_ptr<const Grid>& grid) {
  const EvalMode mode = eval_mode_from_string(c.eval_mode);
  if (!spec.grid_file.empty()) {
    if (mode == EvalMode::analytic_jet) throw CapabilityError("analytic_jet needs a closed-form map, not a grid file");
    std::ifstream in(spec.grid_file);
    if (!in) throw ConfigError("cannot open grid file " + spec.grid_file);
    ordered_json j;
    try {
      j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("grid file " + spec.grid_file + " is not valid JSON: " + e.what());
    }
    Obj o(j, "grid_file");
    auto shape = o.get<std::vector<int>>("shape", {});
    auto values = o.get<std::vector<double>>("values", {});
    auto jumps = o.get<std::vector<std::vector<double>>>("jumps", {});
    o.finish();
    if (shape != grid->shape()) throw ConfigError("grid file shape does not match grid.shape");
    return GridMap::from_values(dom, tgt, grid, values, jumps);
  }
  if (spec.components.empty()) throw ConfigError("map needs components or a grid_file");
  return GridMap::sample(dom, tgt, grid, MapExpr(dom.dim(), spec.components, spec.params), mode);
}

namespace {

std::string fmt17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

// Σ_j a_j cos(p_j · x + q_j) per component, with integer wave vectors in
// [−2, 2]^m, drawn from the 64-bit Mersenne Twister (portable raw output).
std::vector<std::string> random_field(int m, int n, const RandomFieldSpec& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<std::string> out;
  for (int a = 0; a < n; ++a) {
    std::string s;
    for (int j = 0; j < r.modes; ++j) {
      std::vector<int> p(m);
      bool nonzero = false;
      while (!nonzero) {
        for (auto& v : p) {
          v = static_cast<int>(rng() % 5) - 2;
          nonzero = nonzero || v != 0;
        }
      }
      const double amp = r.amplitude * (2 * unit() - 1) / r.modes;
      const double phase = 2 * std::numbers::pi * unit();
      std::string arg;
      for (int i = 0; i < m; ++i)
        if (p[i]) arg += (arg.empty() ? "" : "+") + std::string("(") + std::to_string(p[i]) + ")*x" + std::to_string(i + 1);
      s += (s.empty() ? "" : "+") + std::string("(") + fmt17(amp) + ")*cos(" + arg + "+" + fmt17(phase) + ")";
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

BundleSection make_variation(const ExperimentConfig& c, const GridMap& phi) {
  if (!c.variation) throw ConfigError("variation-check needs a variation field");
  const auto& v = *c.variation;
  if (!v.grid_file.empty()) throw ConfigError("variation fields must be closed forms or random");
  std::vector<std::string> comps = v.random ? random_field(phi.m(), phi.n(), *v.random, c.seed) : v.components;
  if (static_cast<int>(comps.size()) != phi.n())
    throw ConfigError("variation has " + std::to_string(comps.size()) + " components, target dimension is " +
                      std::to_string(phi.n()));
  return BundleSection::sample(phi.grid, MapExpr(phi.m(), comps, v.random ? std::map<std::string, double>{} : v.params));
}

TensionOrder order_of(const ExperimentConfig& c) { return TensionOrder::parse(c.order); }

Window window_of(const ExperimentConfig& c) {
  Window w;
  w.ranges = c.window;
  return w;
}

// ---------------------------------------------------------------- validate

namespace {

bool needs_reduction_k(const std::string& cmd) {
  return cmd == "reduce-residual" || cmd == "aronszajn" || cmd == "pair-bound" || cmd == "equator-check";
}

// Order the command actually evaluates.
TensionOrder effective_order(const ExperimentConfig& c) {
  if (c.command == "tension") return TensionOrder::order(1);
  if (c.command == "tau-es4") return TensionOrder::es4_order();
  return order_of(c);
}

Needs command_needs(const ExperimentConfig& c, const TargetModel& tgt) {
  const TensionOrder o = effective_order(c);
  if (c.command == "energy") return energy_needs(o, tgt);
  Needs nd = o.es4 ? tension_needs(4, true, tgt) : tension_needs(o.k, false, tgt);
  if (c.command == "variation-check") {
    Needs e = energy_needs(o, tgt);
    nd.degree = std::max(nd.degree, e.degree);
    nd.R = nd.R || e.R;
  }
  return nd;
}

std::string kind_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::capability: return "capability";
    default: return "config";
  }
}

}  // namespace

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  std::vector<Diagnostic> out;
  auto add = [&](const std::string& kind, const std::string& msg) { out.push_back({kind, msg}); };
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), c.command) == names.end()) {
    add("config", "unknown command '" + c.command + "'");
    return out;
  }
  TensionOrder order;
  try {
    order = effective_order(c);
  } catch (const Error& e) {
    add("config", e.what());
    return out;
  }
  if (needs_reduction_k(c.command) && (order.es4 || order.k < 2))
    add("config", c.command + " needs an integer order k >= 2");
  if ((c.command == "flow") && order.es4) add("capability", "gradient flow is available for E_k only");

  if (c.command == "latitude-search") {
    if (c.latitude_m < 1) add("config", "latitude.m must be at least 1");
    if (!order.es4 && order.k < 2) add("config", "latitude-search needs k >= 2 or es4");
    return out;
  }

  EvalMode mode = EvalMode::grid_fd;
  try {
    mode = eval_mode_from_string(c.eval_mode);
  } catch (const Error& e) {
    add("config", e.what());
    return out;
  }
  std::optional<DomainModel> dom;
  std::optional<TargetModel> tgt;
  try {
    dom = make_domain(c);
  } catch (const Error& e) {
    add(kind_of(e), std::string("domain: ") + e.what());
  }
  try {
    tgt = make_target(c);
  } catch (const Error& e) {
    add(kind_of(e), std::string("target: ") + e.what());
  }
  if (!dom || !tgt) return out;

  if (!dom->gridable()) add("capability", "domain " + dom->kind_name() + " cannot carry a grid for " + c.command);

  // grid
  std::shared_ptr<const Grid> grid;
  if (dom->gridable()) {
    try {
      grid = make_grid(c, *dom);
    } catch (const Error& e) {
      add(kind_of(e), std::string("grid: ") + e.what());
    }
  }
  if (grid && mode == EvalMode::grid_fd) {
    const int need = required_nodes_per_axis(order.k);
    for (int i = 0; i < grid->dim(); ++i)
      if (grid->shape()[i] < need)
        add("resolution", "grid_fd order " + order.name() + " needs at least " + std::to_string(need) +
                              " nodes per axis, axis " + std::to_string(i + 1) + " has " +
                              std::to_string(grid->shape()[i]));
  }

  // map closed forms
  auto check_map = [&](const MapSpec& m, const std::string& what, bool variation) {
    if (!m.grid_file.empty()) {
      if (mode == EvalMode::analytic_jet) add("capability", what + ": analytic_jet needs a closed form");
      if (variation) add("config", what + ": variation fields must be closed forms or random");
      return;
    }
    if (m.random) return;
    if (static_cast<int>(m.components.size()) != tgt->dim())
      add("config", what + " has " + std::to_string(m.components.size()) + " components, target dimension is " +
                        std::to_string(tgt->dim()));
    try {
      MapExpr(dom->dim(), m.components, m.params);
    } catch (const Error& e) {
      add("config", what + ": " + e.what());
    }
  };
  check_map(c.map, "map", false);
  if (c.command == "pair-bound") {
    if (!c.second_map)
      add("config", "pair-bound needs second_map");
    else
      check_map(*c.second_map, "second_map", false);
  }
  if (c.command == "variation-check") {
    if (!c.variation)
      add("config", "variation-check needs a variation field");
    else
      check_map(*c.variation, "variation", true);
    if (!(c.variation_t > 0)) add("config", "variation_t must be positive");
  }

  // capabilities
  const bool es4_terms = c.command == "tau-es4" || (c.command == "variation-check" && order.es4);
  if (es4_terms && mode != EvalMode::analytic_jet)
    add("capability", "ES-4 tension terms need analytic_jet evaluation");
  if (tgt->kind() == TargetModel::Kind::user_metric) {
    try {
      const int need = required_target_order(command_needs(c, *tgt), mode, *tgt);
      if (need > tgt->jet_order())
        add("capability", c.command + " needs target jet order " + std::to_string(need) + ", target supplies " +
                              std::to_string(tgt->jet_order()));
    } catch (const Error& e) {
      add("config", e.what());
    }
  }

  // reduction kinds and windows
  if (needs_reduction_k(c.command)) {
    try {
      ReducedKind kind = c.command == "equator-check" ? ReducedKind::equator
                         : c.command == "pair-bound"  ? ReducedKind::extended
                                                      : reduced_kind_from_string(c.kind);
      if (kind == ReducedKind::equator && tgt->kind() != TargetModel::Kind::round_sphere_polar)
        add("config", "equator kind needs the round_sphere_polar target");
    } catch (const Error& e) {
      add("config", e.what());
    }
  }
  if (grid) {
    try {
      window_of(c).validate(*grid);
    } catch (const Error& e) {
      add("window", e.what());
    }
  }
  if (c.command == "flow") {
    if (!(c.flow.dt > 0)) add("config", "flow.dt must be positive");
    if (c.flow.steps < 0) add("config", "flow.steps must be nonnegative");
  }
  return out;
}

}  // namespace polyharm::tool
