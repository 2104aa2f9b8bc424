#include "polyharm/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polyharm/evaluate.hpp"
#include "polyharm/polytension.hpp"

namespace polyharm {

const char* to_string(ReducedKind k) {
  switch (k) {
    case ReducedKind::plain: return "plain";
    case ReducedKind::extended: return "extended";
    case ReducedKind::equator: return "equator";
  }
  return "?";
}

ReducedKind reduced_kind_from_string(const std::string& s) {
  if (s == "plain") return ReducedKind::plain;
  if (s == "extended") return ReducedKind::extended;
  if (s == "equator") return ReducedKind::equator;
  throw ConfigError("unknown reduced kind '" + s + "' (expected plain, extended or equator)");
}

// ---------------------------------------------------------------- windows

bool Window::contains(const Grid& g, std::size_t node) const {
  if (ranges.empty()) return true;
  std::vector<int> idx(g.dim());
  g.index(node, idx.data());
  for (int i = 0; i < g.dim(); ++i)
    if (idx[i] < ranges[i][0] || idx[i] >= ranges[i][1]) return false;
  return true;
}

Window Window::eroded(const Grid& g, int r) const {
  if (r <= 0) return *this;
  Window w;
  if (ranges.empty()) return w;  // the whole periodic grid has no edge
  w.ranges = ranges;
  for (int i = 0; i < g.dim(); ++i) {
    auto& q = w.ranges[i];
    // an axis covered end to end wraps around and keeps its full range
    if (q[0] == 0 && q[1] == g.shape()[i]) continue;
    q[0] += r;
    q[1] -= r;
    if (q[1] < q[0]) q[1] = q[0];
  }
  return w;
}

void Window::validate(const Grid& g) const {
  if (ranges.empty()) return;
  if (static_cast<int>(ranges.size()) != g.dim())
    throw ConfigError("window has " + std::to_string(ranges.size()) + " ranges, grid has " +
                      std::to_string(g.dim()) + " axes");
  for (int i = 0; i < g.dim(); ++i)
    if (ranges[i][0] < 0 || ranges[i][1] > g.shape()[i] || ranges[i][0] >= ranges[i][1])
      throw ConfigError("window range [" + std::to_string(ranges[i][0]) + ", " + std::to_string(ranges[i][1]) +
                        ") does not fit axis " + std::to_string(i + 1) + " of " + std::to_string(g.shape()[i]) +
                        " nodes");
}

std::size_t Window::count(const Grid& g) const {
  std::size_t c = 0;
  for (std::size_t k = 0; k < g.size(); ++k) c += contains(g, k);
  return c;
}

// ---------------------------------------------------------------- block sets

int BlockSet::fiber_dim() const {
  int d = 0;
  for (const auto& b : blocks) d += b.width;
  return d;
}

double BlockSet::max_abs() const { return max_abs_on(Window{}); }

double BlockSet::max_abs_on(const Window& w) const {
  double r = 0;
  for (const auto& b : blocks)
    for (std::size_t k = 0; k < grid->size(); ++k)
      if (w.contains(*grid, k))
        for (int c = 0; c < b.width; ++c) r = std::max(r, std::abs(b.at(k, c)));
  return r;
}

double BlockSet::max_abs_off(const Window& w) const {
  double r = 0;
  for (const auto& b : blocks)
    for (std::size_t k = 0; k < grid->size(); ++k)
      if (!w.contains(*grid, k))
        for (int c = 0; c < b.width; ++c) r = std::max(r, std::abs(b.at(k, c)));
  return r;
}

int reduced_block_count(int k, ReducedKind kind) {
  return 2 * k - 3 + (kind == ReducedKind::plain ? 0 : 2);
}

int reduced_fiber_dim(int n, int m, int k, ReducedKind kind) {
  const int c = kind == ReducedKind::equator ? 1 : n;
  const int plain = (k - 1) * c + (k - 2) * c * m;
  return kind == ReducedKind::plain ? plain : plain + c + c * m;
}

namespace {

// Offsets of the per-node quantities in one evaluation row.
struct Layout {
  int n, m, k;
  int phi, dphi, ddphi;
  std::vector<int> u, v, dv;             // u_0..u_{k−2}, v_0..v_{k−2} (v_{k−2} = ∂u_{k−2}), dv_0..dv_{k−3}
  int rphi, rdphi, commdphi;
  std::vector<int> A, uA, duA, dA, commv;  // j = 0..k−3, for A_{j+1}
  int Fk, tauk, width;

  Layout(int n_, int m_, int k_) : n(n_), m(m_), k(k_) {
    int o = 0;
    auto take = [&](int w) {
      int r = o;
      o += w;
      return r;
    };
    phi = take(n);
    dphi = take(n * m);
    ddphi = take(n * m * m);
    for (int j = 0; j <= k - 2; ++j) u.push_back(take(n));
    for (int j = 0; j <= k - 2; ++j) v.push_back(take(n * m));
    for (int j = 0; j <= k - 3; ++j) dv.push_back(take(n * m * m));
    rphi = take(n);
    rdphi = take(n * m);
    commdphi = take(n * m);
    for (int j = 0; j <= k - 3; ++j) {
      A.push_back(take(n));
      uA.push_back(take(n));
      duA.push_back(take(n * m));
      dA.push_back(take(n * m));
      commv.push_back(take(n * m));
    }
    Fk = take(n);
    tauk = take(n);
    width = o;
  }

  // all components of a section / form / second-derivative group
  std::vector<int> sec(int off, const std::vector<int>& as) const {
    std::vector<int> r;
    for (int a : as) r.push_back(off + a);
    return r;
  }
  std::vector<int> form(int off, const std::vector<int>& as) const {
    std::vector<int> r;
    for (int a : as)
      for (int i = 0; i < m; ++i) r.push_back(off + a * m + i);
    return r;
  }
  std::vector<int> form2(int off, const std::vector<int>& as) const {
    std::vector<int> r;
    for (int a : as)
      for (int i = 0; i < m * m; ++i) r.push_back(off + a * m * m + i);
    return r;
  }
};

template <class E>
auto node_row(const E& e, int k, bool covariant_v) {
  using Vec = std::decay_t<decltype(e.zero_sec())>;
  const int n = e.n(), m = e.m();
  auto second = [&](const Vec& w) {
    Vec out;
    for (const auto& f : w)
      for (int l = 0; l < m; ++l) out.push_back(partial(f, l));
    return out;
  };
  auto comm = [&](const Vec& w) {
    Vec out;
    for (int a = 0; a < n; ++a) {
      Vec row(w.begin() + a * m, w.begin() + (a + 1) * m);
      for (int i = 0; i < m; ++i) out.push_back(e.commutator(row[0], row, i));
    }
    return out;
  };
  Vec r;
  append(r, e.data().phi);
  append(r, e.dphi());
  append(r, second(e.dphi()));
  for (int j = 0; j <= k - 2; ++j) append(r, e.u(j));
  for (int j = 0; j <= k - 2; ++j) append(r, covariant_v ? e.cov(e.u(j)) : e.v(j));
  for (int j = 0; j <= k - 3; ++j) append(r, second(e.v(j)));
  // Δφ = −u_0 + Γ(dφ, dφ)
  Vec rphi = e.u(0);
  const auto& G = e.data().gamma;
  for (int a = 0; a < n; ++a) {
    rphi[a] = -rphi[a];
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const auto& g = G[(a * n + b) * n + c];
        if (!is_zero(g)) add_mul(rphi[a], g, e.p2(b, c));
      }
  }
  append(r, rphi);
  Vec cd = comm(e.dphi());
  Vec rd = e.partials(rphi);
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] += cd[i];
  append(r, rd);
  append(r, cd);
  for (int j = 0; j <= k - 3; ++j) {
    const Vec& Aj = e.A(j + 1);
    Vec uA = e.u(j + 1);
    for (int a = 0; a < n; ++a) uA[a] -= Aj[a];
    append(r, Aj);
    append(r, uA);
    append(r, e.partials(uA));
    append(r, e.partials(Aj));
    append(r, comm(e.v(j)));
  }
  append(r, e.fk_literal(k));
  append(r, e.tau_k(k));
  return r;
}

struct Rows {
  Layout L;
  NodeArray a;
};

void require_k(int k) {
  if (k < 2) throw ConfigError("reduced vectors need order k >= 2, got " + std::to_string(k));
}

void require_kind(const GridMap& phi, ReducedKind kind) {
  if (kind == ReducedKind::equator && phi.tgt.kind() != TargetModel::Kind::round_sphere_polar)
    throw ConfigError("equator kind needs the round_sphere_polar target, got " + phi.tgt.kind_name());
}

Rows evaluate_rows(const GridMap& phi, int k, bool covariant_v, int workers) {
  require_k(k);
  check_resolution(phi, k);
  Layout L(phi.n(), phi.m(), k);
  Needs nd = tension_needs(k, false, phi.tgt);
  NodeArray a = evaluate_nodes(
      phi, nd, [&](const auto& e, std::size_t) { return node_row(e, k, covariant_v); }, workers);
  if (a.width != L.width) throw ContractError("reduction row layout mismatch");
  return {L, std::move(a)};
}

// One component of a block: where its value, partials and Laplacian
// right-hand side sit in the row.
struct Comp {
  int z = 0;
  std::vector<int> dz;
  std::vector<int> rhs;
  int src = -1;
  double shift = 0.0;
  int jump_of = -1;
};

struct BlockSpec {
  std::string name;
  std::vector<Comp> comps;
};

std::vector<BlockSpec> block_specs(const Layout& L, ReducedKind kind) {
  const int n = L.n, m = L.m, k = L.k;
  std::vector<int> as;
  if (kind == ReducedKind::equator)
    as = {n - 1};
  else
    for (int a = 0; a < n; ++a) as.push_back(a);
  const std::string sfx = kind == ReducedKind::equator ? "^n" : "";
  std::vector<BlockSpec> out;
  if (kind != ReducedKind::plain) {
    const bool eq = kind == ReducedKind::equator;
    BlockSpec p{eq ? "f" : "phi", {}}, dp{eq ? "df" : "dphi", {}};
    for (int a : as) {
      Comp c;
      c.z = L.phi + a;
      for (int i = 0; i < m; ++i) c.dz.push_back(L.dphi + a * m + i);
      c.rhs = {L.rphi + a};
      c.shift = eq ? std::numbers::pi / 2 : 0.0;
      c.jump_of = a;
      p.comps.push_back(c);
      for (int i = 0; i < m; ++i) {
        Comp d;
        d.z = L.dphi + a * m + i;
        for (int l = 0; l < m; ++l) d.dz.push_back(L.ddphi + (a * m + i) * m + l);
        d.rhs = {L.rdphi + a * m + i};
        dp.comps.push_back(d);
      }
    }
    out.push_back(p);
    out.push_back(dp);
  }
  for (int j = 0; j <= k - 2; ++j) {
    BlockSpec ub{"u" + std::to_string(j) + sfx, {}};
    for (int a : as) {
      Comp c;
      c.z = L.u[j] + a;
      for (int i = 0; i < m; ++i) c.dz.push_back(L.v[j] + a * m + i);
      if (j < k - 2) {
        c.rhs = {L.uA[j] + a};
      } else {
        c.rhs = {L.Fk + a};
        c.src = L.tauk + a;
      }
      ub.comps.push_back(c);
    }
    out.push_back(ub);
    if (j == k - 2) break;
    BlockSpec vb{"v" + std::to_string(j) + sfx, {}};
    for (int a : as)
      for (int i = 0; i < m; ++i) {
        Comp c;
        c.z = L.v[j] + a * m + i;
        for (int l = 0; l < m; ++l) c.dz.push_back(L.dv[j] + (a * m + i) * m + l);
        c.rhs = {L.duA[j] + a * m + i, L.commv[j] + a * m + i};
        vb.comps.push_back(c);
      }
    out.push_back(vb);
  }
  return out;
}

template <class Value>
BlockSet assemble(const GridMap& phi, const Rows& rows, ReducedKind kind, int k, Value&& value) {
  BlockSet s;
  s.kind = kind;
  s.k = k;
  s.grid = phi.grid;
  const std::size_t N = rows.a.nodes;
  for (const auto& spec : block_specs(rows.L, kind)) {
    Block b;
    b.name = spec.name;
    b.width = static_cast<int>(spec.comps.size());
    b.values.resize(N * b.width);
    for (std::size_t node = 0; node < N; ++node) {
      const double* row = rows.a.row(node);
      for (int c = 0; c < b.width; ++c) b.values[node * b.width + c] = value(spec.comps[c], row);
    }
    for (const auto& c : spec.comps) {
      std::vector<double> j(phi.m(), 0.0);
      if (c.jump_of >= 0)
        for (int i = 0; i < phi.m(); ++i) j[i] = phi.phi[c.jump_of].jump(i);
      b.jumps.push_back(j);
    }
    s.blocks.push_back(std::move(b));
  }
  return s;
}

double rhs_value(const Comp& c, const double* row) {
  double s = 0;
  for (int o : c.rhs) s += row[o];
  return s;
}

// Max-component numerator and ℓ1 denominator over a set of components,
// optionally of the difference of two rows.
struct Pair {
  const double* a;
  const double* b;
  double d(int o) const { return b ? a[o] - b[o] : a[o]; }
  double l1(const std::vector<int>& offs) const {
    double s = 0;
    for (int o : offs) s += std::abs(d(o));
    return s;
  }
  double maxabs(const std::vector<int>& offs) const {
    double s = 0;
    for (int o : offs) s = std::max(s, std::abs(d(o)));
    return s;
  }
};

std::vector<int> cat(std::initializer_list<std::vector<int>> parts) {
  std::vector<int> r;
  for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return r;
}

void full_ratio_arrays(const std::vector<BlockSpec>& specs, const Pair& p, double& num, double& den) {
  num = 0;
  den = 0;
  for (const auto& s : specs)
    for (const auto& c : s.comps) {
      double r = 0;
      for (int o : c.rhs) r += p.d(o);
      num = std::max(num, std::abs(r));
      den += std::abs(p.d(c.z) - (p.b ? 0.0 : c.shift));
      for (int o : c.dz) den += std::abs(p.d(o));
    }
}

std::vector<char> window_mask(const Grid& g, const Window& w, bool inside) {
  std::vector<char> m(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) m[k] = w.contains(g, k) == inside;
  return m;
}

}  // namespace

ReducedVector build_reduced(const GridMap& phi, int k, ReducedKind kind, bool covariant_v, int workers) {
  require_kind(phi, kind);
  Rows rows = evaluate_rows(phi, k, covariant_v, workers);
  ReducedVector r;
  static_cast<BlockSet&>(r) =
      assemble(phi, rows, kind, k, [](const Comp& c, const double* row) { return row[c.z] - c.shift; });
  return r;
}

BlockRHS build_rhs(const GridMap& phi, int k, ReducedKind kind, int workers) {
  require_kind(phi, kind);
  Rows rows = evaluate_rows(phi, k, false, workers);
  BlockRHS r;
  static_cast<BlockSet&>(r) = assemble(phi, rows, kind, k, rhs_value);
  return r;
}

GridField residual(const GridMap& phi, int k, ReducedKind kind, int workers) {
  require_kind(phi, kind);
  if (!phi.dom.gridable()) throw CapabilityError("the residual needs a gridable domain");
  Rows rows = evaluate_rows(phi, k, false, workers);
  const auto specs = block_specs(rows.L, kind);
  const std::size_t N = rows.a.nodes;
  std::vector<double> sq(N, 0.0);
  for (const auto& s : specs)
    for (const auto& c : s.comps) {
      std::vector<double> z(N);
      for (std::size_t node = 0; node < N; ++node) z[node] = rows.a.at(node, c.z);
      std::vector<double> jump(phi.m(), 0.0);
      if (c.jump_of >= 0)
        for (int i = 0; i < phi.m(); ++i) jump[i] = phi.phi[c.jump_of].jump(i);
      GridField lz = domain_laplacian(GridField(phi.grid, std::move(z), jump), phi.dom, workers);
      for (std::size_t node = 0; node < N; ++node) {
        const double* row = rows.a.row(node);
        double t = lz[node] - rhs_value(c, row) - (c.src >= 0 ? row[c.src] : 0.0);
        sq[node] += t * t;
      }
    }
  for (auto& v : sq) v = std::sqrt(v);
  return GridField(phi.grid, std::move(sq));
}

RatioReport sup_ratio(const std::string& lemma, const std::vector<double>& num, const std::vector<double>& den,
                      const std::vector<char>& include, const Grid& g, bool require_nonempty) {
  RatioReport r;
  r.lemma = lemma;
  r.grid_shape = g.shape();
  std::size_t inside = 0, kept = 0;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (!include[k]) continue;
    ++inside;
    if (!(den[k] >= kDenominatorFloor)) continue;
    ++kept;
    const double q = num[k] / den[k];
    if (kept == 1 || q > r.sup_ratio) {
      r.sup_ratio = q;
      r.argmax = k;
    }
  }
  r.nodes = inside;
  r.masked_fraction = inside ? static_cast<double>(inside - kept) / inside : 1.0;
  if (kept == 0 && require_nonempty)
    throw DegenerateError(lemma + ": every denominator is below " + std::to_string(kDenominatorFloor) +
                          " on the " + std::to_string(inside) + " window nodes (the reduced vector vanishes)");
  return r;
}

RatioReport aronszajn_ratio(const GridMap& phi, int k, ReducedKind kind, const Window& w, int workers) {
  require_kind(phi, kind);
  w.validate(*phi.grid);
  Rows rows = evaluate_rows(phi, k, false, workers);
  const auto specs = block_specs(rows.L, kind);
  const std::size_t N = rows.a.nodes;
  std::vector<double> num(N), den(N);
  for (std::size_t node = 0; node < N; ++node)
    full_ratio_arrays(specs, Pair{rows.a.row(node), nullptr}, num[node], den[node]);
  return sup_ratio(std::string("aronszajn-") + to_string(kind), num, den, window_mask(*phi.grid, w, true),
                   *phi.grid, true);
}

namespace {

// sup over j of a per-j ratio family; the report of the largest member wins.
template <class Fn>
RatioReport max_over_j(const std::string& lemma, int count, const Grid& g, const std::vector<char>& mask,
                       std::size_t N, Fn&& fn) {
  RatioReport best;
  best.lemma = lemma;
  best.grid_shape = g.shape();
  for (int j = 0; j < count; ++j) {
    std::vector<double> num(N), den(N);
    for (std::size_t node = 0; node < N; ++node) fn(j, node, num[node], den[node]);
    RatioReport r = sup_ratio(lemma, num, den, mask, g, false);
    if (j == 0 || r.sup_ratio > best.sup_ratio) best = r;
  }
  return best;
}

template <class Fn>
RatioReport single(const std::string& lemma, const Grid& g, const std::vector<char>& mask, std::size_t N, Fn&& fn) {
  return max_over_j(lemma, 1, g, mask, N, [&](int, std::size_t node, double& a, double& b) { fn(node, a, b); });
}

void require_same_chart(const GridMap& a, const GridMap& b) {
  if (a.grid->shape() != b.grid->shape() || a.grid->period() != b.grid->period() || a.grid->lo() != b.grid->lo())
    throw ChartError("the two maps live on different grids");
  if (a.tgt.kind() != b.tgt.kind() || a.tgt.dim() != b.tgt.dim() || a.dom.kind() != b.dom.kind() ||
      a.dom.dim() != b.dom.dim())
    throw ChartError("the two maps use different domain or target charts");
  for (int c = 0; c < a.n(); ++c)
    for (int i = 0; i < a.m(); ++i)
      if (std::abs(a.phi[c].jump(i) - b.phi[c].jump(i)) > 1e-12)
        throw ChartError("the two maps wind differently in component " + std::to_string(c + 1));
}

}  // namespace

PairReport pair_difference_bound(const GridMap& phi, const GridMap& psi, int k, const Window& w, int workers) {
  require_same_chart(phi, psi);
  w.validate(*phi.grid);
  Rows ra = evaluate_rows(phi, k, false, workers);
  Rows rb = evaluate_rows(psi, k, false, workers);
  const Layout& L = ra.L;
  const Grid& g = *phi.grid;
  const std::size_t N = ra.a.nodes;
  const auto mask = window_mask(g, w, true);
  std::vector<int> all;
  for (int a = 0; a < L.n; ++a) all.push_back(a);
  auto P = [&](std::size_t node) { return Pair{ra.a.row(node), rb.a.row(node)}; };
  const auto gphi = L.sec(L.phi, all), gdphi = L.form(L.dphi, all),
             gddphi = L.form2(L.ddphi, all), gu0 = L.sec(L.u[0], all), gv0 = L.form(L.v[0], all);
  std::vector<int> gu_all, gv_all;
  for (int j = 0; j <= k - 2; ++j) {
    gu_all = cat({gu_all, L.sec(L.u[j], all)});
    gv_all = cat({gv_all, L.form(L.v[j], all)});
  }

  PairReport out;
  const auto specs = block_specs(L, ReducedKind::extended);
  std::vector<double> num(N), den(N);
  for (std::size_t node = 0; node < N; ++node) full_ratio_arrays(specs, P(node), num[node], den[node]);
  out.full = sup_ratio("pair/full", num, den, mask, g, true);

  out.lemmas.push_back(single("pair/laplace-phi", g, mask, N, [&](std::size_t node, double& a, double& b) {
    auto p = P(node);
    a = p.maxabs(L.sec(L.rphi, all));
    b = p.l1(cat({gphi, gdphi, gu0}));
  }));
  out.lemmas.push_back(single("pair/differential", g, mask, N, [&](std::size_t node, double& a, double& b) {
    auto p = P(node);
    a = p.maxabs(L.form(L.rdphi, all));
    b = p.l1(cat({gphi, gdphi, gddphi, gu0, gv0}));
  }));
  if (k >= 3) {
    out.lemmas.push_back(max_over_j("pair/A", k - 2, g, mask, N, [&](int j, std::size_t node, double& a, double& b) {
      auto p = P(node);
      a = p.maxabs(L.sec(L.uA[j], all));
      b = p.l1(cat({gphi, gdphi, gu0, L.sec(L.u[j], all), L.sec(L.u[j + 1], all), L.form(L.v[j], all)}));
    }));
    out.lemmas.push_back(max_over_j("pair/dA", k - 2, g, mask, N, [&](int j, std::size_t node, double& a, double& b) {
      auto p = P(node);
      a = p.maxabs(L.form(L.dA[j], all));
      b = p.l1(cat({gphi, gdphi, gddphi, gu0, gv0, L.sec(L.u[j], all), L.form(L.v[j], all), L.form2(L.dv[j], all),
                    L.sec(L.u[j + 1], all)}));
    }));
  }
  out.lemmas.push_back(single("pair/F", g, mask, N, [&](std::size_t node, double& a, double& b) {
    auto p = P(node);
    a = p.maxabs(L.sec(L.Fk, all));
    b = p.l1(cat({gphi, gdphi, gu_all, gv_all}));
  }));
  return out;
}

EquatorReport equator_bound(const GridMap& phi, int k, const Window& w, int workers) {
  require_kind(phi, ReducedKind::equator);
  const Grid& g = *phi.grid;
  w.validate(g);
  EquatorReport out;
  const int n = phi.n();
  for (std::size_t node = 0; node < g.size(); ++node)
    if (w.contains(g, node))
      out.f_max_on_window = std::max(out.f_max_on_window, std::abs(phi.phi[n - 1][node] - std::numbers::pi / 2));
  if (out.f_max_on_window > kEquatorTolerance)
    throw PreconditionError("the window is not equatorial: max|phi^n - pi/2| = " +
                            std::to_string(out.f_max_on_window));

  Rows rows = evaluate_rows(phi, k, false, workers);
  const Layout& L = rows.L;
  const std::size_t N = rows.a.nodes;
  const auto specs = block_specs(L, ReducedKind::equator);

  out.erosion = phi.mode == EvalMode::grid_fd ? k * (g.stencil_order() / 2) : 0;
  const Window inner = w.eroded(g, out.erosion);
  for (std::size_t node = 0; node < N; ++node) {
    const double* row = rows.a.row(node);
    double y = 0;
    for (const auto& s : specs)
      for (const auto& c : s.comps) y = std::max(y, std::abs(row[c.z] - c.shift));
    if (inner.contains(g, node)) out.y_max_on_window = std::max(out.y_max_on_window, y);
    if (!w.contains(g, node)) out.y_max_off_window = std::max(out.y_max_off_window, y);
  }
  if (out.y_max_on_window > kEquatorTolerance)
    throw ContractError("y does not vanish on the equatorial window: max|y| = " + std::to_string(out.y_max_on_window));

  const auto mask = window_mask(g, w, false);
  const std::vector<int> nn{n - 1};
  const int f = L.phi + n - 1;
  auto df = L.form(L.dphi, nn), ddf = L.form2(L.ddphi, nn);
  std::vector<int> gu, gv;
  for (int j = 0; j <= k - 2; ++j) {
    gu = cat({gu, L.sec(L.u[j], nn)});
    gv = cat({gv, L.form(L.v[j], nn)});
  }
  auto P = [&](std::size_t node) { return Pair{rows.a.row(node), nullptr}; };
  auto fabs_at = [&](const Pair& p) { return std::abs(p.d(f) - std::numbers::pi / 2); };

  std::vector<double> num(N), den(N);
  for (std::size_t node = 0; node < N; ++node) full_ratio_arrays(specs, P(node), num[node], den[node]);
  out.full = sup_ratio("equator/full", num, den, mask, g, false);

  out.lemmas.push_back(single("equator/laplace-f", g, mask, N, [&](std::size_t node, double& a, double& b) {
    auto p = P(node);
    a = std::abs(p.d(L.rphi + n - 1));
    b = fabs_at(p) + p.l1(L.sec(L.u[0], nn));
  }));
  out.lemmas.push_back(single("equator/laplace-df", g, mask, N, [&](std::size_t node, double& a, double& b) {
    auto p = P(node);
    a = p.maxabs(L.form(L.rdphi, nn));
    b = fabs_at(p) + p.l1(cat({df, ddf, L.form(L.v[0], nn)}));
  }));
  if (k >= 3) {
    out.lemmas.push_back(max_over_j("equator/A", k - 2, g, mask, N,
                                    [&](int j, std::size_t node, double& a, double& b) {
                                      auto p = P(node);
                                      a = std::abs(p.d(L.A[j] + n - 1));
                                      b = fabs_at(p) + p.l1(df);
                                    }));
    out.lemmas.push_back(max_over_j("equator/dA", k - 2, g, mask, N,
                                    [&](int j, std::size_t node, double& a, double& b) {
                                      auto p = P(node);
                                      a = p.maxabs(L.form(L.dA[j], nn));
                                      b = fabs_at(p) + p.l1(cat({df, ddf}));
                                    }));
  }
  out.lemmas.push_back(single("equator/F", g, mask, N, [&](std::size_t node, double& a, double& b) {
    auto p = P(node);
    a = std::abs(p.d(L.Fk + n - 1));
    b = fabs_at(p) + p.l1(cat({df, ddf, gu, gv}));
  }));
  return out;
}

}  // namespace polyharm
