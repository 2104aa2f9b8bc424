#include "polyharm/assemble.hpp"

#include <algorithm>

#include "polyharm/parallel.hpp"
#include "polyharm/tensor.hpp"

namespace polyharm {

std::vector<Jet> coordinate_jets(int m, int degree, const double* x0) {
  const JetSpace& sp = JetSpace::get(m, degree);
  std::vector<Jet> x;
  for (int i = 0; i < m; ++i) x.push_back(Jet::variable(sp, i, x0[i]));
  return x;
}

Composer::Composer(const std::vector<Jet>& dphi) : d_(dphi) {}

const Jet& Composer::monomial(const JetSpace& ysp, int idx) {
  if (ysp_ != &ysp) {
    // monomials depend only on exponents; spaces share the graded order, so
    // restart only when a larger space is seen
    if (!ysp_ || ysp.degree() > ysp_->degree()) {
      ysp_ = &ysp;
      mono_.clear();
      have_.clear();
    }
  }
  if (mono_.empty()) {
    mono_.resize(ysp_->count(ysp_->degree()));
    have_.assign(mono_.size(), 0);
    mono_[0] = like(d_[0], 1.0);
    have_[0] = 1;
  }
  if (!have_[idx]) {
    const int n = ysp_->vars();
    // find v with exponent > 0 and the index of idx / y_v
    std::vector<int> e(n);
    for (int v = 0; v < n; ++v) e[v] = ysp_->exponent(idx, v);
    int v = 0;
    while (e[v] == 0) ++v;
    e[v] -= 1;
    const int parent = ysp_->index(e.data());
    mono_[idx] = monomial(*ysp_, parent) * d_[v];
    have_[idx] = 1;
  }
  return mono_[idx];
}

Jet Composer::operator()(const Jet& T) {
  const JetSpace& ysp = *T.space();
  const int dx = d_[0].degree();
  const int dres = std::min(T.degree(), dx);
  Jet r(*d_[0].space(), dres, 0.0);
  auto& rc = r.coeffs();
  const int nc = static_cast<int>(rc.size());
  const int ny = ysp.count(T.degree());
  for (int idx = 0; idx < ny; ++idx) {
    const double c = T.coeff(idx);
    if (c == 0.0) continue;
    if (ysp.deg(idx) > dres) break;
    const Jet& mo = monomial(ysp, idx);
    const auto& mc = mo.coeffs();
    for (int j = 0; j < nc; ++j) rc[j] += c * mc[j];
  }
  return r;
}

std::vector<Jet> Composer::operator()(const std::vector<Jet>& T) {
  std::vector<Jet> r;
  r.reserve(T.size());
  for (const auto& t : T) r.push_back((*this)(t));
  return r;
}

LocalRequest point_request(const Needs& nd) {
  const int D = nd.degree;
  LocalRequest q;
  q.gamma = std::max(D - 2, 0);
  q.S = nd.S ? std::max(D - 2, 0) : -1;
  q.R = nd.R || nd.dR || nd.ddR ? std::max(D - 2, 0) : -1;
  q.dR = nd.dR ? std::min(std::max(D - 2, 0), 2) : -1;
  q.ddR = nd.ddR ? 1 : -1;
  return q;
}

LocalRequest grid_request(const Needs& nd) {
  LocalRequest q;
  q.gamma = 0;
  q.S = nd.S ? 0 : -1;
  q.R = nd.R || nd.dR || nd.ddR ? 0 : -1;
  q.dR = nd.dR ? 0 : -1;
  q.ddR = nd.ddR ? 0 : -1;
  return q;
}

int required_target_order(const Needs& nd, EvalMode mode, const TargetModel& tgt) {
  return tgt.christoffel_order(mode == EvalMode::grid_fd ? grid_request(nd) : point_request(nd));
}

namespace {

template <class F>
void fill_domain(EngineData<F>& d, const std::vector<Jet>& g, int m, bool ricci,
                 const std::function<F(const Jet&)>& cast) {
  std::vector<Jet> gi = inverse_spd(g, m);
  std::vector<Jet> G = christoffel_from_metric(g, m);
  std::vector<Jet> trG;
  for (int k = 0; k < m; ++k) {
    Jet s = like(G[0], 0.0);
    s.truncate(G[0].degree());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) add_mul(s, gi[i * m + j], G[(k * m + i) * m + j]);
    trG.push_back(std::move(s));
  }
  for (const auto& x : gi) d.ginv.push_back(cast(x));
  for (const auto& x : G) d.Gdom.push_back(cast(x));
  for (const auto& x : trG) d.trG.push_back(cast(x));
  for (int l = 0; l < m; ++l)
    for (int ij = 0; ij < m * m; ++ij) d.dginv.push_back(cast(partial(gi[ij], l)));
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k) d.dtrG.push_back(cast(partial(trG[k], l)));
  if (ricci) {
    std::vector<Jet> Ric = ricci_from_riemann(riemann_from_christoffel(G, m), m);
    for (const auto& x : Ric) d.ricci_dom.push_back(cast(x));
  }
}

}  // namespace

Engine<Jet> point_engine(const DomainModel& dom, const TargetModel& tgt, const std::vector<Jet>& phi,
                         const double* x0, const Needs& nd) {
  const int m = dom.dim(), n = tgt.dim();
  if (static_cast<int>(phi.size()) != n) throw ConfigError("map components do not match the target dimension");
  if (phi[0].space()->vars() != m) throw ConfigError("map jets do not match the domain dimension");
  const int D = phi[0].degree();
  EngineData<Jet> d;
  d.m = m;
  d.n = n;
  d.phi = phi;
  // domain data one degree above φ so Γ keeps pace with ∂φ
  {
    auto x = coordinate_jets(m, D + 1, x0);
    auto g = dom.metric(x);
    const JetSpace& sp = JetSpace::get(m, D);
    std::function<Jet(const Jet&)> cast = [&](const Jet& a) {
      // re-express in the degree-D space of φ (prefix of the graded order)
      Jet r(sp, std::min(a.degree(), D), 0.0);
      auto& rc = r.coeffs();
      for (std::size_t i = 0; i < rc.size(); ++i) rc[i] = a.coeff(static_cast<int>(i));
      return r;
    };
    fill_domain<Jet>(d, g, m, nd.ricci, cast);
  }
  std::vector<double> y0(n);
  std::vector<Jet> delta;
  for (int a = 0; a < n; ++a) {
    y0[a] = phi[a].value();
    delta.push_back(phi[a] - y0[a]);
  }
  Needs q = nd;
  q.degree = D;
  TargetLocal L = tgt.local(y0.data(), point_request(q));
  Composer comp(delta);
  d.h = comp(L.h);
  d.gamma = comp(L.gamma);
  if (!L.S.empty()) d.S = comp(L.S);
  if (!L.R.empty()) d.R = comp(L.R);
  d.dR_zero = L.dR_zero;
  if (!L.dR.empty()) d.dR = comp(L.dR);
  if (!L.ddR.empty()) d.ddR = comp(L.ddR);
  return Engine<Jet>(std::move(d));
}

Engine<Jet> point_engine(const DomainModel& dom, const TargetModel& tgt, const MapExpr& map, const double* x0,
                         const Needs& nd) {
  auto x = coordinate_jets(dom.dim(), nd.degree, x0);
  return point_engine(dom, tgt, map.eval(x), x0, nd);
}

void fill_domain_grid(EngineData<GridField>& d, const DomainModel& dom, const std::shared_ptr<const Grid>& grid,
                      bool ricci, int workers) {
  if (!dom.gridable()) throw CapabilityError("domain " + dom.kind_name() + " cannot carry a grid");
  const int m = grid->dim();
  const std::size_t N = grid->size();
  std::vector<std::vector<double>> ginv(m * m, std::vector<double>(N)), G(m * m * m, std::vector<double>(N)),
      trG(m, std::vector<double>(N)), dginv(m * m * m, std::vector<double>(N)), dtrG(m * m, std::vector<double>(N)),
      ric(ricci ? m * m : 0, std::vector<double>(N));
  parallel_for(N, workers, [&](std::size_t k) {
    std::vector<double> x(m);
    grid->coords(k, x.data());
    auto xj = coordinate_jets(m, 3, x.data());
    EngineData<double> e;
    std::function<double(const Jet&)> cast = [](const Jet& a) { return a.value(); };
    fill_domain<double>(e, dom.metric(xj), m, ricci, cast);
    for (int i = 0; i < m * m; ++i) ginv[i][k] = e.ginv[i];
    for (int i = 0; i < m * m * m; ++i) G[i][k] = e.Gdom[i];
    for (int i = 0; i < m; ++i) trG[i][k] = e.trG[i];
    for (int i = 0; i < m * m * m; ++i) dginv[i][k] = e.dginv[i];
    for (int i = 0; i < m * m; ++i) dtrG[i][k] = e.dtrG[i];
    for (std::size_t i = 0; i < ric.size(); ++i) ric[i][k] = e.ricci_dom[i];
  });
  auto wrap = [&](std::vector<std::vector<double>>& src, std::vector<GridField>& dst) {
    for (auto& v : src) dst.emplace_back(grid, std::move(v));
  };
  wrap(ginv, d.ginv);
  wrap(G, d.Gdom);
  wrap(trG, d.trG);
  wrap(dginv, d.dginv);
  wrap(dtrG, d.dtrG);
  wrap(ric, d.ricci_dom);
}

GridField domain_laplacian(const GridField& f, const DomainModel& dom, int workers) {
  EngineData<GridField> d;
  fill_domain_grid(d, dom, f.grid(), false, workers);
  return laplace_beltrami(f, d.ginv, d.trG, f.grid()->dim());
}

Engine<GridField> grid_engine(const GridMap& phi, const Needs& nd, int workers) {
  const auto& grid = phi.grid;
  const int m = phi.m(), n = phi.n();
  const std::size_t N = grid->size();
  if (!phi.dom.gridable()) throw CapabilityError("domain " + phi.dom.kind_name() + " cannot carry a grid");
  EngineData<GridField> d;
  d.m = m;
  d.n = n;
  d.phi = phi.phi;

  fill_domain_grid(d, phi.dom, grid, nd.ricci, workers);

  // target data at the node values
  const LocalRequest q = grid_request(nd);
  const std::size_t n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  std::vector<std::vector<double>> h(n2, std::vector<double>(N)), gam(n3, std::vector<double>(N)),
      S(q.S >= 0 ? n4 : 0, std::vector<double>(N)), R(q.R >= 0 ? n4 : 0, std::vector<double>(N));
  const bool sym = phi.tgt.locally_symmetric();
  std::vector<std::vector<double>> dR(q.dR >= 0 && !sym ? n5 : 0, std::vector<double>(N)),
      ddR(q.ddR >= 0 && !sym ? n6 : 0, std::vector<double>(N));
  parallel_for(N, workers, [&](std::size_t k) {
    std::vector<double> y = phi.value(k);
    TargetLocal L = phi.tgt.local(y.data(), q);
    auto put = [k](const std::vector<Jet>& src, std::vector<std::vector<double>>& dst) {
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i][k] = src[i].value();
    };
    put(L.h, h);
    put(L.gamma, gam);
    put(L.S, S);
    put(L.R, R);
    put(L.dR, dR);
    put(L.ddR, ddR);
  });
  auto wrap = [&](std::vector<std::vector<double>>& src, std::vector<GridField>& dst) {
    for (auto& v : src) dst.emplace_back(grid, std::move(v));
  };
  wrap(h, d.h);
  wrap(gam, d.gamma);
  wrap(S, d.S);
  wrap(R, d.R);
  wrap(dR, d.dR);
  wrap(ddR, d.ddR);
  d.dR_zero = sym;
  return Engine<GridField>(std::move(d));
}

}  // namespace polyharm
