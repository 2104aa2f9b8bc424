#include "polyharm/tensor.hpp"

#include "polyharm/scalar.hpp"

namespace polyharm {

std::vector<Jet> christoffel_from_metric(const std::vector<Jet>& g, int m) {
  std::vector<Jet> gi = inverse_spd(g, m);
  // dg[(l*m + i)*m + j] = ∂_l g_{ij}
  std::vector<Jet> dg;
  dg.reserve(static_cast<std::size_t>(m) * m * m);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dg.push_back(partial(g[i * m + j], l));
  std::vector<Jet> first;  // Γ_{lij} = ½(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij})
  first.reserve(dg.size());
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        first.push_back((dg[(i * m + l) * m + j] + dg[(j * m + l) * m + i] - dg[(l * m + i) * m + j]) * 0.5);
  std::vector<Jet> G;
  G.reserve(dg.size());
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet s = like(first[0], 0.0);
        s.truncate(first[0].degree());
        for (int l = 0; l < m; ++l) add_mul(s, gi[k * m + l], first[(l * m + i) * m + j]);
        G.push_back(std::move(s));
      }
  return G;
}

std::vector<Jet> riemann_from_christoffel(const std::vector<Jet>& G, int n) {
  auto g = [&](int a, int b, int c) -> const Jet& { return G[(a * n + b) * n + c]; };
  std::vector<Jet> dG;  // dG[idx*n + e] = ∂_e Γ
  dG.reserve(G.size() * n);
  for (const auto& x : G)
    for (int e = 0; e < n; ++e) dG.push_back(partial(x, e));
  const int d1 = G[0].degree() - 1;
  std::vector<Jet> R;
  R.reserve(static_cast<std::size_t>(pow_int(n, 4)));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          Jet r = dG[((a * n + c) * n + d) * n + b] - dG[((a * n + b) * n + d) * n + c];
          r.truncate(d1);
          for (int mu = 0; mu < n; ++mu) {
            if (!g(a, b, mu).is_zero() && !g(mu, c, d).is_zero()) add_mul(r, g(a, b, mu), g(mu, c, d));
            if (!g(a, c, mu).is_zero() && !g(mu, b, d).is_zero()) r -= g(a, c, mu) * g(mu, b, d);
          }
          R.push_back(std::move(r));
        }
  return R;
}

std::vector<Jet> riemann_constant_curvature(const std::vector<Jet>& h, double c, int n) {
  Jet zero = like(h[0], 0.0);
  zero.truncate(h[0].degree());
  std::vector<Jet> R(static_cast<std::size_t>(pow_int(n, 4)), zero);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc) {
          Jet& r = R[((a * n + d) * n + b) * n + cc];
          if (a == b) r += h[cc * n + d] * c;
          if (a == cc) r -= h[b * n + d] * c;
        }
  return R;
}

std::vector<Jet> ricci_from_riemann(const std::vector<Jet>& R, int n) {
  std::vector<Jet> Ric;
  Ric.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = R[((0 * n + j) * n + 0) * n + i];
      for (int k = 1; k < n; ++k) s += R[((k * n + j) * n + k) * n + i];
      Ric.push_back(std::move(s));
    }
  return Ric;
}

std::vector<Jet> covariant_derivative(const std::vector<Jet>& T, int rank, const std::vector<Jet>& G, int n) {
  auto g = [&](int a, int b, int c) -> const Jet& { return G[(a * n + b) * n + c]; };
  const int lower = pow_int(n, rank);
  std::vector<Jet> out;
  out.reserve(T.size() * n);
  std::vector<int> mu(rank);
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < lower; ++l) {
      int rem = l;
      for (int p = rank - 1; p >= 0; --p) {
        mu[p] = rem % n;
        rem /= n;
      }
      const Jet& t = T[a * lower + l];
      for (int e = 0; e < n; ++e) {
        Jet r = partial(t, e);
        for (int s = 0; s < n; ++s) {
          const Jet& ts = T[s * lower + l];
          if (!g(a, e, s).is_zero() && !ts.is_zero()) add_mul(r, g(a, e, s), ts);
        }
        int place = 1;
        for (int p = rank - 1; p >= 0; --p) {
          for (int s = 0; s < n; ++s) {
            const Jet& gs = g(s, e, mu[p]);
            if (gs.is_zero()) continue;
            const Jet& ts = T[a * lower + l + (s - mu[p]) * place];
            if (ts.is_zero()) continue;
            r -= gs * ts;
          }
          place *= n;
        }
        out.push_back(std::move(r));
      }
    }
  return out;
}

std::vector<Jet> s_tensor(const std::vector<Jet>& G, int n) {
  auto g = [&](int a, int b, int c) -> const Jet& { return G[(a * n + b) * n + c]; };
  std::vector<Jet> S;
  S.reserve(static_cast<std::size_t>(pow_int(n, 4)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int w = 0; w < n; ++w)
        for (int t = 0; t < n; ++t) {
          Jet s = partial(g(a, b, t), w) + partial(g(a, w, t), b);
          for (int c = 0; c < n; ++c) {
            if (!g(c, b, t).is_zero() && !g(a, w, c).is_zero()) add_mul(s, g(c, b, t), g(a, w, c));
            if (!g(c, w, t).is_zero() && !g(a, b, c).is_zero()) add_mul(s, g(c, w, t), g(a, b, c));
          }
          S.push_back(s * 0.5);
        }
  return S;
}

std::vector<Jet> c_tensor(const std::vector<Jet>& G, const std::vector<Jet>& S, int n) {
  auto g = [&](int a, int b, int c) -> const Jet& { return G[(a * n + b) * n + c]; };
  std::vector<Jet> C;
  C.reserve(S.size());
  for (int a = 0; a < n; ++a)
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s)
        for (int v = 0; v < n; ++v) {
          Jet c = -S[((a * n + t) * n + s) * n + v];
          for (int mu = 0; mu < n; ++mu) add_mul(c, g(mu, t, s), g(a, mu, v));
          C.push_back(std::move(c));
        }
  return C;
}

std::vector<Jet> e_tensor(const std::vector<Jet>& R, const std::vector<Jet>& G, int n) {
  auto g = [&](int a, int b, int c) -> const Jet& { return G[(a * n + b) * n + c]; };
  auto r = [&](int a, int d, int b, int c) -> const Jet& { return R[((a * n + d) * n + b) * n + c]; };
  Jet zero = like(R[0], 0.0);
  zero.truncate(std::min(R[0].degree(), G[0].degree()));
  std::vector<Jet> E;
  E.reserve(static_cast<std::size_t>(pow_int(n, 5)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int t = 0; t < n; ++t)
          for (int h = 0; h < n; ++h) {
            Jet e = zero;
            for (int c = 0; c < n; ++c) {
              if (!r(a, b, c, d).is_zero() && !g(c, t, h).is_zero()) add_mul(e, r(a, b, c, d), g(c, t, h));
              if (!r(a, b, c, t).is_zero() && !g(c, d, h).is_zero()) add_mul(e, r(a, b, c, t), g(c, d, h));
            }
            E.push_back(std::move(e));
          }
  return E;
}

void truncate_all(std::vector<Jet>& v, int degree) {
  for (auto& x : v) x.truncate(degree);
}

std::vector<double> values_of(const std::vector<Jet>& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x.value());
  return r;
}

}  // namespace polyharm
