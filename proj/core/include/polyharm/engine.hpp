#pragma once

// Pullback-bundle calculus for a map φ between coordinate charts.
//
// Engine<F> is generic over the field type: F = Jet evaluates at one domain
// point with exact Taylor arithmetic, F = GridField evaluates on a periodic
// grid with finite differences.  Sections of φ⁻¹TN are n-vectors of F; section
// valued 1-forms are n*m vectors indexed a*m + i.  All frame sums are
// g^{ij}-contractions in coordinates.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "polyharm/errors.hpp"
#include "polyharm/grid.hpp"
#include "polyharm/jet.hpp"
#include "polyharm/scalar.hpp"
#include "polyharm/tensor.hpp"

namespace polyharm {

template <class F>
F laplace_beltrami(const F& f, const std::vector<F>& ginv, const std::vector<F>& trG, int m) {
  F r = like(f, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const F& g = ginv[i * m + j];
      if (is_zero(g)) continue;
      F t = partial2(f, i, j) * g;
      r -= (i == j) ? t : t * 2.0;
    }
  for (int k = 0; k < m; ++k)
    if (!is_zero(trG[k])) add_mul(r, trG[k], partial(f, k));
  return r;
}

template <class F>
struct EngineData {
  int m = 0;
  int n = 0;
  std::vector<F> phi;        // n
  std::vector<F> ginv;       // m*m
  std::vector<F> Gdom;       // m^3, Γ^k_{ij} of the domain
  std::vector<F> trG;        // m, g^{ij}Γ^k_{ij}
  std::vector<F> dginv;      // m^3, ∂_l g^{ij} at (l*m + i)*m + j
  std::vector<F> dtrG;       // m*m, ∂_l trG^k at l*m + k
  std::vector<F> ricci_dom;  // m*m, optional
  std::vector<F> h;          // n*n along φ
  std::vector<F> gamma;      // n^3 along φ
  std::vector<F> S;          // n^4 along φ
  std::vector<F> R;          // n^4 along φ
  std::vector<F> dR;         // n^5 along φ, empty when dR_zero
  std::vector<F> ddR;        // n^6 along φ, empty when dR_zero
  bool dR_zero = false;
};

template <class F>
class Engine {
 public:
  using Sec = std::vector<F>;
  using Form = std::vector<F>;

  explicit Engine(EngineData<F> d) : d_(std::move(d)), m_(d_.m), n_(d_.n) { setup(); }

  int m() const { return m_; }
  int n() const { return n_; }
  const EngineData<F>& data() const { return d_; }
  F zero() const { return like(d_.phi[0], 0.0); }
  Sec zero_sec() const { return Sec(n_, zero()); }

  // ---------------------------------------------------------------- scalars

  F ginv(int i, int j) const { return d_.ginv[i * m_ + j]; }
  const F& dphi(int a, int i) const { return dphi_[a * m_ + i]; }
  const Form& dphi() const { return dphi_; }

  // Geometer's Laplace-Beltrami: Δf = −g^{ij}∂_i∂_j f + g^{ij}Γ^k_{ij}∂_k f.
  F lap(const F& f) const { return laplace_beltrami(f, d_.ginv, d_.trG, m_); }

  Sec lap_sec(const Sec& s) const {
    Sec r;
    r.reserve(n_);
    for (const auto& x : s) r.push_back(lap(x));
    return r;
  }

  Form partials(const Sec& s) const {
    Form r;
    r.reserve(static_cast<std::size_t>(n_) * m_);
    for (int a = 0; a < n_; ++a)
      for (int i = 0; i < m_; ++i) r.push_back(partial(s[a], i));
    return r;
  }

  // Δφ^a, component-wise.
  const Sec& lap_phi() const { return lapphi_; }
  // ⟨dφ^b, dφ^c⟩ = g^{ij}φ^b_iφ^c_j.
  const F& p2(int b, int c) const { return p2_[b * n_ + c]; }
  // g^{ij}φ^d_j.
  const F& phi_up(int d, int i) const { return phiup_[d * m_ + i]; }

  // ---------------------------------------------------------------- first order

  // (∇̄σ)^a_i = ∂_iσ^a + Γ^a_{bc}φ^b_iσ^c.
  Form cov(const Sec& s) const { return cov(s, partials(s)); }
  Form cov(const Sec& s, const Form& ds) const {
    Form r = ds;
    for (const auto& e : nzM_) add_mul(r[e[0] * m_ + e[2]], M_[(e[0] * n_ + e[1]) * m_ + e[2]], s[e[1]]);
    return r;
  }

  // ∇dφ^a_{ij} = ∂_i∂_jφ^a − Γ^k_{ij}φ^a_k + Γ^a_{bc}φ^b_iφ^c_j, index (a*m + i)*m + j.
  const std::vector<F>& sff() const {
    if (sff_.empty()) {
      for (int a = 0; a < n_; ++a)
        for (int i = 0; i < m_; ++i)
          for (int j = 0; j < m_; ++j) {
            if (j < i) {
              sff_.push_back(sff_[(a * m_ + j) * m_ + i]);
              continue;
            }
            F r = partial2(d_.phi[a], i, j);
            for (int k = 0; k < m_; ++k) {
              const F& g = d_.Gdom[(k * m_ + i) * m_ + j];
              if (!is_zero(g)) r -= g * dphi(a, k);
            }
            for (int c = 0; c < n_; ++c) {
              const F& mm = M_[(a * n_ + c) * m_ + i];
              if (!is_zero(mm)) add_mul(r, mm, dphi(c, j));
            }
            sff_.push_back(std::move(r));
          }
    }
    return sff_;
  }

  // τ^a = −Δφ^a + g^{ij}Γ^a_{bc}φ^b_iφ^c_j.
  const Sec& tension() const {
    if (tau_.empty()) {
      tau_.reserve(n_);
      for (int a = 0; a < n_; ++a) {
        F r = -lapphi_[a];
        for (const auto& e : nzG_)
          if (e[0] == a) add_mul(r, gamma(a, e[1], e[2]), p2(e[1], e[2]));
        tau_.push_back(std::move(r));
      }
    }
    return tau_;
  }

  // g-trace of the second fundamental form.
  Sec trace_sff() const {
    const auto& H = sff();
    Sec r = zero_sec();
    for (int a = 0; a < n_; ++a)
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) add_mul(r[a], d_.ginv[i * m_ + j], H[(a * m_ + i) * m_ + j]);
    return r;
  }

  // A^a(η, ξ) = ξ^t_i(−2g^{ij}φ^b_jΓ^a_{bt}) + η^t(Δφ^bΓ^a_{bt} − g^{ij}φ^b_jφ^w_iS^a_{bwt}).
  Sec a_term(const Sec& eta, const Form& xi) const {
    Sec r = zero_sec();
    for (const auto& e : nzQ_) add_mul(r[e[0]], Q_[(e[0] * n_ + e[1]) * m_ + e[2]], xi[e[1] * m_ + e[2]]);
    for (const auto& e : nzP_) add_mul(r[e[0]], P_[e[0] * n_ + e[1]], eta[e[1]]);
    return r;
  }

  // Δ̄σ = Δσ + A(σ, ∂σ).
  Sec rough_lap(const Sec& s) const {
    Sec l = lap_sec(s);
    Sec a = a_term(s, partials(s));
    for (int i = 0; i < n_; ++i) l[i] += a[i];
    return l;
  }

  // div ω = g^{kl}(∂_kω_l + Γ^a_{bc}φ^b_kω^c_l) − g^{kl}Γ^p_{kl}ω_p, so Δ̄ = −div ∘ ∇̄.
  Sec div(const Form& w) const {
    Sec r = zero_sec();
    for (int a = 0; a < n_; ++a) {
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          const F& g = d_.ginv[k * m_ + l];
          if (is_zero(g)) continue;
          F t = partial(w[a * m_ + l], k);
          for (int c = 0; c < n_; ++c) {
            const F& mm = M_[(a * n_ + c) * m_ + k];
            if (!is_zero(mm)) add_mul(t, mm, w[c * m_ + l]);
          }
          add_mul(r[a], g, t);
        }
      for (int p = 0; p < m_; ++p)
        if (!is_zero(d_.trG[p])) r[a] -= d_.trG[p] * w[a * m_ + p];
    }
    return r;
  }

  // Rough Laplacian through the connection, independent of the S-tensor route.
  Sec rough_lap_cov(const Sec& s) const {
    Sec r = div(cov(s));
    for (auto& x : r) x = -x;
    return r;
  }

  // ---------------------------------------------------------------- tower

  // u_0 .. u_depth with u_0 = τ, u_{i+1} = Δu_i + A_{i+1}.
  const std::vector<Sec>& tower(int depth) const {
    if (u_.empty()) u_.push_back(tension());
    while (static_cast<int>(u_.size()) <= depth) {
      const Sec& u = u_.back();
      Form du = partials(u);
      Sec a = a_term(u, du);
      Sec l = lap_sec(u);
      for (int i = 0; i < n_; ++i) l[i] += a[i];
      v_.push_back(std::move(du));
      A_.push_back(std::move(a));
      u_.push_back(std::move(l));
    }
    return u_;
  }
  const Sec& u(int i) const { return tower(i)[i]; }
  // v_i = ∂u_i.
  const Form& v(int i) const {
    tower(i + 1);
    return v_[i];
  }
  // A_i = A(u_{i−1}, v_{i−1}), i ≥ 1.
  const Sec& A(int i) const {
    tower(i);
    return A_[i - 1];
  }

  // ---------------------------------------------------------------- curvature

  bool flat() const { return nzR_.empty(); }

  // R(X,Y)Z = R^a_{dbc}X^bY^cZ^d.
  Sec curv(const Sec& X, const Sec& Y, const Sec& Z) const {
    Sec r = zero_sec();
    for (const auto& e : nzR_) {
      const int a = e[0], d = e[1], b = e[2], c = e[3];
      if (is_zero(X[b]) || is_zero(Y[c]) || is_zero(Z[d])) continue;
      add_mul(r[a], R(a, d, b, c), X[b] * Y[c] * Z[d]);
    }
    return r;
  }

  // (∇_E R)(X,Y)Z = R^a_{dbc;e}E^eX^bY^cZ^d.
  Sec dcurv(const Sec& E, const Sec& X, const Sec& Y, const Sec& Z) const {
    Sec r = zero_sec();
    if (d_.dR_zero) return r;
    need_dR();
    for (const auto& e : nzdR_) {
      const int a = e[0], d = e[1], b = e[2], c = e[3], ee = e[4];
      if (is_zero(E[ee]) || is_zero(X[b]) || is_zero(Y[c]) || is_zero(Z[d])) continue;
      add_mul(r[a], d_.dR[idx5(a, d, b, c, ee)], E[ee] * X[b] * Y[c] * Z[d]);
    }
    return r;
  }

  // g^{ij} R(X_i, Y_i) φ_j for X, Y sections or 1-forms.
  Sec tr_r(const std::vector<F>& X, bool xform, const std::vector<F>& Y, bool yform) const {
    Sec r = zero_sec();
    for (const auto& e : nzRP_) {
      const int a = e[0], b = e[1], c = e[2], i = e[3];
      const F& x = xform ? X[b * m_ + i] : X[b];
      const F& y = yform ? Y[c * m_ + i] : Y[c];
      if (is_zero(x) || is_zero(y)) continue;
      add_mul(r[a], RP_[((a * n_ + b) * n_ + c) * m_ + i], x * y);
    }
    return r;
  }

  // dφ(∂_i) and g^{ij}dφ(∂_j) as sections.
  Sec dphi_col(int i) const {
    Sec r;
    for (int a = 0; a < n_; ++a) r.push_back(dphi(a, i));
    return r;
  }
  Sec dphi_up_col(int i) const {
    Sec r;
    for (int a = 0; a < n_; ++a) r.push_back(phi_up(a, i));
    return r;
  }
  static Sec col(const Form& w, int i, int n, int m) {
    Sec r;
    for (int a = 0; a < n; ++a) r.push_back(w[a * m + i]);
    return r;
  }
  Sec col(const Form& w, int i) const { return col(w, i, n_, m_); }

  // ---------------------------------------------------------------- k-tension

  // τ_k with Δ̄^{-1} = 0; k = 1 gives τ.
  Sec tau_k(int k) const {
    if (k < 1) throw ConfigError("order k must be at least 1");
    const int s = k / 2;
    tower(k - 1);
    Sec r = u_[k - 1];
    if (k >= 2) sub(r, tr_r(u_[k - 2], false, dphi_, true));
    const int shift = (k % 2 == 0) ? 2 : 1;
    for (int l = 1; l <= s - 1; ++l) {
      const int b = s + l - shift, a = s - l - 1;
      sub(r, g1(b, a));
      add(r, tr_r(u_[b], false, cov(u_[a]), true));
    }
    if (k % 2 == 1 && s >= 1) sub(r, g1(s - 1, s - 1));
    return r;
  }

  // Classical bitension Δ̄τ − Tr R(τ, dφ)dφ through the connection Laplacian.
  Sec bitension() const {
    Sec r = rough_lap_cov(tension());
    add(r, tr_r(dphi_, true, tension(), false));
    return r;
  }

  // Explicit 4-tension: Δ̄³τ + Tr R(dφ, Δ̄²τ)dφ − Tr R(∇̄Δ̄τ, τ)dφ − Tr R(∇̄τ, Δ̄τ)dφ,
  // with Δ̄ through the connection.
  Sec tau4_explicit() const {
    const Sec& t = tension();
    Sec l1 = rough_lap_cov(t);
    Sec l2 = rough_lap_cov(l1);
    Sec r = rough_lap_cov(l2);
    add(r, tr_r(dphi_, true, l2, false));
    sub(r, tr_r(cov(l1), true, t, false));
    sub(r, tr_r(cov(t), true, l1, false));
    return r;
  }

  // F³ in the v_0 form: −A_2 − g^{ij}u_1^tφ_i^bφ_j^wR^a_{wbt} + g^{ij}v_{0i}^bu_0^tφ_j^wR^a_{wbt}
  //   + g^{ij}u_0^su_0^tφ_i^gφ_j^wΓ^b_{gs}R^a_{wbt}.
  Sec f3_literal() const {
    tower(2);
    const Sec& u0 = u_[0];
    const Sec& u1 = u_[1];
    const Form& v0 = v_[0];
    Sec r = A_[1];
    for (auto& x : r) x = -x;
    // w_b^{(j)} = Γ^b_{gs}φ^g_i u_0^s raised on i
    for (const auto& e : nzR_) {
      const int a = e[0], w = e[1], b = e[2], t = e[3];
      const F& Rv = R(a, w, b, t);
      F acc = zero();
      for (int i = 0; i < m_; ++i) {
        // −g^{ij}u_1^tφ_i^bφ_j^w
        acc -= u1[t] * dphi(b, i) * phi_up(w, i);
        // + g^{ij}v_{0i}^bu_0^tφ_j^w
        acc += v0[b * m_ + i] * u0[t] * phi_up(w, i);
        // + g^{ij}u_0^su_0^tφ_i^gφ_j^wΓ^b_{gs}
        for (const auto& g : nzG_) {
          if (g[0] != b) continue;
          acc += u0[g[2]] * u0[t] * dphi(g[1], i) * phi_up(w, i) * gamma(b, g[1], g[2]);
        }
      }
      add_mul(r[a], Rv, acc);
    }
    return r;
  }

  // E^a_{bdth} = R^a_{bgd}Γ^g_{th} + R^a_{bgt}Γ^g_{dh} along φ.
  const std::vector<F>& e_tensor() const {
    if (E_.empty()) {
      const int n = n_;
      E_.assign(static_cast<std::size_t>(pow_int(n, 5)), zero());
      for (const auto& r : nzR_)
        for (const auto& g : nzG_) {
          const int a = r[0], b = r[1], c = r[2], x = r[3];
          if (g[0] != c) continue;
          const F prod = R(a, b, c, x) * gamma(c, g[1], g[2]);
          // first term: R^a_{b c d} with d = x, Γ^c_{th}
          E_[(((a * n + b) * n + x) * n + g[1]) * n + g[2]] += prod;
          // second term: R^a_{b c t} with t = x, Γ^c_{dh}
          E_[(((a * n + b) * n + g[1]) * n + x) * n + g[2]] += prod;
        }
    }
    return E_;
  }

  // Coordinate form F^k = −A_{k−1} − u^d_{k−2}⟨dφ^c,dφ^b⟩R^a_{bcd}
  //   + Σ_l [u_p^d⟨v_q^c,dφ^b⟩R^a_{bcd} + u_q^t u_p^d⟨dφ^h,dφ^b⟩E^a_{bdth} + u_q^d⟨v_p^c,dφ^b⟩R^a_{bcd}]
  //   (+ the odd-order tail), with p = s−l−1 and q = s+l−2 (even) or s+l−1 (odd),
  // so that Δu_{k−2} = τ_k + F^k.
  Sec fk_literal(int k) const {
    if (k < 2) throw ConfigError("F^k needs k >= 2");
    tower(k - 1);
    const int s = k / 2;
    const auto& E = e_tensor();
    Sec r = A_[k - 2];
    for (auto& x : r) x = -x;
    // ⟨w_c, dφ^b⟩ for a 1-form w
    auto pair = [&](const Form& w, int c, int b) {
      F acc = zero();
      for (int i = 0; i < m_; ++i) add_mul(acc, w[c * m_ + i], phi_up(b, i));
      return acc;
    };
    const Sec& top = u_[k - 2];
    for (const auto& e : nzR_) {
      const int a = e[0], b = e[1], c = e[2], d = e[3];
      if (!is_zero(top[d])) r[a] -= R(a, b, c, d) * top[d] * p2(c, b);
    }
    auto group = [&](int p, int q) {
      for (const auto& e : nzR_) {
        const int a = e[0], b = e[1], c = e[2], d = e[3];
        F t = u_[p][d] * pair(v_[q], c, b);
        add_mul(t, u_[q][d], pair(v_[p], c, b));
        add_mul(r[a], R(a, b, c, d), t);
      }
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          for (int d = 0; d < n_; ++d)
            for (int t = 0; t < n_; ++t)
              for (int h = 0; h < n_; ++h) {
                const F& ev = E[(((a * n_ + b) * n_ + d) * n_ + t) * n_ + h];
                if (is_zero(ev)) continue;
                add_mul(r[a], ev, u_[q][t] * u_[p][d] * p2(h, b));
              }
    };
    const int shift = (k % 2 == 0) ? 2 : 1;
    for (int l = 1; l <= s - 1; ++l) group(s - l - 1, s + l - shift);
    if (k % 2 == 1 && s >= 1) {
      const int p = s - 1;
      for (const auto& e : nzR_) {
        const int a = e[0], b = e[1], c = e[2], d = e[3];
        F t = u_[p][d] * pair(v_[p], c, b);
        for (const auto& g : nzG_) {
          if (g[0] != c) continue;
          add_mul(t, u_[p][g[2]] * u_[p][d], p2(g[1], b) * gamma(c, g[1], g[2]));
        }
        add_mul(r[a], R(a, b, c, d), t);
      }
    }
    return r;
  }

  // ---------------------------------------------------------------- ES-4

  struct ES4 {
    Sec omega0;
    Form omega1;
    Sec xi1;
    Sec tr_r_omega0;    // Tr R(dφ, Ω₀)dφ
    Sec codiff_omega1;  // d*Ω₁
    Sec lap_omega0;     // Δ̄Ω₀, path (a)
    Sec hat_tau4;
  };

  // W_{ij} = R(φ_i, φ_j)τ, index i*m + j.
  const std::vector<Sec>& w_pairs() const {
    if (W_.empty()) {
      const Sec& t = tension();
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) W_.push_back(curv(dphi_col(i), dphi_col(j), t));
    }
    return W_;
  }

  // Raise both indices of an m×m array of sections.
  std::vector<Sec> raise2(const std::vector<Sec>& Y) const {
    std::vector<Sec> r(static_cast<std::size_t>(m_) * m_, zero_sec());
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        for (int a = 0; a < m_; ++a)
          for (int b = 0; b < m_; ++b) {
            const F& g1 = d_.ginv[i * m_ + a];
            const F& g2 = d_.ginv[j * m_ + b];
            if (is_zero(g1) || is_zero(g2)) continue;
            F g = g1 * g2;
            for (int c = 0; c < n_; ++c) add_mul(r[i * m_ + j][c], g, Y[a * m_ + b][c]);
          }
    return r;
  }

  // Σ_{ij} R(φ_i, φ_j) Y^{ij} with the indices of Y raised.
  Sec contract_pair(const std::vector<Sec>& Y) const {
    auto Yu = raise2(Y);
    Sec r = zero_sec();
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) add(r, curv(dphi_col(i), dphi_col(j), Yu[i * m_ + j]));
    return r;
  }

  const ES4& es4() const {
    if (!es4_) {
      ES4 e;
      const Sec& t = tension();
      const auto& W = w_pairs();
      e.omega0 = contract_pair(W);
      e.omega1.assign(static_cast<std::size_t>(n_) * m_, zero());
      for (int k = 0; k < m_; ++k)
        for (int j = 0; j < m_; ++j) {
          Sec x = curv(W[k * m_ + j], t, dphi_up_col(j));
          for (int a = 0; a < n_; ++a) e.omega1[a * m_ + k] += x[a];
        }
      e.xi1 = zero_sec();
      if (!d_.dR_zero) {
        for (int i = 0; i < m_; ++i)
          for (int j = 0; j < m_; ++j) {
            Sec wr = zero_sec();  // Σ_b g^{jb} W_{ib}
            for (int b = 0; b < m_; ++b)
              for (int c = 0; c < n_; ++c) add_mul(wr[c], d_.ginv[j * m_ + b], W[i * m_ + b][c]);
            sub(e.xi1, dcurv(dphi_col(j), wr, t, dphi_up_col(i)));
          }
      }
      e.tr_r_omega0 = tr_r(dphi_, true, e.omega0, false);
      e.codiff_omega1 = div(e.omega1);
      for (auto& x : e.codiff_omega1) x = -x;
      e.lap_omega0 = rough_lap(e.omega0);
      e.hat_tau4 = zero_sec();
      for (int a = 0; a < n_; ++a) {
        F s = e.xi1[a] * 2.0 + e.codiff_omega1[a] * 2.0 + e.lap_omega0[a] + e.tr_r_omega0[a];
        e.hat_tau4[a] = s * -0.5;
      }
      es4_ = std::move(e);
    }
    return *es4_;
  }

  Sec tau4_es() const {
    Sec r = tau_k(4);
    add(r, es4().hat_tau4);
    return r;
  }

  // ∇̄Ω₀ expanded by the Leibniz rule: B_1 + ... + B_5 (1-forms).
  std::array<Form, 5> omega0_gradient_terms() const {
    const Sec& t = tension();
    const auto& W = w_pairs();
    const auto& H = sff();
    auto Wu = raise2(W);
    Form ct = cov(t);
    std::array<Form, 5> B;
    for (auto& b : B) b.assign(static_cast<std::size_t>(n_) * m_, zero());
    for (int k = 0; k < m_; ++k) {
      Sec pk = dphi_col(k);
      Sec b1 = zero_sec(), b2 = zero_sec();
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) {
          add(b1, dcurv(pk, dphi_col(i), dphi_col(j), Wu[i * m_ + j]));
          add(b2, curv(hcol(H, k, i), dphi_col(j), Wu[i * m_ + j]));
        }
      std::vector<Sec> V, X, Y;
      for (int a = 0; a < m_; ++a)
        for (int b = 0; b < m_; ++b) {
          V.push_back(dcurv(pk, dphi_col(a), dphi_col(b), t));
          X.push_back(curv(hcol(H, k, a), dphi_col(b), t));
          Y.push_back(curv(dphi_col(a), dphi_col(b), col(ct, k)));
        }
      Sec b3 = contract_pair(V), b4 = contract_pair(X), b5 = contract_pair(Y);
      for (int a = 0; a < n_; ++a) {
        B[0][a * m_ + k] = b1[a];
        B[1][a * m_ + k] = b2[a] * 2.0;
        B[2][a * m_ + k] = b3[a];
        B[3][a * m_ + k] = b4[a] * 2.0;
        B[4][a * m_ + k] = b5[a];
      }
    }
    return B;
  }

  // Δ̄Ω₀ by the expanded tensorial route: −(t_1 + ... + t_6 + div(B_2 + ... + B_5)),
  // where t_1..t_6 expand div B_1 with ∇²R and ∇dφ.
  Sec lap_omega0_expanded() const {
    const Sec& t = tension();
    const auto& W = w_pairs();
    const auto& H = sff();
    auto Wu = raise2(W);
    Form ct = cov(t);
    auto B = omega0_gradient_terms();
    Form rest = B[1];
    for (int q = 2; q < 5; ++q)
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] += B[q][i];
    Sec r = div(rest);
    if (!d_.dR_zero) {
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) {
          const Sec& w = Wu[i * m_ + j];
          Sec pi = dphi_col(i), pj = dphi_col(j);
          add(r, dcurv(t, pi, pj, w));  // t_1
          add(r, ddcurv_p2(pi, pj, w));  // t_2
        }
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          const F& g = d_.ginv[k * m_ + l];
          if (is_zero(g)) continue;
          Sec pk = dphi_col(k);
          std::vector<Sec> V, X, Y;
          for (int a = 0; a < m_; ++a)
            for (int b = 0; b < m_; ++b) {
              V.push_back(dcurv(dphi_col(l), dphi_col(a), dphi_col(b), t));
              X.push_back(curv(hcol(H, l, a), dphi_col(b), t));
              Y.push_back(curv(dphi_col(a), dphi_col(b), col(ct, l)));
            }
          auto Vu = raise2(V), Xu = raise2(X), Yu = raise2(Y);
          Sec acc = zero_sec();
          for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
              Sec pi = dphi_col(i), pj = dphi_col(j);
              Sec t3 = dcurv(pk, hcol(H, l, i), pj, Wu[i * m_ + j]);
              Sec t5 = dcurv(pk, pi, pj, Xu[i * m_ + j]);
              for (int a = 0; a < n_; ++a) {
                t3[a] *= 2.0;
                t5[a] *= 2.0;
              }
              add(acc, t3);
              add(acc, dcurv(pk, pi, pj, Vu[i * m_ + j]));  // t_4
              add(acc, t5);
              add(acc, dcurv(pk, pi, pj, Yu[i * m_ + j]));  // t_6
            }
          for (int a = 0; a < n_; ++a) add_mul(r[a], g, acc[a]);
        }
    }
    for (auto& x : r) x = -x;
    return r;
  }

  // −d*Ω₁ expanded: ξ₁ + T_2 + ... + T_6.
  Sec neg_codiff_omega1_expanded() const {
    const Sec& t = tension();
    const auto& H = sff();
    Form ct = cov(t);
    Sec r = es4().xi1;
    for (int k = 0; k < m_; ++k) {
      Sec uk = dphi_up_col(k);
      Sec ctk = col(ct, k);
      for (int j = 0; j < m_; ++j) {
        Sec pj = dphi_col(j), uj = dphi_up_col(j);
        add(r, curv(dcurv(dphi_col(k), uk, pj, t), t, uj));     // T_2
        add(r, curv(curv(uk, hcol(H, k, j), t), t, uj));        // T_4
        add(r, curv(curv(uk, pj, ctk), t, uj));                 // T_5
        add(r, curv(curv(uk, pj, t), ctk, uj));                 // T_6
      }
    }
    for (int j = 0; j < m_; ++j) add(r, curv(curv(t, dphi_col(j), t), t, dphi_up_col(j)));  // T_3
    return r;
  }

  // ---------------------------------------------------------------- energies

  F h_dot(const Sec& x, const Sec& y) const {
    F r = zero();
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        const F& h = d_.h[a * n_ + b];
        if (is_zero(h) || is_zero(x[a]) || is_zero(y[b])) continue;
        add_mul(r, h, x[a] * y[b]);
      }
    return r;
  }

  F h_dot_form(const Form& x, const Form& y) const {
    F r = zero();
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        const F& g = d_.ginv[i * m_ + j];
        if (is_zero(g)) continue;
        add_mul(r, g, h_dot(col(x, i), col(y, j)));
      }
    return r;
  }

  // Integrand of E_k (k = 1: ½|dφ|²).
  F energy_density(int k) const {
    if (k < 1) throw ConfigError("order k must be at least 1");
    if (k == 1) return h_dot_form(dphi_, dphi_) * 0.5;
    const int s = k / 2;
    const Sec& u = this->u(s - 1);
    if (k % 2 == 0) return h_dot(u, u) * 0.5;
    Form c = cov(u);
    return h_dot_form(c, c) * 0.5;
  }

  // ½|Δ̄τ|² + ¼ Σ_{ij}|R(φ_i, φ_j)τ|².
  F energy_density_es4() const {
    const Sec& u1 = u(1);
    F r = h_dot(u1, u1) * 0.5;
    const auto& W = w_pairs();
    auto Wu = raise2(W);
    for (int i = 0; i < m_ * m_; ++i) add_mul(r, h_dot(W[i], Wu[i]), like(r, 0.25));
    return r;
  }

  // ---------------------------------------------------------------- identities

  // Tr ∇²dφ − Tr R(dφ, dφ·)dφ − dφ(Ric) − ∇̄τ as a 1-form.
  Form weitzenbock_residual() const {
    if (d_.ricci_dom.empty()) throw CapabilityError("domain Ricci tensor not loaded");
    const auto& H = sff();
    Form r(static_cast<std::size_t>(n_) * m_, zero());
    auto h = [&](int a, int l, int i) -> const F& { return H[(a * m_ + l) * m_ + i]; };
    for (int a = 0; a < n_; ++a)
      for (int i = 0; i < m_; ++i) {
        F acc = zero();
        for (int k = 0; k < m_; ++k)
          for (int l = 0; l < m_; ++l) {
            const F& g = d_.ginv[k * m_ + l];
            if (is_zero(g)) continue;
            F t = partial(h(a, l, i), k);
            for (int c = 0; c < n_; ++c) {
              const F& mm = M_[(a * n_ + c) * m_ + k];
              if (!is_zero(mm)) add_mul(t, mm, h(c, l, i));
            }
            for (int p = 0; p < m_; ++p) {
              const F& g1 = d_.Gdom[(p * m_ + k) * m_ + l];
              if (!is_zero(g1)) t -= g1 * h(a, p, i);
              const F& g2 = d_.Gdom[(p * m_ + k) * m_ + i];
              if (!is_zero(g2)) t -= g2 * h(a, l, p);
            }
            add_mul(acc, g, t);
          }
        r[a * m_ + i] = acc;
      }
    Form ct = cov(tension());
    for (int i = 0; i < m_; ++i) {
      Sec pi = dphi_col(i);
      Sec cr = zero_sec();
      for (int k = 0; k < m_; ++k) add(cr, curv(dphi_col(k), pi, dphi_up_col(k)));
      for (int a = 0; a < n_; ++a) {
        F t = cr[a] + ct[a * m_ + i];
        // dφ(Ric(e_i)) = Ric_{iq} g^{qp} φ^a_p
        for (int q = 0; q < m_; ++q) {
          const F& rc = d_.ricci_dom[i * m_ + q];
          if (!is_zero(rc)) add_mul(t, rc, phi_up(a, q));
        }
        r[a * m_ + i] -= t;
      }
    }
    return r;
  }

  // ---------------------------------------------------------------- reduction

  // Δ(∂_iu) − ∂_i(Δu) = ∂_ig^{kl}∂_kv_l − ∂_i(g^{kl}Γ^p_{kl})v_p for v = ∂u.
  F commutator(const F& u_unused, const std::vector<F>& vrow, int i) const {
    (void)u_unused;
    F r = zero();
    for (int k = 0; k < m_; ++k)
      for (int l = 0; l < m_; ++l) {
        const F& dg = d_.dginv[(i * m_ + k) * m_ + l];
        if (!is_zero(dg)) add_mul(r, dg, partial(vrow[l], k));
      }
    for (int p = 0; p < m_; ++p) {
      const F& dt = d_.dtrG[i * m_ + p];
      if (!is_zero(dt)) r -= dt * vrow[p];
    }
    return r;
  }

  static void add(Sec& a, const Sec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
  static void sub(Sec& a, const Sec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  }

 private:
  using I3 = std::array<int, 3>;
  using I4 = std::array<int, 4>;
  using I5 = std::array<int, 5>;

  const F& gamma(int a, int b, int c) const { return d_.gamma[(a * n_ + b) * n_ + c]; }
  const F& R(int a, int d, int b, int c) const { return d_.R[((a * n_ + d) * n_ + b) * n_ + c]; }
  int idx5(int a, int d, int b, int c, int e) const { return (((a * n_ + d) * n_ + b) * n_ + c) * n_ + e; }

  Sec hcol(const std::vector<F>& H, int k, int i) const {
    Sec r;
    for (int a = 0; a < n_; ++a) r.push_back(H[(a * m_ + k) * m_ + i]);
    return r;
  }

  // g^{kl}(∇²R)(φ_k, φ_l; X, Y)Z = R^a_{dbc;ez}⟨dφ^e, dφ^z⟩X^bY^cZ^d.
  Sec ddcurv_p2(const Sec& X, const Sec& Y, const Sec& Z) const {
    Sec r = zero_sec();
    if (d_.dR_zero) return r;
    if (d_.ddR.empty()) throw CapabilityError("second covariant derivative of curvature not loaded");
    const int n = n_;
    for (int a = 0; a < n; ++a)
      for (int d = 0; d < n; ++d) {
        if (is_zero(Z[d])) continue;
        for (int b = 0; b < n; ++b) {
          if (is_zero(X[b])) continue;
          for (int c = 0; c < n; ++c) {
            if (is_zero(Y[c])) continue;
            F xyz = X[b] * Y[c] * Z[d];
            for (int e = 0; e < n; ++e)
              for (int z = 0; z < n; ++z) {
                const F& v = d_.ddR[static_cast<std::size_t>(idx5(a, d, b, c, e)) * n + z];
                if (is_zero(v)) continue;
                add_mul(r[a], v, xyz * p2(e, z));
              }
          }
        }
      }
    return r;
  }

  void need_dR() const {
    if (!d_.dR_zero && d_.dR.empty()) throw CapabilityError("covariant derivative of curvature not loaded");
  }

  // g^{ij} R(∇̄_i u_b, u_a) φ_j
  Sec g1(int b, int a) const { return tr_r(cov(u_[b]), true, u_[a], false); }

  void setup() {
    const int n = n_, m = m_;
    if (static_cast<int>(d_.phi.size()) != n) throw ContractError("engine: phi has wrong size");
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < m; ++i) dphi_.push_back(partial(d_.phi[a], i));
    for (int a = 0; a < n; ++a) lapphi_.push_back(lap(d_.phi[a]));
    for (int d = 0; d < n; ++d)
      for (int i = 0; i < m; ++i) {
        F s = zero();
        for (int j = 0; j < m; ++j)
          if (!is_zero(d_.ginv[i * m + j])) add_mul(s, d_.ginv[i * m + j], dphi(d, j));
        phiup_.push_back(std::move(s));
      }
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (c < b) {
          p2_.push_back(p2_[c * n + b]);
          continue;
        }
        F s = zero();
        for (int i = 0; i < m; ++i) add_mul(s, dphi(b, i), phi_up(c, i));
        p2_.push_back(std::move(s));
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!is_zero(gamma(a, b, c))) nzG_.push_back({a, b, c});
    // M^a_{ci} = Γ^a_{bc}φ^b_i
    M_.assign(static_cast<std::size_t>(n) * n * m, zero());
    for (const auto& e : nzG_)
      for (int i = 0; i < m; ++i) add_mul(M_[(e[0] * n + e[2]) * m + i], gamma(e[0], e[1], e[2]), dphi(e[1], i));
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int i = 0; i < m; ++i)
          if (!is_zero(M_[(a * n + c) * m + i])) nzM_.push_back({a, c, i});
    // Q^a_{t,i} = −2 g^{ij} M^a_{tj}
    Q_.assign(static_cast<std::size_t>(n) * n * m, zero());
    for (const auto& e : nzM_)
      for (int i = 0; i < m; ++i) {
        const F& g = d_.ginv[i * m + e[2]];
        if (!is_zero(g)) add_mul(Q_[(e[0] * n + e[1]) * m + i], g, M_[(e[0] * n + e[1]) * m + e[2]] * -2.0);
      }
    for (int a = 0; a < n; ++a)
      for (int t = 0; t < n; ++t)
        for (int i = 0; i < m; ++i)
          if (!is_zero(Q_[(a * n + t) * m + i])) nzQ_.push_back({a, t, i});
    // P^a_t = Δφ^bΓ^a_{bt} − ⟨dφ^b, dφ^w⟩S^a_{bwt}
    P_.assign(static_cast<std::size_t>(n) * n, zero());
    for (const auto& e : nzG_) add_mul(P_[e[0] * n + e[2]], lapphi_[e[1]], gamma(e[0], e[1], e[2]));
    if (!d_.S.empty())
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int w = 0; w < n; ++w)
            for (int t = 0; t < n; ++t) {
              const F& s = d_.S[((a * n + b) * n + w) * n + t];
              if (!is_zero(s)) P_[a * n + t] -= s * p2(b, w);
            }
    else if (!nzG_.empty())
      throw ContractError("engine: S tensor missing for a non-flat target");
    for (int a = 0; a < n; ++a)
      for (int t = 0; t < n; ++t)
        if (!is_zero(P_[a * n + t])) nzP_.push_back({a, t, 0});
    if (!d_.R.empty()) {
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              if (!is_zero(R(a, d, b, c))) nzR_.push_back({a, d, b, c});
      // RP^a_{bc}(i) = R^a_{dbc} g^{ij}φ^d_j
      RP_.assign(static_cast<std::size_t>(n) * n * n * m, zero());
      for (const auto& e : nzR_)
        for (int i = 0; i < m; ++i)
          if (!is_zero(phi_up(e[1], i)))
            add_mul(RP_[((e[0] * n + e[2]) * n + e[3]) * m + i], R(e[0], e[1], e[2], e[3]), phi_up(e[1], i));
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int i = 0; i < m; ++i)
              if (!is_zero(RP_[((a * n + b) * n + c) * m + i])) nzRP_.push_back({a, b, c, i});
    }
    if (!d_.dR.empty())
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              for (int e = 0; e < n; ++e)
                if (!is_zero(d_.dR[idx5(a, d, b, c, e)])) nzdR_.push_back({a, d, b, c, e});
  }

  EngineData<F> d_;
  int m_, n_;
  Form dphi_;
  Sec lapphi_;
  std::vector<F> phiup_, p2_, M_, Q_, P_, RP_;
  std::vector<I3> nzG_, nzM_, nzQ_, nzP_;
  std::vector<I4> nzR_, nzRP_;
  std::vector<I5> nzdR_;

  mutable std::vector<F> sff_;
  mutable Sec tau_;
  mutable std::vector<Sec> u_;
  mutable std::vector<Form> v_;
  mutable std::vector<Sec> A_;
  mutable std::vector<F> E_;
  mutable std::vector<Sec> W_;
  mutable std::optional<ES4> es4_;
};

}  // namespace polyharm
