#pragma once

// Coordinate tensor algebra on jets.  Flat row-major component layouts:
//   metric        g[i*m + j]
//   Christoffel   G[(k*m + i)*m + j]                = Γ^k_{ij}
//   Riemann       R[((a*n + d)*n + b)*n + c]        = R^a_{dbc},  R(∂_b,∂_c)∂_d = R^a_{dbc} ∂_a
//   ∇R            dR[R-index*n + e]                 = R^a_{dbc;e}
//   ∇²R           ddR[(R-index*n + e)*n + z]        = R^a_{dbc;ez}  (z is the outer derivative)
//   S             S[((a*n + b)*n + w)*n + t]        = S^a_{bwt}
//   C             C[((a*n + t)*n + s)*n + v]        = C^a_{tsv}
//   E             E[(((a*n + b)*n + d)*n + t)*n + h] = E^a_{bdth}

#include <vector>

#include "polyharm/jet.hpp"

namespace polyharm {

inline int pow_int(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij}); the result has one
// degree less than g.
std::vector<Jet> christoffel_from_metric(const std::vector<Jet>& g, int dim);

// R^a_{dbc} = ∂_bΓ^a_{cd} − ∂_cΓ^a_{bd} + Γ^a_{bμ}Γ^μ_{cd} − Γ^a_{cμ}Γ^μ_{bd}.
std::vector<Jet> riemann_from_christoffel(const std::vector<Jet>& G, int dim);

// Constant curvature c: R^a_{dbc} = c(h_{cd}δ^a_b − h_{bd}δ^a_c).
std::vector<Jet> riemann_constant_curvature(const std::vector<Jet>& h, double c, int dim);

// Ric_{ij} = R^k_{jki}.
std::vector<Jet> ricci_from_riemann(const std::vector<Jet>& R, int dim);

// Covariant derivative of a (1, rank) tensor; the new index is appended last.
std::vector<Jet> covariant_derivative(const std::vector<Jet>& T, int rank, const std::vector<Jet>& G, int dim);

// 2S^a_{bwt} = ∂_wΓ^a_{bt} + Γ^g_{bt}Γ^a_{wg} + ∂_bΓ^a_{wt} + Γ^g_{wt}Γ^a_{bg}.
std::vector<Jet> s_tensor(const std::vector<Jet>& G, int dim);

// C^a_{tsv} = Γ^μ_{ts}Γ^a_{μv} − S^a_{tsv}.
std::vector<Jet> c_tensor(const std::vector<Jet>& G, const std::vector<Jet>& S, int dim);

// E^a_{bdth} = R^a_{bgd}Γ^g_{th} + R^a_{bgt}Γ^g_{dh}.
std::vector<Jet> e_tensor(const std::vector<Jet>& R, const std::vector<Jet>& G, int dim);

void truncate_all(std::vector<Jet>& v, int degree);
std::vector<double> values_of(const std::vector<Jet>& v);

}  // namespace polyharm
