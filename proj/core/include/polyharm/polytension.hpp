#pragma once

// The tension tower and the k-tension fields.

#include <vector>

#include "polyharm/evaluate.hpp"
#include "polyharm/map.hpp"

namespace polyharm {

// grid_fd towers for order k need this many nodes per axis.
int required_nodes_per_axis(int k);
// Throws ConfigError when a grid_fd map is too coarse for order k.
void check_resolution(const GridMap& phi, int k);

struct TensionTower {
  int k = 0;
  std::vector<BundleSection> u;  // u_0 .. u_{k-1}
  std::vector<FormSection> v;    // v_0 .. v_{k-2}
  std::vector<BundleSection> a;  // A_1 .. A_{k-1}
};

TensionTower build_tower(const GridMap& phi, int k, int workers = 0);

// A(u_prev, ∂u_prev).
BundleSection a_term(const GridMap& phi, const BundleSection& u_prev, int workers = 0);

BundleSection tau_k(const GridMap& phi, int k, int workers = 0);
inline BundleSection tau_even(const GridMap& phi, int s, int workers = 0) { return tau_k(phi, 2 * s, workers); }
inline BundleSection tau_odd(const GridMap& phi, int s, int workers = 0) { return tau_k(phi, 2 * s + 1, workers); }

// Independent specializations: Δ̄τ − Tr R(τ, dφ)dφ through the connection,
// τ₃ = Δu_1 − F³, and the explicit k = 4 expansion.
BundleSection bitension(const GridMap& phi, int workers = 0);
BundleSection tau3_via_f3(const GridMap& phi, int workers = 0);
BundleSection tau4_explicit(const GridMap& phi, int workers = 0);

// F^k in coordinates, with Δu_{k-2} = τ_k + F^k.
BundleSection f_k(const GridMap& phi, int k, int workers = 0);

struct ES4Terms {
  BundleSection omega0;
  FormSection omega1;
  BundleSection xi1;
  BundleSection tr_r_omega0;
  BundleSection codiff_omega1;
  BundleSection lap_omega0;           // rough Laplacian of Ω₀
  BundleSection lap_omega0_expanded;  // tensorial expansion with ∇R, ∇²R
  BundleSection hat_tau4;
  double lap_paths_gap = 0.0;
};

// Tolerance of the two Δ̄Ω₀ paths, absolute on max(1, max|Δ̄Ω₀|).
inline constexpr double kLapOmegaTolerance = 1e-7;

// analytic_jet only; throws ContractError when the two Δ̄Ω₀ paths disagree.
ES4Terms es4_terms(const GridMap& phi, int workers = 0);
BundleSection hat_tau4(const GridMap& phi, int workers = 0);
BundleSection tau4_es(const GridMap& phi, int workers = 0);

// A-posteriori error of tau_k on a grid_fd map from the map coarsened by two.
double richardson_estimate(const GridMap& phi, int k, int workers = 0);

// Needs for order k (ES-4 when es4 is set) at a point.
Needs tension_needs(int k, bool es4, const TargetModel& tgt);

}  // namespace polyharm
