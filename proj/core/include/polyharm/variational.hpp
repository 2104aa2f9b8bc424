#pragma once

// Energies, first-variation checks, gradient flow and the latitude-sphere
// reduction.

#include <string>
#include <vector>

#include "polyharm/assemble.hpp"
#include "polyharm/map.hpp"

namespace polyharm {

// Order of a polyharmonic problem: k, or the ES-4 functional.
struct TensionOrder {
  int k = 1;
  bool es4 = false;

  static TensionOrder order(int k);
  static TensionOrder es4_order() { return {4, true}; }
  // "1", "2", ... or "es4".
  static TensionOrder parse(const std::string& s);
  std::string name() const;
};

// dE/dt = ε ∫⟨τ, V⟩ dV along φ + tV.  Fixed on k = 1 by calibrate_variation_sign.
inline constexpr int kVariationSign = -1;

struct EnergyReport {
  TensionOrder order;
  double value = 0.0;
  std::string quadrature = "periodic_trapezoid";
  std::vector<int> grid_shape;
};

// What the energy density of `order` needs from an engine.
Needs energy_needs(const TensionOrder& order, const TargetModel& tgt);

// E_{2s} = ½∫|Δ̄^{s−1}τ|², E_{2s+1} = ½∫|∇̄Δ̄^{s−1}τ|², E_1 = ½∫|dφ|², with the
// periodic trapezoid rule and the volume element √det g.
EnergyReport energy_k(const GridMap& phi, int k, int workers = 0);
// ½∫|Δ̄τ|² + ¼∫Σ|R(dφ(e_i), dφ(e_j))τ|².
EnergyReport energy_es4(const GridMap& phi, int workers = 0);
EnergyReport energy(const GridMap& phi, const TensionOrder& order, int workers = 0);

// τ_k, or τ₄^ES for ES-4.
BundleSection tension_of(const GridMap& phi, const TensionOrder& order, int workers = 0);

// ∫ h(σ, ρ) dV over the grid.
double integrate_pairing(const GridMap& phi, const BundleSection& s, const BundleSection& r, int workers = 0);

// φ + tV.  Closed forms stay closed forms; grid maps move node values.
GridMap vary(const GridMap& phi, const BundleSection& V, double t);

struct VariationReport {
  TensionOrder order;
  double t = 1e-5;
  double lhs = 0.0;  // (E(φ + tV) − E(φ − tV)) / 2t
  double rhs = 0.0;  // ε ∫⟨τ, V⟩ dV
  double discrepancy = 0.0;
};

VariationReport first_variation_check(const GridMap& phi, const BundleSection& V, const TensionOrder& order,
                                      double t = 1e-5, int workers = 0);

// Sign of the k = 1 first variation relative to ∫⟨τ, V⟩.
int calibrate_variation_sign(const GridMap& phi, const BundleSection& V, int workers = 0);

struct LatitudePoint {
  double value = 0.0;       // s-component of τ
  double tangential = 0.0;  // max |tangential component|
  std::vector<double> tau;
};

// τ_k of the inclusion S^m(sin α) ↪ S^{m+1} at one point.  Throws ChartError
// inside the pole collar and ContractError when equivariance breaks.
LatitudePoint latitude_tension(int m, const TensionOrder& order, double alpha);
double latitude_reduction(int m, const TensionOrder& order, double alpha);

// Energy density at one point times Vol(S^m(sin α)).
double latitude_energy(int m, const TensionOrder& order, double alpha);

struct LatitudeScan {
  std::vector<double> alpha;
  std::vector<double> value;
  std::vector<double> roots;
};

inline constexpr int kLatitudeScanPoints = 1000;
inline constexpr double kLatitudeRootTolerance = 1e-10;
inline constexpr double kLatitudeRootResidual = 1e-8;

// Sign changes on the scan refined with TOMS 748; π/2 is excluded.
LatitudeScan scan_latitude(int m, const TensionOrder& order, int workers = 0);
std::vector<double> find_k_harmonic_latitude(int m, const TensionOrder& order, int workers = 0);

struct FlowStep {
  int step = 0;
  double dt = 0.0;
  double energy = 0.0;
  double tau_norm = 0.0;  // max over nodes of |τ|_h
};

struct FlowReport {
  std::vector<FlowStep> steps;  // step 0 is the initial state
  GridMap final_map;
  int halvings = 0;
  double first_accepted_dt = 0.0;
};

inline constexpr double kFlowSlack = 1e-12;
inline constexpr int kFlowMaxHalvings = 20;

// Explicit Euler descent φ ← φ − ε dt τ on grid values; dt is halved while a
// step would raise the energy by more than kFlowSlack.
FlowReport gradient_flow(const GridMap& phi0, const TensionOrder& order, double dt, int steps, int workers = 0);

}  // namespace polyharm
