#pragma once

// First- and second-order operators on maps and pullback sections.

#include "polyharm/evaluate.hpp"
#include "polyharm/map.hpp"

namespace polyharm {

// φ^α_i per node.
FormSection differential(const GridMap& phi, int workers = 0);

// ∇dφ^α_{ij} per node at (α*m + i)*m + j.
NodeArray second_fundamental_form(const GridMap& phi, int workers = 0);

// τ(φ) = −Δφ + g^{ij}Γ(φ_i, φ_j).
BundleSection tension(const GridMap& phi, int workers = 0);

// (∇̄σ)^α_i = ∂_iσ^α + Γ^α_{βγ}φ^β_iσ^γ.
FormSection covariant_derivative(const GridMap& phi, const BundleSection& sigma, int workers = 0);

// Δ̄σ = Δσ + A(σ, ∂σ).
BundleSection rough_laplacian(const GridMap& phi, const BundleSection& sigma, int workers = 0);

// Per node: |Tr ∇²dφ − Tr R(dφ, dφ·)dφ − dφ(Ric) − ∇̄τ| in the metric g^{-1} ⊗ h.
// Grid maps get a finite-difference value with truncation error only.
GridField weitzenbock_residual(const GridMap& phi, int workers = 0);

}  // namespace polyharm
