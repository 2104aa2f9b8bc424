#pragma once

// Analytic test maps shared by the unit and acceptance tests.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "polyharm/map.hpp"

namespace polyharm::testing {

std::shared_ptr<const Grid> torus_grid(const std::vector<int>& shape, int stencil_order);

GridMap make_map(const DomainModel& dom, const TargetModel& tgt, const std::vector<int>& shape, int stencil_order,
                 const std::vector<std::string>& components, EvalMode mode,
                 const std::map<std::string, double>& params = {});

struct NamedMap {
  std::string name;
  GridMap phi;
};

// Latitude circle x ↦ (x, α) in S² with the domain metric sin²α dx², an
// isometric copy of S¹(sin α) ⊂ S².
GridMap latitude_circle(double alpha, int nodes, int stencil_order, EvalMode mode);

// flat→flat, flat→sphere, circle→sphere, torus→sphere, latitude inclusion.
std::vector<NamedMap> specialization_suite(int nodes, EvalMode mode = EvalMode::analytic_jet);

// constant, identity, two geodesics, equator inclusion.
std::vector<NamedMap> harmonic_suite(int nodes, EvalMode mode = EvalMode::analytic_jet);

// Map/variation pairs for first-variation checks.
struct VariationCase {
  std::string name;
  GridMap phi;
  BundleSection V;
};
std::vector<VariationCase> variation_suite(int nodes);

// Random smooth user metric on R^n: δ + small trigonometric perturbation.
TargetModel random_user_metric(int n, std::mt19937_64& rng);

}  // namespace polyharm::testing
