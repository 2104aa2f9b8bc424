#pragma once

// Construction of pullback engines from models and maps.

#include <vector>

#include "polyharm/engine.hpp"
#include "polyharm/map.hpp"
#include "polyharm/models.hpp"

namespace polyharm {

// What an engine must carry.  `degree` is the Taylor degree of φ at a point
// (each rough Laplacian consumes two); grid engines ignore it.
struct Needs {
  int degree = 2;
  bool S = true;
  bool R = false;
  bool dR = false;
  bool ddR = false;
  bool ricci = false;
};

// Target Taylor data requested by point and grid engines.
LocalRequest point_request(const Needs& nd);
LocalRequest grid_request(const Needs& nd);
// Γ derivative order a target must supply for `nd` under `mode`.
int required_target_order(const Needs& nd, EvalMode mode, const TargetModel& tgt);

// Variable jets x_i about x0 over JetSpace(m, degree).
std::vector<Jet> coordinate_jets(int m, int degree, const double* x0);

// Engine at one domain point for the jet map φ(x) over JetSpace(m, degree).
Engine<Jet> point_engine(const DomainModel& dom, const TargetModel& tgt, const std::vector<Jet>& phi,
                         const double* x0, const Needs& needs);
Engine<Jet> point_engine(const DomainModel& dom, const TargetModel& tgt, const MapExpr& map, const double* x0,
                         const Needs& needs);

// Engine on the whole grid of φ using finite differences.
Engine<GridField> grid_engine(const GridMap& phi, const Needs& needs, int workers = 0);

// Domain metric data (ginv, Γ, trace, their partials, optionally Ricci) at every node.
void fill_domain_grid(EngineData<GridField>& d, const DomainModel& dom, const std::shared_ptr<const Grid>& grid,
                      bool ricci, int workers = 0);

// Geometer's Laplace-Beltrami of a grid function by centered differences.
GridField domain_laplacian(const GridField& f, const DomainModel& dom, int workers = 0);

// Target Taylor data composed with x-jets: T(y0 + δφ(x)) with δφ(x0) = 0.
class Composer {
 public:
  Composer(const std::vector<Jet>& dphi);
  Jet operator()(const Jet& T);
  std::vector<Jet> operator()(const std::vector<Jet>& T);

 private:
  const Jet& monomial(const JetSpace& ysp, int idx);

  std::vector<Jet> d_;
  const JetSpace* ysp_ = nullptr;
  std::vector<Jet> mono_;
  std::vector<char> have_;
};

}  // namespace polyharm
