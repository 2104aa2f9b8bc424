#pragma once

// Reduced vectors z and y of the tension tower, their Laplacian right-hand
// sides, and sup-ratio witnesses of the Aronszajn-type inequalities.

#include <array>
#include <string>
#include <vector>

#include "polyharm/grid.hpp"
#include "polyharm/map.hpp"

namespace polyharm {

enum class ReducedKind { plain, extended, equator };

const char* to_string(ReducedKind k);
ReducedKind reduced_kind_from_string(const std::string& s);

// Index box on the grid, half-open [lo, hi) per axis.  No ranges means the
// whole grid.
struct Window {
  std::vector<std::array<int, 2>> ranges;

  bool whole() const { return ranges.empty(); }
  bool contains(const Grid& g, std::size_t node) const;
  // Shrunk by r nodes on each side (stays empty-safe).
  Window eroded(const Grid& g, int r) const;
  // Throws ConfigError for ranges that do not fit the grid.
  void validate(const Grid& g) const;
  std::size_t count(const Grid& g) const;
};

// Node-major values of one block; `jumps[c][i]` is the increment of
// component c across a period of axis i.
struct Block {
  std::string name;
  int width = 0;
  std::vector<double> values;
  std::vector<std::vector<double>> jumps;

  double at(std::size_t node, int c) const { return values[node * width + c]; }
};

struct BlockSet {
  ReducedKind kind = ReducedKind::plain;
  int k = 0;
  std::shared_ptr<const Grid> grid;
  std::vector<Block> blocks;

  int fiber_dim() const;
  double max_abs() const;
  double max_abs_on(const Window& w) const;
  double max_abs_off(const Window& w) const;
};

struct ReducedVector : BlockSet {};
struct BlockRHS : BlockSet {};

// 2k−3 blocks for plain kind (u_0, v_0, …, v_{k−3}, u_{k−2}); two more for
// the other kinds.
int reduced_block_count(int k, ReducedKind kind);
// plain: (k−1)n + (k−2)nm; extended: plain + n + nm; equator: (k−1) + (k−2)m + 1 + m.
int reduced_fiber_dim(int n, int m, int k, ReducedKind kind);

// v-blocks are partial derivatives ∂u_j; covariant_v swaps in ∇̄u_j.
ReducedVector build_reduced(const GridMap& phi, int k, ReducedKind kind, bool covariant_v = false, int workers = 0);

// Δ of every block up to the source: u_j ↦ u_{j+1} − A_{j+1}, v_j ↦ ∂(u_{j+1} − A_{j+1})
// plus the commutator of Δ and ∂, u_{k−2} ↦ F^k, φ ↦ −u_0 + Γ(dφ, dφ).
BlockRHS build_rhs(const GridMap& phi, int k, ReducedKind kind, int workers = 0);

// Node-wise Euclidean norm of Δz − (RHS + τ_k on the top block), with Δz by
// centered differences of the sampled blocks.
GridField residual(const GridMap& phi, int k, ReducedKind kind, int workers = 0);

// Threshold below which a ratio denominator is masked.
inline constexpr double kDenominatorFloor = 1e-12;

struct RatioReport {
  std::string lemma;
  double sup_ratio = 0.0;
  double masked_fraction = 0.0;
  std::size_t nodes = 0;   // nodes considered (inside the window)
  std::size_t argmax = 0;  // node of the supremum
  std::vector<int> grid_shape;
};

// sup over included nodes with den ≥ kDenominatorFloor of num/den.  With no
// surviving node the report has nodes = 0 unless require_nonempty, which throws
// DegenerateError.
RatioReport sup_ratio(const std::string& lemma, const std::vector<double>& num, const std::vector<double>& den,
                      const std::vector<char>& include, const Grid& g, bool require_nonempty);

// sup |Δz| / (Σ|z| + Σ|∂z|) with |Δz| the largest RHS component.
RatioReport aronszajn_ratio(const GridMap& phi, int k, ReducedKind kind, const Window& w = {}, int workers = 0);

struct PairReport {
  RatioReport full;
  std::vector<RatioReport> lemmas;
};

// Two-map estimates on the extended kind.
PairReport pair_difference_bound(const GridMap& phi, const GridMap& psi, int k, const Window& w = {},
                                 int workers = 0);

struct EquatorReport {
  double f_max_on_window = 0.0;
  double y_max_on_window = 0.0;
  double y_max_off_window = 0.0;
  int erosion = 0;  // nodes trimmed from W for stencil reach (grid_fd)
  RatioReport full;
  std::vector<RatioReport> lemmas;
};

// Tolerance for φ^n = π/2 and y = 0 on the window.
inline constexpr double kEquatorTolerance = 1e-10;

// Requires the round polar sphere target.  Throws PreconditionError when
// max|f| on W exceeds kEquatorTolerance and ContractError when y does.
EquatorReport equator_bound(const GridMap& phi, int k, const Window& w, int workers = 0);

}  // namespace polyharm
