#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polyharm/errors.hpp"
#include "polyharm/reduction.hpp"
#include "suite.hpp"

using namespace polyharm;
using namespace polyharm::testing;

namespace {
constexpr double kPi = std::numbers::pi;
auto circle() { return DomainModel::flat_torus({2 * kPi}); }
auto torus2() { return DomainModel::flat_torus({2 * kPi, 2 * kPi}); }
const std::vector<std::string> kCircleMap{"x1+0.2*sin(2*x1)", "1.2+0.3*sin(x1)"};
}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("block bookkeeping") {
    CHECK(reduced_block_count(3, ReducedKind::plain) == 3);
    CHECK(reduced_block_count(4, ReducedKind::plain) == 5);
    CHECK(reduced_block_count(4, ReducedKind::extended) == 7);
    CHECK(reduced_fiber_dim(3, 2, 3, ReducedKind::plain) == 3 + 6 + 3);
    CHECK(reduced_fiber_dim(2, 1, 3, ReducedKind::equator) == 2 + 1 + 1 + 1);
    auto phi = make_map(torus2(), TargetModel::round_sphere_polar(3), {8, 8}, 2,
                        {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, EvalMode::analytic_jet);
    for (int k : {2, 3, 4})
      for (auto kind : {ReducedKind::plain, ReducedKind::extended}) {
        auto z = build_reduced(phi, k, kind);
        CHECK(static_cast<int>(z.blocks.size()) == reduced_block_count(k, kind));
        CHECK(z.fiber_dim() == reduced_fiber_dim(3, 2, k, kind));
        for (const auto& b : z.blocks) CHECK(b.values.size() == phi.grid->size() * b.width);
        auto r = build_rhs(phi, k, kind);
        CHECK(r.blocks.size() == z.blocks.size());
      }
    auto z3 = build_reduced(phi, 3, ReducedKind::plain);
    CHECK(z3.blocks[0].width == 3);
    CHECK(z3.blocks[1].width == 6);
    CHECK(z3.blocks[2].width == 3);
    CHECK(reduced_kind_from_string("extended") == ReducedKind::extended);
    CHECK_THROWS_AS(reduced_kind_from_string("other"), ConfigError);
  }

  TEST_CASE("harmonic maps: zero blocks, zero right-hand side, degenerate ratio") {
    auto eq = make_map(circle(), TargetModel::round_sphere_polar(2), {32}, 4, {"x1", "pi/2"}, EvalMode::analytic_jet);
    // fl(pi/2) leaves cos(s) ~ 6e-17 in the data
    CHECK(build_reduced(eq, 3, ReducedKind::plain).max_abs() < 1e-15);
    CHECK(build_rhs(eq, 3, ReducedKind::plain).max_abs() < 1e-15);
    CHECK(residual(eq, 3, ReducedKind::plain).max_abs() < 1e-15);
    CHECK_THROWS_AS(aronszajn_ratio(eq, 3, ReducedKind::plain), DegenerateError);
    auto c = make_map(torus2(), TargetModel::euclidean(2), {16, 16}, 4, {"0.3", "x2"}, EvalMode::analytic_jet);
    CHECK(build_reduced(c, 3, ReducedKind::plain).max_abs() == 0.0);
    CHECK(residual(c, 3, ReducedKind::plain).max_abs() == 0.0);
  }

  TEST_CASE("flat target right-hand side") {
    auto phi = make_map(torus2(), TargetModel::euclidean(2), {48, 48}, 4, {"sin(x1)", "cos(x1+x2)"}, EvalMode::grid_fd);
    auto z = build_reduced(phi, 3, ReducedKind::plain);
    auto r = build_rhs(phi, 3, ReducedKind::plain);
    // F¹ = u₁ on the u₀ block, F³ = 0 on the top block
    for (std::size_t k = 0; k < phi.grid->size(); k += 37)
      for (int a = 0; a < 2; ++a) CHECK(r.blocks[0].at(k, a) == doctest::Approx(z.blocks[2].at(k, a)).epsilon(1e-12));
    for (double v : r.blocks[2].values) CHECK(v == 0.0);
  }

  TEST_CASE("residual decays at stencil order and is small at 512 nodes") {
    auto tgt = TargetModel::round_sphere_polar(2);
    double prev = 0;
    for (int N : {64, 128, 256}) {
      auto phi = make_map(circle(), tgt, {N}, 4, kCircleMap, EvalMode::analytic_jet);
      const double r = residual(phi, 3, ReducedKind::plain).max_abs();
      if (prev > 0) CHECK(std::log2(prev / r) >= 3.8);
      prev = r;
    }
    auto phi = make_map(circle(), tgt, {512}, 8, kCircleMap, EvalMode::analytic_jet);
    CHECK(residual(phi, 3, ReducedKind::plain).max_abs() <= 1e-6);
  }

  TEST_CASE("Aronszajn ratio on a flat trigonometric map matches hand evaluation") {
    // φ = sin x into R: u0 = sin, u1 = −sin, v0 = cos; blocks (φ, ∂φ, u0, v0, u1) extended.
    auto phi = make_map(circle(), TargetModel::euclidean(1), {64}, 4, {"sin(x1)"}, EvalMode::analytic_jet);
    auto r = aronszajn_ratio(phi, 3, ReducedKind::plain);
    REQUIRE(r.nodes > 0);
    CHECK(std::isfinite(r.sup_ratio));
    CHECK(r.sup_ratio > 0.0);
    // plain blocks z = (u0, v0, u1) = (sin, cos, -sin); Δz = (u1, ∂u1, 0) = (-sin, -cos, 0);
    // sup max(|sin|,|cos|) / (|sin|+|cos|+|sin| + |cos|+|sin|+|cos|) = 1/3 (at sin = 0 or cos = 0)
    CHECK(r.sup_ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  }

  TEST_CASE("pair bound: identical maps are degenerate, agreement on a window") {
    auto tgt = TargetModel::round_sphere_polar(2);
    auto a = make_map(circle(), tgt, {128}, 4, kCircleMap, EvalMode::analytic_jet);
    CHECK_THROWS_AS(pair_difference_bound(a, a, 3), DegenerateError);
    auto b = make_map(circle(), tgt, {128}, 4, {"x1+0.2*sin(2*x1)", "1.2+0.3*sin(x1)+0.2*sexp(-sin(x1))"},
                      EvalMode::analytic_jet);
    auto p = pair_difference_bound(a, b, 3);
    CHECK(std::isfinite(p.full.sup_ratio));
    CHECK(p.lemmas.size() == 5);
    for (const auto& l : p.lemmas) CHECK(std::isfinite(l.sup_ratio));
    auto other = make_map(circle(), tgt, {64}, 4, kCircleMap, EvalMode::analytic_jet);
    CHECK_THROWS_AS(pair_difference_bound(a, other, 3), ChartError);
  }

  TEST_CASE("equator reduction") {
    auto tgt = TargetModel::round_sphere_polar(2);
    auto eq = make_map(circle(), tgt, {64}, 4, {"x1", "pi/2"}, EvalMode::analytic_jet);
    Window all;
    auto r = equator_bound(eq, 3, all);
    CHECK(r.y_max_on_window < 1e-15);

    auto win = make_map(circle(), tgt, {128}, 4, {"x1", "pi/2+0.3*sexp(-sin(x1))"}, EvalMode::analytic_jet);
    Window w;
    w.ranges = {{5, 59}};
    auto e = equator_bound(win, 3, w);
    CHECK(e.y_max_on_window <= 1e-10);
    CHECK(e.y_max_off_window > 1e-3);
    auto z = build_reduced(win, 3, ReducedKind::equator);
    CHECK(z.max_abs_on(w) <= 1e-10);

    Window bad;
    bad.ranges = {{0, 128}};
    CHECK_THROWS_AS(equator_bound(win, 3, bad), PreconditionError);
    Window outside;
    outside.ranges = {{10, 200}};
    CHECK_THROWS_AS(equator_bound(win, 3, outside), ConfigError);
    auto flat = make_map(circle(), TargetModel::euclidean(2), {64}, 4, {"x1", "0"}, EvalMode::analytic_jet);
    CHECK_THROWS_AS(equator_bound(flat, 3, all), ConfigError);
  }

  TEST_CASE("window erosion keeps full axes") {
    auto g = torus_grid({32, 16}, 4);
    Window w;
    w.ranges = {{4, 20}, {0, 16}};
    auto e = w.eroded(*g, 3);
    CHECK(e.ranges[0][0] == 7);
    CHECK(e.ranges[0][1] == 17);
    CHECK(e.ranges[1][0] == 0);
    CHECK(e.ranges[1][1] == 16);
    CHECK(w.count(*g) == 16u * 16u);
  }
}
