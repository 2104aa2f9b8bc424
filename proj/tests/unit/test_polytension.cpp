#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polyharm/errors.hpp"
#include "polyharm/fields.hpp"
#include "polyharm/polytension.hpp"
#include "suite.hpp"

using namespace polyharm;
using namespace polyharm::testing;

namespace {
constexpr double kPi = std::numbers::pi;
auto torus2() { return DomainModel::flat_torus({2 * kPi, 2 * kPi}); }
}  // namespace

TEST_SUITE("polytension") {
  TEST_CASE("tower recursion u_{i+1} = Δu_i + A_{i+1}") {
    auto phi = make_map(torus2(), TargetModel::round_sphere_polar(3), {64, 64}, 4,
                        {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, EvalMode::grid_fd);
    auto tw = build_tower(phi, 3);
    REQUIRE(tw.u.size() == 3);
    REQUIRE(tw.v.size() == 2);
    REQUIRE(tw.a.size() == 2);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 3; ++a) {
        auto L = domain_laplacian(tw.u[i].component(a), phi.dom);
        double gap = 0;
        for (std::size_t k = 0; k < phi.grid->size(); ++k)
          gap = std::max(gap, std::abs(tw.u[i + 1].at(k, a) - (L[k] + tw.a[i].at(k, a))));
        CHECK(gap < 1e-9 * std::max(1.0, tw.u[i + 1].max_abs()));
      }
  }

  TEST_CASE("A vanishes for flat targets and constant maps") {
    auto flat = make_map(torus2(), TargetModel::euclidean(2), {32, 32}, 4, {"sin(x1)", "cos(x1+x2)"}, EvalMode::grid_fd);
    auto s = BundleSection::sample(flat.grid, MapExpr(2, {"cos(x2)", "sin(x1)"}));
    CHECK(a_term(flat, s).max_abs() == 0.0);
    auto c = make_map(torus2(), TargetModel::round_sphere_polar(2), {32, 32}, 4, {"0.1", "1.2"}, EvalMode::grid_fd);
    auto sc = BundleSection::sample(c.grid, MapExpr(2, {"cos(x2)", "sin(x1)"}));
    CHECK(a_term(c, sc).max_abs() < 1e-13);
  }

  TEST_CASE("flat target: tower is the iterated Laplacian of -Δφ") {
    auto phi = make_map(torus2(), TargetModel::euclidean(1), {48, 48}, 4, {"sin(x1)*cos(2*x2)"}, EvalMode::grid_fd);
    auto tw = build_tower(phi, 3);
    // −Δφ = −5φ, each further Δ multiplies by the discrete symbol
    auto L = domain_laplacian(tw.u[1].component(0), phi.dom);
    double gap = 0;
    for (std::size_t k = 0; k < phi.grid->size(); ++k) gap = std::max(gap, std::abs(L[k] - tw.u[2].at(k, 0)));
    CHECK(gap < 1e-10);
    CHECK(tw.u[0].at(5, 0) == doctest::Approx(-domain_laplacian(phi.phi[0], phi.dom)[5]));
  }

  TEST_CASE("harmonic maps have vanishing towers and tensions") {
    for (const auto& [name, phi] : harmonic_suite(6)) {
      INFO(name);
      auto tw = build_tower(phi, 4);
      for (const auto& u : tw.u) CHECK(u.max_abs() < 1e-12);
      for (int k = 2; k <= 5; ++k) CHECK(tau_k(phi, k).max_abs() < 1e-12);
      CHECK(tau4_explicit(phi).max_abs() < 1e-12);
      CHECK(hat_tau4(phi).max_abs() < 1e-12);
      auto t = es4_terms(phi);
      CHECK(t.omega0.max_abs() < 1e-12);
      CHECK(t.omega1.max_abs() < 1e-12);
      CHECK(t.xi1.max_abs() < 1e-12);
    }
  }

  TEST_CASE("specializations agree on the latitude circle") {
    auto phi = latitude_circle(kPi / 3, 8, 2, EvalMode::analytic_jet);
    CHECK(max_abs_difference(tau_even(phi, 1), bitension(phi)) < 1e-12);
    CHECK(max_abs_difference(tau_odd(phi, 1), tau3_via_f3(phi)) < 1e-12);
    CHECK(max_abs_difference(tau4_explicit(phi), tau_even(phi, 2)) < 1e-9);
    // τ₂ = m²C(1 − C²) ν with m = 1
    const double C = 1 / std::tan(kPi / 3);
    CHECK(tau_k(phi, 2).at(0, 1) == doctest::Approx(C * (1 - C * C)).epsilon(1e-12));
    // τ₃ = m³C³(2 − C²)
    CHECK(tau_k(phi, 3).at(0, 1) == doctest::Approx(C * C * C * (2 - C * C)).epsilon(1e-12));
  }

  TEST_CASE("ES-4 terms") {
    auto flat = make_map(torus2(), TargetModel::euclidean(2), {6, 6}, 2, {"x1+0.3*sin(x2)", "0.2*cos(x1)"},
                         EvalMode::analytic_jet);
    auto tf = es4_terms(flat);
    CHECK(tf.omega0.max_abs() == 0.0);
    CHECK(tf.omega1.max_abs() == 0.0);
    CHECK(tf.xi1.max_abs() == 0.0);
    CHECK(hat_tau4(flat).max_abs() == 0.0);
    CHECK(max_abs_difference(tau4_es(flat), tau_k(flat, 4)) == 0.0);

    auto sph = make_map(torus2(), TargetModel::round_sphere_polar(3), {6, 6}, 2,
                        {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, EvalMode::analytic_jet);
    auto ts = es4_terms(sph);
    CHECK(ts.xi1.max_abs() == 0.0);
    CHECK(ts.omega0.max_abs() > 1e-3);
    CHECK(ts.omega1.max_abs() > 1e-3);
    CHECK(ts.lap_paths_gap < 1e-7);

    auto lat = latitude_circle(kPi / 3, 8, 2, EvalMode::analytic_jet);
    CHECK(es4_terms(lat).lap_paths_gap < 1e-7);

    auto grid = make_map(torus2(), TargetModel::round_sphere_polar(3), {64, 64}, 4, {"0.5*sin(x1)", "0.4", "1.3"},
                         EvalMode::grid_fd);
    CHECK_THROWS_AS(es4_terms(grid), CapabilityError);
  }

  TEST_CASE("resolution policy and Richardson estimate") {
    CHECK(required_nodes_per_axis(4) == 64);
    auto coarse = make_map(torus2(), TargetModel::round_sphere_polar(3), {8, 8}, 4,
                           {"0.5*sin(x1)", "0.4", "1.3+0.1*cos(x2)"}, EvalMode::grid_fd);
    CHECK_THROWS_AS(tau_k(coarse, 4), ConfigError);
    auto fine = make_map(torus2(), TargetModel::round_sphere_polar(3), {64, 64}, 8,
                         {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, EvalMode::grid_fd);
    auto jet = make_map(torus2(), TargetModel::round_sphere_polar(3), {8, 8}, 2,
                        {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"}, EvalMode::analytic_jet);
    auto tg = tau_k(fine, 2), tj = tau_k(jet, 2);
    double err = 0;
    for (std::size_t c = 0; c < jet.grid->size(); ++c) {
      int id[2];
      jet.grid->index(c, id);
      id[0] *= 8;
      id[1] *= 8;
      const std::size_t f = fine.grid->node(id);
      for (int a = 0; a < 3; ++a) err = std::max(err, std::abs(tg.at(f, a) - tj.at(c, a)));
    }
    const double est = richardson_estimate(fine, 2);
    CHECK(err < 1e-6);
    CHECK(est > 0.1 * err);
    CHECK(est < 10 * err);
  }
}
