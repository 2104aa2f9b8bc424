#include <cmath>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "polyharm/errors.hpp"
#include "polyharm/variational.hpp"
#include "suite.hpp"

using namespace polyharm;
using namespace polyharm::testing;

namespace {
constexpr double kPi = std::numbers::pi;
auto torus2() { return DomainModel::flat_torus({2 * kPi, 2 * kPi}); }

nlohmann::json golden() {
  std::ifstream in(std::string(POLYHARM_SOURCE_DIR) + "/tests/golden/latitude_roots.json");
  return nlohmann::json::parse(in);
}
}  // namespace

TEST_SUITE("variational") {
  TEST_CASE("order parsing") {
    CHECK(TensionOrder::parse("3").k == 3);
    CHECK(TensionOrder::parse("es4").es4);
    CHECK(TensionOrder::parse("ES-4").es4);
    CHECK(TensionOrder::es4_order().name() == "es4");
    CHECK_THROWS_AS(TensionOrder::parse("0"), ConfigError);
    CHECK_THROWS_AS(TensionOrder::parse("two"), ConfigError);
  }

  TEST_CASE("energies of trivial maps") {
    auto unit = DomainModel::flat_torus({1.0, 1.0});
    auto g = std::make_shared<const Grid>(std::vector<int>{64, 64}, std::vector<double>{1, 1}, std::vector<double>{0, 0}, 4);
    auto id = GridMap::sample(unit, TargetModel::euclidean(2), g, MapExpr(2, {"x1", "x2"}), EvalMode::grid_fd);
    CHECK(energy_k(id, 1).value == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 2; k <= 4; ++k) CHECK(energy_k(id, k).value < 1e-14);
    auto c = make_map(torus2(), TargetModel::round_sphere_polar(2), {48, 48}, 4, {"0.2", "1.0"}, EvalMode::grid_fd);
    for (int k = 1; k <= 3; ++k) CHECK(energy_k(c, k).value < 1e-24);
    auto flat = make_map(torus2(), TargetModel::euclidean(2), {8, 8}, 2, {"sin(x1)", "0.3*cos(x2)"},
                         EvalMode::analytic_jet);
    CHECK(energy_es4(flat).value == doctest::Approx(energy_k(flat, 4).value).epsilon(1e-14));
    CHECK(energy_es4(flat).value > 0.0);
  }

  TEST_CASE("energies are nonnegative") {
    for (const auto& vc : variation_suite(8))
      for (auto o : {TensionOrder::order(1), TensionOrder::order(2), TensionOrder::order(3), TensionOrder::es4_order()})
        CHECK(energy(vc.phi, o).value >= 0.0);
  }

  TEST_CASE("first variation") {
    // flat data, k = 1
    auto flat = make_map(torus2(), TargetModel::euclidean(2), {32, 32}, 4, {"x1+0.3*sin(x2)", "0.2*cos(x1+x2)"},
                         EvalMode::analytic_jet);
    auto V = BundleSection::sample(flat.grid, MapExpr(2, {"sin(x2)+0.2*cos(x1)", "cos(x1+x2)"}));
    CHECK(first_variation_check(flat, V, TensionOrder::order(1)).discrepancy <= 1e-6);
    auto zero = BundleSection::sample(flat.grid, MapExpr(2, {"0", "0"}));
    auto z = first_variation_check(flat, zero, TensionOrder::order(2));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);

    auto vc = variation_suite(16).front();
    CHECK(calibrate_variation_sign(vc.phi, vc.V) == kVariationSign);
    CHECK(first_variation_check(vc.phi, vc.V, TensionOrder::order(2)).discrepancy <= 1e-4);
  }

  TEST_CASE("latitude reduction against the scalar oracle") {
    const auto g = golden();
    for (int k = 1; k <= 4; ++k) {
      const double want = g.at("reduction_at_pi_over_3").at(std::to_string(k)).get<double>();
      CHECK(latitude_reduction(2, TensionOrder::order(k), kPi / 3) == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(latitude_reduction(2, TensionOrder::order(1), kPi / 3) == doctest::Approx(-2 / std::tan(kPi / 3)));
    CHECK(std::abs(latitude_reduction(2, TensionOrder::order(2), kPi / 4)) < 1e-9);
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(latitude_reduction(3, TensionOrder::order(k), kPi / 2)) < 1e-10);
    CHECK_THROWS_AS(latitude_reduction(2, TensionOrder::order(2), 0.0), ConfigError);
    CHECK_THROWS_AS(latitude_reduction(2, TensionOrder::order(2), 2.0), ConfigError);
  }

  TEST_CASE("latitude roots") {
    auto r = find_k_harmonic_latitude(3, TensionOrder::order(2));
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(kPi / 4).epsilon(1e-10));
    auto r3 = find_k_harmonic_latitude(2, TensionOrder::order(3));
    REQUIRE(r3.size() == 1);
    CHECK(r3[0] == doctest::Approx(golden().at("orders").at("3").at(0).get<double>()).epsilon(1e-10));
  }

  TEST_CASE("latitude energy matches a pointwise density times the volume") {
    // E_2 = ½|τ|² Vol = ½(m cot α)² · 4π sin²α for m = 2
    const double a = kPi / 3;
    const double want = 0.5 * 4 / (std::tan(a) * std::tan(a)) * 4 * kPi * std::sin(a) * std::sin(a);
    CHECK(latitude_energy(2, TensionOrder::order(2), a) == doctest::Approx(want).epsilon(1e-10));
    // ES-4: the curvature integrand vanishes on latitudes
    CHECK(latitude_energy(2, TensionOrder::es4_order(), a) ==
          doctest::Approx(latitude_energy(2, TensionOrder::order(4), a)).epsilon(1e-12));
  }

  TEST_CASE("gradient flow") {
    auto id = make_map(torus2(), TargetModel::euclidean(2), {16, 16}, 4, {"x1", "x2"}, EvalMode::grid_fd);
    auto st = gradient_flow(id, TensionOrder::order(1), 0.01, 5);
    CHECK(st.steps.back().energy == doctest::Approx(st.steps.front().energy).epsilon(1e-14));

    auto p0 = make_map(torus2(), TargetModel::euclidean(2), {16, 16}, 4, {"x1+0.1*sin(x2)", "x2+0.1*cos(x1)"},
                       EvalMode::grid_fd);
    auto f = gradient_flow(p0, TensionOrder::order(1), 0.05, 600);
    for (std::size_t i = 1; i < f.steps.size(); ++i) CHECK(f.steps[i].energy <= f.steps[i - 1].energy + kFlowSlack);
    CHECK(f.steps.back().tau_norm < 1e-6);
    CHECK_THROWS_AS(gradient_flow(p0, TensionOrder::es4_order(), 0.01, 1), CapabilityError);
  }
}
