#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polyharm/assemble.hpp"
#include "polyharm/errors.hpp"
#include "polyharm/geometry.hpp"
#include "suite.hpp"

using namespace polyharm;

namespace {

constexpr double kPi = std::numbers::pi;

double riem(const std::vector<double>& R, int n, int a, int d, int b, int c) { return R[((a * n + d) * n + b) * n + c]; }
double gam(const std::vector<double>& G, int n, int a, int b, int c) { return G[(a * n + b) * n + c]; }

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("sphere Christoffels at the equator and at pi/4") {
    const int n = 2;
    auto G = sphere_christoffels(kPi / 2, {0.4});
    for (int b = 0; b < n - 1; ++b)
      for (int c = 0; c < n - 1; ++c) CHECK(std::abs(gam(G, n, n - 1, b, c)) < 1e-15);
    CHECK(std::abs(gam(G, n, 0, 0, 1)) < 1e-15);
    G = sphere_christoffels(kPi / 4, {1.1});
    // g̃_11 = 1 in the angle chart of S^1
    CHECK(gam(G, n, 1, 0, 0) == doctest::Approx(-0.5));
    for (double s : {0.3, 1.0, 2.5}) {
      auto H = sphere_christoffels(s, {0.2, -0.5});
      const int m = 3;
      CHECK(gam(H, m, m - 1, m - 1, m - 1) == 0.0);
      for (int a = 0; a < m - 1; ++a) {
        CHECK(gam(H, m, a, m - 1, m - 1) == 0.0);
        CHECK(gam(H, m, m - 1, a, m - 1) == 0.0);
      }
    }
    CHECK_THROWS_AS(sphere_christoffels(0.0, {0.1}), ChartError);
    CHECK_THROWS_AS(sphere_christoffels(kPi, {0.1}), ChartError);
  }

  TEST_CASE("sphere curvature last components") {
    for (int n : {2, 3}) {
      auto tgt = TargetModel::round_sphere_polar(n);
      std::vector<double> y(n, 0.3);
      y[n - 1] = 1.1;
      auto R = riemann_at(tgt, y);
      auto h = target_metric_at(tgt, y);
      const double s2 = std::sin(1.1) * std::sin(1.1);
      for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b) {
          // g̃ = h / sin²s on the equator factor
          const double gt = h[b * n + a] / s2;
          CHECK(riem(R, n, n - 1, a, b, n - 1) == doctest::Approx(-s2 * gt).epsilon(1e-12));
          CHECK(riem(R, n, n - 1, a, n - 1, b) == doctest::Approx(s2 * gt).epsilon(1e-12));
        }
    }
    auto R = riemann_at(TargetModel::round_sphere_polar(2), {0.7, kPi / 2});
    CHECK(riem(R, 2, 1, 0, 0, 1) == doctest::Approx(-1.0));
  }

  TEST_CASE("flat and space-form models") {
    auto e = TargetModel::euclidean(3);
    std::vector<double> y{0.1, 0.2, 0.3};
    CHECK(max_abs(riemann_at(e, y)) == 0.0);
    CHECK(max_abs(nabla_riemann_at(e, y)) == 0.0);
    auto d = derived_tensors_at(e, y);
    CHECK(max_abs(d.S) == 0.0);
    CHECK(max_abs(d.C) == 0.0);
    CHECK(max_abs(d.E) == 0.0);
    for (auto t : {TargetModel::round_sphere_polar(3), TargetModel::space_form(3, -0.5)}) {
      std::vector<double> p{0.2, -0.1, 0.9};
      CHECK(max_abs(nabla_riemann_at(t, p)) == 0.0);
      CHECK(max_abs(nabla2_riemann_at(t, p)) == 0.0);
    }
  }

  TEST_CASE("generic user metric of the round sphere is locally symmetric") {
    // unit S^2 in the conformal chart of space_form(2, 1) entered as an ordinary metric
    auto um = TargetModel::user_metric(2, {"1/(1+(y1^2+y2^2)/4)^2", "0", "1/(1+(y1^2+y2^2)/4)^2"});
    auto sf = TargetModel::space_form(2, 1.0);
    std::vector<double> y{0.3, -0.4};
    CHECK(max_abs(nabla_riemann_at(um, y)) < 1e-8);
    auto a = riemann_at(um, y), b = riemann_at(sf, y);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    auto low = TargetModel::user_metric(2, {"1+y1^2", "0", "1"}, {}, 1);
    CHECK_THROWS_AS(nabla_riemann_at(low, y), CapabilityError);
  }

  TEST_CASE("E at the equator vanishes on equator indices") {
    const int n = 3;
    auto d = derived_tensors_at(TargetModel::round_sphere_polar(n), {0.2, 0.5, kPi / 2});
    for (int b = 0; b < n; ++b)
      for (int dd = 0; dd < n - 1; ++dd)
        for (int t = 0; t < n - 1; ++t)
          for (int h = 0; h < n; ++h) CHECK(std::abs(d.E[((((n - 1) * n + b) * n + dd) * n + t) * n + h]) < 1e-14);
  }

  TEST_CASE("model invariants at random chart points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8), lat(0.1, kPi - 0.1);
    for (int it = 0; it < 100; ++it) {
      const int n = 2 + it % 2;
      std::vector<TargetModel> models{TargetModel::euclidean(n), TargetModel::round_sphere_polar(n),
                                      TargetModel::space_form(n, it % 3 - 1.0), testing::random_user_metric(n, rng)};
      for (const auto& t : models) {
        std::vector<double> y(n);
        for (auto& v : y) v = u(rng);
        if (t.kind() == TargetModel::Kind::round_sphere_polar) y[n - 1] = lat(rng);
        auto h = target_metric_at(t, y);
        auto G = christoffel_at(t, y);
        auto R = riemann_at(t, y);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            CHECK(h[a * n + b] == doctest::Approx(h[b * n + a]).epsilon(1e-14));
            for (int c = 0; c < n; ++c) {
              CHECK(std::abs(gam(G, n, a, b, c) - gam(G, n, a, c, b)) < 1e-12);
              for (int d = 0; d < n; ++d) {
                CHECK(std::abs(riem(R, n, a, d, b, c) + riem(R, n, a, d, c, b)) < 1e-10);
                CHECK(std::abs(riem(R, n, a, d, b, c) + riem(R, n, a, b, c, d) + riem(R, n, a, c, d, b)) < 1e-10);
              }
            }
          }
      }
    }
  }

  TEST_CASE("domain Laplacian has the geometer's sign and stencil order") {
    auto dom = DomainModel::flat_torus({2 * kPi, 2 * kPi});
    double prev = 0;
    for (int N : {16, 32, 64}) {
      auto g = testing::torus_grid({N, N}, 4);
      std::vector<double> v(g->size()), want(g->size());
      double x[2];
      for (std::size_t i = 0; i < g->size(); ++i) {
        g->coords(i, x);
        v[i] = std::cos(x[0] + 2 * x[1]);
        want[i] = 5 * v[i];
      }
      auto L = domain_laplacian(GridField(g, v), dom);
      double err = 0;
      for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::abs(L[i] - want[i]));
      if (prev > 0) CHECK(std::log2(prev / err) >= 3.8);
      prev = err;
      CHECK(domain_laplacian(GridField(g, 2.5), dom).max_abs() < 1e-10);
    }
  }
}
