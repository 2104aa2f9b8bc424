#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polyharm/errors.hpp"
#include "polyharm/expr.hpp"
#include "polyharm/grid.hpp"
#include "polyharm/jet.hpp"

using namespace polyharm;

TEST_SUITE("expr-jet") {
  TEST_CASE("expressions evaluate with parameters and constants") {
    auto e = Expr::parse("a*sin(x1) + x2^2 - pi", {"x1", "x2"}, {{"a", 2.0}});
    std::vector<double> x{0.5, 3.0};
    CHECK(e.eval(x) == doctest::Approx(2 * std::sin(0.5) + 9 - std::numbers::pi));
    CHECK(Expr::parse("2*pi", {"x1"}).is_constant());
    CHECK_THROWS_AS(Expr::parse("sin(", {"x1"}), ConfigError);
    CHECK_THROWS_AS(Expr::parse("q + 1", {"x1"}), ConfigError);
  }

  TEST_CASE("jet derivatives match closed forms") {
    const auto& sp = JetSpace::get(2, 6);
    Jet x = Jet::variable(sp, 0, 0.3), y = Jet::variable(sp, 1, -0.7);
    Jet f = sin(x) * exp(y);
    int e30[2] = {3, 0}, e12[2] = {1, 2};
    CHECK(f.derivative(e30) == doctest::Approx(-std::cos(0.3) * std::exp(-0.7)).epsilon(1e-13));
    CHECK(f.derivative(e12) == doctest::Approx(std::cos(0.3) * std::exp(-0.7)).epsilon(1e-13));
    Jet g = sqrt(1.0 + x * x) / (2.0 + cos(y));
    int e11[2] = {1, 1};
    const double gx = 0.3 / std::sqrt(1.09), d = 2 + std::cos(-0.7);
    CHECK(g.derivative(e11) == doctest::Approx(gx * std::sin(-0.7) / (d * d)).epsilon(1e-12));
  }

  TEST_CASE("sexp is flat at zero and exp(-1/t) beyond") {
    const auto& sp = JetSpace::get(1, 4);
    Jet t = Jet::variable(sp, 0, 0.5);
    CHECK(sexp(t).value() == doctest::Approx(std::exp(-2.0)));
    Jet z = Jet::variable(sp, 0, -0.1);
    CHECK(sexp(z).is_zero());
  }

  TEST_CASE("centered stencils differentiate sin at their order") {
    double prev = 0;
    for (int N : {32, 64, 128}) {
      auto g = std::make_shared<const Grid>(std::vector<int>{N}, std::vector<double>{2 * std::numbers::pi},
                                            std::vector<double>{0.0}, 4);
      std::vector<double> v(N);
      for (int i = 0; i < N; ++i) v[i] = std::sin(2 * std::numbers::pi * i / N);
      GridField f(g, v);
      auto d = partial(f, 0);
      double err = 0;
      for (int i = 0; i < N; ++i) err = std::max(err, std::abs(d[i] - std::cos(2 * std::numbers::pi * i / N)));
      if (prev > 0) CHECK(std::log2(prev / err) > 3.8);
      prev = err;
    }
  }
}
