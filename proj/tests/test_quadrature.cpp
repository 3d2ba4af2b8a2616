// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hardychain/error.hpp"
#include "hardychain/quadrature.hpp"

using namespace hardychain;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double got, double want)
{
  return std::abs(got / want - 1.0);
}

QuadratureResult integrate(const ReducedChain &chain, const std::function<double(std::span<const double>)> &f,
                           std::vector<double> powers, double outer_max, QuadratureOptions opt = {})
{
  return integrate_chain(chain, f, std::move(powers), {}, {}, outer_max, opt);
}

}  // namespace

TEST_CASE("reduced chain validation")
{
  CHECK_THROWS_AS(ReducedChain(5, {}), ArgumentError);
  CHECK_THROWS_AS(ReducedChain(5, {3, 4}), ArgumentError);
  CHECK_THROWS_AS(ReducedChain(5, {4, 3, 5}), ArgumentError);
  const ReducedChain c(6, {3, 5, 6});
  CHECK(c.group_dims() == std::vector<int>{3, 2, 1});
  CHECK(c.level_of(5) == 1);
  CHECK(c.contains(6));
  CHECK_FALSE(c.contains(4));
  CHECK_THROWS_AS(c.level_of(4), ArgumentError);
}

TEST_CASE("sphere areas")
{
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * pi));
  CHECK(unit_sphere_area(4) == doctest::Approx(2 * pi * pi));
}

TEST_CASE("reduce_measure examples")
{
  const MeasureDescription m3 = reduce_measure(ReducedChain(3, {3}));
  CHECK(m3.constant == doctest::Approx(4 * pi));
  const double t[] = {2.0};
  CHECK(m3.weight(t) == doctest::Approx(4.0));

  const MeasureDescription m5 = reduce_measure(ReducedChain(5, {3, 5}));
  CHECK(m5.constant == doctest::Approx(8 * pi * pi));
  const double t2[] = {3.0, 4.0};
  CHECK(m5.weight(t2) == doctest::Approx(9.0 * 4.0));
  const auto r = m5.radii(t2);
  CHECK(r[0] == doctest::Approx(3.0));
  CHECK(r[1] == doctest::Approx(5.0));

  const MeasureDescription m4 = reduce_measure(ReducedChain(4, {3, 4}));
  CHECK(m4.constant == doctest::Approx(8 * pi));
  CHECK(m4.weight(t2) == doctest::Approx(9.0));
}

TEST_CASE("Gaussian closed forms")
{
  auto gauss = [](std::span<const double> r) { return std::exp(-r.back() * r.back()); };
  const QuadratureResult g3 = integrate(ReducedChain(3, {3}), gauss, {0.0}, 12.0);
  CHECK(rel(g3.value, std::pow(pi, 1.5)) <= 1e-8);
  CHECK(g3.value == doctest::Approx(5.568328).epsilon(1e-6));
  CHECK_FALSE(g3.stochastic);
  const QuadratureResult g5 = integrate(ReducedChain(5, {3, 5}), gauss, {0.0, 0.0}, 12.0);
  CHECK(rel(g5.value, std::pow(pi, 2.5)) <= 1e-8);
  const QuadratureResult g4 = integrate(ReducedChain(4, {3, 4}), gauss, {0.0, 0.0}, 12.0);
  CHECK(rel(g4.value, pi * pi) <= 1e-8);
  const QuadratureResult g6 = integrate(ReducedChain(6, {2, 4, 6}), gauss, {0.0, 0.0, 0.0}, 12.0);
  CHECK(rel(g6.value, pi * pi * pi) <= 1e-8);
}

TEST_CASE("anisotropic tensor Gaussian")
{
  // exp(-a |X_3|^2 - b (|x|^2 - |X_3|^2)) in R^5.
  const double a = 2.0, b = 0.5;
  auto f = [&](std::span<const double> r) {
    return std::exp(-a * r[0] * r[0] - b * (r[1] * r[1] - r[0] * r[0]));
  };
  const QuadratureResult res = integrate(ReducedChain(5, {3, 5}), f, {0.0, 0.0}, 14.0);
  const double want = std::pow(pi / a, 1.5) * (pi / b);
  CHECK(rel(res.value, want) <= 1e-8);
}

TEST_CASE("power-law closed forms")
{
  // int_{|x|<1} |x|^{-2.5} dx = 4 pi / 0.5 in R^3.
  auto p = [](std::span<const double> r) { return std::pow(r[0], -2.5); };
  const QuadratureResult a = integrate(ReducedChain(3, {3}), p, {-2.5}, 1.0);
  CHECK(rel(a.value, 8 * pi) <= 1e-8);

  // int_{B^4} |X_3|^{-1} dx = 8 pi / 3.
  auto q = [](std::span<const double> r) { return 1.0 / r[0]; };
  const QuadratureResult b = integrate(ReducedChain(4, {3, 4}), q, {-1.0, -1.0}, 1.0);
  CHECK(rel(b.value, 8 * pi / 3) <= 1e-8);

  // int_{B^3} |x|^{-2} 1_{|x| > 1/k} = 4 pi (1 - 1/k).
  const double k = 1e3;
  auto c = [](std::span<const double> r) { return 1.0 / (r[0] * r[0]); };
  const QuadratureResult s = integrate_chain(ReducedChain(3, {3}), c, {-2.0}, {1.0 / k}, {{1.0 / k}}, 1.0);
  CHECK(rel(s.value, 4 * pi * (1 - 1 / k)) <= 1e-10);
}

TEST_CASE("divergence detection")
{
  auto f = [](std::span<const double> r) { return std::pow(r[0], -3.0); };
  CHECK_THROWS_AS(integrate(ReducedChain(3, {3}), f, {-3.0}, 1.0), DivergenceError);
  // A support cutoff makes the same power integrable.
  CHECK_NOTHROW(integrate_chain(ReducedChain(3, {3}), f, {-3.0}, {1e-3}, {{1e-3}}, 1.0));
}

TEST_CASE("refinement consistency")
{
  auto f = [](std::span<const double> r) {
    const double band = r[0] > 1e-4 && r[0] < 1e-2 ? std::log(r[0] * 1e4) : (r[0] >= 1e-2 ? std::log(100.0) : 0.0);
    return band * band * std::cos(3 * r[1]) * std::cos(3 * r[1]) / (r[0] * r[0] * r[0]);
  };
  QuadratureOptions opt;
  double previous_value = 0.0, previous_error = 0.0;
  for (double tol : {1e-5, 5e-6, 2.5e-6, 1.25e-6}) {
    opt.tol = tol;
    const QuadratureResult r = integrate_chain(ReducedChain(4, {3, 4}), f, {-3.0, -3.0}, {1e-4, 0.0},
                                               {{1e-4, 1e-2}, {}}, 1.0, opt);
    if (previous_error > 0.0)
      CHECK(std::abs(r.value - previous_value) <= previous_error);
    CHECK(r.abs_error_estimate >= 0.0);
    previous_value = r.value;
    previous_error = r.abs_error_estimate;
  }
}

TEST_CASE("budget exhaustion carries the best estimate")
{
  auto f = [](std::span<const double> r) { return std::cos(200.0 * r[0]) + 1.0; };
  QuadratureOptions opt;
  opt.max_intervals = 4;
  try {
    integrate(ReducedChain(3, {3}), f, {0.0}, 1.0, opt);
    FAIL("expected BudgetError");
  } catch (const BudgetError &e) {
    REQUIRE(e.best_estimate.size() == 1);
    CHECK(std::isfinite(e.best_estimate[0]));
    CHECK(e.best_error[0] > 0.0);
  }
}

TEST_CASE("quasi-Monte Carlo path for deep chains")
{
  auto gauss = [](std::span<const double> r) { return std::exp(-r.back() * r.back()); };
  QuadratureOptions opt;
  const ReducedChain chain(6, {3, 4, 5, 6});
  const QuadratureResult a = integrate(chain, gauss, {0.0, 0.0, 0.0, 0.0}, 6.0, opt);
  CHECK(a.stochastic);
  CHECK(a.abs_error_estimate > 0.0);
  CHECK(std::abs(a.value - pi * pi * pi) <= 5.0 * a.abs_error_estimate + 1e-3 * pi * pi * pi);
  const QuadratureResult b = integrate(chain, gauss, {0.0, 0.0, 0.0, 0.0}, 6.0, opt);
  CHECK(a.value == b.value);
  opt.seed += 1;
  const QuadratureResult c = integrate(chain, gauss, {0.0, 0.0, 0.0, 0.0}, 6.0, opt);
  CHECK(a.value != c.value);
}

TEST_CASE("vector integrands share one pass")
{
  ChainIntegrand in;
  in.components = 2;
  in.evaluate = [](std::span<const double> r, std::span<double> out) {
    out[0] = std::exp(-r[0] * r[0]);
    out[1] = r[0] * r[0] * std::exp(-r[0] * r[0]);
  };
  in.radius_powers = {{0.0}, {2.0}};
  in.outer_max = 12.0;
  const VectorQuadratureResult v = integrate_chain(ReducedChain(3, {3}), in);
  CHECK(rel(v.values[0], std::pow(pi, 1.5)) <= 1e-8);
  CHECK(rel(v.values[1], 1.5 * std::pow(pi, 1.5)) <= 1e-8);
  CHECK(v.component(1).value == v.values[1]);
}
