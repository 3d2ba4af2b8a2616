// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hardychain/error.hpp"
#include "hardychain/fields.hpp"

using namespace hardychain;

namespace {

GammaSeq gammas(int n, std::vector<double> g)
{
  return GammaSeq(ProblemFrame(n, 3), std::move(g));
}

// Random point with |X_m| >= min_dist for every m >= 1 (so also for the chain).
Point random_point(std::mt19937_64 &rng, int n, double min_dist)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Point p{std::vector<double>(static_cast<std::size_t>(n))};
    for (auto &x : p.coords)
      x = u(rng);
    if (std::abs(p.coords[0]) >= min_dist)
      return p;
  }
}

AlphaSeq random_alpha(std::mt19937_64 &rng, int n)
{
  std::uniform_real_distribution<double> u(-3.0, 0.0);
  std::vector<double> a(static_cast<std::size_t>(n - 2));
  for (auto &x : a)
    x = u(rng);
  return AlphaSeq(ProblemFrame(n, 3), a);
}

}  // namespace

TEST_CASE("dist_subspace examples")
{
  CHECK(dist_subspace(Point{{3, 4, 0, 0, 0}}, 3) == 5.0);
  CHECK(dist_subspace(Point{{1, 1, 1, 1}}, 4) == 2.0);
  const Point p{{0, 0, 1, 2}};
  CHECK(dist_subspace(p, 3) == 1.0);
  CHECK(dist_subspace(p, 2) == 0.0);
  CHECK_THROWS_AS(dist_subspace(p, 5), ArgumentError);
  CHECK_THROWS_AS(dist_subspace(p, 0), ArgumentError);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Point q = random_point(rng, 6, 0.0);
    for (int m = 2; m <= 6; ++m)
      CHECK(dist_subspace(q, m) >= dist_subspace(q, m - 1));
  }
}

TEST_CASE("potential_value examples")
{
  {
    const ProblemFrame f(3, 3);
    CHECK(potential_value(Point{{0, 2, 0}}, PotentialSpec(f, BetaSeq(f, {0.25}))) == doctest::Approx(1.0 / 16));
  }
  {
    const ProblemFrame f(4, 3);
    CHECK(potential_value(Point{{1, 0, 0, 0}}, PotentialSpec(f, BetaSeq(f, {0, 1}))) == doctest::Approx(1.0));
    CHECK(potential_value(Point{{0.3, 0.2, 0.1, 5}}, PotentialSpec(f, BetaSeq(f, {0, 0}))) == 0.0);
    CHECK_THROWS_AS(potential_value(Point{{0, 0, 0, 1}}, PotentialSpec(f, BetaSeq(f, {0, 1}))), SingularPointError);
    CHECK_THROWS_AS(PotentialSpec(ProblemFrame(5, 3), BetaSeq(f, {0, 1})), ArgumentError);
  }
}

TEST_CASE("ground_state_value examples")
{
  CHECK(ground_state_value(Point{{1, 0, 0, 0, 0}}, gammas(5, {0.5, 0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(ground_state_value(Point{{0, 4, 0}}, gammas(3, {0.5})) == doctest::Approx(0.5));
  CHECK(ground_state_value(Point{{0, 0, 0, 2}}, gammas(4, {0, 1})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ground_state_value(Point{{0, 0, 0}}, gammas(3, {0.5})), SingularPointError);
}

TEST_CASE("vector_field_value examples")
{
  const Point zero = vector_field_value(Point{{0.3, 0.1, 0.2, 0.5}}, gammas(4, {0, 0}));
  for (double c : zero.coords)
    CHECK(c == 0.0);
  const Point a = vector_field_value(Point{{1, 0, 0}}, gammas(3, {1}));
  CHECK(a.coords[0] == doctest::Approx(1.0));
  CHECK(a.coords[1] == 0.0);
  const Point b = vector_field_value(Point{{0, 0, 0, 2}}, gammas(4, {0, 1}));
  CHECK(b.coords[3] == doctest::Approx(0.5));
  CHECK(b.coords[0] == 0.0);
}

TEST_CASE("divF_minus_F2 examples")
{
  CHECK(divF_minus_F2(Point{{1, 0, 0}}, gammas(3, {0.5})) == doctest::Approx(0.25));
  CHECK(divF_minus_F2(Point{{0.2, 0.7, 0.1, 0.4}}, gammas(4, {0, 0})) == 0.0);
  CHECK(divF_minus_F2(Point{{1, 0, 0, 0}}, gammas(4, {0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("gradient of log phi equals -F")
{
  std::mt19937_64 rng(42);
  const double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + i % 4;
    const AlphaSeq a = random_alpha(rng, n);
    const GammaSeq g = gamma_from_alpha(a.frame(), a);
    const Point p = random_point(rng, n, 0.1);
    const Point F = vector_field_value(p, g);
    for (std::size_t k = 0; k < p.dimension(); ++k) {
      const double d = (log_ground_state_ratio(p, g, k, h) - log_ground_state_ratio(p, g, k, -h)) / (2 * h);
      CHECK(std::abs(d + F.coords[k]) <= 1e-6 * std::max(1.0, std::abs(F.coords[k])));
    }
  }
}

TEST_CASE("ground-state identity equals the potential")
{
  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    const int n = 3 + i % 4;
    const AlphaSeq a = random_alpha(rng, n);
    const GammaSeq g = gamma_from_alpha(a.frame(), a);
    const BetaSeq b = beta_from_alpha(a.frame(), a);
    const Point p = random_point(rng, n, 0.01);
    const double lhs = divF_minus_F2(p, g);
    const double rhs = potential_value(p, PotentialSpec(a.frame(), b));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("homogeneity of the ground state")
{
  std::mt19937_64 rng(44);
  for (int i = 0; i < 100; ++i) {
    const AlphaSeq a = random_alpha(rng, 5);
    const GammaSeq g = gamma_from_alpha(a.frame(), a);
    const Point p = random_point(rng, 5, 0.1);
    const double lambda = 0.5 + 3.0 * static_cast<double>(i) / 100.0;
    Point q = p;
    for (auto &x : q.coords)
      x *= lambda;
    double total = 0.0;
    for (double v : g.values())
      total += v;
    const double want = std::pow(lambda, -total) * ground_state_value(p, g);
    CHECK(std::abs(ground_state_value(q, g) / want - 1.0) <= 1e-12);
  }
}

TEST_CASE("ground_state_residual examples")
{
  CHECK(ground_state_residual(Point{{0.4, 0.3, 0.2}}, gammas(3, {0, }), 1e-3) == 0.0);
  const Point p{{0.5, 0.5, 0.5}};
  const double fine = ground_state_residual(p, gammas(3, {0.5}), 1e-4);
  CHECK(fine <= 1e-6);
  const double coarse = ground_state_residual(p, gammas(3, {0.5}), 1e-2);
  const double ratio = coarse / fine;
  CHECK(ratio >= 1e4 / 3.0);
  CHECK(ratio <= 1e4 * 3.0);
  CHECK_THROWS_AS(ground_state_residual(Point{{0.05, 0.05, 0.0}}, gammas(3, {0.5}), 1e-2), PreconditionError);
  CHECK_THROWS_AS(ground_state_residual(p, gammas(3, {0.5}), 0.0), PreconditionError);
}
