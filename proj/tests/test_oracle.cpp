// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "hardychain/error.hpp"
#include "hardychain/oracle.hpp"

using namespace hardychain;

namespace {

BetaSeq zeros(int n)
{
  return BetaSeq(ProblemFrame(n, 3), std::vector<double>(static_cast<std::size_t>(n - 2), 0.0));
}

EigEstimate solve(int n, int cells, double L, const BetaSeq &beta, int target, const EigenOptions &opt = {})
{
  return solve_system(assemble(GridSpec{n, cells, L}, beta, target), opt);
}

}  // namespace

TEST_CASE("grid validation")
{
  CHECK_NOTHROW(GridSpec({3, 8, 1.0}).validate());
  CHECK_THROWS_AS(GridSpec({3, 9, 1.0}).validate(), PreconditionError);
  CHECK_THROWS_AS(GridSpec({3, 6, 1.0}).validate(), ArgumentError);
  CHECK_THROWS_AS(GridSpec({5, 8, 1.0}).validate(), ArgumentError);
  CHECK_THROWS_AS(GridSpec({3, 8, 0.0}).validate(), ArgumentError);
  const GridSpec g{3, 8, 1.0};
  CHECK(g.nodes() == 512);
  CHECK(g.coordinate(0) == doctest::Approx(-0.875));
  CHECK(g.coordinate(3) == doctest::Approx(-0.125));
}

TEST_CASE("stiffness is exactly symmetric and positive")
{
  for (int n : {3, 4}) {
    const GridSpec g{n, 8, 1.0};
    const DiscreteOperator K = assemble_stiffness(g);
    CHECK(K.rows == g.nodes());
    CHECK(K.asymmetry() == 0.0);
    std::vector<double> one(K.rows, 1.0), y(K.rows);
    K.multiply(one, y);
    CHECK(std::inner_product(one.begin(), one.end(), y.begin(), 0.0) > 0.0);
    // Interior row sums vanish; wall rows do not.
    const std::vector<double> d = K.diagonal();
    CHECK(*std::min_element(d.begin(), d.end()) == doctest::Approx(2.0 * n * std::pow(g.spacing(), n - 2)));
  }
}

TEST_CASE("weighted masses")
{
  const GridSpec g{3, 8, 1.0};
  const auto id = weighted_mass(g, 0);
  const auto w3 = weighted_mass(g, 3);
  const double h3 = std::pow(g.spacing(), 3);
  CHECK(id[0] == doctest::Approx(h3));
  const double x = g.coordinate(0);
  CHECK(w3[0] == doctest::Approx(h3 / (3 * x * x)));
  CHECK_THROWS_AS(assemble(g, zeros(3), 4), ArgumentError);
  CHECK_THROWS_AS(assemble(g, zeros(4), 3), ArgumentError);
}

TEST_CASE("identity mass reproduces the box eigenvalue")
{
  const double L = 1.0;
  const EigEstimate e = solve(3, 48, L, zeros(3), 0);
  CHECK(std::abs(e.lambda_min / box_eigenvalue(3, L) - 1.0) <= 0.02);
  CHECK(e.residual_norm <= 1e-6);
  CHECK(box_eigenvalue(3, 1.0) == doctest::Approx(3 * M_PI * M_PI / 4));
}

TEST_CASE("Hardy quotient decreases under refinement")
{
  const auto seq = refinement_sequence(3, {8, 16}, 1.0, zeros(3), 3);
  REQUIRE(seq.size() == 2);
  CHECK(seq[1].lambda_min <= seq[0].lambda_min);
  CHECK(seq[1].lambda_min >= 0.25 - 0.05);
  for (const auto &e : seq)
    CHECK(e.residual_norm <= 1e-6);
  // The warm start does not change the answer.
  const EigEstimate cold = solve(3, 16, 1.0, zeros(3), 3);
  CHECK(std::abs(cold.lambda_min - seq[1].lambda_min) <= 1e-5 * cold.lambda_min);
}

TEST_CASE("zero beta shifted solve equals min_rayleigh")
{
  const DiscreteSystem s = assemble(GridSpec{3, 8, 1.0}, zeros(3), 3);
  const EigEstimate a = min_rayleigh(s.stiffness, s.target_mass);
  const EigEstimate b = shifted_min_rayleigh(s.stiffness, {}, s.target_mass);
  CHECK(a.lambda_min == b.lambda_min);
  CHECK(std::isnan(b.probe_value));
}

TEST_CASE("shifted quotient in n = 4")
{
  const BetaSeq beta(ProblemFrame(4, 3), {0.25, 0.0});
  const EigEstimate c = solve(4, 8, 1.0, beta, 4);
  const EigEstimate f = solve(4, 12, 1.0, beta, 4);
  CHECK_FALSE(c.indefinite);
  CHECK(c.probe_value > 1.0);
  CHECK(f.lambda_min <= c.lambda_min);
  CHECK(f.lambda_min >= 0.25 - 0.05);
}

TEST_CASE("indefinite numerator form is flagged")
{
  const EigEstimate e = solve(4, 8, 1.0, BetaSeq(ProblemFrame(4, 3), {2.0, 0.0}), 4);
  CHECK(e.indefinite);
  CHECK(e.probe_value <= 1.0);
  CHECK(std::isnan(e.lambda_min));
}

TEST_CASE("quotient is invariant under scaling the box")
{
  const EigEstimate a = solve(3, 16, 1.0, zeros(3), 3);
  const EigEstimate b = solve(3, 16, 2.0, zeros(3), 3);
  CHECK(std::abs(a.lambda_min / b.lambda_min - 1.0) <= 1e-6);
  // The box eigenvalue instead scales like 1/L^2.
  const EigEstimate c = solve(3, 8, 1.0, zeros(3), 0);
  const EigEstimate d = solve(3, 8, 2.0, zeros(3), 0);
  CHECK(c.lambda_min / d.lambda_min == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("solver is deterministic")
{
  EigenOptions opt;
  opt.seed = 7;
  const EigEstimate a = solve(3, 12, 1.0, zeros(3), 3, opt);
  const EigEstimate b = solve(3, 12, 1.0, zeros(3), 3, opt);
  CHECK(a.lambda_min == b.lambda_min);
  CHECK(a.iterations == b.iterations);
  CHECK(a.vector == b.vector);
}

TEST_CASE("non-convergence carries the best iterate")
{
  EigenOptions opt;
  opt.max_iterations = 1;
  opt.tol = 1e-14;
  try {
    solve(3, 8, 1.0, zeros(3), 3, opt);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError &e) {
    CHECK(std::isfinite(e.best_lambda));
    CHECK(e.best_residual > 1e-14);
  }
}

TEST_CASE("prolongation copies each coarse value to its children")
{
  const GridSpec g{3, 8, 1.0};
  std::vector<double> v(g.nodes());
  std::iota(v.begin(), v.end(), 0.0);
  const auto p = prolongate(g, v);
  REQUIRE(p.size() == 8 * v.size());
  // Fine node (i, j, k) takes coarse node (i/2, j/2, k/2), x_1 slowest.
  auto fine = [](int i, int j, int k) { return (static_cast<std::size_t>(i) * 16 + j) * 16 + k; };
  auto coarse = [](int i, int j, int k) { return (static_cast<std::size_t>(i) * 8 + j) * 8 + k; };
  CHECK(p[fine(0, 0, 0)] == v[coarse(0, 0, 0)]);
  CHECK(p[fine(5, 9, 14)] == v[coarse(2, 4, 7)]);
  CHECK(p[fine(15, 15, 15)] == v[coarse(7, 7, 7)]);
}
