// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HARDYCHAIN_FIELDS_HPP
#define HARDYCHAIN_FIELDS_HPP

// Pointwise geometry of the singular chain: distances |X_m| to the subspaces
// S_m = {x_1 = ... = x_m = 0}, the Hardy potential, the ground state
// phi = prod_m |X_m|^{-gamma_m} and its logarithmic gradient field.

#include <vector>

#include "hardychain/params.hpp"

namespace hardychain {

struct Point
{
  std::vector<double> coords;

  std::size_t dimension() const { return coords.size(); }
};

struct PotentialSpec
{
  ProblemFrame frame;
  BetaSeq beta;

  PotentialSpec(ProblemFrame frame, BetaSeq beta);
};

/// Points with |X_{k0}| below this are treated as lying on S_{k0}.
inline constexpr double kSingularRadius = 1e-300;

/// |X_m(p)| = sqrt(x_1^2 + ... + x_m^2), 1 <= m <= dim(p).
double dist_subspace(const Point &p, int m);

/// sum_m beta_m / |X_m|^2.
double potential_value(const Point &p, const PotentialSpec &spec);

/// prod_m |X_m|^{-gamma_m}.
double ground_state_value(const Point &p, const GammaSeq &gamma);

/// F = sum_m gamma_m X_m / |X_m|^2, which equals -grad(phi)/phi.
Point vector_field_value(const Point &p, const GammaSeq &gamma);

/// div F - |F|^2 from the closed-form sums.  The cross terms use
/// X_m . X_j = |X_j|^2 for j < m, so each contributes gamma_m gamma_j / |X_m|^2.
double divF_minus_F2(const Point &p, const GammaSeq &gamma);

/// Relative residual |Delta_h phi / phi + (div F - |F|^2)| / max(1, |div F - |F|^2|)
/// with the second-order central-difference Laplacian of step h.
/// Requires |X_m(p)| >= 10 h for every chain index m.
double ground_state_residual(const Point &p, const GammaSeq &gamma, double h);

/// log(phi(p + delta e_axis) / phi(p)) evaluated without cancellation;
/// axis is zero-based.
double log_ground_state_ratio(const Point &p, const GammaSeq &gamma, std::size_t axis,
                              double delta);

}  // namespace hardychain

#endif  // HARDYCHAIN_FIELDS_HPP
