// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hardychain/fields.hpp"

#include <algorithm>
#include <cmath>

#include "hardychain/error.hpp"

namespace hardychain {

namespace {

void check_point(const Point &p, const ProblemFrame &frame)
{
  if (p.dimension() != static_cast<std::size_t>(frame.n))
    throw ArgumentError("point has " + std::to_string(p.dimension()) + " coordinates, frame has n=" +
                        std::to_string(frame.n));
}

// Squared chain radii |X_m|^2 for m = 1..n, index m-1.
std::vector<double> squared_radii(const Point &p)
{
  std::vector<double> r2(p.dimension());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    acc += p.coords[i] * p.coords[i];
    r2[i] = acc;
  }
  return r2;
}

void check_regular(const std::vector<double> &r2, const ProblemFrame &frame)
{
  if (std::sqrt(r2[static_cast<std::size_t>(frame.k0 - 1)]) < kSingularRadius)
    throw SingularPointError("point lies on the singular subspace S_" + std::to_string(frame.k0));
}

// Factors with gamma_m = 0 are absent, so only the first nonzero index can be singular.
void check_regular(const std::vector<double> &r2, const GammaSeq &gamma)
{
  const ProblemFrame &frame = gamma.frame();
  for (int m = frame.k0; m <= frame.n; ++m) {
    if (gamma[m] == 0.0)
      continue;
    if (std::sqrt(r2[static_cast<std::size_t>(m - 1)]) < kSingularRadius)
      throw SingularPointError("point lies on the singular subspace S_" + std::to_string(m));
    return;
  }
}

}  // namespace

PotentialSpec::PotentialSpec(ProblemFrame frame_, BetaSeq beta_)
  : frame(frame_), beta(std::move(beta_))
{
  if (!(beta.frame() == frame))
    throw ArgumentError("potential: beta frame does not match");
}

double dist_subspace(const Point &p, int m)
{
  if (m < 1 || static_cast<std::size_t>(m) > p.dimension())
    throw ArgumentError("dist_subspace: index " + std::to_string(m) + " outside [1, " +
                        std::to_string(p.dimension()) + "]");
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    acc += p.coords[static_cast<std::size_t>(i)] * p.coords[static_cast<std::size_t>(i)];
  return std::sqrt(acc);
}

double potential_value(const Point &p, const PotentialSpec &spec)
{
  check_point(p, spec.frame);
  const auto r2 = squared_radii(p);
  check_regular(r2, spec.frame);
  double v = 0.0;
  for (int m = spec.frame.k0; m <= spec.frame.n; ++m)
    v += spec.beta[m] / r2[static_cast<std::size_t>(m - 1)];
  return v;
}

double ground_state_value(const Point &p, const GammaSeq &gamma)
{
  const ProblemFrame &frame = gamma.frame();
  check_point(p, frame);
  const auto r2 = squared_radii(p);
  check_regular(r2, gamma);
  double log_phi = 0.0;
  for (int m = frame.k0; m <= frame.n; ++m)
    if (gamma[m] != 0.0)
      log_phi -= 0.5 * gamma[m] * std::log(r2[static_cast<std::size_t>(m - 1)]);
  return std::exp(log_phi);
}

Point vector_field_value(const Point &p, const GammaSeq &gamma)
{
  const ProblemFrame &frame = gamma.frame();
  check_point(p, frame);
  const auto r2 = squared_radii(p);
  check_regular(r2, gamma);

  // Component i collects gamma_m / |X_m|^2 over every m >= i.
  Point f{std::vector<double>(p.dimension(), 0.0)};
  double tail = 0.0;
  for (int i = frame.n; i >= 1; --i) {
    if (i >= frame.k0 && gamma[i] != 0.0)
      tail += gamma[i] / r2[static_cast<std::size_t>(i - 1)];
    f.coords[static_cast<std::size_t>(i - 1)] = tail * p.coords[static_cast<std::size_t>(i - 1)];
  }
  return f;
}

double divF_minus_F2(const Point &p, const GammaSeq &gamma)
{
  const ProblemFrame &frame = gamma.frame();
  check_point(p, frame);
  const auto r2 = squared_radii(p);
  check_regular(r2, gamma);

  double value = 0.0;
  double prefix = 0.0;  // sum of gamma_j over chain indices j < m
  for (int m = frame.k0; m <= frame.n; ++m) {
    const double g = gamma[m];
    if (g == 0.0)
      continue;
    const double coefficient = g * (m - 2) - g * g - 2.0 * g * prefix;
    value += coefficient / r2[static_cast<std::size_t>(m - 1)];
    prefix += g;
  }
  return value;
}

double log_ground_state_ratio(const Point &p, const GammaSeq &gamma, std::size_t axis,
                              double delta)
{
  const ProblemFrame &frame = gamma.frame();
  const auto r2 = squared_radii(p);
  const double shift = (2.0 * p.coords[axis] + delta) * delta;
  double log_ratio = 0.0;
  // Coordinate `axis` (zero-based) enters |X_m| for every m > axis.
  for (int m = std::max(frame.k0, static_cast<int>(axis) + 1); m <= frame.n; ++m)
    log_ratio -= 0.5 * gamma[m] * std::log1p(shift / r2[static_cast<std::size_t>(m - 1)]);
  return log_ratio;
}

double ground_state_residual(const Point &p, const GammaSeq &gamma, double h)
{
  const ProblemFrame &frame = gamma.frame();
  check_point(p, frame);
  if (!(h > 0.0))
    throw PreconditionError("ground_state_residual: step must be positive");
  const auto r2 = squared_radii(p);
  for (int m = frame.k0; m <= frame.n; ++m)
    if (std::sqrt(r2[static_cast<std::size_t>(m - 1)]) < 10.0 * h)
      throw PreconditionError("ground_state_residual: point is closer than 10h to S_" +
                              std::to_string(m));

  // (phi(p + h e_i) - 2 phi(p) + phi(p - h e_i)) / (h^2 phi(p)), with each
  // ratio phi(p +- h e_i)/phi(p) - 1 formed by expm1 so that no digits are
  // lost to the subtraction.
  double laplacian_over_phi = 0.0;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    const double up = std::expm1(log_ground_state_ratio(p, gamma, i, h));
    const double down = std::expm1(log_ground_state_ratio(p, gamma, i, -h));
    laplacian_over_phi += (up + down) / (h * h);
  }
  const double exact = divF_minus_F2(p, gamma);
  return std::abs(laplacian_over_phi + exact) / std::max(1.0, std::abs(exact));
}

}  // namespace hardychain
