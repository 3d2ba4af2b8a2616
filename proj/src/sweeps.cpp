// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "hardychain/error.hpp"
#include "hardychain/families.hpp"

namespace hardychain {

namespace {

// Evaluates f(i) for i < count on up to `jobs` threads; results land by index,
// and the error of the lowest failing index is rethrown.
template <class F>
std::vector<QuotientReport> evaluate_points(std::size_t count, unsigned jobs, F &&f)
{
  std::vector<QuotientReport> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1u), count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

}  // namespace

LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw ArgumentError("fit_line: need at least two (x, y) pairs of equal length");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0))
    throw ArgumentError("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.b = sxy / sxx;
  fit.a = my - fit.b * mx;
  for (std::size_t i = 0; i < x.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(y[i] - (fit.a + fit.b * x[i])));
  return fit;
}

SharpnessSweep sharpness_sweep(FamilyKind kind, const ProblemFrame &frame, const AlphaSeq &alpha,
                               std::vector<double> k_grid, int q, const QuadratureOptions &options,
                               unsigned jobs)
{
  if (k_grid.size() < 3)
    throw ArgumentError("sharpness_sweep: the k grid needs at least 3 points");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 1.0) || !std::isfinite(k_grid[i]))
      throw ArgumentError("sharpness_sweep: every k must be finite and exceed 1");
    if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
      throw ArgumentError("sharpness_sweep: the k grid must be increasing");
  }
  SharpnessSweep sweep;
  sweep.kind = kind;
  switch (kind) {
  case FamilyKind::step3:
    sweep.target_index = 3;
    sweep.predicted_constant = 0.25;
    break;
  case FamilyKind::stepq:
    if (q < 4 || q > frame.n)
      throw ArgumentError("sharpness_sweep: stepq needs 4 <= q <= n");
    sweep.target_index = q;
    sweep.predicted_constant = (alpha[q - 1] - 0.5) * (alpha[q - 1] - 0.5);
    break;
  case FamilyKind::failure:
    throw ArgumentError("sharpness_sweep: use failure_sweep for the failure family");
  }
  const BetaSeq beta = beta_from_alpha(frame, alpha);
  sweep.k = k_grid;
  sweep.reports = evaluate_points(k_grid.size(), jobs, [&](std::size_t i) {
    const FamilyDescriptor desc = kind == FamilyKind::step3
                                    ? FamilyDescriptor::step3(frame, k_grid[i])
                                    : FamilyDescriptor::stepq(frame, alpha, q, k_grid[i]);
    return rayleigh_quotient(desc, beta, sweep.target_index, options);
  });
  for (const auto &r : sweep.reports) {
    sweep.values.push_back(r.value);
    sweep.errors.push_back(r.value_error);
  }
  std::vector<double> x;
  for (double k : k_grid)
    x.push_back(1.0 / std::log(k));
  sweep.fit = fit_line(x, sweep.values);
  sweep.strictly_decreasing = true;
  for (std::size_t i = 1; i < sweep.values.size(); ++i)
    if (!(sweep.values[i] < sweep.values[i - 1]))
      sweep.strictly_decreasing = false;
  const double max_error = *std::max_element(sweep.errors.begin(), sweep.errors.end());
  sweep.inconclusive = max_error > sweep.fit.residual;
  return sweep;
}

FailureSweep failure_sweep(const ProblemFrame &frame, const AlphaSeq &alpha, double Q,
                           WeightKind weight_kind, std::vector<double> epsilon_grid,
                           const QuadratureOptions &options, unsigned jobs)
{
  if (alpha.last() != 0.0)
    throw PreconditionError("failure_sweep: requires alpha_n = 0");
  if (epsilon_grid.size() < 2)
    throw ArgumentError("failure_sweep: the epsilon grid needs at least 2 points");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0))
      throw ArgumentError("failure_sweep: every epsilon must be positive");
    if (i > 0 && !(epsilon_grid[i] < epsilon_grid[i - 1]))
      throw ArgumentError("failure_sweep: the epsilon grid must decrease");
  }
  const SobolevSpec spec = sobolev_spec(frame, alpha, Q, weight_kind);
  const BetaSeq beta = beta_from_alpha(frame, alpha);
  FailureSweep sweep;
  sweep.Q = Q;
  sweep.weight_kind = weight_kind;
  sweep.epsilon = epsilon_grid;
  sweep.d_exponent_expected = -2.0 / Q;
  sweep.reports = evaluate_points(epsilon_grid.size(), jobs, [&](std::size_t i) {
    return sobolev_quotient(FamilyDescriptor::failure(frame, alpha, epsilon_grid[i]), beta, spec, options);
  });
  for (const QuotientReport &r : sweep.reports) {
    sweep.N.push_back(r.numerator);
    sweep.D.push_back(r.denominator);
    sweep.ratio.push_back(r.value);
    sweep.ratio_errors.push_back(r.value_error);
  }
  sweep.strictly_decreasing = true;
  sweep.inconclusive = false;
  for (std::size_t i = 1; i < sweep.ratio.size(); ++i) {
    if (!(sweep.ratio[i] < sweep.ratio[i - 1]))
      sweep.strictly_decreasing = false;
    if (std::abs(sweep.ratio[i] - sweep.ratio[i - 1]) <= sweep.ratio_errors[i] + sweep.ratio_errors[i - 1])
      sweep.inconclusive = true;
  }
  std::vector<double> le, ld;
  for (std::size_t i = 0; i < sweep.epsilon.size(); ++i) {
    le.push_back(std::log(sweep.epsilon[i]));
    ld.push_back(std::log(sweep.D[i]));
  }
  sweep.d_exponent = fit_line(le, ld).b;
  const auto [mn, mx] = std::minmax_element(sweep.N.begin(), sweep.N.end());
  sweep.n_spread = *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
  return sweep;
}

}  // namespace hardychain
