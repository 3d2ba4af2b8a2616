// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HARDYCHAIN_QUADRATURE_HPP
#define HARDYCHAIN_QUADRATURE_HPP

// Integration over R^n of functions that depend on x only through a chain of
// radii r_{m_1} <= ... <= r_{m_q} with r_m = |X_m|.  Each coordinate block
// (x_{m_{j-1}+1}, ..., x_{m_j}) is reduced to its length, leaving q radial
// variables.  Levels are numbered from the innermost radius (level 0) to the
// outermost one (level q-1).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hardychain {

class ReducedChain
{
public:
  /// indices must be strictly increasing, within [1, n], and end at n.
  ReducedChain(int n, std::vector<int> indices);

  int n() const { return n_; }
  const std::vector<int> &indices() const { return indices_; }
  std::size_t levels() const { return indices_.size(); }
  /// Block dimensions m_1, m_2 - m_1, ..., m_q - m_{q-1}.
  std::vector<int> group_dims() const;
  /// Position of radius r_m in the chain; throws if m is not a chain index.
  std::size_t level_of(int m) const;
  bool contains(int m) const;

private:
  int n_;
  std::vector<int> indices_;
};

/// Area of the unit sphere S^{d-1} in R^d; 2 for d = 1.
double unit_sphere_area(int d);

/// int_{R^n} f dx = constant * int f(radii(t)) weight(t) dt over the
/// positive orthant of block lengths t_1, ..., t_q.
struct MeasureDescription
{
  double constant = 0.0;
  std::vector<int> block_dims;
  std::vector<int> cumulative_dims;

  /// prod_i t_i^{d_i - 1}.
  double weight(std::span<const double> t) const;
  /// r_{m_j} = sqrt(t_1^2 + ... + t_j^2).
  std::vector<double> radii(std::span<const double> t) const;
};

MeasureDescription reduce_measure(const ReducedChain &chain);

/// Vector-valued integrand of the chained radii, with its declared
/// power-law structure.
struct ChainIntegrand
{
  std::size_t components = 1;
  /// radii[l] is the radius at chain level l; out has `components` entries.
  std::function<void(std::span<const double> radii, std::span<double> out)> evaluate;
  /// radius_powers[c][l]: exponent of radius l in component c once every
  /// radius at level <= l lies below all breakpoints; +infinity if the
  /// component vanishes there.  Empty means 0 for every level.
  std::vector<std::vector<double>> radius_powers;
  /// Per level: the integrand vanishes when that radius is below the value.
  std::vector<double> support_min;
  /// Per level: radii where the integrand is not smooth.
  std::vector<std::vector<double>> breakpoints;
  /// Upper limit of the outermost radius.
  double outer_max = 1.0;
};

struct QuadratureOptions
{
  double tol = 1e-10;
  /// Subintervals allowed in one adaptive one-dimensional integration.
  std::size_t max_intervals = 4000;
  /// Chains with more levels use quasi-Monte Carlo.
  std::size_t max_deterministic_levels = 3;
  std::size_t qmc_points = 1u << 14;
  std::size_t qmc_replicates = 8;
  std::uint64_t seed = 20260101;
};

struct QuadratureResult
{
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool stochastic = false;
};

struct VectorQuadratureResult
{
  std::vector<double> values;
  std::vector<double> abs_errors;
  std::size_t evaluations = 0;
  bool stochastic = false;

  QuadratureResult component(std::size_t c) const;
};

/// Nested adaptive Gauss-Kronrod quadrature on log-substituted variables.
/// Every radial origin is handled by integrating numerically down to 30 units
/// of log below the smallest breakpoint and adding the exact power-law tail.
/// Throws DivergenceError for a non-integrable declared power without a
/// support cutoff, BudgetError when max_intervals is exhausted.
VectorQuadratureResult integrate_chain(const ReducedChain &chain, const ChainIntegrand &integrand,
                                       const QuadratureOptions &options = {});

QuadratureResult integrate_chain(const ReducedChain &chain,
                                 const std::function<double(std::span<const double>)> &f,
                                 std::vector<double> radius_powers,
                                 std::vector<double> support_min,
                                 std::vector<std::vector<double>> breakpoints, double outer_max,
                                 const QuadratureOptions &options = {});

}  // namespace hardychain

#endif  // HARDYCHAIN_QUADRATURE_HPP
