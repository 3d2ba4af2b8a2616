// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hardychain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "hardychain/error.hpp"

namespace hardychain {

std::size_t GridSpec::nodes() const
{
  std::size_t count = 1;
  for (int d = 0; d < n; ++d)
    count *= static_cast<std::size_t>(cells_per_axis);
  return count;
}

void GridSpec::validate() const
{
  if (n != 3 && n != 4)
    throw ArgumentError("grid: n must be 3 or 4, got " + std::to_string(n));
  if (cells_per_axis < 8)
    throw ArgumentError("grid: cells_per_axis must be at least 8");
  if (!(box_half_width > 0.0) || !std::isfinite(box_half_width))
    throw ArgumentError("grid: box_half_width must be positive");
  if (nodes() > std::numeric_limits<std::uint32_t>::max())
    throw ArgumentError("grid: too many nodes for 32-bit column indices");
  // A node at coordinate 0 would put points of every S_m on the grid.
  for (int i = 0; i < cells_per_axis; ++i)
    if (coordinate(i) == 0.0 || 2 * i + 1 == cells_per_axis)
      throw PreconditionError("grid: a node lies on x_j = 0 (odd cells_per_axis " +
                              std::to_string(cells_per_axis) + "); singular weights would be evaluated");
}

void DiscreteOperator::multiply(std::span<const double> x, std::span<double> y) const
{
  const std::size_t *rs = row_start.data();
  const std::uint32_t *col = columns.data();
  const double *val = values.data();
  const double *xp = x.data();
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = rs[i]; k < rs[i + 1]; ++k)
      s += val[k] * xp[col[k]];
    y[i] = s;
  }
}

std::vector<double> DiscreteOperator::diagonal() const
{
  std::vector<double> d(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
      if (columns[k] == i)
        d[i] = values[k];
  return d;
}

double DiscreteOperator::asymmetry() const
{
  double worst = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) {
      const std::size_t j = columns[k];
      const auto begin = columns.begin() + static_cast<std::ptrdiff_t>(row_start[j]);
      const auto end = columns.begin() + static_cast<std::ptrdiff_t>(row_start[j + 1]);
      const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(i));
      const double transposed =
        (it != end && *it == i) ? values[static_cast<std::size_t>(it - columns.begin())] : 0.0;
      worst = std::max(worst, std::abs(values[k] - transposed));
    }
  }
  return worst;
}

void DiscreteOperator::add_diagonal(std::span<const double> d)
{
  if (d.size() != rows)
    throw ArgumentError("add_diagonal: size mismatch");
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
      if (columns[k] == i)
        values[k] += d[i];
}

namespace {

// Odometer over the multi-index of a grid, x_1 varying slowest.
struct Odometer
{
  std::vector<int> index;
  int N;

  Odometer(int n, int N_) : index(static_cast<std::size_t>(n), 0), N(N_) {}
  void next()
  {
    for (std::size_t d = index.size(); d-- > 0;) {
      if (++index[d] < N)
        return;
      index[d] = 0;
    }
  }
};

}  // namespace

DiscreteOperator assemble_stiffness(const GridSpec &grid)
{
  grid.validate();
  const int n = grid.n;
  const int N = grid.cells_per_axis;
  const double h = grid.spacing();
  const double scale = std::pow(h, n - 2);
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  std::size_t s = 1;
  for (int d = n - 1; d >= 0; --d) {
    stride[static_cast<std::size_t>(d)] = s;
    s *= static_cast<std::size_t>(N);
  }

  DiscreteOperator K;
  K.rows = grid.nodes();
  K.row_start.resize(K.rows + 1);
  K.columns.reserve(K.rows * static_cast<std::size_t>(2 * n + 1));
  K.values.reserve(K.rows * static_cast<std::size_t>(2 * n + 1));
  Odometer odo(n, N);
  for (std::size_t row = 0; row < K.rows; ++row, odo.next()) {
    K.row_start[row] = K.values.size();
    double diag = 2.0 * n;
    for (int d = 0; d < n; ++d)
      if (odo.index[static_cast<std::size_t>(d)] == 0 || odo.index[static_cast<std::size_t>(d)] == N - 1)
        diag += 1.0;  // ghost value -u at the wall
    for (int d = 0; d < n; ++d)
      if (odo.index[static_cast<std::size_t>(d)] > 0) {
        K.columns.push_back(static_cast<std::uint32_t>(row - stride[static_cast<std::size_t>(d)]));
        K.values.push_back(-scale);
      }
    K.columns.push_back(static_cast<std::uint32_t>(row));
    K.values.push_back(diag * scale);
    for (int d = n - 1; d >= 0; --d)
      if (odo.index[static_cast<std::size_t>(d)] < N - 1) {
        K.columns.push_back(static_cast<std::uint32_t>(row + stride[static_cast<std::size_t>(d)]));
        K.values.push_back(-scale);
      }
  }
  K.row_start[K.rows] = K.values.size();
  return K;
}

std::vector<double> weighted_mass(const GridSpec &grid, int m)
{
  grid.validate();
  if (m < 0 || m > grid.n)
    throw ArgumentError("weighted_mass: index " + std::to_string(m) + " outside [0, n]");
  const double volume = std::pow(grid.spacing(), grid.n);
  std::vector<double> mass(grid.nodes());
  Odometer odo(grid.n, grid.cells_per_axis);
  for (std::size_t row = 0; row < mass.size(); ++row, odo.next()) {
    double r2 = 0.0;
    for (int d = 0; d < m; ++d) {
      const double x = grid.coordinate(odo.index[static_cast<std::size_t>(d)]);
      r2 += x * x;
    }
    mass[row] = m == 0 ? volume : volume / r2;
  }
  return mass;
}

DiscreteSystem assemble(const GridSpec &grid, const BetaSeq &beta, int target_index)
{
  grid.validate();
  if (beta.frame().n != grid.n || beta.frame().k0 != 3)
    throw ArgumentError("assemble: beta must be given on the frame (n = grid n, k0 = 3)");
  if (target_index != 0 && !beta.frame().contains(target_index))
    throw ArgumentError("assemble: target index " + std::to_string(target_index) + " outside [3, n]");
  DiscreteSystem system;
  system.grid = grid;
  system.stiffness = assemble_stiffness(grid);
  system.target_index = target_index;
  for (int m = 3; m <= grid.n; ++m)
    if (m != target_index && beta[m] != 0.0)
      system.numerator_masses.push_back({m, beta[m], weighted_mass(grid, m)});
  system.target_mass = weighted_mass(grid, target_index);
  return system;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

// Jacobi-preconditioned conjugate gradients for A x = b, x holding the start.
int conjugate_gradient(const DiscreteOperator &A, std::span<const double> inverse_diagonal,
                       std::span<const double> b, std::span<double> x, double tol, int max_iterations)
{
  const std::size_t n = A.rows;
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A.multiply(x, Ap);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - Ap[i];
  const double target = tol * std::sqrt(dot(b, b));
  if (std::sqrt(dot(r, r)) <= target)
    return 0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = inverse_diagonal[i] * r[i];
    p[i] = z[i];
  }
  double rz = dot(r, z);
  for (int it = 1; it <= max_iterations; ++it) {
    A.multiply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0))
      throw NonConvergenceError("conjugate gradients: operator is not positive definite", 0.0, 0.0);
    const double a = rz / pAp;
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += a * p[i];
      r[i] -= a * Ap[i];
      rr += r[i] * r[i];
    }
    if (std::sqrt(rr) <= target)
      return it;
    double rz_next = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = inverse_diagonal[i] * r[i];
      rz_next += r[i] * z[i];
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  throw NonConvergenceError("conjugate gradients: no convergence in " + std::to_string(max_iterations) +
                              " iterations",
                            0.0, 0.0);
}

}  // namespace

EigEstimate min_rayleigh(const DiscreteOperator &K, std::span<const double> M, const EigenOptions &options)
{
  const std::size_t n = K.rows;
  if (M.size() != n)
    throw ArgumentError("min_rayleigh: mass size does not match the operator");
  for (double m : M)
    if (!(m > 0.0))
      throw ArgumentError("min_rayleigh: mass must be positive");
  if (!(options.tol > 0.0) || !(options.inner_tol > 0.0))
    throw ArgumentError("min_rayleigh: tolerances must be positive");

  std::vector<double> x(n);
  if (!options.initial.empty()) {
    if (options.initial.size() != n)
      throw ArgumentError("min_rayleigh: initial vector size does not match");
    x = options.initial;
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    for (auto &v : x)
      v = unit(rng);
  }
  auto m_norm = [&](std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += M[i] * v[i] * v[i];
    return std::sqrt(s);
  };
  const double x0 = m_norm(x);
  if (!(x0 > 0.0))
    throw ArgumentError("min_rayleigh: initial vector is zero");
  for (auto &v : x)
    v /= x0;

  std::vector<double> inverse_diagonal = K.diagonal();
  for (auto &d : inverse_diagonal)
    d = 1.0 / d;
  std::vector<double> Kx(n), b(n), y(n);
  K.multiply(x, Kx);
  double lambda = dot(x, Kx);

  EigEstimate best;
  best.lambda_min = lambda;
  best.residual_norm = std::numeric_limits<double>::infinity();
  long inner = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = M[i] * x[i];
      y[i] = x[i] / lambda;
    }
    inner += conjugate_gradient(K, inverse_diagonal, b, y, options.inner_tol, options.max_inner_iterations);
    const double norm = m_norm(y);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = y[i] / norm;
    K.multiply(x, Kx);
    lambda = dot(x, Kx);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = Kx[i] - lambda * M[i] * x[i];
      res2 += r * r / M[i];
    }
    const double residual = std::sqrt(res2) / std::abs(lambda);
    if (residual < best.residual_norm) {
      best.lambda_min = lambda;
      best.residual_norm = residual;
    }
    if (residual <= options.tol) {
      EigEstimate e;
      e.lambda_min = lambda;
      e.residual_norm = residual;
      e.iterations = it;
      e.inner_iterations = inner;
      e.probe_value = std::numeric_limits<double>::quiet_NaN();
      e.vector = std::move(x);
      return e;
    }
  }
  throw NonConvergenceError("min_rayleigh: residual above " + std::to_string(options.tol) + " after " +
                              std::to_string(options.max_iterations) + " iterations",
                            best.lambda_min, best.residual_norm);
}

EigEstimate shifted_min_rayleigh(const DiscreteOperator &K, const std::vector<WeightedMass> &masses,
                                 std::span<const double> M_target, const EigenOptions &options)
{
  const std::size_t n = K.rows;
  bool any = false;
  bool positive = false;
  std::vector<double> shift(n, 0.0), P(n, 0.0);
  for (const auto &m : masses) {
    if (m.diagonal.size() != n)
      throw ArgumentError("shifted_min_rayleigh: mass size does not match the operator");
    if (m.beta == 0.0)
      continue;
    any = true;
    for (std::size_t i = 0; i < n; ++i) {
      shift[i] -= m.beta * m.diagonal[i];
      if (m.beta > 0.0)
        P[i] += m.beta * m.diagonal[i];
    }
    positive = positive || m.beta > 0.0;
  }
  if (!any)
    return min_rayleigh(K, M_target, options);

  double probe_value = std::numeric_limits<double>::quiet_NaN();
  if (positive) {
    // K - sum beta M is positive definite iff min (K, P) exceeds 1.
    EigenOptions probe_options = options;
    probe_options.initial.clear();
    const EigEstimate probe = min_rayleigh(K, P, probe_options);
    probe_value = probe.lambda_min - 1.0;
    if (!(probe_value > 0.0)) {
      EigEstimate e;
      e.lambda_min = std::numeric_limits<double>::quiet_NaN();
      e.residual_norm = probe.residual_norm;
      e.iterations = probe.iterations;
      e.inner_iterations = probe.inner_iterations;
      e.indefinite = true;
      e.probe_value = probe_value;
      return e;
    }
  }
  DiscreteOperator A = K;
  A.add_diagonal(shift);
  EigEstimate e = min_rayleigh(A, M_target, options);
  e.probe_value = probe_value;
  return e;
}

EigEstimate solve_system(const DiscreteSystem &system, const EigenOptions &options)
{
  EigEstimate e = shifted_min_rayleigh(system.stiffness, system.numerator_masses, system.target_mass, options);
  e.grid = system.grid;
  return e;
}

std::vector<double> prolongate(const GridSpec &coarse, std::span<const double> v)
{
  coarse.validate();
  if (v.size() != coarse.nodes())
    throw ArgumentError("prolongate: vector size does not match the grid");
  GridSpec fine = coarse;
  fine.cells_per_axis *= 2;
  std::vector<double> out(fine.nodes());
  const int n = coarse.n;
  const std::size_t Nc = static_cast<std::size_t>(coarse.cells_per_axis);
  Odometer odo(n, fine.cells_per_axis);
  for (std::size_t row = 0; row < out.size(); ++row, odo.next()) {
    std::size_t coarse_row = 0;
    for (int d = 0; d < n; ++d)
      coarse_row = coarse_row * Nc + static_cast<std::size_t>(odo.index[static_cast<std::size_t>(d)] / 2);
    out[row] = v[coarse_row];
  }
  return out;
}

std::vector<EigEstimate> refinement_sequence(int n, const std::vector<int> &cells, double L,
                                             const BetaSeq &beta, int target_index,
                                             const EigenOptions &options)
{
  std::vector<EigEstimate> out;
  std::vector<double> previous;
  GridSpec previous_grid;
  for (int N : cells) {
    const GridSpec grid{n, N, L};
    const DiscreteSystem system = assemble(grid, beta, target_index);
    EigenOptions opt = options;
    if (!previous.empty() && N == 2 * previous_grid.cells_per_axis && previous_grid.box_half_width == L)
      opt.initial = prolongate(previous_grid, previous);
    EigEstimate e = solve_system(system, opt);
    previous = std::move(e.vector);
    previous_grid = grid;
    e.vector.clear();
    out.push_back(std::move(e));
  }
  return out;
}

double box_eigenvalue(int n, double L)
{
  return n * std::numbers::pi * std::numbers::pi / (4.0 * L * L);
}

}  // namespace hardychain
