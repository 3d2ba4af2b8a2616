// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HARDYCHAIN_ORACLE_HPP
#define HARDYCHAIN_ORACLE_HPP

// Finite-difference discretization of Hardy-type Rayleigh quotients on the
// box [-L, L]^n and the smallest generalized Rayleigh value of the resulting
// (stiffness, weighted mass) pair.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hardychain/params.hpp"

namespace hardychain {

/// Cell-centred tensor grid: nodes at -L + (i + 1/2) h, h = 2L/N.  With N
/// even no node has x_1 = ... = x_m = 0.
struct GridSpec
{
  int n = 3;
  int cells_per_axis = 24;
  double box_half_width = 1.0;

  double spacing() const { return 2.0 * box_half_width / cells_per_axis; }
  std::size_t nodes() const;
  double coordinate(int i) const { return -box_half_width + (i + 0.5) * spacing(); }
  /// n in {3, 4}, N >= 8, L > 0, and no node on a singular subspace.
  void validate() const;
};

/// Symmetric sparse matrix in compressed row form.
struct DiscreteOperator
{
  std::size_t rows = 0;
  std::vector<std::size_t> row_start;  // rows + 1 entries
  std::vector<std::uint32_t> columns;
  std::vector<double> values;

  std::size_t nonzeros() const { return values.size(); }
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;
  /// max |A_ij - A_ji|.
  double asymmetry() const;
  /// Adds d to the diagonal.
  void add_diagonal(std::span<const double> d);
};

/// Lumped mass h^n / |X_m|^2 at every node; m = 0 gives h^n.
std::vector<double> weighted_mass(const GridSpec &grid, int m);

struct WeightedMass
{
  int index = 0;
  double beta = 0.0;
  std::vector<double> diagonal;
};

struct DiscreteSystem
{
  GridSpec grid;
  /// (2n+1)-point Laplacian times h^n with ghost-reflection Dirichlet walls.
  DiscreteOperator stiffness;
  /// Nonzero beta_i terms of the numerator (i != target).
  std::vector<WeightedMass> numerator_masses;
  std::vector<double> target_mass;
  int target_index = 0;
};

/// beta must have frame n = grid.n and k0 = 3; target_index in [3, n], or 0
/// for the identity mass (box eigenvalue check).
DiscreteSystem assemble(const GridSpec &grid, const BetaSeq &beta, int target_index);
/// Stiffness matrix only.
DiscreteOperator assemble_stiffness(const GridSpec &grid);

struct EigenOptions
{
  double tol = 1e-6;         // outer residual
  double inner_tol = 1e-8;   // relative residual of each linear solve
  int max_iterations = 200;  // outer
  int max_inner_iterations = 50000;
  std::uint64_t seed = 1;
  /// Starting vector; a seeded positive random vector if empty.
  std::vector<double> initial;
};

struct EigEstimate
{
  double lambda_min = 0.0;
  /// ||K v - lambda M v||_{M^{-1}} / (lambda ||v||_M).
  double residual_norm = 0.0;
  int iterations = 0;
  long inner_iterations = 0;
  GridSpec grid;
  /// Set when the shifted numerator form is not positive definite.
  bool indefinite = false;
  /// Smallest eigenvalue of (K - sum beta M, sum_{beta>0} beta M); negative
  /// when indefinite.  NaN if no probe was needed.
  double probe_value = 0.0;
  /// M-normalized eigenvector.
  std::vector<double> vector;
};

/// Smallest lambda with K v = lambda M v by inverse iteration, each solve by
/// Jacobi-preconditioned conjugate gradients.  M is diagonal and positive.
/// Throws NonConvergenceError carrying the best iterate's lambda.
EigEstimate min_rayleigh(const DiscreteOperator &K, std::span<const double> M,
                         const EigenOptions &options = {});

/// Smallest generalized Rayleigh value of (K - sum beta_m M_m, M_target).
EigEstimate shifted_min_rayleigh(const DiscreteOperator &K, const std::vector<WeightedMass> &masses,
                                 std::span<const double> M_target, const EigenOptions &options = {});

/// min_rayleigh or shifted_min_rayleigh for an assembled system.
EigEstimate solve_system(const DiscreteSystem &system, const EigenOptions &options = {});

/// Piecewise-constant transfer from a grid to one with twice the cells.
std::vector<double> prolongate(const GridSpec &coarse, std::span<const double> v);

/// Solves the same quotient on successively refined grids; each solve starts
/// from the prolongated eigenvector of the previous one when the cell count
/// doubles.
std::vector<EigEstimate> refinement_sequence(int n, const std::vector<int> &cells, double L,
                                             const BetaSeq &beta, int target_index,
                                             const EigenOptions &options = {});

/// n pi^2 / (2L)^2, the first Dirichlet eigenvalue of the box.
double box_eigenvalue(int n, double L);

}  // namespace hardychain

#endif  // HARDYCHAIN_ORACLE_HPP
