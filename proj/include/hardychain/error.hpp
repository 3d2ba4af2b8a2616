// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HARDYCHAIN_ERROR_HPP
#define HARDYCHAIN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace hardychain {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: length mismatch, out-of-range index or exponent.
class ArgumentError : public Error
{
public:
  using Error::Error;
};

/// Evaluation requested on (or numerically at) a singular subspace.
class SingularPointError : public Error
{
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// An integral with a non-integrable power-law singularity was requested.
class DivergenceError : public Error
{
public:
  using Error::Error;
};

/// The quadrature evaluation budget ran out before reaching the tolerance.
class BudgetError : public Error
{
public:
  BudgetError(const std::string &what, std::vector<double> best_estimate,
              std::vector<double> best_error)
    : Error(what), best_estimate(std::move(best_estimate)), best_error(std::move(best_error))
  {
  }

  std::vector<double> best_estimate;
  std::vector<double> best_error;
};

/// An iterative eigensolver did not reach its tolerance.
class NonConvergenceError : public Error
{
public:
  NonConvergenceError(const std::string &what, double best_lambda, double best_residual)
    : Error(what), best_lambda(best_lambda), best_residual(best_residual)
  {
  }

  double best_lambda;
  double best_residual;
};

}  // namespace hardychain

#endif  // HARDYCHAIN_ERROR_HPP
