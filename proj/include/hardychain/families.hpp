// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HARDYCHAIN_FAMILIES_HPP
#define HARDYCHAIN_FAMILIES_HPP

// Extremal test functions for the chained Hardy inequalities and the
// Rayleigh and Sobolev quotients evaluated on them.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hardychain/fields.hpp"
#include "hardychain/params.hpp"
#include "hardychain/quadrature.hpp"

namespace hardychain {

inline constexpr double kInfiniteLevel = std::numeric_limits<double>::infinity();

/// Logarithmic cutoff h_k(x) = phi_k(|X_j|): 0 below 1/k^2, 1 above 1/k and
/// 1 + ln(k r)/ln k in between.  k = infinity means h = 1.
struct CutoffSpec
{
  int j = 3;
  double k = 10.0;

  bool infinite() const { return k == kInfiniteLevel; }
};

double cutoff_h(const CutoffSpec &spec, double r);
/// Weak derivative d/dr of cutoff_h: 1/(r ln k) on the band, 0 elsewhere.
double cutoff_h_derivative(const CutoffSpec &spec, double r);

/// Radial bump phi(r) = psi(2(1 - r)) with psi(t) = f(t)/(f(t) + f(1-t)),
/// f(t) = exp(-1/t) for t > 0: 1 on [0, 1/2], 0 on [1, inf).
class BumpProfile
{
public:
  BumpProfile();

  double value(double r) const;
  double derivative(double r) const;
  /// max |phi'| over (1/2, 1).
  double derivative_bound() const { return derivative_bound_; }

private:
  double derivative_bound_;
};

enum class FamilyKind
{
  step3,   // |X_3|^{-1/2} h_{k3} phi
  stepq,   // prod_{j<q} |X_j|^{-gamma_j} |X_q|^{alpha_{q-1} - 1/2} h_{k3} h_{kq} phi
  failure  // prod_{j<n} |X_j|^{-gamma_j} |X_n|^{-gamma_n + eps} h_{k3} phi
};

const char *to_string(FamilyKind kind);

struct FamilyDescriptor
{
  FamilyKind kind;
  ProblemFrame frame;
  AlphaSeq alpha;
  std::vector<CutoffSpec> cutoffs;
  double epsilon = 0.0;
  int q = 3;
  /// Constant multiple of the whole function.
  double amplitude = 1.0;

  FamilyDescriptor(FamilyKind kind, ProblemFrame frame, AlphaSeq alpha,
                   std::vector<CutoffSpec> cutoffs, double epsilon = 0.0, int q = 3);

  static FamilyDescriptor step3(ProblemFrame frame, double k3);
  static FamilyDescriptor stepq(ProblemFrame frame, AlphaSeq alpha, int q, double kq,
                                double k3 = kInfiniteLevel);
  static FamilyDescriptor failure(ProblemFrame frame, AlphaSeq alpha, double epsilon,
                                  double k3 = kInfiniteLevel);

  /// Index of the Hardy term in the denominator of the family's quotient.
  int target_index() const;
  /// Throws ArgumentError if the kind-specific invariants do not hold.
  void validate() const;
};

/// One radial factor of the family, a function of |X_radius|.
struct RadialFactor
{
  enum class Kind
  {
    power,
    cutoff,
    bump
  };

  Kind kind = Kind::power;
  int radius = 3;
  double exponent = 0.0;  // power kind
  double k = 0.0;         // cutoff kind

  double value(double r, const BumpProfile &bump) const;
  double derivative(double r, const BumpProfile &bump) const;
  /// Exponents of the value and of the derivative near r = 0 (+inf: vanishes).
  double value_power() const;
  double derivative_power() const;
  std::string label() const;
};

/// u = amplitude * psi * v with psi = prod |X_j|^{psi_exponent_j} (the
/// ground-state prefix) and v the product of the radial factors.
class Family
{
public:
  explicit Family(FamilyDescriptor descriptor);

  const FamilyDescriptor &descriptor() const { return descriptor_; }
  /// Prefix exponents (j, -gamma_j); empty for the step3 kind.
  const std::vector<std::pair<int, double>> &psi_exponents() const { return psi_; }
  const std::vector<RadialFactor> &factors() const { return factors_; }
  const BumpProfile &bump() const { return bump_; }
  /// Radii that u depends on, as a reduction chain ending at n.
  const ReducedChain &chain() const { return chain_; }
  /// Exponent of |X_m| in u near its origin (0 if u does not depend on it).
  double power_at_origin(int m) const;
  /// False if the chain has more than three levels (quasi-Monte Carlo path).
  bool deterministic() const { return chain_.levels() <= 3; }

  double value(const Point &p) const;
  Point gradient(const Point &p) const;

private:
  FamilyDescriptor descriptor_;
  BumpProfile bump_;
  std::vector<std::pair<int, double>> psi_;
  std::vector<RadialFactor> factors_;
  ReducedChain chain_;
};

Family build_family(const FamilyDescriptor &descriptor);

struct NumeratorTerm
{
  std::string label;
  double coefficient = 1.0;  // 1 for energy parts, -beta_i for Hardy terms
  double integral = 0.0;
  double error = 0.0;
};

struct QuotientReport
{
  /// "direct" or "ground_state": whether the numerator is written for u or
  /// for v = u/psi with the prefix Hardy terms absorbed into the weight psi^2.
  std::string route;
  std::vector<NumeratorTerm> numerator_terms;
  /// Gradient energy computed independently of the per-factor decomposition.
  double energy_total = 0.0;
  double energy_total_error = 0.0;
  double numerator = 0.0;
  double numerator_error = 0.0;
  /// Hardy integral (Rayleigh) or int weight |u|^Q (Sobolev).
  double denominator_integral = 0.0;
  double denominator_integral_error = 0.0;
  /// denominator_integral, or its power 2/Q for the Sobolev quotient.
  double denominator = 0.0;
  double denominator_error = 0.0;
  double value = 0.0;
  double value_error = 0.0;
  std::size_t evaluations = 0;
  bool stochastic = false;

  /// Sum of coefficient * integral over the numerator terms.
  double recomputed_numerator() const;
  double energy_from_terms() const;
};

/// (int |grad u|^2 - sum_{i != target} beta_i int u^2/|X_i|^2) / int u^2/|X_target|^2.
QuotientReport rayleigh_quotient(const FamilyDescriptor &descriptor, const BetaSeq &beta,
                                 int target_index, const QuadratureOptions &options = {});

/// (int |grad u|^2 - sum_i beta_i int u^2/|X_i|^2) / (int W |u|^Q)^{2/Q} with
/// W = |X_2|^p or |x_1|^p and p the Maz'ya power of the spec.
QuotientReport sobolev_quotient(const FamilyDescriptor &descriptor, const BetaSeq &beta,
                                const SobolevSpec &spec, const QuadratureOptions &options = {});

struct LinearFit
{
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // max |y_i - (a + b x_i)|
};

/// Least-squares fit y = a + b x.
LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

struct SharpnessSweep
{
  FamilyKind kind = FamilyKind::step3;
  int target_index = 3;
  double predicted_constant = 0.0;
  std::vector<double> k;
  std::vector<QuotientReport> reports;
  std::vector<double> values;
  std::vector<double> errors;
  /// Fit of value = a + b / ln k.
  LinearFit fit;
  bool strictly_decreasing = false;
  /// Quadrature error larger than the fit residual.
  bool inconclusive = false;
};

/// Rayleigh quotients of the step3 (q = 3) or stepq family over a k grid.
/// beta is beta_from_alpha(alpha); the swept level is k_q (k_3 for step3).
/// Grid points run on up to `jobs` threads; results do not depend on it.
SharpnessSweep sharpness_sweep(FamilyKind kind, const ProblemFrame &frame, const AlphaSeq &alpha,
                               std::vector<double> k_grid, int q = 3,
                               const QuadratureOptions &options = {}, unsigned jobs = 1);

struct FailureSweep
{
  double Q = 0.0;
  WeightKind weight_kind = WeightKind::X2;
  std::vector<double> epsilon;
  std::vector<QuotientReport> reports;
  std::vector<double> N;
  std::vector<double> D;
  std::vector<double> ratio;
  std::vector<double> ratio_errors;
  bool strictly_decreasing = false;
  /// Slope of ln D against ln eps and its predicted value -2/Q.
  double d_exponent = 0.0;
  double d_exponent_expected = 0.0;
  /// max N / min N over the sweep.
  double n_spread = 0.0;
  /// Quadrature error swamps a step of the ratio sequence.
  bool inconclusive = false;
};

/// Sobolev quotients of the failure family over a decreasing epsilon grid;
/// requires alpha_n = 0.  Grid points run on up to `jobs` threads.
FailureSweep failure_sweep(const ProblemFrame &frame, const AlphaSeq &alpha, double Q,
                           WeightKind weight_kind, std::vector<double> epsilon_grid,
                           const QuadratureOptions &options = {}, unsigned jobs = 1);

}  // namespace hardychain

#endif  // HARDYCHAIN_FAMILIES_HPP
