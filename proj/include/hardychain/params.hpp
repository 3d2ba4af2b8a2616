// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HARDYCHAIN_PARAMS_HPP
#define HARDYCHAIN_PARAMS_HPP

// Coefficient recursions for Hardy potentials with a chain of nested
// singular subspaces S_{k0} ⊃ ... ⊃ S_n, and the exponent tables of the
// associated Hardy-Sobolev-Maz'ya inequalities.
//
// Sequences are indexed by chain index m in [k0, n]; operator[] takes m, not
// a zero-based offset.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hardychain {

/// Dimension n and the first index k0 of the singularity chain.
/// k0 = 3 is the interior chain, k0 = 1 the half-space chain.
struct ProblemFrame
{
  int n = 3;
  int k0 = 3;

  ProblemFrame() = default;
  ProblemFrame(int n, int k0 = 3);

  std::size_t chain_length() const { return static_cast<std::size_t>(n - k0 + 1); }
  bool contains(int m) const { return m >= k0 && m <= n; }

  friend bool operator==(const ProblemFrame &, const ProblemFrame &) = default;
};

/// Values attached to the chain indices k0..n of a frame.
class ChainSequence
{
public:
  ChainSequence(ProblemFrame frame, std::vector<double> values);

  const ProblemFrame &frame() const { return frame_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double operator[](int m) const;
  double first() const { return values_.front(); }
  double last() const { return values_.back(); }

private:
  ProblemFrame frame_;
  std::vector<double> values_;
};

/// Whether an alpha sequence may carry positive entries (forward direction of
/// the improved Hardy inequality) or must be nonpositive (characterization,
/// Sobolev exponents, test families).
enum class AlphaContext
{
  forward,
  characterization
};

class AlphaSeq : public ChainSequence
{
public:
  /// Throws ArgumentError if context is characterization and an entry is > 0.
  AlphaSeq(ProblemFrame frame, std::vector<double> values,
           AlphaContext context = AlphaContext::characterization);

  AlphaContext context() const { return context_; }
  bool nonpositive() const;

private:
  AlphaContext context_;
};

/// Hardy coefficients beta_m of the potential sum_m beta_m / |X_m|^2.
///
/// A sequence produced by beta_from_alpha also keeps the rounding residual of
/// each entry (value + residual is the coefficient to about 32 digits), so
/// that alpha_from_beta can invert it without the cancellation loss that a
/// plain double suffers when some alpha_m is close to zero.  User supplied
/// sequences have zero residuals.
class BetaSeq : public ChainSequence
{
public:
  BetaSeq(ProblemFrame frame, std::vector<double> values);
  BetaSeq(ProblemFrame frame, std::vector<double> values, std::vector<double> residuals);

  std::span<const double> residuals() const { return residuals_; }

private:
  std::vector<double> residuals_;
};

/// Exponents of the ground state prod_m |X_m|^{-gamma_m}.
class GammaSeq : public ChainSequence
{
public:
  using ChainSequence::ChainSequence;
};

struct AdmissibilityCertificate
{
  bool accepted = false;
  std::optional<AlphaSeq> alpha;  // present iff accepted
  std::optional<int> fail_index;  // present iff rejected
  /// accepted: min over m of alpha_m^2 (the smallest radicand);
  /// rejected: the negative radicand at fail_index.
  double slack = 0.0;
};

/// Radicands in [-kRadicandTolerance, 0) are treated as zero.
inline constexpr double kRadicandTolerance = 1e-12;

/// beta_{k0} = 1/4 - alpha_{k0}^2,  beta_m = (alpha_{m-1} - 1/2)^2 - alpha_m^2.
BetaSeq beta_from_alpha(const ProblemFrame &frame, const AlphaSeq &alpha);

/// Decides admissibility of beta through the nonpositive-root recursion.
AdmissibilityCertificate alpha_from_beta(const ProblemFrame &frame, const BetaSeq &beta);

/// gamma_{k0} = alpha_{k0} + 1/2,  gamma_m = alpha_m - alpha_{m-1} + 1/2.
GammaSeq gamma_from_alpha(const ProblemFrame &frame, const AlphaSeq &alpha);

/// Inverse of gamma_from_alpha (partial sums).
AlphaSeq alpha_from_gamma(const GammaSeq &gamma, AlphaContext context = AlphaContext::forward);

/// Largest c such that beta with beta_index replaced by c is still admissible;
/// the sharp constant of the Hardy quotient whose denominator is the
/// beta_index term.  Entries of beta other than beta_index are held fixed.
/// Returns nullopt if the other entries are inadmissible for every c.
std::optional<double> max_admissible_beta(const ProblemFrame &frame, const BetaSeq &beta,
                                          int beta_index);

enum class WeightKind
{
  X2,  // |X_2|^{(Q-2)n/2 - Q}
  x1   // |x_1|^{(Q-2)n/2 - Q}
};

const char *to_string(WeightKind kind);

/// Exponent table of the Hardy-Sobolev-Maz'ya inequality with Sobolev
/// exponent Q and the given weight.
struct SobolevSpec
{
  ProblemFrame frame;
  double Q = 0.0;
  WeightKind weight_kind = WeightKind::X2;
  /// sigma[l-1] holds sigma_l for l = 1..n; sigma_1 is zero for the X2 kind.
  std::vector<double> sigma;
  double s = 0.0;  // (Q+2)/2, the power in w = |v|^s
  double q = 0.0;  // Q/s
  double b = 0.0;  // L^1 weight exponent sigma_base - 1 + (q-1) n / q
  double B = 0.0;  // sigma_base - 1 + (Q-2) n / (2Q)
  /// c_l for l = 2..n (X2) or cbar_l for l = 1..n (x1), summed directly.
  std::vector<double> c;
  int c_first_index = 2;
  /// Same values from the closed form (Q+2)/2 (-alpha_l + (Q-2)(n-l)/(2(Q+2))),
  /// with alpha_l := 0 for l < 3.  Not defined for l = 1.
  std::vector<double> c_closed_form;
  double maz_power = 0.0;  // (Q-2) n / 2 - Q
  bool valid = false;
  std::string reason;

  double sigma_at(int l) const { return sigma.at(static_cast<std::size_t>(l - 1)); }
  double c_at(int l) const { return c.at(static_cast<std::size_t>(l - c_first_index)); }
  /// Exponent sigma_1 (x1) or sigma_2 (X2) that balances the Sobolev weight.
  double sigma_base() const;
};

/// Largest admissible Sobolev exponent 2n/(n-2).
double critical_exponent(int n);
/// Lower end 2(n-1)/(n-2) of the exponent range for the |x_1| weight.
double x1_lower_exponent(int n);

/// Builds the exponent table; requires Q > 2, k0 = 3 and nonpositive alpha.
SobolevSpec sobolev_spec(const ProblemFrame &frame, const AlphaSeq &alpha, double Q,
                         WeightKind weight_kind);

enum class CanonicalVariant
{
  cor1,  // (k-2)^2/4 at X_k, then 1/4 up to X_n
  cor2,  // (k-2)^2/4 at X_k and (n-k)^2/4 at |x|
  sats1  // alpha_l = -(l-2)/2 throughout
};

const char *to_string(CanonicalVariant variant);

/// Coefficient choices that realize the classical and chained Hardy constants.
AlphaSeq canonical_alpha(const ProblemFrame &frame, int k, CanonicalVariant variant);

/// Sharp Sobolev constant pi n (n-2) (Gamma(n/2)/Gamma(n))^{2/n}.
double sobolev_constant(int n);

}  // namespace hardychain

#endif  // HARDYCHAIN_PARAMS_HPP
