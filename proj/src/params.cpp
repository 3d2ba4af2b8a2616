// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hardychain/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hardychain/error.hpp"

namespace hardychain {

namespace {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct Compensated
{
  double hi = 0.0;
  double lo = 0.0;
};

Compensated two_sum(double a, double b)
{
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

Compensated two_prod(double a, double b)
{
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

Compensated renormalize(double hi, double lo)
{
  return two_sum(hi, lo);
}

Compensated add(Compensated a, Compensated b)
{
  Compensated s = two_sum(a.hi, b.hi);
  return renormalize(s.hi, s.lo + a.lo + b.lo);
}

Compensated negate(Compensated a) { return {-a.hi, -a.lo}; }

Compensated square(Compensated a)
{
  Compensated p = two_prod(a.hi, a.hi);
  return renormalize(p.hi, p.lo + 2.0 * a.hi * a.lo);
}

// Nonpositive root -sqrt(r) of a nonnegative compensated value.
Compensated negative_sqrt(Compensated r)
{
  if (r.hi <= 0.0)
    return {};
  const double s = std::sqrt(r.hi);
  const double residual = std::fma(-s, s, r.hi) + r.lo;
  Compensated root = renormalize(s, residual / (2.0 * s));
  return negate(root);
}

void check_length(const ProblemFrame &frame, std::size_t size, const char *what)
{
  if (size != frame.chain_length())
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(frame.chain_length()) +
                        " entries for n=" + std::to_string(frame.n) + ", k0=" +
                        std::to_string(frame.k0) + ", got " + std::to_string(size));
}

// Radicands within a few ulps of their largest term are indistinguishable
// from zero once beta has been rounded to a double.
bool negligible_radicand(Compensated radicand, double scale)
{
  return std::abs(radicand.hi) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

}  // namespace

ProblemFrame::ProblemFrame(int n_, int k0_) : n(n_), k0(k0_)
{
  if (n < 3)
    throw ArgumentError("frame: dimension n must be >= 3, got " + std::to_string(n));
  if (k0 != 1 && k0 != 3)
    throw ArgumentError("frame: chain start k0 must be 1 or 3, got " + std::to_string(k0));
}

ChainSequence::ChainSequence(ProblemFrame frame, std::vector<double> values)
  : frame_(frame), values_(std::move(values))
{
  check_length(frame_, values_.size(), "sequence");
  for (double v : values_)
    if (!std::isfinite(v))
      throw ArgumentError("sequence: entries must be finite");
}

double ChainSequence::operator[](int m) const
{
  if (!frame_.contains(m))
    throw ArgumentError("sequence index " + std::to_string(m) + " outside [" +
                        std::to_string(frame_.k0) + ", " + std::to_string(frame_.n) + "]");
  return values_[static_cast<std::size_t>(m - frame_.k0)];
}

AlphaSeq::AlphaSeq(ProblemFrame frame, std::vector<double> values, AlphaContext context)
  : ChainSequence(frame, std::move(values)), context_(context)
{
  if (context_ == AlphaContext::characterization && !nonpositive())
    throw ArgumentError("alpha: entries must be nonpositive in this context");
}

bool AlphaSeq::nonpositive() const
{
  return std::all_of(values().begin(), values().end(), [](double a) { return a <= 0.0; });
}

BetaSeq::BetaSeq(ProblemFrame frame, std::vector<double> values)
  : ChainSequence(frame, std::move(values)), residuals_(size(), 0.0)
{
}

BetaSeq::BetaSeq(ProblemFrame frame, std::vector<double> values, std::vector<double> residuals)
  : ChainSequence(frame, std::move(values)), residuals_(std::move(residuals))
{
  check_length(frame, residuals_.size(), "beta residuals");
}

BetaSeq beta_from_alpha(const ProblemFrame &frame, const AlphaSeq &alpha)
{
  check_length(frame, alpha.size(), "beta_from_alpha");
  std::vector<double> hi(alpha.size());
  std::vector<double> lo(alpha.size());
  const auto a = alpha.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    Compensated head = i == 0 ? Compensated{0.25, 0.0} : square(two_sum(a[i - 1], -0.5));
    Compensated beta = add(head, negate(two_prod(a[i], a[i])));
    hi[i] = beta.hi;
    lo[i] = beta.lo;
  }
  return BetaSeq(frame, std::move(hi), std::move(lo));
}

namespace {

struct RecursionOutcome
{
  bool accepted = true;
  std::size_t fail_offset = 0;
  double slack = 0.0;
  std::vector<double> alpha;
  Compensated last{};
};

// Nonpositive-root recursion over beta[0..count), shared by the certificate
// and the headroom search.
RecursionOutcome run_recursion(std::span<const double> b, std::span<const double> r,
                               std::size_t count)
{
  RecursionOutcome out;
  out.alpha.resize(count);
  Compensated previous{};
  double min_radicand = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < count; ++i) {
    Compensated head = i == 0 ? Compensated{0.25, 0.0} : square(add(previous, {-0.5, 0.0}));
    Compensated radicand = add(head, negate(Compensated{b[i], r.empty() ? 0.0 : r[i]}));

    if (radicand.hi < -kRadicandTolerance) {
      out.accepted = false;
      out.fail_offset = i;
      out.slack = radicand.hi;
      return out;
    }
    if (radicand.hi < 0.0 || negligible_radicand(radicand, std::max(head.hi, std::abs(b[i]))))
      radicand = {};

    previous = negative_sqrt(radicand);
    out.alpha[i] = previous.hi;
    min_radicand = std::min(min_radicand, radicand.hi);
  }
  out.slack = count == 0 ? 0.0 : min_radicand;
  out.last = previous;
  return out;
}

}  // namespace

AdmissibilityCertificate alpha_from_beta(const ProblemFrame &frame, const BetaSeq &beta)
{
  check_length(frame, beta.size(), "alpha_from_beta");
  RecursionOutcome run = run_recursion(beta.values(), beta.residuals(), beta.size());

  AdmissibilityCertificate cert;
  cert.accepted = run.accepted;
  cert.slack = run.slack;
  if (run.accepted)
    cert.alpha.emplace(frame, std::move(run.alpha), AlphaContext::characterization);
  else
    cert.fail_index = frame.k0 + static_cast<int>(run.fail_offset);
  return cert;
}

GammaSeq gamma_from_alpha(const ProblemFrame &frame, const AlphaSeq &alpha)
{
  check_length(frame, alpha.size(), "gamma_from_alpha");
  const auto a = alpha.values();
  std::vector<double> gamma(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    gamma[i] = (i == 0 ? a[i] : a[i] - a[i - 1]) + 0.5;
  return GammaSeq(frame, std::move(gamma));
}

AlphaSeq alpha_from_gamma(const GammaSeq &gamma, AlphaContext context)
{
  const auto g = gamma.values();
  std::vector<double> alpha(g.size());
  double running = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    running += g[i] - 0.5;
    alpha[i] = running;
  }
  return AlphaSeq(gamma.frame(), std::move(alpha), context);
}

std::optional<double> max_admissible_beta(const ProblemFrame &frame, const BetaSeq &beta,
                                          int beta_index)
{
  check_length(frame, beta.size(), "max_admissible_beta");
  if (!frame.contains(beta_index))
    throw ArgumentError("max_admissible_beta: index " + std::to_string(beta_index) +
                        " outside the chain");

  std::vector<double> trial(beta.values().begin(), beta.values().end());
  const auto slot = static_cast<std::size_t>(beta_index - frame.k0);
  auto admissible = [&](double c) {
    trial[slot] = c;
    return alpha_from_beta(frame, BetaSeq(frame, trial)).accepted;
  };

  // The prefix up to beta_index fixes alpha_{beta_index - 1}; with that,
  // c = (alpha_{m-1} - 1/2)^2 is the largest value the recursion can take
  // and admissibility is monotone decreasing in c.
  RecursionOutcome prefix = run_recursion(trial, {}, slot);
  if (!prefix.accepted)
    return std::nullopt;
  const double upper = slot == 0 ? 0.25 : (prefix.last.hi - 0.5) * (prefix.last.hi - 0.5);
  if (admissible(upper))
    return upper;

  double lo = upper - 1.0;
  while (!admissible(lo)) {
    lo = upper - 2.0 * (upper - lo);
    if (upper - lo > 1e12)
      return std::nullopt;
  }
  double hi = upper;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

const char *to_string(WeightKind kind)
{
  return kind == WeightKind::X2 ? "X2" : "x1";
}

double SobolevSpec::sigma_base() const
{
  return weight_kind == WeightKind::X2 ? sigma_at(2) : sigma_at(1);
}

double critical_exponent(int n)
{
  return 2.0 * n / (n - 2.0);
}

double x1_lower_exponent(int n)
{
  return 2.0 * (n - 1.0) / (n - 2.0);
}

SobolevSpec sobolev_spec(const ProblemFrame &frame, const AlphaSeq &alpha, double Q,
                         WeightKind weight_kind)
{
  check_length(frame, alpha.size(), "sobolev_spec");
  if (frame.k0 != 3)
    throw ArgumentError("sobolev_spec: only the interior chain (k0 = 3) carries a Sobolev term");
  if (!(Q > 2.0) || !std::isfinite(Q))
    throw ArgumentError("sobolev_spec: Q must exceed 2, got " + std::to_string(Q));
  if (!alpha.nonpositive())
    throw ArgumentError("sobolev_spec: alpha must be nonpositive");

  const int n = frame.n;
  SobolevSpec spec;
  spec.frame = frame;
  spec.Q = Q;
  spec.weight_kind = weight_kind;
  spec.s = (Q + 2.0) / 2.0;
  spec.q = Q / spec.s;
  // At the critical exponent the weight vanishes; snap away the rounding of 2n/(n-2).
  const bool at_critical = std::abs(Q - critical_exponent(n)) <= 1e-14 * critical_exponent(n);
  spec.maz_power = at_critical ? 0.0 : (Q - 2.0) * n / 2.0 - Q;

  const double sigma_weight = spec.maz_power / 2.0;
  const GammaSeq gamma = gamma_from_alpha(frame, alpha);

  spec.sigma.assign(static_cast<std::size_t>(n), 0.0);
  if (weight_kind == WeightKind::X2)
    spec.sigma[1] = sigma_weight;
  else
    spec.sigma[0] = sigma_weight;
  for (int m = 3; m <= n; ++m)
    spec.sigma[static_cast<std::size_t>(m - 1)] = -spec.s * gamma[m];

  const double base = spec.sigma_base();
  spec.b = base - 1.0 + (spec.q - 1.0) * n / spec.q;
  spec.B = base - 1.0 + (Q - 2.0) * n / (2.0 * Q);

  spec.c_first_index = weight_kind == WeightKind::X2 ? 2 : 1;
  double running = 0.0;
  for (int l = 1; l <= n; ++l) {
    running += spec.sigma_at(l);
    if (l < spec.c_first_index)
      continue;
    const double partial = weight_kind == WeightKind::X2 ? running - spec.sigma_at(1) : running;
    spec.c.push_back(partial + l - 1.0);
    const double alpha_l = l >= 3 ? alpha[l] : 0.0;
    spec.c_closed_form.push_back(
        l >= 2 ? spec.s * (-alpha_l + (Q - 2.0) * (n - l) / (2.0 * (Q + 2.0)))
               : std::numeric_limits<double>::quiet_NaN());
  }

  const double critical = critical_exponent(n);
  // Critical exponent compared with a relative slack so that Q = 2n/(n-2)
  // typed in decimal is not rejected by rounding.
  if (Q > critical * (1.0 + 1e-14)) {
    spec.valid = false;
    spec.reason = "Q exceeds the critical exponent 2n/(n-2)";
  } else if (weight_kind == WeightKind::x1 && Q <= x1_lower_exponent(n) * (1.0 + 1e-14)) {
    spec.valid = false;
    spec.reason = "weight is not locally integrable (Q <= 2(n-1)/(n-2))";
  } else if (alpha.last() == 0.0) {
    spec.valid = false;
    spec.reason = "alpha_n = 0: no positive Sobolev constant";
  } else {
    spec.valid = true;
    spec.reason = "ok";
  }
  return spec;
}

const char *to_string(CanonicalVariant variant)
{
  switch (variant) {
  case CanonicalVariant::cor1:
    return "cor1";
  case CanonicalVariant::cor2:
    return "cor2";
  case CanonicalVariant::sats1:
    return "sats1";
  }
  return "?";
}

AlphaSeq canonical_alpha(const ProblemFrame &frame, int k, CanonicalVariant variant)
{
  if (frame.k0 != 3)
    throw ArgumentError("canonical_alpha: defined for the interior chain (k0 = 3)");
  if (k < 3 || k > frame.n)
    throw ArgumentError("canonical_alpha: k must lie in [3, n], got " + std::to_string(k));

  const int n = frame.n;
  std::vector<double> alpha;
  for (int m = 3; m <= n; ++m) {
    double a = 0.0;
    switch (variant) {
    case CanonicalVariant::cor1:
      a = m < k ? -(m - 2) / 2.0 : 0.0;
      break;
    case CanonicalVariant::cor2:
      if (m < k)
        a = -(m - 2) / 2.0;
      else if (m == k || m == n)
        a = 0.0;
      else
        a = -(m - k) / 2.0;
      break;
    case CanonicalVariant::sats1:
      a = -(m - 2) / 2.0;
      break;
    }
    alpha.push_back(a);
  }
  return AlphaSeq(frame, std::move(alpha), AlphaContext::characterization);
}

double sobolev_constant(int n)
{
  if (n < 3)
    throw ArgumentError("sobolev_constant: n must be >= 3, got " + std::to_string(n));
  const double log_ratio = std::lgamma(n / 2.0) - std::lgamma(static_cast<double>(n));
  return std::numbers::pi * n * (n - 2.0) * std::exp(2.0 / n * log_ratio);
}

}  // namespace hardychain
