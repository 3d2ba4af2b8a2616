// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hardychain/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "hardychain/error.hpp"

namespace hardychain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string radius_name(int m, int n)
{
  return m == n ? std::string("|x|") : "|X_" + std::to_string(m) + "|";
}

// Logistic form of psi(t) = f(t)/(f(t) + f(1-t)), stable for t in (0, 1).
double transition(double t)
{
  if (t <= 0.0)
    return 0.0;
  if (t >= 1.0)
    return 1.0;
  return 1.0 / (1.0 + std::exp(1.0 / t - 1.0 / (1.0 - t)));
}

double transition_derivative(double t)
{
  if (t <= 0.0 || t >= 1.0)
    return 0.0;
  const double s = transition(t);
  return s * (1.0 - s) * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)));
}

}  // namespace

double cutoff_h(const CutoffSpec &spec, double r)
{
  if (spec.infinite())
    return 1.0;
  const double k = spec.k;
  if (r < 1.0 / (k * k))
    return 0.0;
  if (r < 1.0 / k)
    return 1.0 + std::log(k * r) / std::log(k);
  return 1.0;
}

double cutoff_h_derivative(const CutoffSpec &spec, double r)
{
  if (spec.infinite())
    return 0.0;
  const double k = spec.k;
  if (r < 1.0 / (k * k) || r >= 1.0 / k)
    return 0.0;
  return 1.0 / (r * std::log(k));
}

BumpProfile::BumpProfile() : derivative_bound_(0.0)
{
  constexpr int kSamples = 20000;
  for (int i = 1; i < kSamples; ++i)
    derivative_bound_ = std::max(derivative_bound_, std::abs(derivative(0.5 + 0.5 * i / kSamples)));
}

double BumpProfile::value(double r) const { return transition(2.0 * (1.0 - r)); }

double BumpProfile::derivative(double r) const
{
  return -2.0 * transition_derivative(2.0 * (1.0 - r));
}

const char *to_string(FamilyKind kind)
{
  switch (kind) {
  case FamilyKind::step3:
    return "step3";
  case FamilyKind::stepq:
    return "stepq";
  case FamilyKind::failure:
    return "failure";
  }
  return "?";
}

FamilyDescriptor::FamilyDescriptor(FamilyKind kind_, ProblemFrame frame_, AlphaSeq alpha_,
                                   std::vector<CutoffSpec> cutoffs_, double epsilon_, int q_)
  : kind(kind_), frame(frame_), alpha(std::move(alpha_)), cutoffs(std::move(cutoffs_)),
    epsilon(epsilon_), q(q_)
{
}

FamilyDescriptor FamilyDescriptor::step3(ProblemFrame frame, double k3)
{
  return FamilyDescriptor(FamilyKind::step3, frame,
                          AlphaSeq(frame, std::vector<double>(frame.chain_length(), 0.0)),
                          {CutoffSpec{3, k3}}, 0.0, 3);
}

FamilyDescriptor FamilyDescriptor::stepq(ProblemFrame frame, AlphaSeq alpha, int q, double kq,
                                         double k3)
{
  return FamilyDescriptor(FamilyKind::stepq, frame, std::move(alpha),
                          {CutoffSpec{3, k3}, CutoffSpec{q, kq}}, 0.0, q);
}

FamilyDescriptor FamilyDescriptor::failure(ProblemFrame frame, AlphaSeq alpha, double epsilon,
                                           double k3)
{
  return FamilyDescriptor(FamilyKind::failure, frame, std::move(alpha), {CutoffSpec{3, k3}},
                          epsilon, frame.n);
}

int FamilyDescriptor::target_index() const
{
  switch (kind) {
  case FamilyKind::step3:
    return 3;
  case FamilyKind::stepq:
    return q;
  case FamilyKind::failure:
    return frame.n;
  }
  return 3;
}

void FamilyDescriptor::validate() const
{
  if (frame.k0 != 3)
    throw ArgumentError("test families are defined for the interior chain k0 = 3");
  if (!(alpha.frame() == frame))
    throw ArgumentError("family: alpha frame does not match");
  if (!alpha.nonpositive())
    throw ArgumentError("family: alpha must be nonpositive");
  if (!(amplitude != 0.0) || !std::isfinite(amplitude))
    throw ArgumentError("family: amplitude must be finite and nonzero");
  for (const auto &c : cutoffs)
    if (!(c.k > 1.0))
      throw ArgumentError("family: cutoff level k_" + std::to_string(c.j) + " must exceed 1");
  switch (kind) {
  case FamilyKind::step3:
    if (cutoffs.size() != 1 || cutoffs[0].j != 3)
      throw ArgumentError("step3 family uses exactly one cutoff, at j = 3");
    if (cutoffs[0].infinite())
      throw ArgumentError("step3 family needs a finite k_3");
    break;
  case FamilyKind::stepq:
    if (q < 4 || q > frame.n)
      throw ArgumentError("stepq family needs 4 <= q <= n, got q = " + std::to_string(q));
    if (cutoffs.size() != 2 || cutoffs[0].j != 3 || cutoffs[1].j != q)
      throw ArgumentError("stepq family uses cutoffs at j = 3 and j = q");
    if (cutoffs[1].infinite())
      throw ArgumentError("stepq family needs a finite k_q");
    break;
  case FamilyKind::failure:
    if (cutoffs.size() != 1 || cutoffs[0].j != 3)
      throw ArgumentError("failure family uses exactly one cutoff, at j = 3");
    if (!(epsilon > 0.0))
      throw ArgumentError("failure family needs epsilon > 0");
    break;
  }
}

double RadialFactor::value(double r, const BumpProfile &bump) const
{
  switch (kind) {
  case Kind::power:
    return exponent == 0.0 ? 1.0 : std::pow(r, exponent);
  case Kind::cutoff:
    return cutoff_h(CutoffSpec{radius, k}, r);
  case Kind::bump:
    return bump.value(r);
  }
  return 0.0;
}

double RadialFactor::derivative(double r, const BumpProfile &bump) const
{
  switch (kind) {
  case Kind::power:
    return exponent == 0.0 ? 0.0 : exponent * std::pow(r, exponent - 1.0);
  case Kind::cutoff:
    return cutoff_h_derivative(CutoffSpec{radius, k}, r);
  case Kind::bump:
    return bump.derivative(r);
  }
  return 0.0;
}

double RadialFactor::value_power() const { return kind == Kind::power ? exponent : 0.0; }

double RadialFactor::derivative_power() const
{
  if (kind == Kind::power && exponent != 0.0)
    return exponent - 1.0;
  return kInf;
}

std::string RadialFactor::label() const
{
  const std::string r = "|X_" + std::to_string(radius) + "|";
  switch (kind) {
  case Kind::power:
    return "power" + r;
  case Kind::cutoff:
    return "cutoff" + r;
  case Kind::bump:
    return "bump" + r;
  }
  return "?";
}

namespace {

ReducedChain family_chain(const ProblemFrame &frame,
                          const std::vector<std::pair<int, double>> &psi,
                          const std::vector<RadialFactor> &factors)
{
  std::set<int> radii{frame.n};
  for (const auto &[j, e] : psi)
    radii.insert(j);
  for (const auto &f : factors)
    radii.insert(f.radius);
  return ReducedChain(frame.n, std::vector<int>(radii.begin(), radii.end()));
}

std::vector<std::pair<int, double>> make_psi(const FamilyDescriptor &d)
{
  std::vector<std::pair<int, double>> psi;
  if (d.kind == FamilyKind::step3)
    return psi;
  const int last = d.kind == FamilyKind::stepq ? d.q - 1 : d.frame.n - 1;
  const GammaSeq gamma = gamma_from_alpha(d.frame, d.alpha);
  for (int j = 3; j <= last; ++j)
    psi.emplace_back(j, -gamma[j]);
  return psi;
}

std::vector<RadialFactor> make_factors(const FamilyDescriptor &d)
{
  using K = RadialFactor::Kind;
  std::vector<RadialFactor> factors;
  const int n = d.frame.n;
  switch (d.kind) {
  case FamilyKind::step3:
    factors.push_back({K::power, 3, -0.5, 0.0});
    break;
  case FamilyKind::stepq:
    factors.push_back({K::power, d.q, d.alpha[d.q - 1] - 0.5, 0.0});
    break;
  case FamilyKind::failure: {
    const GammaSeq gamma = gamma_from_alpha(d.frame, d.alpha);
    factors.push_back({K::power, n, -gamma[n] + d.epsilon, 0.0});
    break;
  }
  }
  for (const auto &c : d.cutoffs)
    if (!c.infinite())
      factors.push_back({K::cutoff, c.j, 0.0, c.k});
  factors.push_back({K::bump, n, 0.0, 0.0});
  return factors;
}

}  // namespace

Family::Family(FamilyDescriptor descriptor)
  : descriptor_((descriptor.validate(), std::move(descriptor))), psi_(make_psi(descriptor_)),
    factors_(make_factors(descriptor_)), chain_(family_chain(descriptor_.frame, psi_, factors_))
{
}

double Family::power_at_origin(int m) const
{
  double p = 0.0;
  for (const auto &[j, e] : psi_)
    if (j == m)
      p += e;
  for (const auto &f : factors_)
    if (f.radius == m)
      p += f.value_power();
  return p;
}

double Family::value(const Point &p) const
{
  if (p.dimension() != static_cast<std::size_t>(descriptor_.frame.n))
    throw ArgumentError("family value: point dimension does not match n");
  double v = descriptor_.amplitude;
  for (const auto &f : factors_) {
    const double r = dist_subspace(p, f.radius);
    if (r < kSingularRadius && f.value_power() < 0.0)
      throw SingularPointError("family value: point lies on S_" + std::to_string(f.radius));
    v *= f.value(r, bump_);
  }
  if (v == 0.0)
    return 0.0;
  for (const auto &[j, e] : psi_) {
    const double r = dist_subspace(p, j);
    if (r < kSingularRadius && e < 0.0)
      throw SingularPointError("family value: point lies on S_" + std::to_string(j));
    v *= std::pow(r, e);
  }
  return v;
}

Point Family::gradient(const Point &p) const
{
  const std::size_t n = static_cast<std::size_t>(descriptor_.frame.n);
  if (p.dimension() != n)
    throw ArgumentError("family gradient: point dimension does not match n");
  // grad u = sum_m c_m X_m, accumulated per radius m.
  std::vector<double> coefficient(n + 1, 0.0);
  double psi = 1.0;
  for (const auto &[j, e] : psi_) {
    const double r = dist_subspace(p, j);
    if (r < kSingularRadius)
      throw SingularPointError("family gradient: point lies on S_" + std::to_string(j));
    psi *= std::pow(r, e);
  }
  std::vector<double> values(factors_.size()), derivatives(factors_.size()), radii(factors_.size());
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    radii[f] = dist_subspace(p, factors_[f].radius);
    if (radii[f] < kSingularRadius)
      throw SingularPointError("family gradient: point lies on S_" +
                               std::to_string(factors_[f].radius));
    values[f] = factors_[f].value(radii[f], bump_);
    derivatives[f] = factors_[f].derivative(radii[f], bump_);
  }
  double v = 1.0;
  for (double x : values)
    v *= x;
  const double amp = descriptor_.amplitude;
  for (const auto &[j, e] : psi_) {
    const double r = dist_subspace(p, j);
    coefficient[static_cast<std::size_t>(j)] += amp * psi * v * e / (r * r);
  }
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    double others = 1.0;
    for (std::size_t g = 0; g < factors_.size(); ++g)
      if (g != f)
        others *= values[g];
    coefficient[static_cast<std::size_t>(factors_[f].radius)] +=
      amp * psi * derivatives[f] * others / radii[f];
  }
  Point grad{std::vector<double>(n, 0.0)};
  double tail = 0.0;
  for (std::size_t i = n; i >= 1; --i) {
    tail += coefficient[i];
    grad.coords[i - 1] = tail * p.coords[i - 1];
  }
  return grad;
}

Family build_family(const FamilyDescriptor &descriptor) { return Family(descriptor); }

double QuotientReport::recomputed_numerator() const
{
  double s = 0.0;
  for (const auto &t : numerator_terms)
    s += t.coefficient * t.integral;
  return s;
}

double QuotientReport::energy_from_terms() const
{
  double s = 0.0;
  for (const auto &t : numerator_terms)
    if (t.coefficient == 1.0 && t.label.rfind("hardy", 0) != 0)
      s += t.integral;
  return s;
}

namespace {

// Exponent bookkeeping for one integrand component: per-radius contributions
// indexed by chain level.
struct Powers
{
  std::vector<double> p;

  explicit Powers(std::size_t levels) : p(levels, 0.0) {}
  void add(std::size_t level, double e) { p[level] += e; }
};

std::vector<double> cumulative(const std::vector<double> &p)
{
  std::vector<double> c(p.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += p[i];
    c[i] = s;
  }
  return c;
}

// Radius powers of a sum of terms: its leading behaviour at each level is the
// smallest cumulative exponent among the terms.
std::vector<double> leading_powers(const std::vector<std::vector<double>> &terms, std::size_t levels)
{
  std::vector<double> lead(levels, kInf);
  for (const auto &t : terms) {
    const auto c = cumulative(t);
    for (std::size_t l = 0; l < levels; ++l)
      lead[l] = std::min(lead[l], c[l]);
  }
  std::vector<double> out(levels);
  double previous = 0.0;
  for (std::size_t l = 0; l < levels; ++l) {
    if (!std::isfinite(lead[l])) {
      out[l] = kInf;
      continue;
    }
    out[l] = lead[l] - previous;
    previous = lead[l];
  }
  return out;
}

ReducedChain merged_chain(const Family &family, const std::vector<int> &extra)
{
  std::set<int> radii(family.chain().indices().begin(), family.chain().indices().end());
  radii.insert(extra.begin(), extra.end());
  return ReducedChain(family.descriptor().frame.n, std::vector<int>(radii.begin(), radii.end()));
}

void add_structure(const Family &family, const ReducedChain &chain, ChainIntegrand &integrand)
{
  const std::size_t L = chain.levels();
  integrand.support_min.assign(L, 0.0);
  integrand.breakpoints.assign(L, {});
  for (const auto &f : family.factors()) {
    const std::size_t l = chain.level_of(f.radius);
    if (f.kind == RadialFactor::Kind::cutoff) {
      integrand.support_min[l] = std::max(integrand.support_min[l], 1.0 / (f.k * f.k));
      integrand.breakpoints[l].push_back(1.0 / (f.k * f.k));
      integrand.breakpoints[l].push_back(1.0 / f.k);
    } else if (f.kind == RadialFactor::Kind::bump) {
      integrand.breakpoints[l].push_back(0.5);
      integrand.breakpoints[l].push_back(1.0);
    }
  }
  integrand.outer_max = 1.0;
}

struct NumeratorLayout
{
  std::size_t factors = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t total_index = 0;
  std::size_t hardy_begin = 0;
  std::size_t target_index = 0;  // valid if has_target
  bool has_target = false;
  std::size_t components = 0;
};

struct NumeratorResult
{
  VectorQuadratureResult quad;
  NumeratorLayout layout;
};

// Components: per-factor energy, mixed energy, independent total energy,
// Hardy integrals of hardy_indices, optionally the target Hardy integral.
NumeratorResult integrate_numerator(const Family &family, const std::vector<int> &hardy_indices,
                                    std::optional<int> target, const QuadratureOptions &options)
{
  std::vector<int> extra(hardy_indices);
  if (target)
    extra.push_back(*target);
  const ReducedChain chain = merged_chain(family, extra);
  const std::size_t L = chain.levels();
  const auto &factors = family.factors();
  const std::size_t F = factors.size();

  NumeratorLayout layout;
  layout.factors = F;
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t g = f + 1; g < F; ++g)
      layout.pairs.emplace_back(f, g);
  layout.total_index = F + layout.pairs.size();
  layout.hardy_begin = layout.total_index + 1;
  layout.target_index = layout.hardy_begin + hardy_indices.size();
  layout.has_target = target.has_value();
  layout.components = layout.target_index + (target ? 1 : 0);

  std::vector<std::size_t> factor_level(F);
  for (std::size_t f = 0; f < F; ++f)
    factor_level[f] = chain.level_of(factors[f].radius);
  std::vector<std::pair<std::size_t, double>> weight;  // psi^2
  for (const auto &[j, e] : family.psi_exponents())
    weight.emplace_back(chain.level_of(j), 2.0 * e);
  std::vector<std::size_t> hardy_level;
  for (int i : hardy_indices)
    hardy_level.push_back(chain.level_of(i));
  const std::size_t target_level = target ? chain.level_of(*target) : 0;

  ChainIntegrand integrand;
  integrand.components = layout.components;
  add_structure(family, chain, integrand);

  // Declared powers.
  auto base = [&]() {
    Powers pw(L);
    for (const auto &[l, e] : weight)
      pw.add(l, e);
    return pw;
  };
  std::vector<std::vector<double>> powers(layout.components);
  for (std::size_t f = 0; f < F; ++f) {
    Powers pw = base();
    pw.add(factor_level[f], 2.0 * factors[f].derivative_power());
    for (std::size_t g = 0; g < F; ++g)
      if (g != f)
        pw.add(factor_level[g], 2.0 * factors[g].value_power());
    powers[f] = pw.p;
  }
  for (std::size_t i = 0; i < layout.pairs.size(); ++i) {
    const auto [f, g] = layout.pairs[i];
    Powers pw = base();
    pw.add(factor_level[f], factors[f].derivative_power() + factors[f].value_power());
    pw.add(factor_level[g], factors[g].derivative_power() + factors[g].value_power());
    for (std::size_t h = 0; h < F; ++h)
      if (h != f && h != g)
        pw.add(factor_level[h], 2.0 * factors[h].value_power());
    if (factor_level[f] != factor_level[g]) {
      pw.add(std::min(factor_level[f], factor_level[g]), 1.0);
      pw.add(std::max(factor_level[f], factor_level[g]), -1.0);
    }
    powers[F + i] = pw.p;
  }
  powers[layout.total_index] =
    leading_powers({powers.begin(), powers.begin() + static_cast<std::ptrdiff_t>(layout.total_index)}, L);
  auto hardy_powers = [&](std::size_t level) {
    Powers pw = base();
    for (std::size_t g = 0; g < F; ++g)
      pw.add(factor_level[g], 2.0 * factors[g].value_power());
    pw.add(level, -2.0);
    return pw.p;
  };
  for (std::size_t i = 0; i < hardy_level.size(); ++i)
    powers[layout.hardy_begin + i] = hardy_powers(hardy_level[i]);
  if (target)
    powers[layout.target_index] = hardy_powers(target_level);
  integrand.radius_powers = powers;

  const double amp2 = family.descriptor().amplitude * family.descriptor().amplitude;
  const BumpProfile &bump = family.bump();
  integrand.evaluate = [=, &factors, &bump](std::span<const double> r, std::span<double> out) {
    std::vector<double> val(F), der(F);
    for (std::size_t f = 0; f < F; ++f) {
      val[f] = factors[f].value(r[factor_level[f]], bump);
      der[f] = factors[f].derivative(r[factor_level[f]], bump);
    }
    double w = amp2;
    for (const auto &[l, e] : weight)
      w *= std::pow(r[l], e);
    auto product_sq_except = [&](std::size_t a, std::size_t b) {
      double s = 1.0;
      for (std::size_t h = 0; h < F; ++h)
        if (h != a && h != b)
          s *= val[h] * val[h];
      return s;
    };
    for (std::size_t f = 0; f < F; ++f)
      out[f] = w * der[f] * der[f] * product_sq_except(f, f);
    for (std::size_t i = 0; i < layout.pairs.size(); ++i) {
      const auto [f, g] = layout.pairs[i];
      const double ratio =
        factor_level[f] == factor_level[g]
          ? 1.0
          : r[std::min(factor_level[f], factor_level[g])] / r[std::max(factor_level[f], factor_level[g])];
      out[F + i] = 2.0 * w * der[f] * der[g] * val[f] * val[g] * product_sq_except(f, g) * ratio;
    }
    // Independent total: |sum_l (d v / d r_l) grad r_l|^2 with
    // grad r_i . grad r_j = r_i / r_j for i <= j.
    std::vector<double> partial(L, 0.0);
    for (std::size_t f = 0; f < F; ++f) {
      double others = 1.0;
      for (std::size_t g = 0; g < F; ++g)
        if (g != f)
          others *= val[g];
      partial[factor_level[f]] += der[f] * others;
    }
    double grad2 = 0.0;
    for (std::size_t a = 0; a < L; ++a) {
      grad2 += partial[a] * partial[a];
      for (std::size_t b = a + 1; b < L; ++b)
        grad2 += 2.0 * partial[a] * partial[b] * r[a] / r[b];
    }
    out[layout.total_index] = w * grad2;
    double v2 = 1.0;
    for (std::size_t f = 0; f < F; ++f)
      v2 *= val[f] * val[f];
    for (std::size_t i = 0; i < hardy_level.size(); ++i) {
      const double ri = r[hardy_level[i]];
      out[layout.hardy_begin + i] = w * v2 / (ri * ri);
    }
    if (layout.has_target) {
      const double rt = r[target_level];
      out[layout.target_index] = w * v2 / (rt * rt);
    }
  };

  NumeratorResult result;
  result.quad = integrate_chain(chain, integrand, options);
  result.layout = layout;
  return result;
}

void fill_numerator(QuotientReport &report, const Family &family, const NumeratorResult &num,
                    const std::vector<int> &hardy_indices, const BetaSeq &beta)
{
  const auto &factors = family.factors();
  const auto &q = num.quad;
  const auto &lay = num.layout;
  for (std::size_t f = 0; f < lay.factors; ++f)
    report.numerator_terms.push_back({"energy:" + factors[f].label(), 1.0, q.values[f], q.abs_errors[f]});
  for (std::size_t i = 0; i < lay.pairs.size(); ++i) {
    const auto [f, g] = lay.pairs[i];
    const std::size_t c = lay.factors + i;
    report.numerator_terms.push_back(
      {"mixed:" + factors[f].label() + "*" + factors[g].label(), 1.0, q.values[c], q.abs_errors[c]});
  }
  for (std::size_t i = 0; i < hardy_indices.size(); ++i) {
    const std::size_t c = lay.hardy_begin + i;
    report.numerator_terms.push_back({"hardy" + radius_name(hardy_indices[i], family.descriptor().frame.n),
                                      -beta[hardy_indices[i]], q.values[c], q.abs_errors[c]});
  }
  report.energy_total = q.values[lay.total_index];
  report.energy_total_error = q.abs_errors[lay.total_index];
  report.numerator = report.recomputed_numerator();
  report.numerator_error = 0.0;
  for (const auto &t : report.numerator_terms)
    report.numerator_error += std::abs(t.coefficient) * t.error;
  report.route = family.psi_exponents().empty() ? "direct" : "ground_state";
  report.evaluations += q.evaluations;
  report.stochastic = report.stochastic || q.stochastic;
}

bool prefix_index(const Family &family, int i)
{
  for (const auto &[j, e] : family.psi_exponents())
    if (j == i)
      return true;
  return false;
}

void check_prefix_beta(const Family &family, const BetaSeq &beta)
{
  const FamilyDescriptor &d = family.descriptor();
  if (!(beta.frame() == d.frame))
    throw ArgumentError("quotient: beta frame does not match the family");
  if (family.psi_exponents().empty())
    return;
  const BetaSeq fixed = beta_from_alpha(d.frame, d.alpha);
  for (const auto &[j, e] : family.psi_exponents()) {
    const double tolerance = 1e-12 * std::max(1.0, std::abs(fixed[j]));
    if (std::abs(beta[j] - fixed[j]) > tolerance)
      throw PreconditionError("quotient: beta_" + std::to_string(j) +
                              " differs from the value fixed by the family's alpha; the "
                              "ground-state reduction requires beta_j = beta_from_alpha(alpha)_j");
  }
}

}  // namespace

QuotientReport rayleigh_quotient(const FamilyDescriptor &descriptor, const BetaSeq &beta,
                                 int target_index, const QuadratureOptions &options)
{
  const Family family(descriptor);
  check_prefix_beta(family, beta);
  if (target_index != descriptor.target_index())
    throw ArgumentError("rayleigh_quotient: the " + std::string(to_string(descriptor.kind)) +
                        " family targets |X_" + std::to_string(descriptor.target_index()) +
                        "|, not |X_" + std::to_string(target_index) + "|");
  std::vector<int> hardy;
  for (int i = descriptor.frame.k0; i <= descriptor.frame.n; ++i)
    if (i != target_index && !prefix_index(family, i) && beta[i] != 0.0)
      hardy.push_back(i);

  const NumeratorResult num = integrate_numerator(family, hardy, target_index, options);
  QuotientReport report;
  fill_numerator(report, family, num, hardy, beta);
  const std::size_t t = num.layout.target_index;
  report.denominator_integral = num.quad.values[t];
  report.denominator_integral_error = num.quad.abs_errors[t];
  report.denominator = report.denominator_integral;
  report.denominator_error = report.denominator_integral_error;
  report.value = report.numerator / report.denominator;
  report.value_error = report.numerator_error / std::abs(report.denominator) +
                       std::abs(report.value) * report.denominator_error / std::abs(report.denominator);
  return report;
}

QuotientReport sobolev_quotient(const FamilyDescriptor &descriptor, const BetaSeq &beta,
                                const SobolevSpec &spec, const QuadratureOptions &options)
{
  const Family family(descriptor);
  check_prefix_beta(family, beta);
  if (!(spec.frame == descriptor.frame))
    throw ArgumentError("sobolev_quotient: spec frame does not match the family");
  const double Q = spec.Q;
  const double p = spec.maz_power;

  std::vector<int> hardy;
  for (int i = descriptor.frame.k0; i <= descriptor.frame.n; ++i)
    if (!prefix_index(family, i) && beta[i] != 0.0)
      hardy.push_back(i);
  const NumeratorResult num = integrate_numerator(family, hardy, std::nullopt, options);
  QuotientReport report;
  fill_numerator(report, family, num, hardy, beta);

  // Denominator int W psi^Q |v|^Q.
  std::vector<int> extra;
  const bool x2_radius = spec.weight_kind == WeightKind::X2 && p != 0.0;
  if (x2_radius)
    extra.push_back(2);
  const ReducedChain chain = merged_chain(family, extra);
  const std::size_t L = chain.levels();
  double angular = 1.0;
  if (spec.weight_kind == WeightKind::x1) {
    if (!(p > -1.0))
      throw DivergenceError("sobolev_quotient: weight |x_1|^p with p = " + std::to_string(p) +
                            " <= -1 is not locally integrable");
    // Mean of |omega_1|^p over the sphere of the first coordinate block.
    const int d = chain.indices().front();
    angular = std::exp(std::log(2.0) + 0.5 * (d - 1) * std::log(std::numbers::pi) +
                       std::lgamma(0.5 * (p + 1.0)) - std::lgamma(0.5 * (p + d))) /
              unit_sphere_area(d);
  }
  const std::size_t weight_level = spec.weight_kind == WeightKind::x1 ? 0 : (x2_radius ? chain.level_of(2) : 0);
  const bool has_weight = p != 0.0;

  const auto &factors = family.factors();
  std::vector<std::size_t> factor_level;
  for (const auto &f : factors)
    factor_level.push_back(chain.level_of(f.radius));
  std::vector<std::pair<std::size_t, double>> psi;
  for (const auto &[j, e] : family.psi_exponents())
    psi.emplace_back(chain.level_of(j), Q * e);

  ChainIntegrand integrand;
  integrand.components = 1;
  add_structure(family, chain, integrand);
  Powers pw(L);
  for (const auto &[l, e] : psi)
    pw.add(l, e);
  for (std::size_t f = 0; f < factors.size(); ++f)
    pw.add(factor_level[f], Q * factors[f].value_power());
  if (has_weight)
    pw.add(weight_level, p);
  integrand.radius_powers = {pw.p};
  const double ampQ = std::pow(std::abs(descriptor.amplitude), Q);
  const BumpProfile &bump = family.bump();
  integrand.evaluate = [=, &factors, &bump](std::span<const double> r, std::span<double> out) {
    double v = 1.0;
    for (std::size_t f = 0; f < factors.size(); ++f)
      v *= factors[f].value(r[factor_level[f]], bump);
    if (v == 0.0) {
      out[0] = 0.0;
      return;
    }
    double w = ampQ * std::pow(std::abs(v), Q);
    for (const auto &[l, e] : psi)
      w *= std::pow(r[l], e);
    if (has_weight)
      w *= std::pow(r[weight_level], p);
    out[0] = w;
  };
  const VectorQuadratureResult den = integrate_chain(chain, integrand, options);
  report.evaluations += den.evaluations;
  report.stochastic = report.stochastic || den.stochastic;
  report.denominator_integral = angular * den.values[0];
  report.denominator_integral_error = angular * den.abs_errors[0];
  report.denominator = std::pow(report.denominator_integral, 2.0 / Q);
  report.denominator_error =
    (2.0 / Q) * report.denominator * report.denominator_integral_error / report.denominator_integral;
  report.value = report.numerator / report.denominator;
  report.value_error = report.numerator_error / report.denominator +
                       std::abs(report.value) * report.denominator_error / report.denominator;
  return report;
}

}  // namespace hardychain
