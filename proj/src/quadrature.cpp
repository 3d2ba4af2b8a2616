// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hardychain/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <string>

#include "hardychain/error.hpp"

namespace hardychain {

ReducedChain::ReducedChain(int n, std::vector<int> indices) : n_(n), indices_(std::move(indices))
{
  if (n_ < 1)
    throw ArgumentError("reduced chain: dimension must be positive");
  if (indices_.empty())
    throw ArgumentError("reduced chain: empty index list");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 1 || indices_[i] > n_)
      throw ArgumentError("reduced chain: index " + std::to_string(indices_[i]) + " outside [1, " +
                          std::to_string(n_) + "]");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw ArgumentError("reduced chain: indices must be strictly increasing");
  }
  if (indices_.back() != n_)
    throw ArgumentError("reduced chain: the last index must be n (the full radius)");
}

std::vector<int> ReducedChain::group_dims() const
{
  std::vector<int> dims(indices_.size());
  int previous = 0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    dims[i] = indices_[i] - previous;
    previous = indices_[i];
  }
  return dims;
}

std::size_t ReducedChain::level_of(int m) const
{
  const auto it = std::find(indices_.begin(), indices_.end(), m);
  if (it == indices_.end())
    throw ArgumentError("reduced chain: radius |X_" + std::to_string(m) + "| is not in the chain");
  return static_cast<std::size_t>(it - indices_.begin());
}

bool ReducedChain::contains(int m) const
{
  return std::find(indices_.begin(), indices_.end(), m) != indices_.end();
}

double unit_sphere_area(int d)
{
  if (d < 1)
    throw ArgumentError("unit_sphere_area: dimension must be positive");
  return 2.0 * std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d));
}

double MeasureDescription::weight(std::span<const double> t) const
{
  if (t.size() != block_dims.size())
    throw ArgumentError("measure weight: expected " + std::to_string(block_dims.size()) +
                        " block variables");
  double w = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    w *= std::pow(t[i], block_dims[i] - 1);
  return w;
}

std::vector<double> MeasureDescription::radii(std::span<const double> t) const
{
  if (t.size() != block_dims.size())
    throw ArgumentError("measure radii: expected " + std::to_string(block_dims.size()) +
                        " block variables");
  std::vector<double> r(t.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    acc += t[i] * t[i];
    r[i] = std::sqrt(acc);
  }
  return r;
}

MeasureDescription reduce_measure(const ReducedChain &chain)
{
  MeasureDescription m;
  m.block_dims = chain.group_dims();
  m.constant = 1.0;
  int cumulative = 0;
  for (int d : m.block_dims) {
    m.constant *= unit_sphere_area(d);
    cumulative += d;
    m.cumulative_dims.push_back(cumulative);
  }
  return m;
}

QuadratureResult VectorQuadratureResult::component(std::size_t c) const
{
  return {values.at(c), abs_errors.at(c), evaluations, stochastic};
}

namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Depth in log units below the smallest breakpoint where the power-law tail
// takes over.  At e^{-30} relative, analytic corrections in r^2 are ~1e-26.
constexpr double kLogDepth = 30.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Interval
{
  double a = 0.0;
  double b = 0.0;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<double> mass;
  std::vector<double> propagated;
  double priority = 0.0;
};

struct ByPriority
{
  bool operator()(const Interval &x, const Interval &y) const { return x.priority < y.priority; }
};

// Integration variable of one level: log radius (outermost) or log angle.
struct LevelMap
{
  bool outer = true;
  double R = 0.0;   // radius of the enclosing level (inner levels)
  double lo = 0.0;  // lower limit of the variable
  double hi = 0.0;
  bool tail = false;
  std::vector<double> breaks;  // interior breakpoints in the variable
  bool empty = false;
};

class ChainIntegrator
{
public:
  ChainIntegrator(const ReducedChain &chain, const ChainIntegrand &f, const QuadratureOptions &o)
    : chain_(chain), f_(f), opt_(o), q_(chain.levels()), C_(f.components)
  {
    if (C_ == 0)
      throw ArgumentError("integrate_chain: integrand has no components");
    if (!f_.evaluate)
      throw ArgumentError("integrate_chain: integrand is not set");
    if (!(opt_.tol > 0.0))
      throw ArgumentError("integrate_chain: tol must be positive");
    if (!(f_.outer_max > 0.0) || !std::isfinite(f_.outer_max))
      throw ArgumentError("integrate_chain: outer_max must be positive and finite");

    const auto measure = reduce_measure(chain_);
    constant_ = measure.constant;
    block_dims_ = measure.block_dims;
    cumulative_dims_ = measure.cumulative_dims;

    support_.assign(q_, 0.0);
    if (!f_.support_min.empty()) {
      if (f_.support_min.size() != q_)
        throw ArgumentError("integrate_chain: support_min needs one entry per level");
      double running = 0.0;
      for (std::size_t l = 0; l < q_; ++l) {
        running = std::max(running, f_.support_min[l]);
        support_[l] = running;
      }
    }

    breaks_.assign(q_, {});
    if (!f_.breakpoints.empty()) {
      if (f_.breakpoints.size() != q_)
        throw ArgumentError("integrate_chain: breakpoints need one list per level");
      std::vector<double> running;
      for (std::size_t l = 0; l < q_; ++l) {
        for (double b : f_.breakpoints[l])
          if (b > 0.0 && std::isfinite(b))
            running.push_back(b);
        std::sort(running.begin(), running.end());
        running.erase(std::unique(running.begin(), running.end()), running.end());
        breaks_[l] = running;
      }
    }

    rate_.assign(C_, std::vector<double>(q_, 0.0));
    if (!f_.radius_powers.empty() && f_.radius_powers.size() != C_)
      throw ArgumentError("integrate_chain: radius_powers needs one row per component");
    for (std::size_t c = 0; c < C_; ++c) {
      if (!f_.radius_powers.empty() && f_.radius_powers[c].size() != q_)
        throw ArgumentError("integrate_chain: radius_powers row needs one entry per level");
      double power = 0.0;
      for (std::size_t l = 0; l < q_; ++l) {
        power += f_.radius_powers.empty() ? 0.0 : f_.radius_powers[c][l];
        rate_[c][l] = power + cumulative_dims_[l];
        if (support_[l] == 0.0 && !(rate_[c][l] > 0.0))
          throw DivergenceError("integrand component " + std::to_string(c) + " behaves like |X_" +
                                std::to_string(chain_.indices()[l]) + "|^" + format(power) +
                                " near its origin; with measure dimension " +
                                std::to_string(cumulative_dims_[l]) + " it is not integrable");
      }
    }
    radii_.assign(q_, 0.0);
  }

  VectorQuadratureResult run()
  {
    VectorQuadratureResult result;
    result.values.assign(C_, 0.0);
    result.abs_errors.assign(C_, 0.0);
    if (q_ > opt_.max_deterministic_levels) {
      run_qmc(result);
    } else {
      level(q_ - 1, f_.outer_max, opt_.tol, result.values, result.abs_errors);
      result.stochastic = false;
    }
    for (std::size_t c = 0; c < C_; ++c) {
      result.values[c] *= constant_;
      result.abs_errors[c] *= constant_;
    }
    result.evaluations = evaluations_;
    return result;
  }

private:
  static std::string format(double x)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  }

  LevelMap make_map(std::size_t l, double R) const
  {
    LevelMap m;
    m.outer = (l + 1 == q_);
    m.R = R;
    const double support = support_[l];
    const auto &breaks = breaks_[l];
    if (m.outer) {
      m.hi = std::log(R);
      if (support >= R) {
        m.empty = true;
        return m;
      }
      double ref = R;
      for (double b : breaks)
        ref = std::min(ref, b);
      if (support > 0.0) {
        m.lo = std::log(support);
      } else {
        m.lo = std::log(ref) - kLogDepth;
        m.tail = true;
      }
      for (double b : breaks)
        if (b > support && b < R)
          m.breaks.push_back(std::log(b));
    } else {
      m.hi = std::log(kHalfPi);
      if (support >= R) {
        m.empty = true;
        return m;
      }
      double ref = R;
      for (double b : breaks)
        ref = std::min(ref, b);
      if (support > 0.0) {
        m.lo = std::log(std::asin(support / R));
      } else {
        m.lo = std::log(std::asin(std::min(ref, R) / R)) - kLogDepth;
        m.tail = true;
      }
      for (double b : breaks)
        if (b > support && b < R)
          m.breaks.push_back(std::log(std::asin(b / R)));
    }
    std::sort(m.breaks.begin(), m.breaks.end());
    return m;
  }

  // Radius at level l and the Jacobian of the level variable.
  void map_point(const LevelMap &m, std::size_t l, double v, double &radius, double &jac) const
  {
    if (m.outer) {
      radius = std::exp(v);
      jac = std::pow(radius, cumulative_dims_[l]);
    } else {
      const double theta = std::exp(v);
      const double s = std::sin(theta);
      const double c = std::cos(theta);
      radius = m.R * s;
      jac = std::pow(s, cumulative_dims_[l] - 1) * std::pow(c, block_dims_[l + 1] - 1) * theta;
    }
  }

  // g(v) for level l: Jacobian times the integral over the inner levels.
  void sample(const LevelMap &m, std::size_t l, double v, double tol, std::span<double> value,
              std::span<double> error)
  {
    double radius = 0.0;
    double jac = 0.0;
    map_point(m, l, v, radius, jac);
    radii_[l] = radius;
    if (l == 0) {
      f_.evaluate(radii_, value);
      ++evaluations_;
      std::fill(error.begin(), error.end(), 0.0);
    } else {
      std::vector<double> inner_value(C_), inner_error(C_);
      level(l - 1, radius, tol, inner_value, inner_error);
      std::copy(inner_value.begin(), inner_value.end(), value.begin());
      std::copy(inner_error.begin(), inner_error.end(), error.begin());
    }
    for (std::size_t c = 0; c < C_; ++c) {
      value[c] *= jac;
      error[c] *= jac;
    }
  }

  Interval gauss_kronrod(const LevelMap &m, std::size_t l, double a, double b, double tol)
  {
    Interval iv;
    iv.a = a;
    iv.b = b;
    iv.value.assign(C_, 0.0);
    iv.error.assign(C_, 0.0);
    iv.mass.assign(C_, 0.0);
    iv.propagated.assign(C_, 0.0);
    std::vector<double> gauss(C_, 0.0);
    std::vector<double> fv(C_), fe(C_);
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < 15; ++i) {
      const int j = i < 8 ? i : 14 - i;
      const double x = i < 8 ? -kXgk[j] : kXgk[j];
      sample(m, l, center + half * x, tol, fv, fe);
      for (std::size_t c = 0; c < C_; ++c) {
        iv.value[c] += kWgk[j] * fv[c];
        iv.mass[c] += kWgk[j] * std::abs(fv[c]);
        iv.propagated[c] += kWgk[j] * fe[c];
        if (j % 2 == 1)
          gauss[c] += kWg[j / 2] * fv[c];
      }
    }
    for (std::size_t c = 0; c < C_; ++c) {
      iv.value[c] *= half;
      iv.mass[c] *= half;
      iv.propagated[c] *= half;
      gauss[c] *= half;
      iv.error[c] = std::max(std::abs(iv.value[c] - gauss[c]), 50.0 * kEps * iv.mass[c]);
    }
    return iv;
  }

  double priority(const Interval &iv, const std::vector<double> &mass_total) const
  {
    double p = 0.0;
    for (std::size_t c = 0; c < C_; ++c) {
      const double scale = mass_total[c] > 0.0 ? mass_total[c] : 1.0;
      p = std::max(p, iv.error[c] / scale);
    }
    return p;
  }

  void level(std::size_t l, double R, double tol, std::span<double> value,
             std::span<double> error)
  {
    std::fill(value.begin(), value.end(), 0.0);
    std::fill(error.begin(), error.end(), 0.0);
    const LevelMap m = make_map(l, R);
    if (m.empty || !(m.hi > m.lo))
      return;

    const double inner_tol = 0.25 * tol;
    std::vector<double> nodes{m.lo};
    for (double b : m.breaks)
      if (b > m.lo && b < m.hi)
        nodes.push_back(b);
    nodes.push_back(m.hi);

    std::priority_queue<Interval, std::vector<Interval>, ByPriority> queue;
    std::vector<double> total(C_, 0.0), err(C_, 0.0), mass(C_, 0.0), prop(C_, 0.0);
    auto account = [&](const Interval &iv, double sign) {
      for (std::size_t c = 0; c < C_; ++c) {
        total[c] += sign * iv.value[c];
        err[c] += sign * iv.error[c];
        mass[c] += sign * iv.mass[c];
        prop[c] += sign * iv.propagated[c];
      }
    };
    std::vector<Interval> initial;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      initial.push_back(gauss_kronrod(m, l, nodes[i], nodes[i + 1], inner_tol));
      account(initial.back(), 1.0);
    }
    for (auto &iv : initial) {
      iv.priority = priority(iv, mass);
      queue.push(std::move(iv));
    }

    auto converged = [&]() {
      for (std::size_t c = 0; c < C_; ++c)
        if (err[c] > tol * mass[c] && err[c] > std::numeric_limits<double>::min())
          return false;
      return true;
    };

    // Inner levels that exhaust the budget (rounding noise near a support
    // edge) keep their best estimate; the error propagates outward.
    const bool outermost = (l + 1 == q_);
    std::size_t count = queue.size();
    while (!converged()) {
      if (count >= opt_.max_intervals && !outermost)
        break;
      if (count >= opt_.max_intervals) {
        std::vector<double> best(total.begin(), total.end());
        std::vector<double> best_err(C_);
        for (std::size_t c = 0; c < C_; ++c) {
          best[c] *= constant_;
          best_err[c] = (err[c] + prop[c]) * constant_;
        }
        throw BudgetError("integrate_chain: " + std::to_string(opt_.max_intervals) +
                              " subintervals at level " + std::to_string(l) +
                              " did not reach tol " + format(tol),
                          std::move(best), std::move(best_err));
      }
      Interval worst = queue.top();
      queue.pop();
      account(worst, -1.0);
      const double mid = 0.5 * (worst.a + worst.b);
      Interval left = gauss_kronrod(m, l, worst.a, mid, inner_tol);
      Interval right = gauss_kronrod(m, l, mid, worst.b, inner_tol);
      account(left, 1.0);
      account(right, 1.0);
      left.priority = priority(left, mass);
      right.priority = priority(right, mass);
      queue.push(std::move(left));
      queue.push(std::move(right));
      ++count;
    }

    // Exact recomputation of the sums from the final partition.
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(err.begin(), err.end(), 0.0);
    std::fill(prop.begin(), prop.end(), 0.0);
    while (!queue.empty()) {
      const Interval &iv = queue.top();
      for (std::size_t c = 0; c < C_; ++c) {
        total[c] += iv.value[c];
        err[c] += iv.error[c];
        prop[c] += iv.propagated[c];
      }
      queue.pop();
    }

    if (m.tail) {
      // Below lo the integrand is C e^{P v}; its integral is g(lo)/P.
      std::vector<double> g(C_), ge(C_);
      sample(m, l, m.lo, inner_tol, g, ge);
      for (std::size_t c = 0; c < C_; ++c) {
        const double P = rate_[c][l];
        if (!std::isfinite(P))
          continue;
        const double t = g[c] / P;
        total[c] += t;
        err[c] += 1e-13 * std::abs(t);
        prop[c] += ge[c] / P;
      }
    }
    for (std::size_t c = 0; c < C_; ++c) {
      value[c] = total[c];
      error[c] = err[c] + prop[c];
    }
  }

  // Samples level l from y in [0, 1).  Near the origin the variable is drawn
  // with density proportional to its leading power; with a support cutoff it
  // is drawn uniformly.  Returns false when the level is empty.
  bool qmc_point(std::size_t l, double enclosing, double y, double &weight)
  {
    const bool outer = (l + 1 == q_);
    const double support = support_[l];
    if (support >= enclosing) {
      weight = 0.0;
      return false;
    }
    const double hi = outer ? enclosing : kHalfPi;
    double lo = 0.0;
    if (support > 0.0)
      lo = outer ? support : std::asin(support / enclosing);
    double u = 0.0;
    double du = 0.0;
    if (lo > 0.0) {
      u = lo + y * (hi - lo);
      du = hi - lo;
    } else {
      double a = rate_[0][l];
      for (std::size_t c = 1; c < C_; ++c)
        a = std::min(a, rate_[c][l]);
      const double t = std::max(y, std::numeric_limits<double>::min());
      u = hi * std::pow(t, 1.0 / a);
      du = u / (a * t);
    }
    double jac = 0.0;
    if (outer) {
      radii_[l] = u;
      jac = std::pow(u, cumulative_dims_[l] - 1);
    } else {
      radii_[l] = enclosing * std::sin(u);
      jac = std::pow(std::sin(u), cumulative_dims_[l] - 1) * std::pow(std::cos(u), block_dims_[l + 1] - 1);
    }
    weight *= jac * du;
    if (!(radii_[l] > 0.0)) {
      weight = 0.0;
      return false;
    }
    return true;
  }

  void run_qmc(VectorQuadratureResult &result)
  {
    static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    if (q_ > std::size(kPrimes))
      throw ArgumentError("integrate_chain: chain too long for the quasi-Monte Carlo path");
    const std::size_t R = std::max<std::size_t>(opt_.qmc_replicates, 2);
    const std::size_t N = std::max<std::size_t>(opt_.qmc_points, 16);
    std::mt19937_64 rng(opt_.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> means(R, std::vector<double>(C_, 0.0));
    std::vector<double> shift(q_), fv(C_);
    for (std::size_t r = 0; r < R; ++r) {
      for (auto &s : shift)
        s = unit(rng);
      for (std::size_t i = 1; i <= N; ++i) {
        double weight = 1.0;
        double enclosing = f_.outer_max;
        for (std::size_t step = 0; step < q_; ++step) {
          const std::size_t l = q_ - 1 - step;
          double y = radical_inverse(i, kPrimes[step]) + shift[step];
          y -= std::floor(y);
          if (!qmc_point(l, enclosing, y, weight))
            break;
          enclosing = radii_[l];
        }
        if (weight == 0.0)
          continue;
        f_.evaluate(radii_, fv);
        ++evaluations_;
        for (std::size_t c = 0; c < C_; ++c)
          means[r][c] += weight * fv[c];
      }
      for (std::size_t c = 0; c < C_; ++c)
        means[r][c] /= static_cast<double>(N);
    }
    for (std::size_t c = 0; c < C_; ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < R; ++r)
        mean += means[r][c];
      mean /= static_cast<double>(R);
      double var = 0.0;
      for (std::size_t r = 0; r < R; ++r)
        var += (means[r][c] - mean) * (means[r][c] - mean);
      var /= static_cast<double>(R - 1);
      result.values[c] = mean;
      result.abs_errors[c] = std::sqrt(var / static_cast<double>(R));
    }
    result.stochastic = true;
  }

  static double radical_inverse(std::size_t i, int base)
  {
    double inv = 1.0 / base;
    double f = inv;
    double x = 0.0;
    while (i > 0) {
      x += f * static_cast<double>(i % static_cast<std::size_t>(base));
      i /= static_cast<std::size_t>(base);
      f *= inv;
    }
    return x;
  }

  const ReducedChain &chain_;
  const ChainIntegrand &f_;
  const QuadratureOptions &opt_;
  std::size_t q_;
  std::size_t C_;
  double constant_ = 1.0;
  std::vector<int> block_dims_;
  std::vector<int> cumulative_dims_;
  std::vector<double> support_;
  std::vector<std::vector<double>> breaks_;
  std::vector<std::vector<double>> rate_;
  std::vector<double> radii_;
  std::size_t evaluations_ = 0;
};

}  // namespace

VectorQuadratureResult integrate_chain(const ReducedChain &chain, const ChainIntegrand &integrand,
                                       const QuadratureOptions &options)
{
  return ChainIntegrator(chain, integrand, options).run();
}

QuadratureResult integrate_chain(const ReducedChain &chain,
                                 const std::function<double(std::span<const double>)> &f,
                                 std::vector<double> radius_powers,
                                 std::vector<double> support_min,
                                 std::vector<std::vector<double>> breakpoints, double outer_max,
                                 const QuadratureOptions &options)
{
  ChainIntegrand integrand;
  integrand.components = 1;
  integrand.evaluate = [&f](std::span<const double> r, std::span<double> out) { out[0] = f(r); };
  if (!radius_powers.empty())
    integrand.radius_powers = {std::move(radius_powers)};
  integrand.support_min = std::move(support_min);
  integrand.breakpoints = std::move(breakpoints);
  integrand.outer_max = outer_max;
  return integrate_chain(chain, integrand, options).component(0);
}

}  // namespace hardychain
