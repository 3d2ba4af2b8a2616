// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hardychain/hardychain.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include "hardychain/error.hpp"
#include "hardychain/families.hpp"
#include "hardychain/fields.hpp"
#include "hardychain/oracle.hpp"
#include "hardychain/params.hpp"

using namespace hardychain;

struct hc_certificate
{
  AdmissibilityCertificate cert;
};

struct hc_sobolev_spec
{
  SobolevSpec spec;
};

struct hc_report
{
  QuotientReport report;
};

struct hc_sweep
{
  std::variant<SharpnessSweep, FailureSweep> sweep;
  std::vector<hc_report> reports;
};

namespace {

thread_local std::string last_error;

class NullPointerError : public Error
{
public:
  using Error::Error;
};

hc_status fail(hc_status status, const std::string &message)
{
  last_error = message;
  return status;
}

// Runs body, translating library exceptions into status codes.
template <class Body>
hc_status guarded(Body &&body)
{
  try {
    last_error.clear();
    body();
    return HC_OK;
  } catch (const BudgetError &e) {
    std::string message = e.what();
    if (!e.best_estimate.empty())
      message += " (best estimate " + std::to_string(e.best_estimate.front()) + ")";
    return fail(HC_ERR_BUDGET, message);
  } catch (const NonConvergenceError &e) {
    return fail(HC_ERR_NONCONVERGENCE, std::string(e.what()) + " (best lambda " +
                                         std::to_string(e.best_lambda) + ", residual " +
                                         std::to_string(e.best_residual) + ")");
  } catch (const NullPointerError &e) {
    return fail(HC_ERR_NULL, e.what());
  } catch (const ArgumentError &e) {
    return fail(HC_ERR_ARGUMENT, e.what());
  } catch (const SingularPointError &e) {
    return fail(HC_ERR_SINGULAR_POINT, e.what());
  } catch (const PreconditionError &e) {
    return fail(HC_ERR_PRECONDITION, e.what());
  } catch (const DivergenceError &e) {
    return fail(HC_ERR_DIVERGENCE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(HC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(HC_ERR_INTERNAL, e.what());
  }
}

template <class T>
void require(const T *p, const char *name)
{
  if (p == nullptr)
    throw NullPointerError(std::string(name) + " is NULL");
}

std::vector<double> to_vector(const double *values, std::size_t len, const char *name)
{
  if (len > 0)
    require(values, name);
  return std::vector<double>(values, values + len);
}

void check_length(const ProblemFrame &frame, std::size_t len, const char *name)
{
  if (len != frame.chain_length())
    throw ArgumentError(std::string(name) + " has length " + std::to_string(len) + ", expected " +
                        std::to_string(frame.chain_length()));
}

void copy_out(std::span<const double> values, double *out, std::size_t len, const char *name)
{
  require(out, name);
  if (len != values.size())
    throw ArgumentError(std::string(name) + " has length " + std::to_string(len) + ", expected " +
                        std::to_string(values.size()));
  std::copy(values.begin(), values.end(), out);
}

QuadratureOptions quad_options(const hc_quad_options *options)
{
  QuadratureOptions q;
  if (options == nullptr)
    return q;
  q.tol = options->tol;
  q.max_intervals = options->max_intervals;
  q.max_deterministic_levels = options->max_deterministic_levels;
  q.qmc_points = options->qmc_points;
  q.qmc_replicates = options->qmc_replicates;
  q.seed = options->seed;
  if (!(q.tol > 0.0) || q.max_intervals == 0 || q.qmc_points == 0 || q.qmc_replicates < 2)
    throw ArgumentError("quadrature options: tol > 0, max_intervals > 0, qmc_points > 0 and "
                        "qmc_replicates >= 2 are required");
  return q;
}

WeightKind weight_kind(hc_weight_kind kind)
{
  switch (kind) {
  case HC_WEIGHT_X2:
    return WeightKind::X2;
  case HC_WEIGHT_X1:
    return WeightKind::x1;
  }
  throw ArgumentError("unknown weight kind");
}

FamilyKind family_kind(hc_family_kind kind)
{
  switch (kind) {
  case HC_FAMILY_STEP3:
    return FamilyKind::step3;
  case HC_FAMILY_STEPQ:
    return FamilyKind::stepq;
  case HC_FAMILY_FAILURE:
    return FamilyKind::failure;
  }
  throw ArgumentError("unknown family kind");
}

FamilyDescriptor descriptor(const hc_family_params &p)
{
  const ProblemFrame frame(p.n, 3);
  switch (family_kind(p.kind)) {
  case FamilyKind::step3:
    return FamilyDescriptor::step3(frame, p.k3);
  case FamilyKind::stepq:
    check_length(frame, p.alpha_len, "alpha");
    return FamilyDescriptor::stepq(frame, AlphaSeq(frame, to_vector(p.alpha, p.alpha_len, "alpha")), p.q,
                                   p.kq, p.k3);
  case FamilyKind::failure:
    check_length(frame, p.alpha_len, "alpha");
    return FamilyDescriptor::failure(frame, AlphaSeq(frame, to_vector(p.alpha, p.alpha_len, "alpha")),
                                     p.epsilon, p.k3);
  }
  throw ArgumentError("unknown family kind");
}

BetaSeq beta_seq(const ProblemFrame &frame, const double *beta, std::size_t len)
{
  check_length(frame, len, "beta");
  return BetaSeq(frame, to_vector(beta, len, "beta"));
}

}  // namespace

extern "C" {

const char *hc_version(void)
{
  return "0.1.0";
}

const char *hc_status_string(hc_status status)
{
  switch (status) {
  case HC_OK:
    return "ok";
  case HC_ERR_ARGUMENT:
    return "argument error";
  case HC_ERR_SINGULAR_POINT:
    return "singular point";
  case HC_ERR_PRECONDITION:
    return "precondition violated";
  case HC_ERR_DIVERGENCE:
    return "divergent integral";
  case HC_ERR_BUDGET:
    return "quadrature budget exhausted";
  case HC_ERR_NONCONVERGENCE:
    return "eigensolver did not converge";
  case HC_ERR_NULL:
    return "null handle";
  case HC_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *hc_last_error(void)
{
  return last_error.c_str();
}

hc_status hc_beta_from_alpha(int n, int k0, const double *alpha, size_t len, double *beta_out)
{
  return guarded([&] {
    const ProblemFrame frame(n, k0);
    check_length(frame, len, "alpha");
    const BetaSeq beta = beta_from_alpha(frame, AlphaSeq(frame, to_vector(alpha, len, "alpha")));
    copy_out(beta.values(), beta_out, len, "beta_out");
  });
}

hc_status hc_gamma_from_alpha(int n, int k0, const double *alpha, size_t len, double *gamma_out)
{
  return guarded([&] {
    const ProblemFrame frame(n, k0);
    check_length(frame, len, "alpha");
    const GammaSeq gamma =
      gamma_from_alpha(frame, AlphaSeq(frame, to_vector(alpha, len, "alpha"), AlphaContext::forward));
    copy_out(gamma.values(), gamma_out, len, "gamma_out");
  });
}

hc_status hc_alpha_from_gamma(int n, int k0, const double *gamma, size_t len, double *alpha_out)
{
  return guarded([&] {
    const ProblemFrame frame(n, k0);
    check_length(frame, len, "gamma");
    const AlphaSeq alpha = alpha_from_gamma(GammaSeq(frame, to_vector(gamma, len, "gamma")));
    copy_out(alpha.values(), alpha_out, len, "alpha_out");
  });
}

hc_status hc_check_beta(int n, int k0, const double *beta, size_t len, hc_certificate **out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const ProblemFrame frame(n, k0);
    *out = new hc_certificate{alpha_from_beta(frame, beta_seq(frame, beta, len))};
  });
}

int hc_certificate_accepted(const hc_certificate *cert)
{
  return cert != nullptr && cert->cert.accepted ? 1 : 0;
}

int hc_certificate_fail_index(const hc_certificate *cert)
{
  return cert != nullptr && cert->cert.fail_index ? *cert->cert.fail_index : 0;
}

double hc_certificate_slack(const hc_certificate *cert)
{
  return cert != nullptr ? cert->cert.slack : std::numeric_limits<double>::quiet_NaN();
}

hc_status hc_certificate_alpha(const hc_certificate *cert, double *alpha_out, size_t len)
{
  if (cert == nullptr)
    return fail(HC_ERR_NULL, "certificate is NULL");
  return guarded([&] {
    if (!cert->cert.alpha)
      throw PreconditionError("certificate is a rejection; it carries no alpha");
    copy_out(cert->cert.alpha->values(), alpha_out, len, "alpha_out");
  });
}

void hc_certificate_free(hc_certificate *cert)
{
  delete cert;
}

hc_status hc_max_admissible_beta(int n, int k0, const double *beta, size_t len, int index, double *value_out,
                                 int *exists)
{
  return guarded([&] {
    require(value_out, "value_out");
    require(exists, "exists");
    const ProblemFrame frame(n, k0);
    const auto value = max_admissible_beta(frame, beta_seq(frame, beta, len), index);
    *exists = value ? 1 : 0;
    *value_out = value ? *value : std::numeric_limits<double>::quiet_NaN();
  });
}

hc_status hc_canonical_alpha(int n, int k, hc_canonical_variant variant, double *alpha_out, size_t len)
{
  return guarded([&] {
    CanonicalVariant v;
    switch (variant) {
    case HC_CANONICAL_COR1:
      v = CanonicalVariant::cor1;
      break;
    case HC_CANONICAL_COR2:
      v = CanonicalVariant::cor2;
      break;
    case HC_CANONICAL_SATS1:
      v = CanonicalVariant::sats1;
      break;
    default:
      throw ArgumentError("unknown canonical variant");
    }
    const AlphaSeq alpha = canonical_alpha(ProblemFrame(n, 3), k, v);
    copy_out(alpha.values(), alpha_out, len, "alpha_out");
  });
}

hc_status hc_sobolev_spec_create(int n, const double *alpha, size_t len, double Q, hc_weight_kind kind,
                                 hc_sobolev_spec **out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const ProblemFrame frame(n, 3);
    check_length(frame, len, "alpha");
    const AlphaSeq a(frame, to_vector(alpha, len, "alpha"));
    *out = new hc_sobolev_spec{sobolev_spec(frame, a, Q, weight_kind(kind))};
  });
}

hc_status hc_sobolev_spec_scalars(const hc_sobolev_spec *spec, hc_sobolev_scalars *out)
{
  if (spec == nullptr)
    return fail(HC_ERR_NULL, "spec is NULL");
  return guarded([&] {
    require(out, "out");
    const SobolevSpec &s = spec->spec;
    *out = {s.Q, s.s, s.q, s.b, s.B, s.sigma_base(), s.maz_power, s.c_first_index, s.valid ? 1 : 0};
  });
}

const char *hc_sobolev_spec_reason(const hc_sobolev_spec *spec)
{
  return spec != nullptr ? spec->spec.reason.c_str() : "";
}

hc_status hc_sobolev_spec_sigma(const hc_sobolev_spec *spec, double *out, size_t len)
{
  if (spec == nullptr)
    return fail(HC_ERR_NULL, "spec is NULL");
  return guarded([&] { copy_out(spec->spec.sigma, out, len, "out"); });
}

hc_status hc_sobolev_spec_c(const hc_sobolev_spec *spec, double *direct_out, double *closed_form_out,
                            size_t len)
{
  if (spec == nullptr)
    return fail(HC_ERR_NULL, "spec is NULL");
  return guarded([&] {
    copy_out(spec->spec.c, direct_out, len, "direct_out");
    copy_out(spec->spec.c_closed_form, closed_form_out, len, "closed_form_out");
  });
}

void hc_sobolev_spec_free(hc_sobolev_spec *spec)
{
  delete spec;
}

hc_status hc_critical_exponent(int n, double *out)
{
  return guarded([&] {
    require(out, "out");
    *out = critical_exponent(n);
  });
}

hc_status hc_sobolev_constant(int n, double *out)
{
  return guarded([&] {
    require(out, "out");
    *out = sobolev_constant(n);
  });
}

hc_status hc_divF_minus_F2(int n, int k0, const double *gamma, size_t len, const double *point, double *out)
{
  return guarded([&] {
    require(out, "out");
    const ProblemFrame frame(n, k0);
    check_length(frame, len, "gamma");
    const GammaSeq g(frame, to_vector(gamma, len, "gamma"));
    *out = divF_minus_F2(Point{to_vector(point, static_cast<std::size_t>(n), "point")}, g);
  });
}

hc_status hc_ground_state_residual(int n, int k0, const double *gamma, size_t len, const double *point,
                                   double h, double *out)
{
  return guarded([&] {
    require(out, "out");
    const ProblemFrame frame(n, k0);
    check_length(frame, len, "gamma");
    const GammaSeq g(frame, to_vector(gamma, len, "gamma"));
    *out = ground_state_residual(Point{to_vector(point, static_cast<std::size_t>(n), "point")}, g, h);
  });
}

void hc_quad_options_default(hc_quad_options *options)
{
  if (options == nullptr)
    return;
  const QuadratureOptions q;
  *options = {q.tol, q.max_intervals, q.max_deterministic_levels, q.qmc_points, q.qmc_replicates, q.seed};
}

hc_status hc_rayleigh_quotient(const hc_family_params *family, const double *beta, size_t beta_len,
                               int target_index, const hc_quad_options *options, hc_report **out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(family, "family");
    const FamilyDescriptor desc = descriptor(*family);
    const BetaSeq b = beta_seq(desc.frame, beta, beta_len);
    *out = new hc_report{rayleigh_quotient(desc, b, target_index, quad_options(options))};
  });
}

hc_status hc_sobolev_quotient(const hc_family_params *family, const double *beta, size_t beta_len,
                              const hc_sobolev_spec *spec, const hc_quad_options *options, hc_report **out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(family, "family");
    require(spec, "spec");
    const FamilyDescriptor desc = descriptor(*family);
    const BetaSeq b = beta_seq(desc.frame, beta, beta_len);
    *out = new hc_report{sobolev_quotient(desc, b, spec->spec, quad_options(options))};
  });
}

hc_status hc_report_summary_get(const hc_report *report, hc_report_summary *out)
{
  if (report == nullptr)
    return fail(HC_ERR_NULL, "report is NULL");
  return guarded([&] {
    require(out, "out");
    const QuotientReport &r = report->report;
    *out = {r.value,
            r.value_error,
            r.numerator,
            r.numerator_error,
            r.denominator,
            r.denominator_error,
            r.denominator_integral,
            r.denominator_integral_error,
            r.energy_total,
            r.energy_total_error,
            r.evaluations,
            r.stochastic ? 1 : 0};
  });
}

const char *hc_report_route(const hc_report *report)
{
  return report != nullptr ? report->report.route.c_str() : "";
}

size_t hc_report_term_count(const hc_report *report)
{
  return report != nullptr ? report->report.numerator_terms.size() : 0;
}

hc_status hc_report_term(const hc_report *report, size_t i, const char **label, double *coefficient,
                         double *integral, double *error)
{
  if (report == nullptr)
    return fail(HC_ERR_NULL, "report is NULL");
  return guarded([&] {
    const auto &terms = report->report.numerator_terms;
    if (i >= terms.size())
      throw ArgumentError("term index out of range");
    const NumeratorTerm &t = terms[i];
    if (label)
      *label = t.label.c_str();
    if (coefficient)
      *coefficient = t.coefficient;
    if (integral)
      *integral = t.integral;
    if (error)
      *error = t.error;
  });
}

void hc_report_free(hc_report *report)
{
  delete report;
}

hc_status hc_sharpness_sweep(hc_family_kind kind, int n, const double *alpha, size_t alpha_len, int q,
                             const double *k_grid, size_t k_len, const hc_quad_options *options,
                             unsigned jobs, hc_sweep **out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const ProblemFrame frame(n, 3);
    check_length(frame, alpha_len, "alpha");
    const AlphaSeq a(frame, to_vector(alpha, alpha_len, "alpha"));
    SharpnessSweep s = sharpness_sweep(family_kind(kind), frame, a, to_vector(k_grid, k_len, "k_grid"), q,
                                       quad_options(options), jobs);
    auto sweep = std::make_unique<hc_sweep>();
    for (const auto &r : s.reports)
      sweep->reports.push_back(hc_report{r});
    sweep->sweep = std::move(s);
    *out = sweep.release();
  });
}

hc_status hc_failure_sweep(int n, const double *alpha, size_t alpha_len, double Q, hc_weight_kind kind,
                           const double *eps_grid, size_t eps_len, const hc_quad_options *options,
                           unsigned jobs, hc_sweep **out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const ProblemFrame frame(n, 3);
    check_length(frame, alpha_len, "alpha");
    const AlphaSeq a(frame, to_vector(alpha, alpha_len, "alpha"));
    FailureSweep s =
      failure_sweep(frame, a, Q, weight_kind(kind), to_vector(eps_grid, eps_len, "eps_grid"), quad_options(options),
                    jobs);
    auto sweep = std::make_unique<hc_sweep>();
    for (const auto &r : s.reports)
      sweep->reports.push_back(hc_report{r});
    sweep->sweep = std::move(s);
    *out = sweep.release();
  });
}

hc_status hc_sweep_summary_get(const hc_sweep *sweep, hc_sweep_summary *out)
{
  if (sweep == nullptr)
    return fail(HC_ERR_NULL, "sweep is NULL");
  return guarded([&] {
    require(out, "out");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    hc_sweep_summary s{};
    s.size = sweep->reports.size();
    if (const auto *sh = std::get_if<SharpnessSweep>(&sweep->sweep)) {
      s.is_failure = 0;
      s.target_index = sh->target_index;
      s.predicted_constant = sh->predicted_constant;
      s.fit_a = sh->fit.a;
      s.fit_b = sh->fit.b;
      s.fit_residual = sh->fit.residual;
      s.Q = s.d_exponent = s.d_exponent_expected = s.n_spread = nan;
      s.strictly_decreasing = sh->strictly_decreasing ? 1 : 0;
      s.inconclusive = sh->inconclusive ? 1 : 0;
    } else {
      const auto &f = std::get<FailureSweep>(sweep->sweep);
      s.is_failure = 1;
      s.target_index = 0;
      s.predicted_constant = s.fit_a = s.fit_b = s.fit_residual = nan;
      s.Q = f.Q;
      s.d_exponent = f.d_exponent;
      s.d_exponent_expected = f.d_exponent_expected;
      s.n_spread = f.n_spread;
      s.strictly_decreasing = f.strictly_decreasing ? 1 : 0;
      s.inconclusive = f.inconclusive ? 1 : 0;
    }
    *out = s;
  });
}

hc_status hc_sweep_point(const hc_sweep *sweep, size_t i, double *parameter, double *value, double *error)
{
  if (sweep == nullptr)
    return fail(HC_ERR_NULL, "sweep is NULL");
  return guarded([&] {
    if (i >= sweep->reports.size())
      throw ArgumentError("sweep point index out of range");
    double p, v, e;
    if (const auto *sh = std::get_if<SharpnessSweep>(&sweep->sweep)) {
      p = sh->k[i];
      v = sh->values[i];
      e = sh->errors[i];
    } else {
      const auto &f = std::get<FailureSweep>(sweep->sweep);
      p = f.epsilon[i];
      v = f.ratio[i];
      e = f.ratio_errors[i];
    }
    if (parameter)
      *parameter = p;
    if (value)
      *value = v;
    if (error)
      *error = e;
  });
}

hc_status hc_sweep_failure_terms(const hc_sweep *sweep, size_t i, double *N, double *D)
{
  if (sweep == nullptr)
    return fail(HC_ERR_NULL, "sweep is NULL");
  return guarded([&] {
    const auto *f = std::get_if<FailureSweep>(&sweep->sweep);
    if (f == nullptr)
      throw PreconditionError("not a failure sweep");
    if (i >= f->N.size())
      throw ArgumentError("sweep point index out of range");
    if (N)
      *N = f->N[i];
    if (D)
      *D = f->D[i];
  });
}

const hc_report *hc_sweep_report(const hc_sweep *sweep, size_t i)
{
  if (sweep == nullptr || i >= sweep->reports.size())
    return nullptr;
  return &sweep->reports[i];
}

void hc_sweep_free(hc_sweep *sweep)
{
  delete sweep;
}

void hc_eigen_options_default(hc_eigen_options *options)
{
  if (options == nullptr)
    return;
  const EigenOptions e;
  *options = {e.tol, e.inner_tol, e.max_iterations, e.max_inner_iterations, e.seed};
}

hc_status hc_oracle_refinement(int n, const int *cells, size_t cells_len, double box_half_width,
                               const double *beta, size_t beta_len, int target_index,
                               const hc_eigen_options *options, hc_eig_result *results)
{
  return guarded([&] {
    require(results, "results");
    if (cells_len == 0)
      throw ArgumentError("cells is empty");
    require(cells, "cells");
    const ProblemFrame frame(n, 3);
    const BetaSeq b = beta_seq(frame, beta, beta_len);
    EigenOptions e;
    if (options != nullptr) {
      e.tol = options->tol;
      e.inner_tol = options->inner_tol;
      e.max_iterations = options->max_iterations;
      e.max_inner_iterations = options->max_inner_iterations;
      e.seed = options->seed;
    }
    const auto estimates = refinement_sequence(n, std::vector<int>(cells, cells + cells_len), box_half_width, b,
                                               target_index, e);
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const EigEstimate &est = estimates[i];
      results[i] = {est.lambda_min,
                    est.residual_norm,
                    est.iterations,
                    est.inner_iterations,
                    est.grid.n,
                    est.grid.cells_per_axis,
                    est.grid.box_half_width,
                    est.indefinite ? 1 : 0,
                    est.probe_value};
    }
  });
}

hc_status hc_box_eigenvalue(int n, double box_half_width, double *out)
{
  return guarded([&] {
    require(out, "out");
    if (!(box_half_width > 0.0))
      throw ArgumentError("box_half_width must be positive");
    *out = box_eigenvalue(n, box_half_width);
  });
}

}  // extern "C"
