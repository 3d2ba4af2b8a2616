/* Copyright 2026 The hardychain Authors */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef HARDYCHAIN_H
#define HARDYCHAIN_H

/*
 * C interface of the hardychain library.
 *
 * Every fallible call returns an hc_status; on failure a description is
 * available from hc_last_error() on the calling thread until the next call.
 * Sequences indexed by the chain k0..n are passed as arrays of length
 * n - k0 + 1.  Handles are opaque and released with their _free function;
 * passing NULL to a _free function is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(HARDYCHAIN_BUILDING_LIBRARY)
#define HC_API __attribute__((visibility("default")))
#else
#define HC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hc_status
{
  HC_OK = 0,
  HC_ERR_ARGUMENT = 1,
  HC_ERR_SINGULAR_POINT = 2,
  HC_ERR_PRECONDITION = 3,
  HC_ERR_DIVERGENCE = 4,
  HC_ERR_BUDGET = 5,
  HC_ERR_NONCONVERGENCE = 6,
  HC_ERR_NULL = 7,
  HC_ERR_INTERNAL = 8
} hc_status;

HC_API const char *hc_version(void);
HC_API const char *hc_status_string(hc_status status);
/* Message of the last failed call on this thread; "" if none. */
HC_API const char *hc_last_error(void);

/* ---- parameter recursions ---------------------------------------------- */

HC_API hc_status hc_beta_from_alpha(int n, int k0, const double *alpha, size_t len, double *beta_out);
HC_API hc_status hc_gamma_from_alpha(int n, int k0, const double *alpha, size_t len, double *gamma_out);
/* Inverse of hc_gamma_from_alpha; alpha may have positive entries. */
HC_API hc_status hc_alpha_from_gamma(int n, int k0, const double *gamma, size_t len, double *alpha_out);

typedef struct hc_certificate hc_certificate;

/* Admissibility of beta through the nonpositive-root recursion. */
HC_API hc_status hc_check_beta(int n, int k0, const double *beta, size_t len, hc_certificate **out);
HC_API int hc_certificate_accepted(const hc_certificate *cert);
/* Chain index of the first negative radicand, 0 if accepted. */
HC_API int hc_certificate_fail_index(const hc_certificate *cert);
HC_API double hc_certificate_slack(const hc_certificate *cert);
/* Copies the alpha sequence of an accepted certificate. */
HC_API hc_status hc_certificate_alpha(const hc_certificate *cert, double *alpha_out, size_t len);
HC_API void hc_certificate_free(hc_certificate *cert);

/* Largest admissible value of beta[index]; *exists = 0 if none. */
HC_API hc_status hc_max_admissible_beta(int n, int k0, const double *beta, size_t len, int index,
                                        double *value_out, int *exists);

typedef enum hc_canonical_variant
{
  HC_CANONICAL_COR1 = 0,
  HC_CANONICAL_COR2 = 1,
  HC_CANONICAL_SATS1 = 2
} hc_canonical_variant;

HC_API hc_status hc_canonical_alpha(int n, int k, hc_canonical_variant variant, double *alpha_out,
                                    size_t len);

/* ---- Sobolev exponents -------------------------------------------------- */

typedef enum hc_weight_kind
{
  HC_WEIGHT_X2 = 0,
  HC_WEIGHT_X1 = 1
} hc_weight_kind;

typedef struct hc_sobolev_spec hc_sobolev_spec;

typedef struct hc_sobolev_scalars
{
  double Q;
  double s;
  double q;
  double b;
  double B;
  double sigma_base;
  double maz_power;
  int c_first_index;
  int valid;
} hc_sobolev_scalars;

/* alpha on the interior chain 3..n. */
HC_API hc_status hc_sobolev_spec_create(int n, const double *alpha, size_t len, double Q,
                                        hc_weight_kind weight_kind, hc_sobolev_spec **out);
HC_API hc_status hc_sobolev_spec_scalars(const hc_sobolev_spec *spec, hc_sobolev_scalars *out);
HC_API const char *hc_sobolev_spec_reason(const hc_sobolev_spec *spec);
/* sigma_1..sigma_n; len must be n. */
HC_API hc_status hc_sobolev_spec_sigma(const hc_sobolev_spec *spec, double *out, size_t len);
/* c_l for l = c_first_index..n; len must be n - c_first_index + 1.  Closed
 * forms that are not defined are reported as NaN. */
HC_API hc_status hc_sobolev_spec_c(const hc_sobolev_spec *spec, double *direct_out, double *closed_form_out,
                                   size_t len);
HC_API void hc_sobolev_spec_free(hc_sobolev_spec *spec);

HC_API hc_status hc_critical_exponent(int n, double *out);
HC_API hc_status hc_sobolev_constant(int n, double *out);

/* ---- pointwise fields --------------------------------------------------- */

/* gamma on the chain k0..n, point of dimension n. */
HC_API hc_status hc_divF_minus_F2(int n, int k0, const double *gamma, size_t len, const double *point,
                                  double *out);
HC_API hc_status hc_ground_state_residual(int n, int k0, const double *gamma, size_t len,
                                          const double *point, double h, double *out);

/* ---- test families and quotients --------------------------------------- */

typedef struct hc_quad_options
{
  double tol;
  size_t max_intervals;
  size_t max_deterministic_levels;
  size_t qmc_points;
  size_t qmc_replicates;
  uint64_t seed;
} hc_quad_options;

HC_API void hc_quad_options_default(hc_quad_options *options);

typedef enum hc_family_kind
{
  HC_FAMILY_STEP3 = 0,
  HC_FAMILY_STEPQ = 1,
  HC_FAMILY_FAILURE = 2
} hc_family_kind;

/* Cutoff levels may be INFINITY.  alpha lives on the chain 3..n and is
 * ignored by the step3 kind. */
typedef struct hc_family_params
{
  hc_family_kind kind;
  int n;
  const double *alpha;
  size_t alpha_len;
  int q;
  double k3;
  double kq;
  double epsilon;
} hc_family_params;

typedef struct hc_report hc_report;

typedef struct hc_report_summary
{
  double value;
  double value_error;
  double numerator;
  double numerator_error;
  double denominator;
  double denominator_error;
  double denominator_integral;
  double denominator_integral_error;
  double energy_total;
  double energy_total_error;
  size_t evaluations;
  int stochastic;
} hc_report_summary;

/* options may be NULL for the defaults. */
HC_API hc_status hc_rayleigh_quotient(const hc_family_params *family, const double *beta, size_t beta_len,
                                      int target_index, const hc_quad_options *options, hc_report **out);
HC_API hc_status hc_sobolev_quotient(const hc_family_params *family, const double *beta, size_t beta_len,
                                     const hc_sobolev_spec *spec, const hc_quad_options *options,
                                     hc_report **out);
HC_API hc_status hc_report_summary_get(const hc_report *report, hc_report_summary *out);
HC_API const char *hc_report_route(const hc_report *report);
HC_API size_t hc_report_term_count(const hc_report *report);
/* label stays valid while the report lives. */
HC_API hc_status hc_report_term(const hc_report *report, size_t i, const char **label, double *coefficient,
                                double *integral, double *error);
HC_API void hc_report_free(hc_report *report);

/* ---- sweeps ------------------------------------------------------------- */

typedef struct hc_sweep hc_sweep;

typedef struct hc_sweep_summary
{
  int is_failure;
  size_t size;
  /* sharpness */
  int target_index;
  double predicted_constant;
  double fit_a;
  double fit_b;
  double fit_residual;
  /* failure */
  double Q;
  double d_exponent;
  double d_exponent_expected;
  double n_spread;
  /* both */
  int strictly_decreasing;
  int inconclusive;
} hc_sweep_summary;

/* Grid points run on up to `jobs` threads (0 or 1: sequential); the results
 * do not depend on jobs. */
HC_API hc_status hc_sharpness_sweep(hc_family_kind kind, int n, const double *alpha, size_t alpha_len, int q,
                                    const double *k_grid, size_t k_len, const hc_quad_options *options,
                                    unsigned jobs, hc_sweep **out);
HC_API hc_status hc_failure_sweep(int n, const double *alpha, size_t alpha_len, double Q,
                                  hc_weight_kind weight_kind, const double *eps_grid, size_t eps_len,
                                  const hc_quad_options *options, unsigned jobs, hc_sweep **out);
HC_API hc_status hc_sweep_summary_get(const hc_sweep *sweep, hc_sweep_summary *out);
/* Point i: swept parameter (k or epsilon), quotient value and its error. */
HC_API hc_status hc_sweep_point(const hc_sweep *sweep, size_t i, double *parameter, double *value,
                                double *error);
/* Failure sweeps: numerator N and denominator D at point i. */
HC_API hc_status hc_sweep_failure_terms(const hc_sweep *sweep, size_t i, double *N, double *D);
/* Borrowed; owned by the sweep. */
HC_API const hc_report *hc_sweep_report(const hc_sweep *sweep, size_t i);
HC_API void hc_sweep_free(hc_sweep *sweep);

/* ---- finite-difference oracle ------------------------------------------ */

typedef struct hc_eigen_options
{
  double tol;
  double inner_tol;
  int max_iterations;
  int max_inner_iterations;
  uint64_t seed;
} hc_eigen_options;

typedef struct hc_eig_result
{
  double lambda_min;
  double residual_norm;
  int iterations;
  long inner_iterations;
  int n;
  int cells_per_axis;
  double box_half_width;
  int indefinite;
  double probe_value;
} hc_eig_result;

HC_API void hc_eigen_options_default(hc_eigen_options *options);

/* beta on the chain 3..n; target_index in 3..n or 0 for the identity mass.
 * results must hold cells_len entries. */
HC_API hc_status hc_oracle_refinement(int n, const int *cells, size_t cells_len, double box_half_width,
                                      const double *beta, size_t beta_len, int target_index,
                                      const hc_eigen_options *options, hc_eig_result *results);
HC_API hc_status hc_box_eigenvalue(int n, double box_half_width, double *out);

#ifdef __cplusplus
}
#endif

#endif /* HARDYCHAIN_H */
