// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "hardychain/hardychain.h"

TEST_CASE("version and status strings")
{
  CHECK(std::strlen(hc_version()) > 0);
  CHECK(std::string(hc_status_string(HC_OK)) == "ok");
  for (int s = HC_OK; s <= HC_ERR_INTERNAL; ++s)
    CHECK(std::strlen(hc_status_string(static_cast<hc_status>(s))) > 0);
}

TEST_CASE("recursions")
{
  const double alpha[] = {0.0, 0.0};
  double beta[2];
  REQUIRE(hc_beta_from_alpha(4, 3, alpha, 2, beta) == HC_OK);
  CHECK(beta[0] == 0.25);
  CHECK(beta[1] == 0.25);
  double gamma[2];
  REQUIRE(hc_gamma_from_alpha(4, 3, alpha, 2, gamma) == HC_OK);
  CHECK(gamma[0] == 0.5);
  CHECK(gamma[1] == 0.5);
  double back[2];
  REQUIRE(hc_alpha_from_gamma(4, 3, gamma, 2, back) == HC_OK);
  CHECK(back[0] == 0.0);
  CHECK(back[1] == 0.0);

  CHECK(hc_beta_from_alpha(4, 3, alpha, 3, beta) == HC_ERR_ARGUMENT);
  CHECK(std::string(hc_last_error()).find("expected") != std::string::npos);
  CHECK(hc_beta_from_alpha(4, 3, nullptr, 2, beta) == HC_ERR_NULL);
  const double positive[] = {0.1};
  CHECK(hc_beta_from_alpha(3, 3, positive, 1, beta) == HC_ERR_ARGUMENT);
}

TEST_CASE("certificates")
{
  const double ok[] = {0.25, 0.25};
  hc_certificate *cert = nullptr;
  REQUIRE(hc_check_beta(4, 3, ok, 2, &cert) == HC_OK);
  CHECK(hc_certificate_accepted(cert) == 1);
  CHECK(hc_certificate_fail_index(cert) == 0);
  double alpha[2];
  REQUIRE(hc_certificate_alpha(cert, alpha, 2) == HC_OK);
  CHECK(alpha[0] == 0.0);
  CHECK(alpha[1] == 0.0);
  hc_certificate_free(cert);

  const double bad[] = {0.3};
  REQUIRE(hc_check_beta(3, 3, bad, 1, &cert) == HC_OK);
  CHECK(hc_certificate_accepted(cert) == 0);
  CHECK(hc_certificate_fail_index(cert) == 3);
  CHECK(hc_certificate_slack(cert) == doctest::Approx(-0.05));
  CHECK(hc_certificate_alpha(cert, alpha, 1) == HC_ERR_PRECONDITION);
  hc_certificate_free(cert);
  hc_certificate_free(nullptr);
  CHECK(hc_check_beta(3, 3, bad, 1, nullptr) == HC_ERR_NULL);

  double cap = 0.0;
  int exists = 0;
  const double zero[] = {0.0, 0.0};
  REQUIRE(hc_max_admissible_beta(4, 3, zero, 2, 4, &cap, &exists) == HC_OK);
  CHECK(exists == 1);
  CHECK(cap == doctest::Approx(1.0));
}

TEST_CASE("canonical choices and constants")
{
  double alpha[3];
  REQUIRE(hc_canonical_alpha(5, 4, HC_CANONICAL_COR1, alpha, 3) == HC_OK);
  CHECK(alpha[0] == -0.5);
  CHECK(hc_canonical_alpha(5, 6, HC_CANONICAL_COR1, alpha, 3) == HC_ERR_ARGUMENT);
  double s3 = 0.0;
  REQUIRE(hc_sobolev_constant(3, &s3) == HC_OK);
  CHECK(std::abs(s3 / (3 * std::pow(M_PI / 2, 4.0 / 3.0)) - 1) <= 1e-12);
  double q = 0.0;
  REQUIRE(hc_critical_exponent(3, &q) == HC_OK);
  CHECK(q == 6.0);
  double box = 0.0;
  REQUIRE(hc_box_eigenvalue(3, 1.0, &box) == HC_OK);
  CHECK(box == doctest::Approx(3 * M_PI * M_PI / 4));
}

TEST_CASE("sobolev spec handle")
{
  const double alpha[] = {-0.1};
  hc_sobolev_spec *spec = nullptr;
  REQUIRE(hc_sobolev_spec_create(3, alpha, 1, 6.0, HC_WEIGHT_X2, &spec) == HC_OK);
  hc_sobolev_scalars s;
  REQUIRE(hc_sobolev_spec_scalars(spec, &s) == HC_OK);
  CHECK(s.valid == 1);
  CHECK(s.maz_power == 0.0);
  CHECK(s.s == 4.0);
  double sigma[3];
  REQUIRE(hc_sobolev_spec_sigma(spec, sigma, 3) == HC_OK);
  CHECK(sigma[2] == doctest::Approx(-4.0 * 0.4));
  CHECK(hc_sobolev_spec_sigma(spec, sigma, 2) == HC_ERR_ARGUMENT);
  hc_sobolev_spec_free(spec);

  const double zero[] = {0.0};
  REQUIRE(hc_sobolev_spec_create(3, zero, 1, 6.0, HC_WEIGHT_X2, &spec) == HC_OK);
  REQUIRE(hc_sobolev_spec_scalars(spec, &s) == HC_OK);
  CHECK(s.valid == 0);
  CHECK(std::string(hc_sobolev_spec_reason(spec)).find("alpha_n = 0") != std::string::npos);
  hc_sobolev_spec_free(spec);
}

TEST_CASE("fields")
{
  const double gamma[] = {0.5};
  const double p[] = {1.0, 0.0, 0.0};
  double v = 0.0;
  REQUIRE(hc_divF_minus_F2(3, 3, gamma, 1, p, &v) == HC_OK);
  CHECK(v == doctest::Approx(0.25));
  const double origin[] = {0.0, 0.0, 0.0};
  CHECK(hc_divF_minus_F2(3, 3, gamma, 1, origin, &v) == HC_ERR_SINGULAR_POINT);
  const double q[] = {0.5, 0.5, 0.5};
  REQUIRE(hc_ground_state_residual(3, 3, gamma, 1, q, 1e-4, &v) == HC_OK);
  CHECK(v <= 1e-6);
  CHECK(hc_ground_state_residual(3, 3, gamma, 1, q, 0.0, &v) == HC_ERR_PRECONDITION);
}

TEST_CASE("quotient reports")
{
  hc_family_params fam{HC_FAMILY_STEP3, 3, nullptr, 0, 3, 1e4, INFINITY, 0.0};
  const double beta[] = {0.0};
  hc_report *r = nullptr;
  REQUIRE(hc_rayleigh_quotient(&fam, beta, 1, 3, nullptr, &r) == HC_OK);
  hc_report_summary s;
  REQUIRE(hc_report_summary_get(r, &s) == HC_OK);
  CHECK(s.value > 0.25);
  CHECK(s.value == doctest::Approx(s.numerator / s.denominator));
  CHECK(std::string(hc_report_route(r)) == "direct");
  const size_t terms = hc_report_term_count(r);
  CHECK(terms > 0);
  double sum = 0.0;
  for (size_t i = 0; i < terms; ++i) {
    const char *label = nullptr;
    double c = 0, integral = 0, err = 0;
    REQUIRE(hc_report_term(r, i, &label, &c, &integral, &err) == HC_OK);
    CHECK(label != nullptr);
    sum += c * integral;
  }
  CHECK(sum == doctest::Approx(s.numerator));
  CHECK(hc_report_term(r, terms, nullptr, nullptr, nullptr, nullptr) == HC_ERR_ARGUMENT);
  hc_report_free(r);

  CHECK(hc_rayleigh_quotient(&fam, beta, 1, 4, nullptr, &r) == HC_ERR_ARGUMENT);
  hc_quad_options opt;
  hc_quad_options_default(&opt);
  opt.tol = -1.0;
  CHECK(hc_rayleigh_quotient(&fam, beta, 1, 3, &opt, &r) == HC_ERR_ARGUMENT);

  // Theorem C weight at the lower endpoint.
  const double a4[] = {-0.5, 0.0};
  const double spec_alpha[] = {-0.5, -0.5};
  hc_sobolev_spec *spec = nullptr;
  REQUIRE(hc_sobolev_spec_create(4, spec_alpha, 2, 3.0, HC_WEIGHT_X1, &spec) == HC_OK);
  hc_family_params fail{HC_FAMILY_FAILURE, 4, a4, 2, 4, INFINITY, INFINITY, 0.1};
  double b4[2];
  REQUIRE(hc_beta_from_alpha(4, 3, a4, 2, b4) == HC_OK);
  CHECK(hc_sobolev_quotient(&fail, b4, 2, spec, nullptr, &r) == HC_ERR_DIVERGENCE);
  CHECK(std::string(hc_last_error()).find("not locally integrable") != std::string::npos);
  hc_sobolev_spec_free(spec);
}

TEST_CASE("sweeps")
{
  const double alpha[] = {0.0};
  const double k[] = {1e2, 1e4, 1e6};
  hc_sweep *sw = nullptr;
  REQUIRE(hc_sharpness_sweep(HC_FAMILY_STEP3, 3, alpha, 1, 3, k, 3, nullptr, 1, &sw) == HC_OK);
  hc_sweep_summary s;
  REQUIRE(hc_sweep_summary_get(sw, &s) == HC_OK);
  CHECK(s.is_failure == 0);
  CHECK(s.size == 3);
  CHECK(s.strictly_decreasing == 1);
  CHECK(s.predicted_constant == 0.25);
  double param = 0, value = 0, err = 0;
  REQUIRE(hc_sweep_point(sw, 2, &param, &value, &err) == HC_OK);
  CHECK(param == 1e6);
  CHECK(hc_sweep_report(sw, 2) != nullptr);
  CHECK(hc_sweep_report(sw, 3) == nullptr);
  double N = 0, D = 0;
  CHECK(hc_sweep_failure_terms(sw, 0, &N, &D) == HC_ERR_PRECONDITION);
  hc_sweep_free(sw);

  const double eps[] = {0.1, 0.01, 0.001};
  REQUIRE(hc_failure_sweep(3, alpha, 1, 6.0, HC_WEIGHT_X2, eps, 3, nullptr, 1, &sw) == HC_OK);
  REQUIRE(hc_sweep_summary_get(sw, &s) == HC_OK);
  CHECK(s.is_failure == 1);
  CHECK(s.strictly_decreasing == 1);
  REQUIRE(hc_sweep_failure_terms(sw, 1, &N, &D) == HC_OK);
  REQUIRE(hc_sweep_point(sw, 1, &param, &value, &err) == HC_OK);
  CHECK(value == doctest::Approx(N / D));
  hc_sweep_free(sw);

  const double bad[] = {1e4, 1e2, 1e6};
  CHECK(hc_sharpness_sweep(HC_FAMILY_STEP3, 3, alpha, 1, 3, bad, 3, nullptr, 1, &sw) == HC_ERR_ARGUMENT);
}

TEST_CASE("oracle")
{
  const int cells[] = {8, 16};
  const double beta[] = {0.0};
  hc_eig_result res[2];
  REQUIRE(hc_oracle_refinement(3, cells, 2, 1.0, beta, 1, 3, nullptr, res) == HC_OK);
  CHECK(res[1].lambda_min <= res[0].lambda_min);
  CHECK(res[1].cells_per_axis == 16);
  CHECK(res[0].indefinite == 0);
  const int odd[] = {9};
  CHECK(hc_oracle_refinement(3, odd, 1, 1.0, beta, 1, 3, nullptr, res) == HC_ERR_PRECONDITION);
  CHECK(hc_oracle_refinement(3, cells, 2, 1.0, beta, 1, 3, nullptr, nullptr) == HC_ERR_NULL);
}
