// Copyright 2026 The hardychain Authors
// SPDX-License-Identifier: Apache-2.0

// hardychain command-line driver.  Talks to the library only through the C
// interface.  Reports are JSON on stdout or in a file; sweeps also write CSV.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardychain/hardychain.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char *kSchemaVersion = "hardychain.report/1";

enum ExitCode
{
  kExitOk = 0,
  kExitError = 1,
  kExitVerdict = 2,
  kExitUsage = 64,
  kExitValidation = 65
};

// A library call failed; carries the exit code it maps to.
struct Failure
{
  int code;
  std::string message;
};

void check(hc_status status)
{
  if (status == HC_OK)
    return;
  // Inputs the library rejects, including a non-integrable configuration.
  const bool validation =
    status == HC_ERR_ARGUMENT || status == HC_ERR_PRECONDITION || status == HC_ERR_DIVERGENCE;
  const int code = validation ? kExitValidation : kExitError;
  throw Failure{code, std::string(hc_status_string(status)) + ": " + hc_last_error()};
}

void invalid(const std::string &message)
{
  throw Failure{kExitValidation, message};
}

std::string format_double(double v)
{
  if (std::isnan(v))
    return "\"nan\"";
  if (std::isinf(v))
    return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

// Serializer with 17 significant digits for every float; non-finite values
// become the strings "inf", "-inf" and "nan".
void write_json(std::ostream &out, const ordered_json &j, int indent = 0)
{
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
  case ordered_json::value_t::object: {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (const auto &[key, value] : j.items()) {
      if (!first)
        out << ",\n";
      first = false;
      out << pad << ordered_json(key).dump() << ": ";
      write_json(out, value, indent + 2);
    }
    out << "\n" << close << "}";
    return;
  }
  case ordered_json::value_t::array: {
    if (j.empty()) {
      out << "[]";
      return;
    }
    bool scalars = true;
    for (const auto &v : j)
      scalars = scalars && !v.is_structured();
    if (scalars) {
      out << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i)
          out << ", ";
        write_json(out, j[i], indent + 2);
      }
      out << "]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i)
        out << ",\n";
      out << pad;
      write_json(out, j[i], indent + 2);
    }
    out << "\n" << close << "]";
    return;
  }
  case ordered_json::value_t::number_float:
    out << format_double(j.get<double>());
    return;
  default:
    out << j.dump();
    return;
  }
}

ordered_json number(double v)
{
  return ordered_json(v);
}

ordered_json numbers(const std::vector<double> &v)
{
  ordered_json a = ordered_json::array();
  for (double x : v)
    a.push_back(number(x));
  return a;
}

// JSON configuration files: flat keys apply to the selected subcommand,
// nested objects address a subcommand by name.  Arrays supply sequences.
class ConfigJSON : public CLI::Config
{
public:
  explicit ConfigJSON(const CLI::App *app) : app_(app) {}

  std::string to_config(const CLI::App *, bool, bool, std::string) const override
  {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override
  {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception &e) {
      throw CLI::ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
      throw CLI::ConfigError("config file must hold a JSON object");
    std::vector<std::string> parents;
    const auto selected = app_->get_subcommands();
    if (!selected.empty())
      parents.push_back(selected.front()->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto &[key, value] : j.items()) {
      if (value.is_object()) {
        for (const auto &[k, v] : value.items())
          items.push_back(item({key}, k, v));
      } else {
        items.push_back(item(parents, key, value));
      }
    }
    return items;
  }

private:
  static std::string scalar(const nlohmann::json &v)
  {
    if (v.is_string())
      return v.get<std::string>();
    if (v.is_number_float()) {
      char buffer[40];
      std::snprintf(buffer, sizeof buffer, "%.17g", v.get<double>());
      return buffer;
    }
    return v.dump();
  }

  static CLI::ConfigItem item(std::vector<std::string> parents, const std::string &name, const nlohmann::json &v)
  {
    CLI::ConfigItem it;
    it.parents = std::move(parents);
    it.name = name;
    if (v.is_array()) {
      for (const auto &e : v) {
        if (e.is_structured())
          throw CLI::ConfigError("config key '" + name + "' holds a nested array or object");
        it.inputs.push_back(scalar(e));
      }
    } else if (v.is_object()) {
      throw CLI::ConfigError("config key '" + name + "' nests too deeply");
    } else {
      it.inputs.push_back(scalar(v));
    }
    return it;
  }

  const CLI::App *app_;
};

struct QuadFlags
{
  double tol = 1e-10;
  std::size_t max_intervals = 4000;
  std::size_t qmc_points = 1u << 14;
  std::size_t qmc_replicates = 8;
  std::uint64_t seed = 20260101;

  void add(CLI::App *sub)
  {
    sub->add_option("--tol", tol, "Relative quadrature tolerance")->capture_default_str();
    sub->add_option("--max-intervals", max_intervals, "Subinterval budget per 1-D integration")
      ->capture_default_str();
    sub->add_option("--qmc-points", qmc_points, "Points per quasi-Monte Carlo replicate")->capture_default_str();
    sub->add_option("--qmc-replicates", qmc_replicates, "Randomized replicates")->capture_default_str();
    sub->add_option("--seed", seed, "Seed of the randomized replicates")->capture_default_str();
  }

  hc_quad_options options() const
  {
    hc_quad_options o;
    hc_quad_options_default(&o);
    o.tol = tol;
    o.max_intervals = max_intervals;
    o.qmc_points = qmc_points;
    o.qmc_replicates = qmc_replicates;
    o.seed = seed;
    return o;
  }

  ordered_json json() const
  {
    ordered_json j;
    j["tol"] = number(tol);
    j["max_intervals"] = max_intervals;
    j["qmc_points"] = qmc_points;
    j["qmc_replicates"] = qmc_replicates;
    j["seed"] = seed;
    return j;
  }
};

struct Settings
{
  int n = 3;
  int k0 = 3;
  std::vector<double> alpha;
  std::vector<double> beta;
  double Q = 0.0;
  std::string weight = "X2";
  std::string family = "step3";
  std::string sobolev_family = "failure";
  int q = 3;
  std::vector<double> k_grid{1e2, 1e4, 1e6};
  std::vector<double> eps_grid{1e-1, 1e-2, 1e-3};
  unsigned jobs = 1;
  double eps = 1e-2;
  double k3 = std::numeric_limits<double>::infinity();
  double kq = std::numeric_limits<double>::infinity();
  std::vector<int> cells;
  double L = 1.0;
  int target = 0;
  bool identity = false;
  double eig_tol = 1e-6;
  double inner_tol = 1e-8;
  int max_iterations = 200;
  std::uint64_t eig_seed = 1;
  QuadFlags quad;
  std::string output;
  std::string csv;
};

std::size_t chain_length(const Settings &s)
{
  return static_cast<std::size_t>(s.n - s.k0 + 1);
}

void validate_frame(const Settings &s)
{
  if (s.n < 3)
    invalid("n must be at least 3");
  if (s.k0 != 1 && s.k0 != 3)
    invalid("k0 must be 1 or 3");
}

void validate_length(const Settings &s, const std::vector<double> &v, const char *name)
{
  if (v.size() != chain_length(s))
    invalid(std::string(name) + " must have n - k0 + 1 = " + std::to_string(chain_length(s)) +
            " entries, got " + std::to_string(v.size()));
}

// alpha defaults to zeros on the interior chain.
std::vector<double> interior_alpha(const Settings &s)
{
  if (s.alpha.empty())
    return std::vector<double>(chain_length(s), 0.0);
  validate_length(s, s.alpha, "alpha");
  return s.alpha;
}

hc_weight_kind weight_kind(const std::string &w)
{
  if (w == "X2")
    return HC_WEIGHT_X2;
  if (w == "x1")
    return HC_WEIGHT_X1;
  invalid("weight must be X2 or x1");
  return HC_WEIGHT_X2;
}

hc_family_kind family_kind(const std::string &f)
{
  if (f == "step3")
    return HC_FAMILY_STEP3;
  if (f == "stepq")
    return HC_FAMILY_STEPQ;
  if (f == "failure")
    return HC_FAMILY_FAILURE;
  invalid("family must be step3, stepq or failure");
  return HC_FAMILY_STEP3;
}

ordered_json header(const std::string &command)
{
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["library_version"] = hc_version();
  return j;
}

ordered_json report_json(const hc_report *report)
{
  hc_report_summary s;
  check(hc_report_summary_get(report, &s));
  ordered_json j;
  j["route"] = hc_report_route(report);
  j["value"] = number(s.value);
  j["value_error"] = number(s.value_error);
  j["numerator"] = number(s.numerator);
  j["numerator_error"] = number(s.numerator_error);
  j["denominator"] = number(s.denominator);
  j["denominator_error"] = number(s.denominator_error);
  j["denominator_integral"] = number(s.denominator_integral);
  j["denominator_integral_error"] = number(s.denominator_integral_error);
  j["energy_total"] = number(s.energy_total);
  j["energy_total_error"] = number(s.energy_total_error);
  j["evaluations"] = s.evaluations;
  j["stochastic"] = s.stochastic != 0;
  ordered_json terms = ordered_json::array();
  for (std::size_t i = 0; i < hc_report_term_count(report); ++i) {
    const char *label = nullptr;
    double coefficient = 0.0;
    double integral = 0.0;
    double error = 0.0;
    check(hc_report_term(report, i, &label, &coefficient, &integral, &error));
    ordered_json t;
    t["label"] = label;
    t["coefficient"] = number(coefficient);
    t["integral"] = number(integral);
    t["error"] = number(error);
    terms.push_back(t);
  }
  j["numerator_terms"] = terms;
  return j;
}

struct Output
{
  ordered_json report;
  int exit_code = kExitOk;
  // Sweep table: header and rows, written as CSV.
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

template <class Handle, void (*Free)(Handle *)>
struct Owned
{
  Handle *p = nullptr;
  ~Owned() { Free(p); }
};

Output run_check_beta(const Settings &s)
{
  validate_frame(s);
  validate_length(s, s.beta, "beta");
  Owned<hc_certificate, hc_certificate_free> cert;
  check(hc_check_beta(s.n, s.k0, s.beta.data(), s.beta.size(), &cert.p));
  Output out;
  out.report = header("check-beta");
  out.report["n"] = s.n;
  out.report["k0"] = s.k0;
  out.report["beta"] = numbers(s.beta);
  const bool accepted = hc_certificate_accepted(cert.p) != 0;
  out.report["verdict"] = accepted ? "accepted" : "rejected";
  if (accepted) {
    std::vector<double> alpha(s.beta.size());
    check(hc_certificate_alpha(cert.p, alpha.data(), alpha.size()));
    out.report["alpha"] = numbers(alpha);
  } else {
    out.report["fail_index"] = hc_certificate_fail_index(cert.p);
    out.exit_code = kExitVerdict;
  }
  out.report["slack"] = number(hc_certificate_slack(cert.p));
  return out;
}

Output run_alpha2beta(const Settings &s, bool gamma)
{
  validate_frame(s);
  validate_length(s, s.alpha, "alpha");
  std::vector<double> result(s.alpha.size());
  if (gamma)
    check(hc_gamma_from_alpha(s.n, s.k0, s.alpha.data(), s.alpha.size(), result.data()));
  else
    check(hc_beta_from_alpha(s.n, s.k0, s.alpha.data(), s.alpha.size(), result.data()));
  Output out;
  out.report = header(gamma ? "gamma" : "alpha2beta");
  out.report["n"] = s.n;
  out.report["k0"] = s.k0;
  out.report["alpha"] = numbers(s.alpha);
  out.report[gamma ? "gamma" : "beta"] = numbers(result);
  return out;
}

ordered_json spec_json(const hc_sobolev_spec *spec, int n)
{
  hc_sobolev_scalars sc;
  check(hc_sobolev_spec_scalars(spec, &sc));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  check(hc_sobolev_spec_sigma(spec, sigma.data(), sigma.size()));
  const std::size_t c_len = static_cast<std::size_t>(n - sc.c_first_index + 1);
  std::vector<double> c(c_len), closed(c_len);
  check(hc_sobolev_spec_c(spec, c.data(), closed.data(), c_len));
  ordered_json j;
  j["valid"] = sc.valid != 0;
  j["reason"] = hc_sobolev_spec_reason(spec);
  j["maz_power"] = number(sc.maz_power);
  j["sigma"] = numbers(sigma);
  j["sigma_base"] = number(sc.sigma_base);
  j["s"] = number(sc.s);
  j["q"] = number(sc.q);
  j["b"] = number(sc.b);
  j["B"] = number(sc.B);
  j["c_first_index"] = sc.c_first_index;
  j["c"] = numbers(c);
  j["c_closed_form"] = numbers(closed);
  return j;
}

Output run_exponents(const Settings &s)
{
  validate_frame(s);
  if (s.k0 != 3)
    invalid("exponents are defined for the interior chain k0 = 3");
  validate_length(s, s.alpha, "alpha");
  Owned<hc_sobolev_spec, hc_sobolev_spec_free> spec;
  check(hc_sobolev_spec_create(s.n, s.alpha.data(), s.alpha.size(), s.Q, weight_kind(s.weight), &spec.p));
  Output out;
  out.report = header("exponents");
  out.report["n"] = s.n;
  out.report["alpha"] = numbers(s.alpha);
  out.report["Q"] = number(s.Q);
  out.report["weight"] = s.weight;
  out.report["spec"] = spec_json(spec.p, s.n);
  if (!out.report["spec"]["valid"].get<bool>())
    out.exit_code = kExitVerdict;
  return out;
}

void sweep_common(Output &out, const hc_sweep *sweep, const char *parameter)
{
  hc_sweep_summary sum;
  check(hc_sweep_summary_get(sweep, &sum));
  ordered_json points = ordered_json::array();
  out.csv_header = {parameter, "value", "error"};
  if (sum.is_failure) {
    out.csv_header.push_back("N");
    out.csv_header.push_back("D");
  }
  for (std::size_t i = 0; i < sum.size; ++i) {
    double p = 0.0, v = 0.0, e = 0.0;
    check(hc_sweep_point(sweep, i, &p, &v, &e));
    ordered_json pt;
    pt[parameter] = number(p);
    pt["value"] = number(v);
    pt["error"] = number(e);
    std::vector<double> row{p, v, e};
    if (sum.is_failure) {
      double N = 0.0, D = 0.0;
      check(hc_sweep_failure_terms(sweep, i, &N, &D));
      pt["N"] = number(N);
      pt["D"] = number(D);
      row.push_back(N);
      row.push_back(D);
    }
    pt["report"] = report_json(hc_sweep_report(sweep, i));
    points.push_back(pt);
    out.csv_rows.push_back(row);
  }
  ordered_json summary;
  if (sum.is_failure) {
    summary["d_exponent"] = number(sum.d_exponent);
    summary["d_exponent_expected"] = number(sum.d_exponent_expected);
    summary["n_spread"] = number(sum.n_spread);
  } else {
    summary["target_index"] = sum.target_index;
    summary["predicted_constant"] = number(sum.predicted_constant);
    summary["fit_a"] = number(sum.fit_a);
    summary["fit_b"] = number(sum.fit_b);
    summary["fit_residual"] = number(sum.fit_residual);
  }
  summary["strictly_decreasing"] = sum.strictly_decreasing != 0;
  summary["inconclusive"] = sum.inconclusive != 0;
  out.report["summary"] = summary;
  out.report["points"] = points;
}

Output run_sharpness(const Settings &s)
{
  validate_frame(s);
  if (s.k0 != 3)
    invalid("sweeps are defined for the interior chain k0 = 3");
  const hc_family_kind kind = family_kind(s.family);
  if (kind == HC_FAMILY_FAILURE)
    invalid("sharpness sweeps take the step3 or stepq family; use the failure command");
  const std::vector<double> alpha = interior_alpha(s);
  const int q = kind == HC_FAMILY_STEP3 ? 3 : s.q;
  const hc_quad_options options = s.quad.options();
  Owned<hc_sweep, hc_sweep_free> sweep;
  check(hc_sharpness_sweep(kind, s.n, alpha.data(), alpha.size(), q, s.k_grid.data(), s.k_grid.size(), &options,
                           s.jobs, &sweep.p));
  Output out;
  out.report = header("sharpness");
  out.report["n"] = s.n;
  out.report["family"] = s.family;
  out.report["q"] = q;
  out.report["alpha"] = numbers(alpha);
  out.report["k_grid"] = numbers(s.k_grid);
  out.report["quadrature"] = s.quad.json();
  sweep_common(out, sweep.p, "k");
  return out;
}

Output run_failure(const Settings &s)
{
  validate_frame(s);
  if (s.k0 != 3)
    invalid("sweeps are defined for the interior chain k0 = 3");
  const std::vector<double> alpha = interior_alpha(s);
  const hc_quad_options options = s.quad.options();
  Owned<hc_sweep, hc_sweep_free> sweep;
  check(hc_failure_sweep(s.n, alpha.data(), alpha.size(), s.Q, weight_kind(s.weight), s.eps_grid.data(),
                         s.eps_grid.size(), &options, s.jobs, &sweep.p));
  Output out;
  out.report = header("failure");
  out.report["n"] = s.n;
  out.report["alpha"] = numbers(alpha);
  out.report["Q"] = number(s.Q);
  out.report["weight"] = s.weight;
  out.report["eps_grid"] = numbers(s.eps_grid);
  out.report["quadrature"] = s.quad.json();
  sweep_common(out, sweep.p, "epsilon");
  return out;
}

Output run_sobolev(const Settings &s)
{
  validate_frame(s);
  if (s.k0 != 3)
    invalid("Sobolev quotients are defined for the interior chain k0 = 3");
  const std::vector<double> alpha = interior_alpha(s);
  Owned<hc_sobolev_spec, hc_sobolev_spec_free> spec;
  check(hc_sobolev_spec_create(s.n, alpha.data(), alpha.size(), s.Q, weight_kind(s.weight), &spec.p));
  std::vector<double> beta(alpha.size());
  check(hc_beta_from_alpha(s.n, 3, alpha.data(), alpha.size(), beta.data()));
  hc_family_params family{family_kind(s.sobolev_family), s.n, alpha.data(), alpha.size(), s.q, s.k3, s.kq, s.eps};
  const hc_quad_options options = s.quad.options();
  Owned<hc_report, hc_report_free> report;
  check(hc_sobolev_quotient(&family, beta.data(), beta.size(), spec.p, &options, &report.p));
  Output out;
  out.report = header("sobolev");
  out.report["n"] = s.n;
  out.report["alpha"] = numbers(alpha);
  out.report["beta"] = numbers(beta);
  out.report["Q"] = number(s.Q);
  out.report["weight"] = s.weight;
  ordered_json fam;
  fam["kind"] = s.sobolev_family;
  fam["q"] = s.q;
  fam["k3"] = number(s.k3);
  fam["kq"] = number(s.kq);
  fam["epsilon"] = number(s.eps);
  out.report["family"] = fam;
  out.report["quadrature"] = s.quad.json();
  out.report["spec"] = spec_json(spec.p, s.n);
  out.report["quotient"] = report_json(report.p);
  if (!out.report["spec"]["valid"].get<bool>())
    out.exit_code = kExitVerdict;
  return out;
}

Output run_oracle(const Settings &s)
{
  if (s.n != 3 && s.n != 4)
    invalid("the oracle supports n = 3 and n = 4");
  std::vector<int> cells = s.cells;
  if (cells.empty())
    cells = s.n == 3 ? std::vector<int>{24, 48, 96} : std::vector<int>{24, 48};
  for (int c : cells)
    if (c < 8 || c % 2 != 0)
      invalid("cells must be even and at least 8 (odd counts put nodes on the singular subspaces)");
  std::vector<double> beta = s.beta;
  if (beta.empty())
    beta.assign(static_cast<std::size_t>(s.n - 2), 0.0);
  if (beta.size() != static_cast<std::size_t>(s.n - 2))
    invalid("beta must have n - 2 entries");
  const int target = s.identity ? 0 : (s.target == 0 ? s.n : s.target);
  if (target != 0 && (target < 3 || target > s.n))
    invalid("target must lie in [3, n]");
  hc_eigen_options options;
  hc_eigen_options_default(&options);
  options.tol = s.eig_tol;
  options.inner_tol = s.inner_tol;
  options.max_iterations = s.max_iterations;
  options.seed = s.eig_seed;
  std::vector<hc_eig_result> results(cells.size());
  check(hc_oracle_refinement(s.n, cells.data(), cells.size(), s.L, beta.data(), beta.size(), target, &options,
                             results.data()));
  Output out;
  out.report = header("oracle");
  out.report["n"] = s.n;
  out.report["box_half_width"] = number(s.L);
  out.report["beta"] = numbers(beta);
  out.report["target_index"] = target;
  ordered_json solver;
  solver["tol"] = number(s.eig_tol);
  solver["inner_tol"] = number(s.inner_tol);
  solver["max_iterations"] = s.max_iterations;
  solver["seed"] = s.eig_seed;
  out.report["solver"] = solver;
  if (target == 0) {
    double box = 0.0;
    check(hc_box_eigenvalue(s.n, s.L, &box));
    out.report["box_eigenvalue"] = number(box);
  }
  ordered_json estimates = ordered_json::array();
  bool indefinite = false;
  for (const auto &r : results) {
    ordered_json e;
    e["cells_per_axis"] = r.cells_per_axis;
    e["lambda_min"] = number(r.lambda_min);
    e["residual_norm"] = number(r.residual_norm);
    e["iterations"] = r.iterations;
    e["inner_iterations"] = r.inner_iterations;
    e["indefinite"] = r.indefinite != 0;
    e["probe_value"] = number(r.probe_value);
    estimates.push_back(e);
    out.csv_rows.push_back({static_cast<double>(r.cells_per_axis), r.lambda_min, r.residual_norm});
    indefinite = indefinite || r.indefinite;
  }
  out.csv_header = {"cells_per_axis", "lambda_min", "residual_norm"};
  out.report["estimates"] = estimates;
  if (indefinite)
    out.exit_code = kExitVerdict;
  return out;
}

Output run_sn(const Settings &s)
{
  double value = 0.0;
  check(hc_sobolev_constant(s.n, &value));
  Output out;
  out.report = header("sn");
  out.report["n"] = s.n;
  out.report["S_n"] = number(value);
  return out;
}

void write_csv(const std::string &path, const Output &out)
{
  std::ofstream f(path);
  if (!f)
    throw Failure{kExitError, "cannot open " + path};
  for (std::size_t i = 0; i < out.csv_header.size(); ++i)
    f << (i ? "," : "") << out.csv_header[i];
  f << "\n";
  for (const auto &row : out.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string v = format_double(row[i]);
      if (v.front() == '"')
        v = v.substr(1, v.size() - 2);
      f << (i ? "," : "") << v;
    }
    f << "\n";
  }
  if (!f)
    throw Failure{kExitError, "failed writing " + path};
}

void emit(const std::string &command, const Settings &s, const Output &out)
{
  std::string json_path = s.output;
  std::string csv_path = s.csv;
  if (json_path.empty()) {
    if (const char *dir = std::getenv("HARDYCHAIN_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      std::filesystem::create_directories(dir);
      json_path = (std::filesystem::path(dir) / (command + ".json")).string();
    }
  }
  if (csv_path.empty() && !json_path.empty() && !out.csv_header.empty())
    csv_path = std::filesystem::path(json_path).replace_extension(".csv").string();

  std::ostringstream text;
  write_json(text, out.report);
  text << "\n";
  if (json_path.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(json_path);
    if (!f)
      throw Failure{kExitError, "cannot open " + json_path};
    f << text.str();
    if (!f)
      throw Failure{kExitError, "failed writing " + json_path};
  }
  if (!csv_path.empty() && !out.csv_header.empty())
    write_csv(csv_path, out);
}

void add_frame(CLI::App *sub, Settings &s, bool k0)
{
  sub->add_option("--n", s.n, "Dimension n >= 3")->required();
  if (k0)
    sub->add_option("--k0", s.k0, "First chain index (3 interior, 1 half-space)")->capture_default_str();
}

void add_output(CLI::App *sub, Settings &s, bool table)
{
  sub->add_option("-o,--output", s.output, "JSON report path (default: stdout or $HARDYCHAIN_OUTPUT_DIR)");
  if (table)
    sub->add_option("--csv", s.csv, "CSV table path (default: next to the JSON report)");
}

}  // namespace

int main(int argc, char **argv)
{
  Settings s;
  CLI::App app{"hardychain: chained Hardy and Hardy-Sobolev-Maz'ya constants"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(hc_version()));
  app.config_formatter(std::make_shared<ConfigJSON>(&app));
  app.set_config("--config", "", "JSON config file; command-line flags override it");

  auto *check_beta = app.add_subcommand("check-beta", "Decide admissibility of a beta sequence");
  add_frame(check_beta, s, true);
  check_beta->add_option("--beta", s.beta, "beta_{k0},...,beta_n")->delimiter(',')->required();
  add_output(check_beta, s, false);

  auto *alpha2beta = app.add_subcommand("alpha2beta", "beta sequence of an alpha sequence");
  add_frame(alpha2beta, s, true);
  alpha2beta->add_option("--alpha", s.alpha, "alpha_{k0},...,alpha_n (nonpositive)")->delimiter(',')->required();
  add_output(alpha2beta, s, false);

  auto *gamma = app.add_subcommand("gamma", "Ground-state exponents of an alpha sequence");
  add_frame(gamma, s, true);
  gamma->add_option("--alpha", s.alpha, "alpha_{k0},...,alpha_n")->delimiter(',')->required();
  add_output(gamma, s, false);

  auto *exponents = app.add_subcommand("exponents", "Sobolev exponent table");
  add_frame(exponents, s, false);
  exponents->add_option("--alpha", s.alpha, "alpha_3,...,alpha_n")->delimiter(',')->required();
  exponents->add_option("--Q", s.Q, "Sobolev exponent")->required();
  exponents->add_option("--weight", s.weight, "X2 or x1")->capture_default_str();
  add_output(exponents, s, false);

  auto *sharpness = app.add_subcommand("sharpness", "Rayleigh quotients of a test family over k");
  add_frame(sharpness, s, false);
  sharpness->add_option("--family", s.family, "step3 or stepq")->capture_default_str();
  sharpness->add_option("--alpha", s.alpha, "alpha_3,...,alpha_n (default zeros)")->delimiter(',');
  sharpness->add_option("--q", s.q, "Target index of the stepq family");
  sharpness->add_option("--k", s.k_grid, "Increasing cutoff levels")->delimiter(',')->capture_default_str();
  sharpness->add_option("--jobs", s.jobs, "Threads over grid points (values do not depend on it)")
    ->capture_default_str();
  s.quad.add(sharpness);
  add_output(sharpness, s, true);

  auto *failure = app.add_subcommand("failure", "Sobolev quotients of the failure family over epsilon");
  add_frame(failure, s, false);
  failure->add_option("--alpha", s.alpha, "alpha_3,...,alpha_n with alpha_n = 0 (default zeros)")
    ->delimiter(',');
  failure->add_option("--Q", s.Q, "Sobolev exponent")->required();
  failure->add_option("--weight", s.weight, "X2 or x1")->capture_default_str();
  failure->add_option("--eps", s.eps_grid, "Decreasing epsilon grid")->delimiter(',')->capture_default_str();
  failure->add_option("--jobs", s.jobs, "Threads over grid points (values do not depend on it)")
    ->capture_default_str();
  s.quad.add(failure);
  add_output(failure, s, true);

  auto *sobolev = app.add_subcommand("sobolev", "One Sobolev quotient");
  add_frame(sobolev, s, false);
  sobolev->add_option("--alpha", s.alpha, "alpha_3,...,alpha_n (default zeros)")->delimiter(',');
  sobolev->add_option("--Q", s.Q, "Sobolev exponent")->required();
  sobolev->add_option("--weight", s.weight, "X2 or x1")->capture_default_str();
  sobolev->add_option("--family", s.sobolev_family, "step3, stepq or failure")->capture_default_str();
  sobolev->add_option("--q", s.q, "Target index of the stepq family");
  sobolev->add_option("--eps", s.eps, "epsilon of the failure family")->capture_default_str();
  sobolev->add_option("--k3", s.k3, "Cutoff level at X_3 (inf allowed)");
  sobolev->add_option("--kq", s.kq, "Cutoff level at X_q (stepq)");
  s.quad.add(sobolev);
  add_output(sobolev, s, false);

  auto *oracle = app.add_subcommand("oracle", "Finite-difference Rayleigh quotient minimum");
  add_frame(oracle, s, false);
  oracle->add_option("--cells", s.cells, "Even cells per axis (default 24,48,96 for n=3; 24,48 for n=4)")
    ->delimiter(',');
  oracle->add_option("--L", s.L, "Box half width")->capture_default_str();
  oracle->add_option("--beta", s.beta, "beta_3,...,beta_n of the numerator (default zeros)")->delimiter(',');
  oracle->add_option("--target", s.target, "Index of the denominator weight (default n)");
  oracle->add_flag("--identity", s.identity, "Use the unweighted mass (box eigenvalue check)");
  oracle->add_option("--tol", s.eig_tol, "Eigen residual tolerance")->capture_default_str();
  oracle->add_option("--inner-tol", s.inner_tol, "Linear solve tolerance")->capture_default_str();
  oracle->add_option("--max-iterations", s.max_iterations, "Inverse iteration budget")->capture_default_str();
  oracle->add_option("--seed", s.eig_seed, "Seed of the starting vector")->capture_default_str();
  add_output(oracle, s, true);

  auto *sn = app.add_subcommand("sn", "Sharp Sobolev constant S_n");
  add_frame(sn, s, false);
  add_output(sn, s, false);

  // --config belongs to the top level; accept it anywhere on the line.
  std::vector<std::string> args;
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      args.push_back(a);
      args.push_back(argv[++i]);
    } else if (a.rfind("--config=", 0) == 0) {
      args.push_back(a);
    } else {
      rest.push_back(a);
    }
  }
  args.insert(args.end(), rest.begin(), rest.end());
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Output out;
    if (command == "check-beta")
      out = run_check_beta(s);
    else if (command == "alpha2beta")
      out = run_alpha2beta(s, false);
    else if (command == "gamma")
      out = run_alpha2beta(s, true);
    else if (command == "exponents")
      out = run_exponents(s);
    else if (command == "sharpness")
      out = run_sharpness(s);
    else if (command == "failure")
      out = run_failure(s);
    else if (command == "sobolev")
      out = run_sobolev(s);
    else if (command == "oracle")
      out = run_oracle(s);
    else
      out = run_sn(s);
    emit(command, s, out);
    return out.exit_code;
  } catch (const Failure &f) {
    std::cerr << "hardychain " << command << ": " << f.message << "\n";
    return f.code;
  } catch (const std::exception &e) {
    std::cerr << "hardychain " << command << ": " << e.what() << "\n";
    return kExitError;
  }
}
