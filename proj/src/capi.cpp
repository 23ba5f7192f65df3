#include "asymwave/asymwave.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "asymwave/bifurcation.hpp"
#include "asymwave/errors.hpp"
#include "asymwave/expansion.hpp"
#include "asymwave/report_io.hpp"
#include "asymwave/verify.hpp"

struct aw_model {
  asymwave::Model model;
  asymwave::FixedParams fixed;
  std::string id;
};

struct aw_report {
  asymwave::BifurcationReport report;
};

struct aw_scan {
  std::vector<asymwave::BifurcationReport> rows;
};

struct aw_verify {
  std::vector<asymwave::CheckResult> checks;
};

namespace {

thread_local std::string g_last_error;

aw_status fail(aw_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

aw_status status_of(asymwave::ErrorKind kind) {
  using asymwave::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return AW_ERR_INVALID_ARGUMENT;
    case ErrorKind::Domain: return AW_ERR_DOMAIN;
    case ErrorKind::Unsolvable: return AW_ERR_UNSOLVABLE;
    case ErrorKind::Numeric: return AW_ERR_NUMERIC;
    case ErrorKind::NotConverged: return AW_ERR_NOT_CONVERGED;
    case ErrorKind::Io: return AW_ERR_IO;
  }
  return AW_ERR_INTERNAL;
}

template <class F>
aw_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return AW_OK;
  } catch (const asymwave::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(AW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AW_ERR_INTERNAL, e.what());
  }
}

#define AW_REQUIRE(cond, msg) \
  do {                        \
    if (!(cond)) return fail(AW_ERR_INVALID_ARGUMENT, msg); \
  } while (0)

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

asymwave::ClassifyOptions to_options(const aw_options* o) {
  asymwave::ClassifyOptions c;
  if (o) {
    c.zero_threshold = o->zero_threshold;
    c.max_order = o->max_order;
    c.k_check = o->k_check;
  }
  return c;
}

asymwave::FixedParams model_fixed(const aw_model* m) {
  // Only the parameters this model actually holds fixed.
  asymwave::FixedParams f;
  for (const auto& name : m->model.fixed_parameter_names()) {
    auto it = m->fixed.find(name);
    if (it != m->fixed.end()) f.emplace(name, it->second);
  }
  return f;
}

}  // namespace

extern "C" {

const char* aw_last_error(void) { return g_last_error.c_str(); }

const char* aw_version(void) { return "0.1.0"; }

const char* aw_verdict_name(aw_verdict v) {
  switch (v) {
    case AW_VERDICT_NO_NONTRIVIAL_SOLUTIONS: return "no-nontrivial-solutions";
    case AW_VERDICT_SYMMETRIC_ONLY: return "symmetric-only";
    case AW_VERDICT_NO_ASYMMETRIC: return "no-asymmetric";
    case AW_VERDICT_CANDIDATE_ASYMMETRIC: return "candidate-asymmetric";
    case AW_VERDICT_INCONCLUSIVE: return "inconclusive";
  }
  return "unknown";
}

void aw_string_free(char* s) { std::free(s); }

aw_status aw_model_create(const char* id, aw_model** out) {
  AW_REQUIRE(id && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    asymwave::Model m(asymwave::parse_model_kind(id));
    *out = new aw_model{m, {}, std::string(m.id())};
  });
}

void aw_model_destroy(aw_model* model) { delete model; }

aw_status aw_model_id(const aw_model* model, const char** out) {
  AW_REQUIRE(model && out, "null argument");
  *out = model->id.c_str();
  return AW_OK;
}

aw_status aw_model_parameter_count(const aw_model* model, size_t* out) {
  AW_REQUIRE(model && out, "null argument");
  *out = model->model.parameter_names().size();
  return AW_OK;
}

aw_status aw_model_parameter_name(const aw_model* model, size_t i, const char** out) {
  AW_REQUIRE(model && out, "null argument");
  const auto& names = model->model.parameter_names();
  AW_REQUIRE(i < names.size(), "parameter index out of range");
  *out = names[i].c_str();
  return AW_OK;
}

aw_status aw_model_fixed_count(const aw_model* model, size_t* out) {
  AW_REQUIRE(model && out, "null argument");
  *out = model->model.fixed_parameter_names().size();
  return AW_OK;
}

aw_status aw_model_fixed_name(const aw_model* model, size_t i, const char** out) {
  AW_REQUIRE(model && out, "null argument");
  const auto& names = model->model.fixed_parameter_names();
  AW_REQUIRE(i < names.size(), "fixed parameter index out of range");
  *out = names[i].c_str();
  return AW_OK;
}

aw_status aw_model_set_fixed(aw_model* model, const char* name, double value) {
  AW_REQUIRE(model && name, "null argument");
  const auto& names = model->model.fixed_parameter_names();
  bool known = false;
  for (const auto& n : names) known = known || n == name;
  if (!known)
    return fail(AW_ERR_INVALID_ARGUMENT,
                std::string("model ") + model->id + " has no fixed parameter '" + name + "'");
  if (!(value > 0.0) || !std::isfinite(value))
    return fail(AW_ERR_INVALID_ARGUMENT, std::string("fixed parameter ") + name +
                                             " must be positive and finite");
  model->fixed[name] = value;
  return AW_OK;
}

aw_status aw_linear_symbol(const aw_model* model, const double* mu, size_t n_mu, long k,
                           double* out) {
  AW_REQUIRE(model && mu && out, "null argument");
  return guarded([&] {
    const auto params = model->model.make_params(std::vector<double>(mu, mu + n_mu));
    *out = model->model.linear_symbol(params, k);
  });
}

aw_status aw_solve_kernel(const aw_model* model, int k1, int k2, double* mu_out,
                          size_t capacity, size_t* n_out) {
  AW_REQUIRE(model && mu_out && n_out, "null argument");
  return guarded([&] {
    const auto ks = asymwave::solve_kernel_params(model->model, k1, k2, model_fixed(model));
    if (capacity < ks.mu0.size())
      throw asymwave::Error(asymwave::ErrorKind::InvalidArgument, "output buffer too small");
    for (std::size_t i = 0; i < ks.mu0.size(); ++i) mu_out[i] = ks.mu0[i];
    *n_out = ks.mu0.size();
  });
}

aw_status aw_resonance_coefficient(const aw_model* model, int k1, int k2, double* value,
                                   double* order_scale) {
  AW_REQUIRE(model && value, "null argument");
  return guarded([&] {
    const auto ks = asymwave::solve_kernel_params(model->model, k1, k2, model_fixed(model));
    const auto res = asymwave::resonance_coefficient(model->model, ks, ks.mu0);
    *value = res.value;
    if (order_scale) *order_scale = res.order_scale;
  });
}

void aw_options_default(aw_options* options) {
  if (!options) return;
  const asymwave::ClassifyOptions c;
  options->zero_threshold = c.zero_threshold;
  options->max_order = c.max_order;
  options->k_check = c.k_check;
  options->include_noncoprime = 0;
}

aw_status aw_classify(const aw_model* model, int k1, int k2, const aw_options* options,
                      aw_report** out) {
  AW_REQUIRE(model && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto rep = asymwave::classify(model->model, k1, k2, model_fixed(model), to_options(options));
    *out = new aw_report{std::move(rep)};
  });
}

void aw_report_destroy(aw_report* report) { delete report; }

aw_status aw_report_verdict(const aw_report* report, aw_verdict* out) {
  AW_REQUIRE(report && out, "null argument");
  *out = static_cast<aw_verdict>(report->report.verdict);
  return AW_OK;
}

aw_status aw_report_render(const aw_report* report, aw_format format, char** out) {
  AW_REQUIRE(report && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::span<const asymwave::BifurcationReport> one(&report->report, 1);
    *out = dup_string(format == AW_FORMAT_CSV ? asymwave::to_csv(one)
                                              : asymwave::to_json(report->report));
  });
}

aw_status aw_scan_run(const aw_model* model, int kmax, const aw_options* options, aw_scan** out) {
  AW_REQUIRE(model && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    asymwave::ScanOptions so;
    so.classify = to_options(options);
    so.include_noncoprime = options && options->include_noncoprime;
    auto rows = asymwave::scan_pairs(model->model, kmax, model_fixed(model), so);
    *out = new aw_scan{std::move(rows)};
  });
}

void aw_scan_destroy(aw_scan* scan) { delete scan; }

aw_status aw_scan_count(const aw_scan* scan, size_t* out) {
  AW_REQUIRE(scan && out, "null argument");
  *out = scan->rows.size();
  return AW_OK;
}

aw_status aw_scan_count_inconclusive(const aw_scan* scan, size_t* out) {
  AW_REQUIRE(scan && out, "null argument");
  size_t n = 0;
  for (const auto& r : scan->rows) n += r.verdict == asymwave::Verdict::Inconclusive;
  *out = n;
  return AW_OK;
}

aw_status aw_scan_render(const aw_scan* scan, aw_format format, char** out) {
  AW_REQUIRE(scan && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(format == AW_FORMAT_CSV ? asymwave::to_csv(scan->rows)
                                              : asymwave::to_json(scan->rows));
  });
}

void aw_verify_config_default(aw_verify_config* config) {
  if (!config) return;
  const asymwave::VerifyConfig c;
  config->k1 = c.k1;
  config->k2 = c.k2;
  config->modes = c.modes;
  config->order = c.order;
  config->seed = c.seed;
  config->T = c.T;
  config->d = c.d;
}

aw_status aw_verify_run(const aw_model* model, const char* suite, const aw_verify_config* config,
                        aw_verify** out) {
  AW_REQUIRE(model && suite && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    asymwave::VerifyConfig c;
    if (config) {
      c.k1 = config->k1;
      c.k2 = config->k2;
      c.modes = config->modes;
      c.order = config->order;
      c.seed = config->seed;
      c.T = config->T;
      c.d = config->d;
    }
    auto checks = asymwave::run_verify(suite, model->model, model_fixed(model), c);
    *out = new aw_verify{std::move(checks)};
  });
}

void aw_verify_destroy(aw_verify* result) { delete result; }

aw_status aw_verify_count(const aw_verify* result, size_t* out) {
  AW_REQUIRE(result && out, "null argument");
  *out = result->checks.size();
  return AW_OK;
}

aw_status aw_verify_check(const aw_verify* result, size_t i, const char** name, int* passed,
                          const char** detail) {
  AW_REQUIRE(result, "null argument");
  AW_REQUIRE(i < result->checks.size(), "check index out of range");
  const auto& c = result->checks[i];
  if (name) *name = c.name.c_str();
  if (passed) *passed = c.passed ? 1 : 0;
  if (detail) *detail = c.detail.c_str();
  return AW_OK;
}

aw_status aw_verify_all_passed(const aw_verify* result, int* out) {
  AW_REQUIRE(result && out, "null argument");
  int all = 1;
  for (const auto& c : result->checks) all = all && c.passed;
  *out = all && !result->checks.empty();
  return AW_OK;
}

}  // extern "C"
