// asymwave-cli: scan | report | verify <suite>
//
// Exit codes: 0 success, 1 verify failure, 2 inconclusive pair(s),
// 64 usage error, 70 internal failure, 74 output not writable.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "asymwave/asymwave.h"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;

struct Config {
  std::string model = "whitham-inf";
  int k1 = 2, k2 = 3, kmax = 0;
  std::optional<double> T, d, g, kappa;
  std::optional<int> order;
  int modes = 0;
  std::string format;
  std::string out;
  std::uint64_t seed = 1;
  bool include_noncoprime = false;
  std::string suite;
};

struct ModelHandle {
  aw_model* ptr = nullptr;
  ~ModelHandle() { aw_model_destroy(ptr); }
};

int library_exit(aw_status s) {
  std::cerr << "asymwave-cli: " << aw_last_error() << "\n";
  return s == AW_ERR_INVALID_ARGUMENT || s == AW_ERR_DOMAIN ? kExitUsage : kExitSoftware;
}

int emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? 0 : kExitIo;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (f) f << text;
  if (f) f.flush();
  if (!f) {
    std::cerr << "asymwave-cli: cannot write " << cfg.out << "\n";
    return kExitIo;
  }
  return 0;
}

// Applies the fixed-parameter flags this model uses; defaults are T = 1,
// d = 1, g = 1, kappa = 1.
aw_status make_model(const Config& cfg, ModelHandle& h) {
  if (aw_status s = aw_model_create(cfg.model.c_str(), &h.ptr); s != AW_OK) return s;
  const std::map<std::string, double> values = {
      {"T", cfg.T.value_or(1.0)},
      {"d", cfg.d.value_or(1.0)},
      {"g", cfg.g.value_or(1.0)},
      {"kappa", cfg.kappa.value_or(1.0)},
  };
  size_t n = 0;
  aw_model_fixed_count(h.ptr, &n);
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    aw_model_fixed_name(h.ptr, i, &name);
    if (aw_status s = aw_model_set_fixed(h.ptr, name, values.at(name)); s != AW_OK) return s;
  }
  return AW_OK;
}

aw_format parse_format(const std::string& f) { return f == "csv" ? AW_FORMAT_CSV : AW_FORMAT_JSON; }

aw_options options_from(const Config& cfg) {
  aw_options o;
  aw_options_default(&o);
  if (cfg.order) o.max_order = *cfg.order;
  o.include_noncoprime = cfg.include_noncoprime ? 1 : 0;
  return o;
}

int cmd_scan(const Config& cfg) {
  if (cfg.kmax < 2) {
    std::cerr << "asymwave-cli: --kmax must be >= 2\n";
    return kExitUsage;
  }
  ModelHandle m;
  if (aw_status s = make_model(cfg, m); s != AW_OK) return library_exit(s);
  const aw_options o = options_from(cfg);
  aw_scan* scan = nullptr;
  if (aw_status s = aw_scan_run(m.ptr, cfg.kmax, &o, &scan); s != AW_OK) return library_exit(s);
  char* text = nullptr;
  size_t inconclusive = 0;
  aw_status s = aw_scan_render(scan, parse_format(cfg.format.empty() ? "csv" : cfg.format), &text);
  aw_scan_count_inconclusive(scan, &inconclusive);
  aw_scan_destroy(scan);
  if (s != AW_OK) return library_exit(s);
  const int rc = emit(cfg, text);
  aw_string_free(text);
  if (rc != 0) return rc;
  return inconclusive > 0 ? kExitInconclusive : 0;
}

int cmd_report(const Config& cfg) {
  if (cfg.k1 < 1 || cfg.k2 <= cfg.k1) {
    std::cerr << "asymwave-cli: need 1 <= k1 < k2\n";
    return kExitUsage;
  }
  ModelHandle m;
  if (aw_status s = make_model(cfg, m); s != AW_OK) return library_exit(s);
  const aw_options o = options_from(cfg);
  aw_report* rep = nullptr;
  if (aw_status s = aw_classify(m.ptr, cfg.k1, cfg.k2, &o, &rep); s != AW_OK)
    return library_exit(s);
  char* text = nullptr;
  aw_verdict verdict = AW_VERDICT_INCONCLUSIVE;
  aw_report_verdict(rep, &verdict);
  aw_status s = aw_report_render(rep, parse_format(cfg.format.empty() ? "json" : cfg.format), &text);
  aw_report_destroy(rep);
  if (s != AW_OK) return library_exit(s);
  const int rc = emit(cfg, text);
  aw_string_free(text);
  if (rc != 0) return rc;
  return verdict == AW_VERDICT_INCONCLUSIVE ? kExitInconclusive : 0;
}

int cmd_verify(const Config& cfg) {
  if (cfg.k1 < 1 || cfg.k2 <= cfg.k1) {
    std::cerr << "asymwave-cli: need 1 <= k1 < k2\n";
    return kExitUsage;
  }
  ModelHandle m;
  if (aw_status s = make_model(cfg, m); s != AW_OK) return library_exit(s);
  aw_verify_config vc;
  aw_verify_config_default(&vc);
  vc.k1 = cfg.k1;
  vc.k2 = cfg.k2;
  vc.modes = cfg.modes;
  vc.seed = cfg.seed;
  if (cfg.order) vc.order = *cfg.order;
  if (cfg.T) vc.T = *cfg.T;
  if (cfg.d) vc.d = *cfg.d;

  aw_verify* res = nullptr;
  if (aw_status s = aw_verify_run(m.ptr, cfg.suite.c_str(), &vc, &res); s != AW_OK)
    return library_exit(s);
  size_t n = 0;
  int all = 0;
  aw_verify_count(res, &n);
  aw_verify_all_passed(res, &all);
  std::string text;
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0;
    aw_verify_check(res, i, &name, &passed, &detail);
    text += std::string(passed ? "PASS " : "FAIL ") + name + ": " + detail + "\n";
  }
  aw_verify_destroy(res);
  if (const int rc = emit(cfg, text); rc != 0) return rc;
  return all ? 0 : kExitVerifyFailed;
}

void add_model_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--model", cfg.model, "whitham-fin | whitham-inf | babenko-inf | babenko-fin")
      ->capture_default_str();
  sub->add_option("--t", cfg.T, "surface tension T (fixed for whitham models; default 1)");
  sub->add_option("--d", cfg.d, "depth d (fixed for finite-depth models; default 1)");
  sub->add_option("--g", cfg.g, "gravity g (babenko-fin; default 1)");
  sub->add_option("--kappa", cfg.kappa, "wavenumber scale kappa (babenko-fin; default 1)");
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-amplitude asymmetric bifurcation analysis for nonlocal wave equations"};
  app.require_subcommand(1);
  Config cfg;

  auto* scan = app.add_subcommand("scan", "classify all pairs 1 <= k1 < k2 <= kmax");
  add_model_flags(scan, cfg);
  scan->add_option("--kmax", cfg.kmax, "largest wavenumber")->required();
  scan->add_option("--order", cfg.order, "largest resonance order attempted (default 40)");
  scan->add_option("--format", cfg.format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  scan->add_flag("--include-noncoprime", cfg.include_noncoprime, "also scan non-coprime pairs");

  auto* report = app.add_subcommand("report", "classify one pair");
  add_model_flags(report, cfg);
  report->add_option("--k1", cfg.k1, "first kernel wavenumber")->required();
  report->add_option("--k2", cfg.k2, "second kernel wavenumber")->required();
  report->add_option("--order", cfg.order, "largest resonance order attempted (default 40)");
  report->add_option("--format", cfg.format, "json (default) or csv")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  add_model_flags(verify, cfg);
  verify->add_option("suite", cfg.suite, "scaling | factorization | gradient | depth | oracle | all")
      ->required()
      ->check(CLI::IsMember({"scaling", "factorization", "gradient", "depth", "oracle", "all"}));
  verify->add_option("--k1", cfg.k1, "first kernel wavenumber")->capture_default_str();
  verify->add_option("--k2", cfg.k2, "second kernel wavenumber")->capture_default_str();
  verify->add_option("--order", cfg.order, "expansion order for the oracle comparison (default 3)");
  verify->add_option("--modes", cfg.modes, "spectral cutoff (default 8 (k1 + k2))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*scan) return cmd_scan(cfg);
  if (*report) return cmd_report(cfg);
  return cmd_verify(cfg);
}
