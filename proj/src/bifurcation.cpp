#include "asymwave/bifurcation.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "asymwave/errors.hpp"

namespace asymwave {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::NoNontrivialSolutions: return "no-nontrivial-solutions";
    case Verdict::SymmetricOnly: return "symmetric-only";
    case Verdict::NoAsymmetric: return "no-asymmetric";
    case Verdict::CandidateAsymmetric: return "candidate-asymmetric";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

void check_fixed(const Model& model, const FixedParams& fixed) {
  for (const auto& name : model.fixed_parameter_names()) {
    auto it = fixed.find(name);
    if (it == fixed.end())
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("{} needs fixed parameter '{}'", model.id(), name));
    if (!(it->second > 0.0) || !std::isfinite(it->second))
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("fixed parameter {} must be positive and finite", name));
  }
}

void classify_kernel(const Model& model, BifurcationReport& rep, const KernelSpec& ks,
                     const ClassifyOptions& opt) {
  const auto& cert = ks.certificate;
  if (!cert.extra_roots.empty()) {
    std::string roots;
    for (long k : cert.extra_roots) roots += fmt::format("{}{}", roots.empty() ? "" : " ", k);
    rep.diagnostics.push_back(fmt::format("kernel not simple: l vanishes also at k = {}", roots));
    rep.verdict = Verdict::Inconclusive;
    return;
  }
  if (!cert.growth_ok) {
    rep.diagnostics.push_back("kernel growth witness failed: " + cert.growth_witness);
    rep.verdict = Verdict::Inconclusive;
    return;
  }
  if (cert.kernel_dimension == 2) {
    rep.verdict = Verdict::SymmetricOnly;
    return;
  }
  if (!cert.passed) {
    rep.diagnostics.push_back(fmt::format("kernel residuals too large: |l(k1)| = {:.3e}, |l(k2)| = {:.3e}",
                                          cert.residual_k1, cert.residual_k2));
    rep.verdict = Verdict::Inconclusive;
    return;
  }

  if (rep.order > opt.max_order) {
    rep.diagnostics.push_back(
        fmt::format("resonance order {} exceeds order cap {}", rep.order, opt.max_order));
    rep.verdict = Verdict::Inconclusive;
    return;
  }

  const auto res = resonance_coefficient(model, ks, ks.mu0);
  rep.resonance_nhat = res.value;
  double scale = res.order_scale;
  if (!(scale > 0.0)) {
    scale = 1.0;
    rep.diagnostics.push_back("no nonzero same-order coefficients; order scale set to 1");
  }
  rep.order_scale = scale;
  for (const auto& w : res.warnings) rep.diagnostics.push_back(w);

  if (model.kind() == ModelKind::WhithamInfinite)
    rep.C_scaled = res.value * std::pow(ks.mu0["T"], (ks.k1 + ks.k2 - 3) / 4.0);

  auto trans = transversality_jacobian(model, ks);
  if (trans.degenerate)
    rep.diagnostics.push_back(
        "transversality untestable: fewer than three parameters (degenerate-parameters)");
  rep.transversality = trans;

  if (ks.k1 == 1)
    rep.diagnostics.push_back("k1 = 1: only the sine-projection (necessary) conditions apply");
  if (!ks.coprime)
    rep.diagnostics.push_back("k1, k2 not coprime: necessary conditions only");

  if (std::fabs(res.value) > opt.zero_threshold * scale) {
    rep.verdict = Verdict::NoAsymmetric;
    return;
  }
  const bool transversal = !trans.degenerate && trans.determinant != 0.0 &&
                           std::fabs(trans.determinant) > trans.determinant_error;
  if (ks.coprime && ks.k1 >= 2 && transversal) {
    rep.verdict = Verdict::CandidateAsymmetric;
  } else {
    rep.diagnostics.push_back("resonance coefficient vanishes but sufficiency hypotheses fail");
    rep.verdict = Verdict::Inconclusive;
  }
}

}  // namespace

BifurcationReport classify(const Model& model, int k1, int k2, const FixedParams& fixed,
                           const ClassifyOptions& options) {
  if (k1 < 1 || k2 <= k1)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("need 1 <= k1 < k2, got ({}, {})", k1, k2));
  if (!(options.zero_threshold >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "zero threshold must be nonnegative");
  check_fixed(model, fixed);

  BifurcationReport rep;
  rep.model = std::string(model.id());
  rep.k1 = k1;
  rep.k2 = k2;
  rep.coprime = std::gcd(k1, k2) == 1;
  rep.order = k1 + k2 - 1;
  rep.exploratory = model.exploratory();
  rep.zero_threshold = options.zero_threshold;
  if (rep.exploratory)
    rep.diagnostics.push_back("exploratory model: no published ground truth");

  KernelSpec ks;
  try {
    ks = solve_kernel_params(model, k1, k2, fixed, options.k_check);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsolvable) throw;
    rep.verdict = Verdict::NoNontrivialSolutions;
    rep.diagnostics.push_back(e.what());
    return rep;
  }
  rep.mu0 = ks.mu0;
  rep.certificate = ks.certificate;

  try {
    classify_kernel(model, rep, ks, options);
  } catch (const Error& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.diagnostics.push_back(fmt::format("computation failed: {}", e.what()));
  }
  return rep;
}

std::vector<BifurcationReport> scan_pairs(const Model& model, int kmax,
                                          const FixedParams& fixed,
                                          const ScanOptions& options) {
  if (kmax < 2) throw Error(ErrorKind::InvalidArgument, "kmax must be >= 2");
  check_fixed(model, fixed);
  std::vector<BifurcationReport> rows;
  for (int k1 = 1; k1 < kmax; ++k1)
    for (int k2 = k1 + 1; k2 <= kmax; ++k2) {
      if (!options.include_noncoprime && std::gcd(k1, k2) != 1) continue;
      try {
        rows.push_back(classify(model, k1, k2, fixed, options.classify));
      } catch (const std::exception& e) {
        BifurcationReport rep;
        rep.model = std::string(model.id());
        rep.k1 = k1;
        rep.k2 = k2;
        rep.coprime = std::gcd(k1, k2) == 1;
        rep.order = k1 + k2 - 1;
        rep.exploratory = model.exploratory();
        rep.zero_threshold = options.classify.zero_threshold;
        rep.verdict = Verdict::Inconclusive;
        rep.diagnostics.push_back(fmt::format("computation failed: {}", e.what()));
        rows.push_back(std::move(rep));
      }
    }
  return rows;
}

}  // namespace asymwave
