#pragma once

// Per-pair verdicts on small-amplitude asymmetric bifurcation, and pair scans.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asymwave/expansion.hpp"
#include "asymwave/models.hpp"

namespace asymwave {

enum class Verdict {
  NoNontrivialSolutions,
  SymmetricOnly,
  NoAsymmetric,
  CandidateAsymmetric,
  Inconclusive,
};

std::string_view to_string(Verdict v) noexcept;

struct ClassifyOptions {
  /// |n| at or below zero_threshold * order_scale counts as zero.
  double zero_threshold = 1e-10;
  /// Pairs whose resonance order exceeds this are reported inconclusive.
  int max_order = 40;
  /// 0 selects 16 * k2.
  int k_check = 0;
};

struct BifurcationReport {
  std::string model;
  int k1 = 0;
  int k2 = 0;
  bool coprime = false;
  int order = 0;  // k1 + k2 - 1
  bool exploratory = false;
  std::optional<ParameterVector> mu0;
  std::optional<KernelCertificate> certificate;
  std::optional<double> resonance_nhat;
  std::optional<double> order_scale;
  double zero_threshold = 0.0;
  std::optional<double> C_scaled;  // whitham-inf only
  std::optional<TransversalityData> transversality;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> diagnostics;
};

/// Applies the case analysis to one pair. Never throws for numerical or
/// solvability failures; those become verdicts and diagnostics. Throws
/// Error(InvalidArgument) for malformed requests (k1 >= k2, bad fixed params).
BifurcationReport classify(const Model& model, int k1, int k2, const FixedParams& fixed,
                           const ClassifyOptions& options = {});

struct ScanOptions {
  ClassifyOptions classify;
  bool include_noncoprime = false;
};

/// Rows for 1 <= k1 < k2 <= kmax in (k1, k2) lexicographic order.
std::vector<BifurcationReport> scan_pairs(const Model& model, int kmax,
                                          const FixedParams& fixed,
                                          const ScanOptions& options = {});

}  // namespace asymwave
