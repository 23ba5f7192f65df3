#pragma once

// Invariant suites run by `asymwave-cli verify <suite>`.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "asymwave/models.hpp"

namespace asymwave {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyConfig {
  int k1 = 2;
  int k2 = 3;
  int modes = 0;      // 0 selects 8 (k1 + k2)
  int order = 3;      // expansion order for the oracle comparison
  std::uint64_t seed = 1;
  double T = 1.0;     // whitham-fin surface tension for the depth suite
  double d = 2.0;     // whitham-fin depth for the depth suite
};

/// Suite names accepted by run_verify, "all" last.
const std::vector<std::string>& verify_suites();

/// `model` and `fixed` drive the model-dependent suites (factorization,
/// gradient, oracle); scaling always uses whitham-inf and depth whitham-fin.
std::vector<CheckResult> run_verify(std::string_view suite, const Model& model,
                                    const FixedParams& fixed, const VerifyConfig& config);

// Tolerances shared with the tests.
inline constexpr double kScalingSpreadTol = 1e-8;
inline constexpr double kPsiRelationTol = 1e-6;
inline constexpr double kSlopeTol = 0.05;
inline constexpr double kSineVanishTol = 1e-10;
inline constexpr double kGradientSlopeTol = 0.1;
inline constexpr double kDepthTol = 1e-9;
inline constexpr double kRichardsonTol = 1e-4;
inline constexpr double kHalvingRatio = 8.0 * 0.9;

}  // namespace asymwave
