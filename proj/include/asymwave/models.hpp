#pragma once

// Equation class contract and the four shipped instantiations.
//
// Every model has the form L(mu) u + N(mu, u) = 0 on 2*pi-periodic functions,
// with L a Fourier multiplier of even symbol l_mu(k) and N a sum of
// m-linear forms acting on exponentials through symbols n_{m,mu}(k_1..k_m).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asymwave/params.hpp"

namespace asymwave {

enum class ModelKind {
  WhithamFinite,    // -c u + M_{kappa,T,d} u + u^2
  WhithamInfinite,  // -c u + M_{kappa,T,inf} u + P0 u^2, zero mean
  BabenkoInfinite,  // capillary-gravity Babenko, infinite depth, (nu, beta)
  BabenkoFinite,    // capillary-gravity Babenko, finite depth (exploratory)
};

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view id);

/// Multiplier applied to one argument of a multilinear form.
///   Plain: 1,  HLike: the depth operator symbol (|k| or kappa k coth(kappa k d)),
///   DLike: real part of the derivative symbol divided by i (k or kappa k).
enum class Factor { Plain, HLike, DLike };

/// One separable piece of a multilinear form:
///   coeff * outer(k_1+..+k_m) * prod_l factor_l(k_l).
/// Powers of i coming from derivative symbols are folded into coeff, so all
/// quantities are real.
struct NonlinearTerm {
  std::vector<Factor> factors;
  Factor outer = Factor::Plain;
  double coeff = 0.0;

  int degree() const noexcept { return static_cast<int>(factors.size()); }
};

/// Immutable description of one equation of the class.
class Model {
 public:
  explicit Model(ModelKind kind);

  ModelKind kind() const noexcept { return kind_; }
  std::string_view id() const noexcept { return to_string(kind_); }
  const std::vector<std::string>& parameter_names() const noexcept {
    return names_;
  }
  /// Parameters the caller supplies when solving for the kernel point.
  const std::vector<std::string>& fixed_parameter_names() const noexcept {
    return fixed_names_;
  }
  /// Mode 0 is removed from the function space.
  bool zero_mean() const noexcept;
  /// Highest degree of N; 0 means unbounded (truncated on demand).
  int max_degree() const noexcept;
  /// Results for this model have no published ground truth.
  bool exploratory() const noexcept { return kind_ == ModelKind::BabenkoFinite; }

  ParameterVector make_params(std::vector<double> values) const;

  double linear_symbol(const ParameterVector& mu, long k) const;
  /// d l_mu(k) / d mu_i when a closed form is available.
  std::optional<double> linear_symbol_derivative(const ParameterVector& mu,
                                                 long k,
                                                 std::size_t param) const;

  double multiplier(const ParameterVector& mu, Factor f, long k) const;

  /// Separable terms of N_m for 2 <= m <= max_degree (or up to `degree_cap`
  /// when the model is unbounded).
  std::vector<NonlinearTerm> nonlinear_terms(const ParameterVector& mu,
                                             int degree_cap) const;

  /// n_{m,mu}(k_1..k_m) with m = wavenumbers.size(), unsymmetrized.
  double nonlinear_symbol(const ParameterVector& mu,
                          std::span<const long> wavenumbers) const;

 private:
  void check_params(const ParameterVector& mu) const;

  ModelKind kind_;
  std::vector<std::string> names_;
  std::vector<std::string> fixed_names_;
};

/// Coefficient of h^j d^{2k} in (1 + 2h + h^2 + d^2)^{-1/2}, for j + 2k >= 2.
double babenko_b_coeff(int j, int k);

/// Result of checking that l_{mu0} vanishes exactly at {+-k1, +-k2}.
struct KernelCertificate {
  bool passed = false;
  int kernel_dimension = 0;     // 2 * number of nonnegative roots found
  int k_check = 0;              // largest k scanned
  double min_gap = 0.0;         // min |l(k)| over scanned k outside {k1,k2}
  long min_gap_k = 0;
  double residual_k1 = 0.0;     // |l(k1)|
  double residual_k2 = 0.0;
  bool growth_ok = false;       // symbol increasing for all k >= k_check
  std::string growth_witness;
  std::vector<long> extra_roots;
};

struct KernelSpec {
  int k1 = 0;
  int k2 = 0;
  ParameterVector mu0;
  bool coprime = false;
  KernelCertificate certificate;
};

/// Solves l_mu(k1) = l_mu(k2) = 0 for the model's free parameters given the
/// fixed ones. Throws Error(Unsolvable) when no positive solution exists.
/// `k_check` = 0 selects the default scan range 16 * k2.
KernelSpec solve_kernel_params(const Model& model, int k1, int k2,
                               const FixedParams& fixed, int k_check = 0);

KernelCertificate verify_kernel_dimension(const Model& model,
                                          const ParameterVector& mu0, int k1,
                                          int k2, int k_check);

/// Relative tolerance for declaring l_mu(k) = 0.
inline constexpr double kKernelTolerance = 1e-10;

}  // namespace asymwave
