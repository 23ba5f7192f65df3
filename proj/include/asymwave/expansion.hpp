#pragma once

// Taylor-Fourier coefficients of the reduced solution
//
//   u = sum_{|a|+|g| >= 1} u_{a,g} r^{a+g} E^{a-g},
//   N(mu, u) = sum_{|a|+|g| >= 2} n_{a,g} r^{a+g} E^{a-g},
//
// with E = (exp(i k1 (x + th1)), exp(i k2 (x + th2))). Coefficients are built
// order by order: n_{a,g} sums n_{m,mu} times products of lower-order u's
// over ordered compositions of (a, g), and u_{a,g} = -ell(k_{a,g}) n_{a,g}
// since the complement part solves L w + P_W N(v + w) = 0.

#include <array>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "asymwave/models.hpp"

namespace asymwave {

struct MultiIndexPair {
  std::array<int, 2> alpha{};
  std::array<int, 2> gamma{};

  int order() const noexcept { return alpha[0] + alpha[1] + gamma[0] + gamma[1]; }
  long wavenumber(int k1, int k2) const noexcept {
    return static_cast<long>(alpha[0] - gamma[0]) * k1 +
           static_cast<long>(alpha[1] - gamma[1]) * k2;
  }
  MultiIndexPair swapped() const noexcept { return {gamma, alpha}; }
  bool operator==(const MultiIndexPair&) const = default;
};

/// (0,k1),(k2-1,0): the index whose n-coefficient decides asymmetric bifurcation.
MultiIndexPair resonance_index(int k1, int k2);

/// u and n coefficients for every pair in a box {P : P <= upper componentwise,
/// order(P) <= order_cap}. Immutable once built.
class CoefficientTable {
 public:
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const ParameterVector& mu() const noexcept { return mu_; }
  /// Highest order stored.
  int order() const noexcept { return order_cap_; }
  const MultiIndexPair& upper() const noexcept { return upper_; }

  bool contains(const MultiIndexPair& p) const noexcept;
  double u(const MultiIndexPair& p) const;
  double n(const MultiIndexPair& p) const;
  /// 1 / l_mu(k) off the kernel set (and off mode 0 on zero-mean models), else 0.
  double ell(long k) const;

  std::vector<MultiIndexPair> pairs_of_order(int order) const;
  std::vector<MultiIndexPair> pairs() const;

  bool small_divisor() const noexcept { return !warnings_.empty(); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  double max_abs_ell() const noexcept { return max_abs_ell_; }

 private:
  friend class TableBuilder;
  CoefficientTable() = default;

  std::size_t index(const MultiIndexPair& p) const noexcept;

  KernelSpec kernel_;
  ParameterVector mu_;
  MultiIndexPair upper_;
  int order_cap_ = 0;
  std::array<std::size_t, 4> extent_{};
  std::vector<double> u_;
  std::vector<double> n_;
  std::map<long, double> ell_;
  std::vector<std::string> warnings_;
  double max_abs_ell_ = 0.0;
};

/// |ell(k)| above this triggers a small-divisor warning.
inline constexpr double kSmallDivisorGuard = 1e8;

/// All pairs with order <= order.
CoefficientTable build_table(const Model& model, const KernelSpec& ks,
                             const ParameterVector& mu, int order);

/// All pairs componentwise below `upper` (order up to upper.order()).
CoefficientTable build_table_box(const Model& model, const KernelSpec& ks,
                                 const ParameterVector& mu,
                                 const MultiIndexPair& upper);

struct Resonance {
  double value = 0.0;        // n_{(0,k1),(k2-1,0)}(mu)
  int order = 0;             // k1 + k2 - 1
  double order_scale = 0.0;  // max |n| over the other same-order entries computed
  bool small_divisor = false;
  std::vector<std::string> warnings;
};

Resonance resonance_coefficient(const Model& model, const KernelSpec& ks,
                                const ParameterVector& mu);

struct ScaledConstant {
  double C = 0.0;       // mean of n(T) T^{(k1+k2-3)/4}
  double spread = 0.0;  // (max - min) / |mean|
  std::vector<double> samples;
};

/// Whitham-inf only. Throws Error(Numeric) when the spread exceeds 1e-6.
ScaledConstant scaled_constant_C(int k1, int k2, std::span<const double> T_samples);

struct TransversalityData {
  bool degenerate = false;  // fewer than three parameters exist
  std::array<std::string, 3> params;
  std::array<std::array<double, 3>, 3> jacobian{};  // rows: l(k1), l(k2), n
  double determinant = 0.0;
  double determinant_error = 0.0;  // |det(extrapolated) - det(half step)|
  std::array<double, 3> steps{};
};

/// Jacobian of (l(k1), l(k2), n_res) in the chosen parameters at mu0. An empty
/// `param_triple` picks the model default.
TransversalityData transversality_jacobian(const Model& model, const KernelSpec& ks,
                                           std::span<const std::string> param_triple = {});

std::array<std::string, 3> default_transversality_params(const Model& model);

/// Complex Fourier coefficients of the truncated expansion at (r, theta),
/// keyed by integer mode; conjugate pairs are both present.
std::map<long, std::complex<double>> evaluate_expansion(const CoefficientTable& table,
                                                        std::array<double, 2> r,
                                                        std::array<double, 2> theta);

}  // namespace asymwave
