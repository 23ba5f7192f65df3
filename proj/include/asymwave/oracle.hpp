#pragma once

// Pseudo-spectral verifier. Solves the complement equation for w on a
// truncated Fourier basis given the kernel part
//   v = r1 cos(k1 (x + th1)) + r2 cos(k2 (x + th2)),
// evaluating nonlinearities pointwise from their closed forms, so it shares
// nothing with the series used by the expansion engine.
//
// Functions are real; they are stored as complex coefficients c_k for
// k = 0..N_modes with f(x) = sum_{|k| <= N} c_k e^{ikx}, c_{-k} = conj(c_k).

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "asymwave/models.hpp"

namespace asymwave {

using Modes = std::vector<std::complex<double>>;

/// Equispaced grid of oversample * (2 N + 1) points on [0, 2 pi) with a direct
/// discrete transform.
class SpectralGrid {
 public:
  explicit SpectralGrid(int n_modes, int oversample = 4);

  int n_modes() const noexcept { return n_modes_; }
  int oversample() const noexcept { return oversample_; }
  int n_phys() const noexcept { return n_phys_; }
  double x(int j) const noexcept;

  std::vector<double> to_physical(std::span<const std::complex<double>> modes) const;
  /// Coefficients for k = 0..N_modes; higher grid modes are dropped.
  Modes to_modes(std::span<const double> values) const;

 private:
  std::complex<double> phase(long k, int j) const noexcept;  // e^{i k x_j}

  int n_modes_;
  int oversample_;
  int n_phys_;
  std::vector<std::complex<double>> roots_;  // e^{2 pi i m / n_phys}
};

/// Coefficients of L(mu) u + N(mu, u) for k = 0..N_modes (mode 0 removed on
/// zero-mean models). Throws Error(Domain) when the Babenko square root
/// argument drops below 1/4 somewhere on the grid.
Modes residual(const Model& model, const ParameterVector& mu, const SpectralGrid& grid,
               std::span<const std::complex<double>> u);

/// Grid quadrature of the variational functional whose gradient (in the
/// L2(0, 2 pi) pairing) is the residual.
double evaluate_functional(const Model& model, const ParameterVector& mu,
                           const SpectralGrid& grid, std::span<const std::complex<double>> u);

/// int_0^{2 pi} f g dx for two real functions given by coefficients.
double inner_product(std::span<const std::complex<double>> f,
                     std::span<const std::complex<double>> g);

struct TruncatedSolution {
  int k1 = 0, k2 = 0;
  std::array<double, 2> r{};
  std::array<double, 2> theta{};
  Modes w;  // zero on the kernel modes (and on mode 0 for zero-mean models)
  Modes F;  // residual of v + w
  double complement_residual = 0.0;  // sup over complement modes of |F_k|
  int iterations = 0;
  std::vector<double> residual_history;

  Modes kernel_part() const;
  Modes full() const;  // v + w
};

struct LsOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// Newton iteration on the complement coefficients. Throws
/// Error(NotConverged) when the tolerance is not reached.
TruncatedSolution ls_solve(const Model& model, const ParameterVector& mu, int k1, int k2,
                           std::array<double, 2> r, std::array<double, 2> theta,
                           const SpectralGrid& grid, const LsOptions& options = {});

struct KernelProjections {
  // int_0^{2 pi} F cos(k_i (x + th_i)) dx and the sine analogues
  double cos1 = 0.0, cos2 = 0.0, sin1 = 0.0, sin2 = 0.0;
};

KernelProjections kernel_projections(const TruncatedSolution& solution);

struct PsiEstimates {
  KernelProjections projections;
  // normalised so that psi1 -> l(k1), psi2 -> l(k2), psi3 -> n_res as r -> 0;
  // psi1 and psi2 only for coprime k1 >= 2
  std::optional<double> psi1, psi2;
  double psi3 = 0.0, psi4 = 0.0;
  TruncatedSolution solution;
};

/// Smallest |sin(k1 k2 (th2 - th1))| accepted for the psi3 / psi4 divisions.
inline constexpr double kMinPhaseSine = 0.1;

PsiEstimates psi_estimates(const Model& model, const ParameterVector& mu, int k1, int k2,
                           std::array<double, 2> r, std::array<double, 2> theta,
                           const SpectralGrid& grid, const LsOptions& options = {});

struct ThetaSpread {
  double mean = 0.0;
  double spread = 0.0;  // (max - min) / |mean|
  std::vector<double> samples;
};

/// psi3 over several phase pairs; each must pass the phase-sine check.
ThetaSpread psi3_theta_spread(const Model& model, const ParameterVector& mu, int k1, int k2,
                              std::array<double, 2> r,
                              std::span<const std::array<double, 2>> thetas,
                              const SpectralGrid& grid);

}  // namespace asymwave
