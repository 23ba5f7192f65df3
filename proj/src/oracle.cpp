#include "asymwave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "asymwave/errors.hpp"

namespace asymwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_babenko(const Model& m) {
  return m.kind() == ModelKind::BabenkoInfinite || m.kind() == ModelKind::BabenkoFinite;
}

// (gravity weight, surface tension weight, speed-squared) for the Babenko forms
struct BabenkoWeights {
  double g, s, c2;
};

BabenkoWeights babenko_weights(const Model& m, const ParameterVector& mu) {
  if (m.kind() == ModelKind::BabenkoInfinite) return {1.0, mu["beta"], mu["nu"] * mu["nu"]};
  return {mu["g"], mu["T"], mu["c"] * mu["c"]};
}

void check_size(const SpectralGrid& grid, std::span<const std::complex<double>> u) {
  if (u.size() != static_cast<std::size_t>(grid.n_modes() + 1))
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("expected {} coefficients, got {}", grid.n_modes() + 1, u.size()));
}

struct BabenkoFields {
  std::vector<double> u, hu, du, root;
};

BabenkoFields babenko_fields(const Model& model, const ParameterVector& mu,
                             const SpectralGrid& grid, std::span<const std::complex<double>> u) {
  const int n = grid.n_modes();
  Modes h(u.begin(), u.end()), d(u.begin(), u.end());
  for (int k = 0; k <= n; ++k) {
    h[k] *= model.multiplier(mu, Factor::HLike, k);
    d[k] *= std::complex<double>(0.0, model.multiplier(mu, Factor::DLike, k));
  }
  h[0] = model.zero_mean() ? 0.0 : h[0];
  BabenkoFields f{grid.to_physical(u), grid.to_physical(h), grid.to_physical(d), {}};
  f.root.resize(f.u.size());
  for (std::size_t j = 0; j < f.u.size(); ++j) {
    const double sq = f.du[j] * f.du[j] + (1.0 + f.hu[j]) * (1.0 + f.hu[j]);
    if (!(sq >= 0.25))
      throw Error(ErrorKind::Domain,
                  fmt::format("square-root argument {:.3g} < 1/4 at x = {:.4f}; use a smaller "
                              "amplitude",
                              sq, grid.x(static_cast<int>(j))));
    f.root[j] = std::sqrt(sq);
  }
  return f;
}

}  // namespace

double inner_product(std::span<const std::complex<double>> f,
                     std::span<const std::complex<double>> g) {
  if (f.size() != g.size() || f.empty())
    throw Error(ErrorKind::InvalidArgument, "inner product needs equal nonempty sizes");
  double s = f[0].real() * g[0].real();
  for (std::size_t k = 1; k < f.size(); ++k) s += 2.0 * (f[k] * std::conj(g[k])).real();
  return kTwoPi * s;
}

Modes residual(const Model& model, const ParameterVector& mu, const SpectralGrid& grid,
               std::span<const std::complex<double>> u) {
  check_size(grid, u);
  const int n = grid.n_modes();
  Modes out(static_cast<std::size_t>(n + 1));
  for (int k = model.zero_mean() ? 1 : 0; k <= n; ++k)
    out[k] = model.linear_symbol(mu, k) * u[k];

  if (!is_babenko(model)) {
    auto phys = grid.to_physical(u);
    for (auto& v : phys) v *= v;
    const auto sq = grid.to_modes(phys);
    for (int k = 0; k <= n; ++k) out[k] += sq[k];
  } else {
    const auto w = babenko_weights(model, mu);
    const auto f = babenko_fields(model, mu, grid, u);
    const std::size_t np = f.u.size();
    std::vector<double> a(np), b(np), p(np), q(np);
    for (std::size_t j = 0; j < np; ++j) {
      a[j] = f.u[j] * f.hu[j];
      b[j] = 0.5 * f.u[j] * f.u[j];
      p[j] = f.du[j] / f.root[j];
      q[j] = (1.0 + f.hu[j]) / f.root[j];
    }
    const auto A = grid.to_modes(a), B = grid.to_modes(b), P = grid.to_modes(p),
               Q = grid.to_modes(q);
    for (int k = 0; k <= n; ++k) {
      const double h = model.multiplier(mu, Factor::HLike, k);
      const double d = model.multiplier(mu, Factor::DLike, k);
      out[k] += w.g * (A[k] + h * B[k]) - w.s * d * d * u[k] -
                w.s * std::complex<double>(0.0, d) * P[k] + w.s * h * Q[k];
    }
  }
  if (model.zero_mean()) out[0] = 0.0;
  return out;
}

double evaluate_functional(const Model& model, const ParameterVector& mu,
                           const SpectralGrid& grid, std::span<const std::complex<double>> u) {
  check_size(grid, u);
  const int n = grid.n_modes();
  const double weight = kTwoPi / grid.n_phys();
  if (!is_babenko(model)) {
    double quad = 0.0;
    for (int k = model.zero_mean() ? 1 : 0; k <= n; ++k)
      quad += (k == 0 ? 0.5 : 1.0) * model.linear_symbol(mu, k) * std::norm(u[k]);
    double cubic = 0.0;
    for (double v : grid.to_physical(u)) cubic += v * v * v / 3.0;
    return kTwoPi * quad + weight * cubic;
  }
  const auto w = babenko_weights(model, mu);
  const auto f = babenko_fields(model, mu, grid, u);
  double sum = 0.0;
  for (std::size_t j = 0; j < f.u.size(); ++j)
    sum += 0.5 * w.g * f.u[j] * f.u[j] * (1.0 + f.hu[j]) - 0.5 * w.c2 * f.u[j] * f.hu[j] +
           w.s * f.root[j];
  return weight * sum;
}

Modes TruncatedSolution::kernel_part() const {
  Modes v(w.size());
  v[static_cast<std::size_t>(k1)] = 0.5 * r[0] * std::polar(1.0, k1 * theta[0]);
  v[static_cast<std::size_t>(k2)] = 0.5 * r[1] * std::polar(1.0, k2 * theta[1]);
  return v;
}

Modes TruncatedSolution::full() const {
  Modes u = kernel_part();
  for (std::size_t k = 0; k < u.size(); ++k) u[k] += w[k];
  return u;
}

TruncatedSolution ls_solve(const Model& model, const ParameterVector& mu, int k1, int k2,
                           std::array<double, 2> r, std::array<double, 2> theta,
                           const SpectralGrid& grid, const LsOptions& options) {
  if (k1 < 1 || k2 <= k1)
    throw Error(ErrorKind::InvalidArgument, fmt::format("need 1 <= k1 < k2, got ({}, {})", k1, k2));
  if (grid.n_modes() <= k2)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("grid cutoff {} must exceed k2 = {}", grid.n_modes(), k2));
  if (!(r[0] >= 0.0) || !(r[1] >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "amplitudes must be nonnegative");

  const int n = grid.n_modes();
  TruncatedSolution sol;
  sol.k1 = k1;
  sol.k2 = k2;
  sol.r = r;
  sol.theta = theta;
  sol.w.assign(static_cast<std::size_t>(n + 1), 0.0);

  // Unknowns: mode 0 (real) unless zero-mean, then Re/Im of the other complement modes.
  struct Slot {
    int k;
    bool imag;
  };
  std::vector<Slot> slots;
  if (!model.zero_mean()) slots.push_back({0, false});
  for (int k = 1; k <= n; ++k) {
    if (k == k1 || k == k2) continue;
    slots.push_back({k, false});
    slots.push_back({k, true});
  }
  const auto dim = static_cast<Eigen::Index>(slots.size());

  const Modes v = sol.kernel_part();
  auto unpack = [&](const Eigen::VectorXd& x) {
    Modes u = v;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto& s = slots[static_cast<std::size_t>(i)];
      u[s.k] += s.imag ? std::complex<double>(0.0, x[i]) : std::complex<double>(x[i], 0.0);
    }
    return u;
  };
  auto restrict = [&](const Modes& F) {
    Eigen::VectorXd out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto& s = slots[static_cast<std::size_t>(i)];
      out[i] = s.imag ? F[s.k].imag() : F[s.k].real();
    }
    return out;
  };
  auto sup_norm = [&](const Modes& F) {
    double m = 0.0;
    for (const auto& s : slots) m = std::max(m, std::abs(F[s.k]));
    return m;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim), best_x = x;
  Modes F = residual(model, mu, grid, unpack(x)), best_F = F;
  double norm = sup_norm(F), best = norm;
  sol.residual_history.push_back(norm);

  const double h = 1e-4 * std::max({r[0], r[1], 1e-8});
  Eigen::MatrixXd J(dim, dim);
  int it = 0;
  while (it < options.max_iterations && norm > 0.0) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      J.col(c) = (restrict(residual(model, mu, grid, unpack(xp))) -
                  restrict(residual(model, mu, grid, unpack(xm)))) / (2.0 * h);
    }
    x -= Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(restrict(F));
    ++it;
    F = residual(model, mu, grid, unpack(x));
    const double prev = norm;
    norm = sup_norm(F);
    sol.residual_history.push_back(norm);
    if (!std::isfinite(norm)) break;
    if (norm < best) {
      best = norm;
      best_x = x;
      best_F = F;
    }
    // once below tolerance, keep polishing only while it still helps
    if (best <= options.tolerance && norm >= prev) break;
  }
  sol.iterations = it;
  if (!(best <= options.tolerance))
    throw Error(ErrorKind::NotConverged,
                fmt::format("Newton did not converge in {} iterations; last residual {:.3e}", it,
                            norm));

  const Modes u = unpack(best_x);
  for (std::size_t k = 0; k < u.size(); ++k) sol.w[k] = u[k] - v[k];
  sol.F = best_F;
  sol.complement_residual = best;
  return sol;
}

KernelProjections kernel_projections(const TruncatedSolution& s) {
  const auto z1 = s.F.at(static_cast<std::size_t>(s.k1)) * std::polar(1.0, -s.k1 * s.theta[0]);
  const auto z2 = s.F.at(static_cast<std::size_t>(s.k2)) * std::polar(1.0, -s.k2 * s.theta[1]);
  return {kTwoPi * z1.real(), kTwoPi * z2.real(), -kTwoPi * z1.imag(), -kTwoPi * z2.imag()};
}

PsiEstimates psi_estimates(const Model& model, const ParameterVector& mu, int k1, int k2,
                           std::array<double, 2> r, std::array<double, 2> theta,
                           const SpectralGrid& grid, const LsOptions& options) {
  if (!(r[0] > 0.0) || !(r[1] > 0.0))
    throw Error(ErrorKind::InvalidArgument, "psi estimates need r1, r2 > 0");
  const double s12 = std::sin(k1 * k2 * (theta[1] - theta[0]));
  if (std::fabs(s12) < kMinPhaseSine)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("|sin(k1 k2 (th2 - th1))| = {:.3g} < {}; choose phases with larger "
                            "separation",
                            std::fabs(s12), kMinPhaseSine));

  PsiEstimates est;
  est.solution = ls_solve(model, mu, k1, k2, r, theta, grid, options);
  const auto& F = est.solution.F;
  const auto z1 = F[static_cast<std::size_t>(k1)] * std::polar(1.0, -k1 * theta[0]);
  const auto z2 = F[static_cast<std::size_t>(k2)] * std::polar(1.0, -k2 * theta[1]);

  est.projections = kernel_projections(est.solution);
  if (std::gcd(k1, k2) == 1 && k1 >= 2) {
    est.psi1 = 2.0 * z1.real() / r[0];
    est.psi2 = 2.0 * z2.real() / r[1];
  }
  est.psi3 = z1.imag() / (std::pow(r[0], k2 - 1) * std::pow(r[1], k1) * s12);
  est.psi4 = z2.imag() / (std::pow(r[0], k2) * std::pow(r[1], k1 - 1) * -s12);
  return est;
}

ThetaSpread psi3_theta_spread(const Model& model, const ParameterVector& mu, int k1, int k2,
                              std::array<double, 2> r,
                              std::span<const std::array<double, 2>> thetas,
                              const SpectralGrid& grid) {
  if (thetas.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one phase pair");
  ThetaSpread out;
  for (const auto& th : thetas)
    out.samples.push_back(psi_estimates(model, mu, k1, k2, r, th, grid).psi3);
  double sum = 0.0;
  for (double s : out.samples) sum += s;
  out.mean = sum / static_cast<double>(out.samples.size());
  const auto [lo, hi] = std::minmax_element(out.samples.begin(), out.samples.end());
  out.spread = (*hi - *lo) / std::fabs(out.mean);
  return out;
}

}  // namespace asymwave
