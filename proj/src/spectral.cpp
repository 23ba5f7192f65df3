#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "asymwave/errors.hpp"
#include "asymwave/oracle.hpp"

namespace asymwave {

SpectralGrid::SpectralGrid(int n_modes, int oversample)
    : n_modes_(n_modes), oversample_(oversample) {
  if (n_modes < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one mode");
  if (oversample < 2)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("oversample factor must be >= 2, got {}", oversample));
  n_phys_ = oversample * (2 * n_modes + 1);
  roots_.resize(static_cast<std::size_t>(n_phys_));
  for (int m = 0; m < n_phys_; ++m)
    roots_[static_cast<std::size_t>(m)] =
        std::polar(1.0, 2.0 * std::numbers::pi * m / n_phys_);
}

double SpectralGrid::x(int j) const noexcept { return 2.0 * std::numbers::pi * j / n_phys_; }

std::complex<double> SpectralGrid::phase(long k, int j) const noexcept {
  long m = (k * j) % n_phys_;
  if (m < 0) m += n_phys_;
  return roots_[static_cast<std::size_t>(m)];
}

std::vector<double> SpectralGrid::to_physical(std::span<const std::complex<double>> modes) const {
  if (modes.size() != static_cast<std::size_t>(n_modes_ + 1))
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("expected {} coefficients, got {}", n_modes_ + 1, modes.size()));
  std::vector<double> out(static_cast<std::size_t>(n_phys_));
  for (int j = 0; j < n_phys_; ++j) {
    double s = 0.0;
    for (int k = 1; k <= n_modes_; ++k) s += (modes[k] * phase(k, j)).real();
    out[static_cast<std::size_t>(j)] = modes[0].real() + 2.0 * s;
  }
  return out;
}

Modes SpectralGrid::to_modes(std::span<const double> values) const {
  if (values.size() != static_cast<std::size_t>(n_phys_))
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("expected {} grid values, got {}", n_phys_, values.size()));
  Modes out(static_cast<std::size_t>(n_modes_ + 1));
  for (int k = 0; k <= n_modes_; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n_phys_; ++j) s += values[j] * phase(-k, j);
    out[static_cast<std::size_t>(k)] = s / static_cast<double>(n_phys_);
  }
  out[0] = out[0].real();
  return out;
}

}  // namespace asymwave
