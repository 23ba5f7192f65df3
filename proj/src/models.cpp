#include "asymwave/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "asymwave/errors.hpp"

namespace asymwave {

namespace {

// m_{T,inf}(xi) = sqrt(1/xi + T xi), xi > 0
double whitham_inf_m(double T, double xi) { return std::sqrt(1.0 / xi + T * xi); }

// m_{T,d}(xi) = sqrt((1 + T xi^2) tanh(xi d) / xi), continuous at 0 with value sqrt(d)
double whitham_fin_m(double T, double d, double xi) {
  if (xi == 0.0) return std::sqrt(d);
  return std::sqrt((1.0 + T * xi * xi) * std::tanh(xi * d) / xi);
}

// kappa k coth(kappa k d), even in k, equal to 1/d at k = 0
double babenko_fin_h(double kappa, double d, long k) {
  if (k == 0) return 1.0 / d;
  const double x = kappa * static_cast<double>(std::labs(k));
  return x / std::tanh(x * d);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::WhithamFinite: return "whitham-fin";
    case ModelKind::WhithamInfinite: return "whitham-inf";
    case ModelKind::BabenkoInfinite: return "babenko-inf";
    case ModelKind::BabenkoFinite: return "babenko-fin";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view id) {
  for (auto kind : {ModelKind::WhithamFinite, ModelKind::WhithamInfinite,
                    ModelKind::BabenkoInfinite, ModelKind::BabenkoFinite}) {
    if (to_string(kind) == id) return kind;
  }
  // long spellings
  if (id == "whitham-finite") return ModelKind::WhithamFinite;
  if (id == "whitham-infinite") return ModelKind::WhithamInfinite;
  if (id == "babenko-infinite") return ModelKind::BabenkoInfinite;
  if (id == "babenko-finite") return ModelKind::BabenkoFinite;
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown model '{}'", id));
}

Model::Model(ModelKind kind) : kind_(kind) {
  switch (kind_) {
    case ModelKind::WhithamFinite:
      names_ = {"c", "kappa", "T", "d"};
      fixed_names_ = {"T", "d"};
      break;
    case ModelKind::WhithamInfinite:
      names_ = {"c", "kappa", "T"};
      fixed_names_ = {"T"};
      break;
    case ModelKind::BabenkoInfinite:
      names_ = {"nu", "beta"};
      break;
    case ModelKind::BabenkoFinite:
      names_ = {"c", "g", "T", "kappa", "d"};
      fixed_names_ = {"g", "kappa", "d"};
      break;
  }
}

bool Model::zero_mean() const noexcept {
  return kind_ != ModelKind::WhithamFinite;
}

int Model::max_degree() const noexcept {
  switch (kind_) {
    case ModelKind::WhithamFinite:
    case ModelKind::WhithamInfinite: return 2;
    default: return 0;
  }
}

ParameterVector Model::make_params(std::vector<double> values) const {
  return ParameterVector(names_, std::move(values));
}

void Model::check_params(const ParameterVector& mu) const {
  if (mu.names() != names_)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("parameter vector does not belong to model {}", id()));
}

double Model::linear_symbol(const ParameterVector& mu, long k) const {
  check_params(mu);
  if (k == 0 && zero_mean())
    throw Error(ErrorKind::Domain,
                fmt::format("mode 0 is excluded on zero-mean model {}", id()));
  const double ak = static_cast<double>(std::labs(k));
  switch (kind_) {
    case ModelKind::WhithamFinite:
      return -mu[0] + whitham_fin_m(mu[2], mu[3], mu[1] * ak);
    case ModelKind::WhithamInfinite:
      return -mu[0] + whitham_inf_m(mu[2], mu[1] * ak);
    case ModelKind::BabenkoInfinite:
      return -mu[0] * mu[0] * ak + 1.0 + mu[1] * ak * ak;
    case ModelKind::BabenkoFinite: {
      const double c = mu[0], g = mu[1], T = mu[2], kappa = mu[3], d = mu[4];
      return -c * c * babenko_fin_h(kappa, d, k) + g + T * kappa * kappa * ak * ak;
    }
  }
  return 0.0;
}

std::optional<double> Model::linear_symbol_derivative(const ParameterVector& mu,
                                                      long k,
                                                      std::size_t param) const {
  check_params(mu);
  const double ak = static_cast<double>(std::labs(k));
  switch (kind_) {
    case ModelKind::WhithamInfinite: {
      const double kappa = mu[1], T = mu[2];
      const double xi = kappa * ak;
      const double m = whitham_inf_m(T, xi);
      if (param == 0) return -1.0;
      if (param == 1) return ak * (T - 1.0 / (xi * xi)) / (2.0 * m);
      if (param == 2) return xi / (2.0 * m);
      break;
    }
    case ModelKind::WhithamFinite: {
      const double kappa = mu[1], T = mu[2], d = mu[3];
      const double xi = kappa * ak;
      const double m = whitham_fin_m(T, d, xi);
      if (param == 0) return -1.0;
      if (param == 2) return xi * std::tanh(xi * d) / (2.0 * m);
      if (param == 3) {
        const double s = 1.0 / std::cosh(xi * d);
        return (1.0 + T * xi * xi) * s * s / (2.0 * m);
      }
      return std::nullopt;  // kappa: no tidy closed form
    }
    case ModelKind::BabenkoInfinite:
      if (param == 0) return -2.0 * mu[0] * ak;
      if (param == 1) return ak * ak;
      break;
    case ModelKind::BabenkoFinite: {
      const double c = mu[0], kappa = mu[3], d = mu[4];
      if (param == 0) return -2.0 * c * babenko_fin_h(kappa, d, k);
      if (param == 1) return 1.0;
      if (param == 2) return kappa * kappa * ak * ak;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double Model::multiplier(const ParameterVector& mu, Factor f, long k) const {
  if (f == Factor::Plain) return 1.0;
  if (kind_ == ModelKind::BabenkoFinite) {
    const double kappa = mu[3], d = mu[4];
    return f == Factor::HLike ? babenko_fin_h(kappa, d, k)
                              : kappa * static_cast<double>(k);
  }
  return f == Factor::HLike ? static_cast<double>(std::labs(k))
                            : static_cast<double>(k);
}

std::vector<NonlinearTerm> Model::nonlinear_terms(const ParameterVector& mu,
                                                  int degree_cap) const {
  check_params(mu);
  using F = Factor;
  std::vector<NonlinearTerm> terms;
  if (kind_ == ModelKind::WhithamFinite || kind_ == ModelKind::WhithamInfinite) {
    if (degree_cap >= 2) terms.push_back({{F::Plain, F::Plain}, F::Plain, 1.0});
    return terms;
  }

  // Babenko: s is the surface tension weight, g the gravity weight.
  const bool finite = kind_ == ModelKind::BabenkoFinite;
  const double s = finite ? mu[2] : mu[1];
  const double g = finite ? mu[1] : 1.0;
  if (degree_cap < 2) return terms;

  // u Hu + H(u^2/2) + s D(Du Hu) - s H(Du Du / 2)
  terms.push_back({{F::Plain, F::HLike}, F::Plain, g});
  terms.push_back({{F::Plain, F::Plain}, F::HLike, 0.5 * g});
  terms.push_back({{F::DLike, F::HLike}, F::DLike, -s});
  terms.push_back({{F::DLike, F::DLike}, F::HLike, 0.5 * s});

  auto shape = [](int nh, int nd) {
    std::vector<F> f(static_cast<std::size_t>(nh), F::HLike);
    f.insert(f.end(), static_cast<std::size_t>(nd), F::DLike);
    return f;
  };
  auto sign = [](int k) { return (k % 2 == 0) ? 1.0 : -1.0; };

  for (int m = 3; m <= degree_cap; ++m) {
    // H[(Hu)^p (Du)^{2k}] collects b_{p,k} from H{1/S} and b_{p-1,k} from
    // H{Hu/S}; the pure (Du)^m piece (p = 0) only comes from H{1/S}.
    for (int k = 0; 2 * k <= m; ++k) {
      const int p = m - 2 * k;
      double b = babenko_b_coeff(p, k);
      if (p >= 1) b += babenko_b_coeff(p - 1, k);
      terms.push_back({shape(p, 2 * k), F::HLike, s * b * sign(k)});
    }
    // -D[(Hu)^j (Du)^{2k+1}] from D{Du/S}
    for (int k = 0; 2 * k + 1 <= m; ++k) {
      const int j = m - 1 - 2 * k;
      terms.push_back(
          {shape(j, 2 * k + 1), F::DLike, s * babenko_b_coeff(j, k) * sign(k)});
    }
  }
  return terms;
}

double Model::nonlinear_symbol(const ParameterVector& mu,
                               std::span<const long> wavenumbers) const {
  const int m = static_cast<int>(wavenumbers.size());
  if (m < 2)
    throw Error(ErrorKind::InvalidArgument, "nonlinear symbols need m >= 2");
  if (max_degree() != 0 && m > max_degree())
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("model {} has no degree-{} nonlinearity", id(), m));
  const long total = std::accumulate(wavenumbers.begin(), wavenumbers.end(), 0L);
  if (zero_mean() && total == 0) return 0.0;

  double value = 0.0;
  for (const auto& term : nonlinear_terms(mu, m)) {
    if (term.degree() != m) continue;
    double prod = term.coeff * multiplier(mu, term.outer, total);
    for (int l = 0; l < m; ++l)
      prod *= multiplier(mu, term.factors[static_cast<std::size_t>(l)],
                         wavenumbers[static_cast<std::size_t>(l)]);
    value += prod;
  }
  return value;
}

double babenko_b_coeff(int j, int k) {
  if (j < 0 || k < 0 || j + 2 * k < 2)
    throw Error(ErrorKind::Domain,
                fmt::format("b_({},{}) is only defined for j + 2k >= 2", j, k));
  // (1+X)^{-1/2} = sum_m a_m X^m with X = 2h + h^2 + d^2; the term
  // (2h)^p (h^2)^q (d^2)^r contributes to h^{p+2q} d^{2r}.
  double result = 0.0;
  const int m_lo = std::max((j + 2 * k + 1) / 2, k);
  double a = 1.0;  // a_0
  for (int m = 1; m <= j + k; ++m) {
    a *= -(2.0 * m - 1.0) / (2.0 * m);
    if (m < m_lo) continue;
    const int p = 2 * m - j - 2 * k;
    const int q = j + k - m;
    if (p < 0 || q < 0) continue;
    const double multinomial = binomial(m, p) * binomial(m - p, q);
    result += a * multinomial * std::ldexp(1.0, p);
  }
  return result;
}

KernelCertificate verify_kernel_dimension(const Model& model,
                                          const ParameterVector& mu0, int k1,
                                          int k2, int k_check) {
  if (k1 < 1 || k2 <= k1)
    throw Error(ErrorKind::InvalidArgument, "need 1 <= k1 < k2");
  KernelCertificate cert;
  cert.k_check = std::max(k_check, k2 + 1);
  const double tol = kKernelTolerance * (1.0 + std::fabs(model.linear_symbol(mu0, 1)));

  cert.residual_k1 = std::fabs(model.linear_symbol(mu0, k1));
  cert.residual_k2 = std::fabs(model.linear_symbol(mu0, k2));
  cert.min_gap = std::numeric_limits<double>::infinity();

  int roots = 0;
  const long k_lo = model.zero_mean() ? 1 : 0;
  for (long k = k_lo; k <= cert.k_check; ++k) {
    const double l = std::fabs(model.linear_symbol(mu0, k));
    if (l <= tol) {
      roots += (k == 0) ? 1 : 2;
      if (k != k1 && k != k2) cert.extra_roots.push_back(k);
      continue;
    }
    if (k != k1 && k != k2 && l < cert.min_gap) {
      cert.min_gap = l;
      cert.min_gap_k = k;
    }
  }
  cert.kernel_dimension = roots;

  // Witness that no root exists beyond k_check.
  const long kc = cert.k_check;
  const double lc = model.linear_symbol(mu0, kc);
  const double xc = static_cast<double>(kc);
  switch (model.kind()) {
    case ModelKind::WhithamInfinite: {
      const double xi = mu0[1] * xc;
      cert.growth_ok = mu0[2] * xi * xi > 1.0 && lc > 0.0;
      cert.growth_witness = fmt::format(
          "T (kappa k)^2 = {:.6g} > 1 at k = {}: symbol increasing beyond", mu0[2] * xi * xi, kc);
      break;
    }
    case ModelKind::BabenkoInfinite: {
      const double slope = 2.0 * mu0[1] * xc - mu0[0] * mu0[0];
      cert.growth_ok = slope > 0.0 && lc > 0.0;
      cert.growth_witness = fmt::format(
          "2 beta k - nu^2 = {:.6g} > 0 at k = {}: quadratic increasing beyond", slope, kc);
      break;
    }
    case ModelKind::BabenkoFinite: {
      const double c = mu0[0], T = mu0[2], kappa = mu0[3], d = mu0[4];
      const double slope = 2.0 * T * kappa * kappa * xc - c * c * kappa / std::tanh(kappa * d);
      cert.growth_ok = slope > 0.0 && lc > 0.0;
      cert.growth_witness = fmt::format(
          "2 T kappa^2 k - c^2 kappa coth(kappa d) = {:.6g} > 0 at k = {}", slope, kc);
      break;
    }
    case ModelKind::WhithamFinite: {
      bool increasing = lc > 0.0;
      double prev = lc;
      for (long k = kc + 1; k <= 4 * kc && increasing; ++k) {
        const double l = model.linear_symbol(mu0, k);
        increasing = l > prev;
        prev = l;
      }
      cert.growth_ok = increasing;
      cert.growth_witness = fmt::format(
          "numeric: symbol positive and increasing on [{}, {}], asymptotically sqrt(T kappa k)",
          kc, 4 * kc);
      break;
    }
  }

  cert.passed = cert.extra_roots.empty() && cert.residual_k1 <= tol &&
                cert.residual_k2 <= tol && cert.growth_ok;
  return cert;
}

namespace {

double fixed_value(const FixedParams& fixed, const std::string& name) {
  auto it = fixed.find(name);
  if (it == fixed.end())
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("missing fixed parameter '{}'", name));
  if (!(it->second > 0.0))
    throw Error(ErrorKind::Domain,
                fmt::format("fixed parameter {} must be positive", name));
  return it->second;
}

// Largest kappa in (1e-6, 1e6) where m(kappa k1) - m(kappa k2) changes sign,
// refined by bisection in log kappa.
double whitham_fin_kappa(double T, double d, int k1, int k2) {
  auto f = [&](double kappa) {
    return whitham_fin_m(T, d, kappa * k1) - whitham_fin_m(T, d, kappa * k2);
  };
  constexpr int kSamples = 1200;
  const double lo = std::log(1e-6), hi = std::log(1e6);
  double b = hi;
  double fb = f(std::exp(b));
  for (int i = kSamples - 1; i >= 0; --i) {
    const double a = lo + (hi - lo) * i / kSamples;
    const double fa = f(std::exp(a));
    if (fa > 0.0 && fb < 0.0) {
      double left = a, right = b;
      while (std::exp(right) - std::exp(left) > 1e-13 * std::exp(right)) {
        const double mid = 0.5 * (left + right);
        (f(std::exp(mid)) > 0.0 ? left : right) = mid;
      }
      return std::exp(0.5 * (left + right));
    }
    b = a;
    fb = fa;
  }
  throw Error(ErrorKind::Unsolvable,
              fmt::format("whitham-fin: no kappa with m(kappa {}) = m(kappa {}) "
                          "for T = {}, d = {}",
                          k1, k2, T, d));
}

}  // namespace

KernelSpec solve_kernel_params(const Model& model, int k1, int k2,
                               const FixedParams& fixed, int k_check) {
  if (k1 < 1 || k2 <= k1)
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("need 1 <= k1 < k2, got ({}, {})", k1, k2));
  const double a = k1, b = k2;
  KernelSpec ks;
  ks.k1 = k1;
  ks.k2 = k2;
  ks.coprime = std::gcd(k1, k2) == 1;

  switch (model.kind()) {
    case ModelKind::WhithamInfinite: {
      const double T = fixed_value(fixed, "T");
      const double kappa = 1.0 / std::sqrt(a * b * T);
      const double c = std::pow(T, 0.25) * std::sqrt(std::sqrt(a / b) + std::sqrt(b / a));
      ks.mu0 = model.make_params({c, kappa, T});
      break;
    }
    case ModelKind::BabenkoInfinite: {
      ks.mu0 = model.make_params({std::sqrt(1.0 / a + 1.0 / b), 1.0 / (a * b)});
      break;
    }
    case ModelKind::WhithamFinite: {
      const double T = fixed_value(fixed, "T"), d = fixed_value(fixed, "d");
      const double kappa = whitham_fin_kappa(T, d, k1, k2);
      const double c = 0.5 * (whitham_fin_m(T, d, kappa * a) + whitham_fin_m(T, d, kappa * b));
      ks.mu0 = model.make_params({c, kappa, T, d});
      break;
    }
    case ModelKind::BabenkoFinite: {
      const double g = fixed_value(fixed, "g"), kappa = fixed_value(fixed, "kappa"),
                   d = fixed_value(fixed, "d");
      // c^2 h(k_i) - T kappa^2 k_i^2 = g, i = 1, 2
      const double h1 = babenko_fin_h(kappa, d, k1), h2 = babenko_fin_h(kappa, d, k2);
      const double det = kappa * kappa * (a * a * h2 - b * b * h1);
      const double c2 = g * kappa * kappa * (a * a - b * b) / det;
      const double T = g * (h1 - h2) / det;
      if (!(c2 > 0.0) || !(T > 0.0) || !std::isfinite(c2) || !std::isfinite(T))
        throw Error(ErrorKind::Unsolvable,
                    fmt::format("babenko-fin: no positive (c, T) for ({}, {})", k1, k2));
      ks.mu0 = model.make_params({std::sqrt(c2), g, T, kappa, d});
      break;
    }
  }
  ks.certificate = verify_kernel_dimension(model, ks.mu0, k1, k2,
                                           k_check > 0 ? k_check : 16 * k2);
  return ks;
}

}  // namespace asymwave
