#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "asymwave/errors.hpp"
#include "asymwave/expansion.hpp"
#include "asymwave/oracle.hpp"

using namespace asymwave;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

Modes single_cos(const SpectralGrid& g, int k, double eps) {
  Modes u(static_cast<std::size_t>(g.n_modes() + 1));
  u[k] = eps / 2;
  return u;
}

// N_m[phi] by direct summation of the symbol over all m-tuples of modes.
Modes series_term(const Model& m, const ParameterVector& mu, const Modes& phi, int degree, int n_out) {
  std::vector<std::pair<long, cd>> support;
  for (int k = 1; k < static_cast<int>(phi.size()); ++k)
    if (phi[k] != 0.0) {
      support.push_back({k, phi[k]});
      support.push_back({-k, std::conj(phi[k])});
    }
  Modes out(static_cast<std::size_t>(n_out + 1));
  std::vector<long> ks(degree);
  std::vector<std::size_t> idx(degree, 0);
  while (true) {
    cd coef = 1.0;
    long total = 0;
    for (int i = 0; i < degree; ++i) {
      ks[i] = support[idx[i]].first;
      coef *= support[idx[i]].second;
      total += ks[i];
    }
    if (total >= 0 && total <= n_out) out[total] += coef * m.nonlinear_symbol(mu, ks);
    int i = 0;
    while (i < degree && ++idx[i] == support.size()) idx[i++] = 0;
    if (i == degree) break;
  }
  return out;
}

}  // namespace

TEST_CASE("grid transforms round-trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int n : {5, 17, 40}) {
    const SpectralGrid g(n);
    CHECK(g.n_phys() == 4 * (2 * n + 1));
    Modes u(static_cast<std::size_t>(n + 1));
    u[0] = d(rng);
    for (int k = 1; k <= n; ++k) u[k] = cd(d(rng), d(rng));
    const auto back = g.to_modes(g.to_physical(u));
    for (int k = 0; k <= n; ++k) CHECK(std::abs(back[k] - u[k]) < 1e-13);
  }
}

TEST_CASE("residual vanishes at u = 0") {
  for (auto kind : {ModelKind::WhithamInfinite, ModelKind::BabenkoInfinite}) {
    const Model m(kind);
    const auto ks = solve_kernel_params(m, 2, 3, {{"T", 1.0}});
    const SpectralGrid g(20);
    for (const auto& c : residual(m, ks.mu0, g, Modes(21))) CHECK(std::abs(c) < 1e-15);
  }
}

TEST_CASE("whitham-inf residual of a single kernel cosine") {
  const Model m(ModelKind::WhithamInfinite);
  const auto ks = solve_kernel_params(m, 2, 3, {{"T", 1.0}});
  const SpectralGrid g(20);
  const double eps = 1e-3;
  const auto R = residual(m, ks.mu0, g, single_cos(g, 2, eps));
  CHECK(std::abs(R[2]) < 1e-15);
  CHECK(std::abs(R[4] - eps * eps / 4) < 1e-18);
  CHECK(std::abs(R[0]) == 0.0);
}

TEST_CASE("babenko-inf residual of cos x") {
  const Model m(ModelKind::BabenkoInfinite);
  const auto mu = m.make_params({std::sqrt(5.0 / 6.0), 1.0 / 6.0});
  const SpectralGrid g(20);
  for (double eps : {1e-2, 1e-3}) {
    const auto R = residual(m, mu, g, single_cos(g, 1, eps));
    CHECK(std::abs(R[1] - eps / 6) < 10 * eps * eps * eps);
  }
}

TEST_CASE("babenko closed form agrees with the symbol series") {
  // N(eps phi) - sum_{m<=4} eps^m N_m[phi] = O(eps^5)
  for (auto kind : {ModelKind::BabenkoInfinite, ModelKind::BabenkoFinite}) {
    const Model m(kind);
    const auto mu = kind == ModelKind::BabenkoInfinite ? m.make_params({0.9, 0.3})
                                                       : m.make_params({1.1, 1.0, 0.3, 0.8, 1.2});
    const SpectralGrid g(24);
    Modes phi(25);
    phi[1] = cd(0.5, 0.2);
    phi[2] = cd(-0.1, 0.3);
    std::vector<Modes> terms;
    for (int deg = 2; deg <= 4; ++deg) terms.push_back(series_term(m, mu, phi, deg, 24));

    auto error = [&](double eps) {
      Modes u = phi;
      for (auto& c : u) c *= eps;
      const auto R = residual(m, mu, g, u);
      double worst = 0.0;
      for (int k = m.zero_mean() ? 1 : 0; k <= 24; ++k) {
        cd predicted = k == 0 && m.zero_mean() ? cd{} : m.linear_symbol(mu, k) * u[k];
        for (int deg = 2; deg <= 4; ++deg) predicted += std::pow(eps, deg) * terms[deg - 2][k];
        worst = std::max(worst, std::abs(R[k] - predicted));
      }
      return worst;
    };
    const double e1 = error(2e-2), e2 = error(1e-2);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 / e2 > 25.0);
    CHECK(e1 / e2 < 40.0);
  }
}

TEST_CASE("babenko branch safety") {
  const Model m(ModelKind::BabenkoInfinite);
  const auto mu = m.make_params({0.9, 0.3});
  const SpectralGrid g(8);
  // (Du)^2 + (1 + Hu)^2 has minimum (1 - eps)^2 for u = eps cos x
  CHECK_THROWS_AS(residual(m, mu, g, single_cos(g, 1, 1.0)), Error);
  CHECK_NOTHROW(residual(m, mu, g, single_cos(g, 1, 0.4)));
}

TEST_CASE("functional values and translation invariance") {
  const SpectralGrid g(16);
  const Model w(ModelKind::WhithamInfinite);
  const auto mw = solve_kernel_params(w, 2, 3, {{"T", 1.0}}).mu0;
  CHECK(evaluate_functional(w, mw, g, Modes(17)) == 0.0);

  const Model b(ModelKind::BabenkoInfinite);
  const auto mb = b.make_params({0.9, 0.3});
  CHECK(evaluate_functional(b, mb, g, Modes(17)) == doctest::Approx(2 * kPi * 0.3).epsilon(1e-14));

  Modes u(17);
  u[1] = cd(0.01, 0.02);
  u[3] = cd(-0.004, 0.01);
  Modes shifted = u;
  for (int k = 0; k <= 16; ++k) shifted[k] *= std::polar(1.0, k * 0.37);
  for (const auto& [m, mu] : {std::pair{w, mw}, {b, mb}})
    CHECK(std::fabs(evaluate_functional(m, mu, g, shifted) - evaluate_functional(m, mu, g, u)) < 1e-12);
}

TEST_CASE("functional gradient is the residual") {
  const SpectralGrid g(16);
  for (auto kind : {ModelKind::WhithamInfinite, ModelKind::WhithamFinite, ModelKind::BabenkoInfinite,
                    ModelKind::BabenkoFinite}) {
    const Model m(kind);
    std::vector<double> v(m.parameter_names().size(), 0.7);
    const auto mu = m.make_params(v);
    Modes u(17), phi(17);
    u[1] = cd(0.01, 0.003);
    u[2] = cd(-0.002, 0.004);
    phi[1] = cd(0.3, -0.1);
    phi[4] = cd(0.2, 0.5);
    if (!m.zero_mean()) {
      u[0] = 0.005;
      phi[0] = 0.4;
    }
    const double exact = inner_product(residual(m, mu, g, u), phi);
    const double h = 1e-5;
    Modes up = u, um = u;
    for (int k = 0; k <= 16; ++k) {
      up[k] += h * phi[k];
      um[k] -= h * phi[k];
    }
    const double fd = (evaluate_functional(m, mu, g, up) - evaluate_functional(m, mu, g, um)) / (2 * h);
    CAPTURE(to_string(kind));
    CHECK(std::fabs(fd - exact) < 1e-8 * std::max(1.0, std::fabs(exact)));
  }
}

TEST_CASE("ls_solve structure and convergence") {
  const Model m(ModelKind::WhithamInfinite);
  const auto ks = solve_kernel_params(m, 2, 3, {{"T", 1.0}});
  const SpectralGrid g(40);

  const auto zero = ls_solve(m, ks.mu0, 2, 3, {0.0, 0.0}, {0.0, 0.0}, g);
  for (const auto& c : zero.w) CHECK(std::abs(c) == 0.0);

  const auto sol = ls_solve(m, ks.mu0, 2, 3, {1e-2, 5e-3}, {0.0, 0.2}, g);
  CHECK(sol.complement_residual <= 1e-12);
  CHECK(sol.w[2] == cd{});
  CHECK(sol.w[3] == cd{});
  CHECK(sol.w[0] == cd{});

  // quadratic convergence: once below 1e-4, each step roughly squares the residual
  const auto& h = sol.residual_history;
  int checked = 0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    if (h[i] < 1e-4 && h[i + 1] > 1e-15) {
      CHECK(h[i + 1] <= 1e3 * h[i] * h[i]);
      ++checked;
    }
  CHECK(checked >= 1);

  CHECK_THROWS_AS(ls_solve(m, ks.mu0, 2, 3, {1e-3, 1e-3}, {0, 0}, SpectralGrid(3)), Error);
}

TEST_CASE("equal phases give a shift-even solution") {
  const Model m(ModelKind::BabenkoInfinite);
  const auto ks = solve_kernel_params(m, 2, 3, {});
  const SpectralGrid g(40);
  const double th = 0.35;
  const auto sol = ls_solve(m, ks.mu0, 2, 3, {1e-2, 1e-2}, {th, th}, g);
  // u(x - th) even: coefficients times e^{-ik th} are real
  for (int k = 1; k <= 40; ++k) CHECK(std::fabs((sol.w[k] * std::polar(1.0, -k * th)).imag()) < 1e-10);
  const auto pr = kernel_projections(sol);
  CHECK(std::fabs(pr.sin1) < 1e-10);
  CHECK(std::fabs(pr.sin2) < 1e-10);
}

TEST_CASE("solution matches the order-2 expansion") {
  const Model m(ModelKind::WhithamInfinite);
  const auto ks = solve_kernel_params(m, 2, 3, {{"T", 1.0}});
  const auto t = build_table(m, ks, ks.mu0, 2);
  const SpectralGrid g(40);
  const std::array<double, 2> r{1e-3, 5e-4}, th{0.0, 0.2};
  const auto sol = ls_solve(m, ks.mu0, 2, 3, r, th, g);
  const auto e = evaluate_expansion(t, r, th);
  CHECK(std::abs(sol.w[4] - e.at(4)) < 100 * r[0] * r[0] * r[0]);
  CHECK(std::abs(sol.w[4]) > 1e-7);
}

TEST_CASE("psi estimates") {
  const Model m(ModelKind::WhithamInfinite);
  const auto ks = solve_kernel_params(m, 2, 3, {{"T", 1.0}});
  const SpectralGrid g(40);

  const auto small = psi_estimates(m, ks.mu0, 2, 3, {1e-4, 1e-4}, {0.0, 0.2}, g);
  REQUIRE(small.psi1);
  REQUIRE(small.psi2);
  CHECK(std::fabs(*small.psi1) < 1e-2);  // l(k1) = 0
  CHECK(std::fabs(*small.psi2) < 1e-2);

  const auto est = psi_estimates(m, ks.mu0, 2, 3, {1e-3, 1e-3}, {0.0, 0.2}, g);
  CHECK(std::fabs(2 * est.psi3 - 3 * est.psi4) <= 1e-6 * std::fabs(2 * est.psi3));
  const double nres = resonance_coefficient(m, ks, ks.mu0).value;
  CHECK(est.psi3 == doctest::Approx(nres).epsilon(1e-3));

  CHECK_THROWS_AS(psi_estimates(m, ks.mu0, 2, 3, {1e-3, 1e-3}, {0.0, 0.0}, g), Error);

  const auto k1one = psi_estimates(m, solve_kernel_params(m, 1, 2, {{"T", 1.0}}).mu0, 1, 2, {1e-3, 1e-3},
                                   {0.0, 0.5}, g);
  CHECK_FALSE(k1one.psi1);

  const std::array<double, 2> thetas[] = {{0.0, 0.2}, {0.1, 0.5}, {0.7, 0.3}};
  const auto spread = psi3_theta_spread(m, ks.mu0, 2, 3, {1e-3, 1e-3}, thetas, g);
  CHECK(spread.spread < 1e-3);
}
