#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "asymwave/errors.hpp"
#include "asymwave/expansion.hpp"
#include "reference.hpp"

using namespace asymwave;

namespace {

ref::Pair as_ref(const MultiIndexPair& p) { return {p.alpha[0], p.alpha[1], p.gamma[0], p.gamma[1]}; }

KernelSpec whitham_inf_23(double T = 1.0) {
  return solve_kernel_params(Model(ModelKind::WhithamInfinite), 2, 3, {{"T", T}});
}

void compare_with_brute_force(const Model& m, const KernelSpec& ks, int order) {
  const auto table = build_table(m, ks, ks.mu0, order);
  const auto brute = ref::brute_force_table(m, ks.mu0, ks.k1, ks.k2, order);
  int compared = 0;
  for (const auto& p : table.pairs()) {
    if (p.order() == 0) continue;
    const auto r = as_ref(p);
    const double bu = brute.u.at(r);
    CAPTURE(p.alpha[0]);
    CAPTURE(p.alpha[1]);
    CAPTURE(p.gamma[0]);
    CAPTURE(p.gamma[1]);
    CHECK(std::fabs(table.u(p) - bu) <= 1e-11 * std::max(1.0, std::fabs(bu)));
    if (p.order() >= 2) {
      const double bn = brute.n.at(r);
      CHECK(std::fabs(table.n(p) - bn) <= 1e-11 * std::max(1.0, std::fabs(bn)));
    }
    ++compared;
  }
  CHECK(compared > 0);
}

}  // namespace

TEST_CASE("resonance index lands on k1 at order k1 + k2 - 1") {
  const auto p = resonance_index(2, 3);
  CHECK(p.alpha == std::array<int, 2>{0, 2});
  CHECK(p.gamma == std::array<int, 2>{2, 0});
  CHECK(p.wavenumber(2, 3) == 2);
  CHECK(p.order() == 4);
  for (int k1 = 1; k1 < 9; ++k1)
    for (int k2 = k1 + 1; k2 < 10; ++k2) {
      CHECK(resonance_index(k1, k2).wavenumber(k1, k2) == k1);
      CHECK(resonance_index(k1, k2).order() == k1 + k2 - 1);
    }
}

TEST_CASE("table matches brute-force composition enumeration") {
  SUBCASE("whitham-inf (2,3)") {
    const Model m(ModelKind::WhithamInfinite);
    compare_with_brute_force(m, whitham_inf_23(), 5);
  }
  SUBCASE("whitham-inf (1,2)") {
    const Model m(ModelKind::WhithamInfinite);
    compare_with_brute_force(m, solve_kernel_params(m, 1, 2, {{"T", 0.7}}), 5);
  }
  SUBCASE("whitham-fin (2,3)") {
    const Model m(ModelKind::WhithamFinite);
    compare_with_brute_force(m, solve_kernel_params(m, 2, 3, {{"T", 0.2}, {"d", 1.0}}), 5);
  }
  SUBCASE("babenko-inf (2,3)") {
    const Model m(ModelKind::BabenkoInfinite);
    compare_with_brute_force(m, solve_kernel_params(m, 2, 3, {}), 5);
  }
  SUBCASE("babenko-fin (2,5)") {
    const Model m(ModelKind::BabenkoFinite);
    compare_with_brute_force(m, solve_kernel_params(m, 2, 5, {{"g", 1.0}, {"kappa", 1.0}, {"d", 1.0}}), 4);
  }
}

TEST_CASE("whitham-inf (2,3) low-order coefficients") {
  const Model m(ModelKind::WhithamInfinite);
  const auto ks = whitham_inf_23();
  const auto t = build_table(m, ks, ks.mu0, 3);
  CHECK(t.u({{1, 0}, {0, 0}}) == 0.5);
  CHECK(t.u({{0, 0}, {0, 1}}) == 0.5);
  // n = 1/4 on mode 4 and 2 * 1/4 on mode 5; u = -n / l
  CHECK(t.u({{2, 0}, {0, 0}}) == doctest::Approx(-0.25 / m.linear_symbol(ks.mu0, 4)).epsilon(1e-13));
  CHECK(t.u({{1, 1}, {0, 0}}) == doctest::Approx(-0.5 / m.linear_symbol(ks.mu0, 5)).epsilon(1e-13));
  CHECK(t.u({{2, 0}, {0, 0}}) == doctest::Approx(-3.58504210).epsilon(1e-8));
  CHECK(t.u({{1, 1}, {0, 0}}) == doctest::Approx(-3.08194362).epsilon(1e-8));
}

TEST_CASE("table invariants") {
  struct Case {
    Model model;
    KernelSpec ks;
    int order;
  };
  const Model wi(ModelKind::WhithamInfinite), wf(ModelKind::WhithamFinite),
      bi(ModelKind::BabenkoInfinite);
  const std::vector<Case> cases = {
      {wi, solve_kernel_params(wi, 3, 5, {{"T", 1.3}}), 6},
      {wf, solve_kernel_params(wf, 2, 5, {{"T", 0.5}, {"d", 1.5}}), 6},
      {bi, solve_kernel_params(bi, 2, 5, {}), 6},
  };
  for (const auto& c : cases) {
    const auto t = build_table(c.model, c.ks, c.ks.mu0, c.order);
    for (const auto& p : t.pairs()) {
      const long k = p.wavenumber(c.ks.k1, c.ks.k2);
      // entries are computed independently, so mirrors agree to rounding
      auto same = [](double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(1.0, std::fabs(x)); };
      CHECK(same(t.u(p), t.u(p.swapped())));
      if (p.order() >= 2) CHECK(same(t.n(p), t.n(p.swapped())));
      if (p.order() >= 2 && (std::labs(k) == c.ks.k1 || std::labs(k) == c.ks.k2)) CHECK(t.u(p) == 0.0);
      if (c.model.zero_mean() && p.alpha == p.gamma) CHECK(t.u(p) == 0.0);
    }
    CHECK(t.ell(c.ks.k1) == 0.0);
    CHECK(t.ell(-c.ks.k2) == 0.0);
    CHECK_FALSE(t.small_divisor());
  }
}

TEST_CASE("box table agrees with the full table on shared entries") {
  const Model m(ModelKind::BabenkoInfinite);
  const auto ks = solve_kernel_params(m, 2, 3, {});
  const auto full = build_table(m, ks, ks.mu0, 6);
  const auto box = build_table_box(m, ks, ks.mu0, {{1, 2}, {2, 1}});
  for (const auto& p : box.pairs()) {
    REQUIRE(full.contains(p));
    CHECK(box.u(p) == doctest::Approx(full.u(p)).epsilon(1e-13));
  }
}

TEST_CASE("resonance coefficients") {
  SUBCASE("whitham-inf (2,3), T = 1 (confirmed by the spectral oracle)") {
    const auto res = resonance_coefficient(Model(ModelKind::WhithamInfinite), whitham_inf_23(),
                                           whitham_inf_23().mu0);
    CHECK(res.order == 4);
    CHECK(res.value == doctest::Approx(72.5762031675).epsilon(1e-10));
    CHECK(res.order_scale > 0.0);
  }
  SUBCASE("babenko-inf (2,3) (confirmed by the spectral oracle)") {
    const Model m(ModelKind::BabenkoInfinite);
    const auto ks = solve_kernel_params(m, 2, 3, {});
    CHECK(resonance_coefficient(m, ks, ks.mu0).value == doctest::Approx(203.90625).epsilon(1e-12));
  }
  SUBCASE("order-2 resonances by hand") {
    // (1,2): two ordered compositions of modes 2 and -1, each weighted 1/4.
    const Model w(ModelKind::WhithamInfinite);
    const auto kw = solve_kernel_params(w, 1, 2, {{"T", 1.0}});
    CHECK(resonance_coefficient(w, kw, kw.mu0).value == doctest::Approx(0.5).epsilon(1e-14));
    const Model b(ModelKind::BabenkoInfinite);
    const auto kb = solve_kernel_params(b, 1, 2, {});
    const double beta = kb.mu0["beta"];
    const double expect = 0.25 * (ref::babenko_inf_n2(beta, 2, -1) + ref::babenko_inf_n2(beta, -1, 2));
    CHECK(resonance_coefficient(b, kb, kb.mu0).value == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(0.75).epsilon(1e-15));
  }
}

TEST_CASE("whitham-inf scaling law") {
  const Model m(ModelKind::WhithamInfinite);
  const double n1 = resonance_coefficient(m, whitham_inf_23(1.0), whitham_inf_23(1.0).mu0).value;
  const double n2 = resonance_coefficient(m, whitham_inf_23(2.0), whitham_inf_23(2.0).mu0).value;
  CHECK(n2 / n1 == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));

  const double Ts[] = {0.5, 1.0, 2.0};
  const auto sc = scaled_constant_C(2, 3, Ts);
  CHECK(sc.spread <= 1e-8);
  CHECK(sc.C == doctest::Approx(n1).epsilon(1e-12));

  const double one[] = {1.0};
  CHECK_THROWS_AS(scaled_constant_C(2, 3, one), Error);
}

TEST_CASE("transversality") {
  const Model wi(ModelKind::WhithamInfinite);
  const auto ks = whitham_inf_23();
  const auto tr = transversality_jacobian(wi, ks);
  CHECK_FALSE(tr.degenerate);
  CHECK(tr.params == std::array<std::string, 3>{"c", "kappa", "T"});
  CHECK(tr.jacobian[0][0] == -1.0);
  CHECK(tr.jacobian[1][0] == -1.0);
  CHECK(std::isfinite(tr.determinant));
  CHECK(tr.determinant_error < 1e-4 * std::fabs(tr.determinant));

  const Model bi(ModelKind::BabenkoInfinite);
  CHECK(transversality_jacobian(bi, solve_kernel_params(bi, 2, 3, {})).degenerate);
}

TEST_CASE("expansion evaluation") {
  const Model m(ModelKind::WhithamInfinite);
  const auto ks = whitham_inf_23();
  const auto t = build_table(m, ks, ks.mu0, 5);

  for (const auto& [k, c] : evaluate_expansion(t, {0.0, 0.0}, {0.3, 0.1})) CHECK(std::abs(c) == 0.0);

  const auto e = evaluate_expansion(t, {1e-2, 0.0}, {0.4, 1.1});
  for (const auto& [k, c] : e)
    if (k % 2 != 0) CHECK(std::abs(c) == 0.0);

  const std::array<double, 2> r{1e-3, 5e-4}, th{0.0, 0.2};
  const auto f = evaluate_expansion(t, r, th);
  CHECK(std::abs(f.at(2) - r[0] / 2) < 1e-7);
  for (const auto& [k, c] : f) CHECK(std::abs(c - std::conj(f.at(-k))) < 1e-18);
}
