#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <string>

#include <json.hpp>

#include "asymwave/bifurcation.hpp"
#include "asymwave/errors.hpp"
#include "asymwave/report_io.hpp"

using namespace asymwave;

namespace {

const FixedParams kUnitT{{"T", 1.0}};

bool has_diagnostic(const BifurcationReport& r, std::string_view needle) {
  for (const auto& d : r.diagnostics)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("whitham-inf (2,3) is no-asymmetric with full fields") {
  const auto rep = classify(Model(ModelKind::WhithamInfinite), 2, 3, kUnitT);
  CHECK(rep.verdict == Verdict::NoAsymmetric);
  CHECK(rep.coprime);
  CHECK(rep.order == 4);
  REQUIRE(rep.mu0);
  REQUIRE(rep.resonance_nhat);
  REQUIRE(rep.C_scaled);
  REQUIRE(rep.transversality);
  CHECK_FALSE(rep.transversality->degenerate);
  CHECK(*rep.C_scaled == doctest::Approx(*rep.resonance_nhat).epsilon(1e-14));
  CHECK(rep.certificate->passed);
}

TEST_CASE("babenko-inf (2,3) is no-asymmetric with degenerate transversality") {
  const auto rep = classify(Model(ModelKind::BabenkoInfinite), 2, 3, {});
  CHECK(rep.verdict == Verdict::NoAsymmetric);
  REQUIRE(rep.transversality);
  CHECK(rep.transversality->degenerate);
  CHECK_FALSE(rep.C_scaled);
}

TEST_CASE("k1 = 1 pairs keep the necessary-conditions diagnostic") {
  const auto rep = classify(Model(ModelKind::WhithamInfinite), 1, 2, kUnitT);
  CHECK(rep.verdict == Verdict::NoAsymmetric);
  CHECK(has_diagnostic(rep, "k1 = 1"));
}

TEST_CASE("unsolvable kernel gives no-nontrivial-solutions") {
  // T > d^2 / 3 makes the whitham-fin dispersion monotone, so l(k1) = l(k2) = 0 has no solution.
  const auto rep = classify(Model(ModelKind::WhithamFinite), 2, 3, {{"T", 0.5}, {"d", 1.0}});
  CHECK(rep.verdict == Verdict::NoNontrivialSolutions);
  CHECK_FALSE(rep.resonance_nhat);
  CHECK_FALSE(rep.diagnostics.empty());
}

TEST_CASE("classify rejects malformed requests") {
  const Model m(ModelKind::WhithamInfinite);
  CHECK_THROWS_AS(classify(m, 3, 3, kUnitT), Error);
  CHECK_THROWS_AS(classify(m, 0, 3, kUnitT), Error);
}

TEST_CASE("order cap makes the verdict inconclusive") {
  ClassifyOptions o;
  o.max_order = 3;
  const auto rep = classify(Model(ModelKind::WhithamInfinite), 2, 3, kUnitT, o);
  CHECK(rep.verdict == Verdict::Inconclusive);
}

TEST_CASE("verdict monotonicity in the zero threshold") {
  const Model m(ModelKind::WhithamInfinite);
  auto rank = [](Verdict v) { return v == Verdict::NoAsymmetric ? 0 : 1; };
  for (auto [k1, k2] : {std::pair{2, 3}, {3, 4}, {2, 5}}) {
    int prev = 0;
    for (double thr : {1e-12, 1e-10, 1e-2, 1.0, 10.0, 1e6}) {
      ClassifyOptions o;
      o.zero_threshold = thr;
      const auto rep = classify(m, k1, k2, kUnitT, o);
      CHECK(rank(rep.verdict) >= prev);
      prev = rank(rep.verdict);
      if (rep.verdict != Verdict::NoAsymmetric)
        CHECK((rep.verdict == Verdict::CandidateAsymmetric || rep.verdict == Verdict::Inconclusive));
    }
    CHECK(prev == 1);
  }
}

TEST_CASE("huge threshold with transversal whitham-inf gives candidate-asymmetric") {
  ClassifyOptions o;
  o.zero_threshold = 1e6;
  const auto rep = classify(Model(ModelKind::WhithamInfinite), 2, 3, kUnitT, o);
  CHECK(rep.verdict == Verdict::CandidateAsymmetric);
  const auto bab = classify(Model(ModelKind::BabenkoInfinite), 2, 3, {}, o);
  CHECK(bab.verdict == Verdict::Inconclusive);
}

TEST_CASE("scan ordering, row count and coherence with classify") {
  const Model m(ModelKind::WhithamInfinite);
  const auto rows = scan_pairs(m, 5, kUnitT);
  const std::vector<std::pair<int, int>> expect = {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3},
                                                   {2, 5}, {3, 4}, {3, 5}, {4, 5}};
  REQUIRE(rows.size() == expect.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].k1 == expect[i].first);
    CHECK(rows[i].k2 == expect[i].second);
    const auto one = classify(m, rows[i].k1, rows[i].k2, kUnitT);
    CHECK(to_json(one) == to_json(rows[i]));
  }

  ScanOptions all;
  all.include_noncoprime = true;
  CHECK(scan_pairs(m, 5, kUnitT, all).size() == 10);
  CHECK_THROWS_AS(scan_pairs(m, 1, kUnitT), Error);
}

TEST_CASE("coprime pair count up to 12") {
  int n = 0;
  for (int a = 1; a <= 12; ++a)
    for (int b = a + 1; b <= 12; ++b) n += std::gcd(a, b) == 1;
  CHECK(n == 45);
  CHECK(scan_pairs(Model(ModelKind::WhithamInfinite), 12, kUnitT).size() == 45);
}

TEST_CASE("determinism: identical inputs give identical reports") {
  const Model m(ModelKind::BabenkoFinite);
  const FixedParams f{{"g", 1.0}, {"kappa", 1.0}, {"d", 1.0}};
  const auto a = scan_pairs(m, 6, f), b = scan_pairs(m, 6, f);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_json(a) == to_json(b));
  for (const auto& r : a) CHECK(r.exploratory);
}

TEST_CASE("csv layout") {
  const auto rows = scan_pairs(Model(ModelKind::WhithamInfinite), 3, kUnitT);
  const auto csv = to_csv(rows);
  const auto header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "model,k1,k2,coprime,order,mu0_c,mu0_kappa,mu0_T,resonance_nhat,C_scaled,"
        "transversality_det,verdict,diagnostics");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  const auto bab = to_csv(scan_pairs(Model(ModelKind::BabenkoInfinite), 3, {}));
  CHECK(bab.find(kDegenerateMarker) != std::string::npos);
}

TEST_CASE("json mirrors the report and round-trips numbers") {
  const auto rep = classify(Model(ModelKind::WhithamInfinite), 2, 3, kUnitT);
  const auto j = nlohmann::json::parse(to_json(rep));
  CHECK(j["model"] == "whitham-inf");
  CHECK(j["verdict"] == "no-asymmetric");
  CHECK(j["resonance_nhat"].get<double>() == *rep.resonance_nhat);
  CHECK(j["mu0"]["c"].get<double>() == (*rep.mu0)["c"]);
  CHECK(j["transversality"]["determinant"].get<double>() == rep.transversality->determinant);

  const auto bj = nlohmann::json::parse(to_json(classify(Model(ModelKind::BabenkoInfinite), 2, 3, {})));
  CHECK(bj["transversality"] == kDegenerateMarker);
}

TEST_CASE("csv and json carry the same numbers") {
  const auto rep = classify(Model(ModelKind::WhithamInfinite), 2, 5, kUnitT);
  const auto csv = to_csv(std::span(&rep, 1));
  const auto field = format_number(*rep.resonance_nhat);
  CHECK(csv.find(field) != std::string::npos);
  CHECK(std::stod(field) == nlohmann::json::parse(to_json(rep))["resonance_nhat"].get<double>());
  CHECK(std::stod(format_number(0.1)) == 0.1);
}
