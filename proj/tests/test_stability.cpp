#include <catch2/catch_amalgamated.hpp>

#include "aglercert/stability.hpp"

using namespace aglercert;

TEST_CASE("2 - z1 certifies stable with min modulus 1", "[stability]") {
  AnalyticPoly p(1, MultiIndex{1});
  p.set_coeff(MultiIndex{0}, 2.0);
  p.set_coeff(MultiIndex{1}, -1.0);
  auto r = stability_check(p, 64, 1e-9);
  REQUIRE(r.kind == StabilityKind::Stable);
  REQUIRE(r.min_modulus == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("1 - z1 is unstable with witness at 1", "[stability]") {
  AnalyticPoly p(1, MultiIndex{1});
  p.set_coeff(MultiIndex{0}, 1.0);
  p.set_coeff(MultiIndex{1}, -1.0);
  auto r = stability_check(p, 64, 1e-9);
  REQUIRE(r.kind == StabilityKind::Unstable);
  REQUIRE(std::abs(r.witness.at(0) - cd(1.0)) < 1e-12);
}

TEST_CASE("4 - z1 - z2 - z3 certifies stable", "[stability]") {
  AnalyticPoly p(3, MultiIndex{1, 1, 1});
  p.set_coeff(MultiIndex{0, 0, 0}, 4.0);
  p.set_coeff(MultiIndex{1, 0, 0}, -1.0);
  p.set_coeff(MultiIndex{0, 1, 0}, -1.0);
  p.set_coeff(MultiIndex{0, 0, 1}, -1.0);
  auto r = stability_check(p, 16, 1e-9);
  REQUIRE(r.kind == StabilityKind::Stable);
  // coefficient bound: |p| >= 4 - 3 = 1 everywhere on the closed tridisk
  REQUIRE(r.min_modulus >= 1.0 - 1e-12);
}

TEST_CASE("monomial z1 has an interior zero witness", "[stability]") {
  AnalyticPoly p = AnalyticPoly::monomial(1, MultiIndex{1}, 1.0);
  auto r = stability_check(p, 16, 1e-9);
  REQUIRE(r.kind == StabilityKind::Unstable);
  REQUIRE(std::abs(r.witness.at(0)) < 1e-12);
}

TEST_CASE("tiny margins come back inconclusive, not stable", "[stability]") {
  AnalyticPoly p(1, MultiIndex{1});
  p.set_coeff(MultiIndex{0}, 1.0 + 1e-7);
  p.set_coeff(MultiIndex{1}, -1.0);
  auto r = stability_check(p, 16, 1e-9);
  REQUIRE(r.kind == StabilityKind::Inconclusive);
}

TEST_CASE("bivariate product polynomial certifies stable", "[stability]") {
  // (2 - z1)(2 - z2): min modulus 1 on the closed bidisk
  AnalyticPoly p(2, MultiIndex{1, 1});
  p.set_coeff(MultiIndex{0, 0}, 4.0);
  p.set_coeff(MultiIndex{1, 0}, -2.0);
  p.set_coeff(MultiIndex{0, 1}, -2.0);
  p.set_coeff(MultiIndex{1, 1}, 1.0);
  auto r = stability_check(p, 32, 1e-9);
  REQUIRE(r.kind == StabilityKind::Stable);
  REQUIRE(r.min_modulus == Catch::Approx(1.0).margin(1e-10));
}
