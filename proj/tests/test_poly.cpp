#include <catch2/catch_amalgamated.hpp>

#include "aglercert/herm_poly.hpp"
#include "aglercert/poly.hpp"
#include "aglercert/rng.hpp"

using namespace aglercert;

namespace {

AnalyticPoly random_poly(Rng& rng, int nvars, MultiIndex box, double scale = 1.0) {
  AnalyticPoly p(nvars, box);
  std::vector<int> idx(nvars, 0);
  // dense draw over the box
  auto rec = [&](auto&& self, int v) -> void {
    if (v == nvars) {
      MultiIndex m = MultiIndex::zeros(nvars);
      for (int i = 0; i < nvars; ++i) m[i] = idx[i];
      p.set_coeff(m, scale * rng.cgaussian());
      return;
    }
    for (idx[v] = 0; idx[v] <= box[v]; ++idx[v]) self(self, v + 1);
  };
  rec(rec, 0);
  return p;
}

}  // namespace

TEST_CASE("reflection of constants and linear factors", "[poly]") {
  AnalyticPoly one = AnalyticPoly::constant(3, 1.0).viewed_at(MultiIndex{1, 1, 1});
  AnalyticPoly r = reflect(one, MultiIndex{1, 1, 1});
  REQUIRE(r.coeff(MultiIndex{1, 1, 1}) == cd(1.0));
  REQUIRE(r.coeffs().size() == 1);

  AnalyticPoly p(1, MultiIndex{1});
  p.set_coeff(MultiIndex{0}, 2.0);
  p.set_coeff(MultiIndex{1}, -1.0);
  AnalyticPoly q = reflect(p, MultiIndex{1});
  REQUIRE(q.coeff(MultiIndex{0}) == cd(-1.0));
  REQUIRE(q.coeff(MultiIndex{1}) == cd(2.0));
}

TEST_CASE("reflection is an involution and a torus isometry", "[poly]") {
  Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    int nvars = 1 + rng.uniform_int(0, 2);
    MultiIndex box = MultiIndex::zeros(nvars);
    for (int v = 0; v < nvars; ++v) box[v] = rng.uniform_int(0, 3);
    AnalyticPoly p = random_poly(rng, nvars, box);
    AnalyticPoly pp = reflect(reflect(p, box), box);
    REQUIRE(pp == p);

    std::vector<cd> z(nvars);
    for (auto& w : z) w = rng.torus_point();
    AnalyticPoly pt = reflect(p, box);
    REQUIRE(std::abs(std::abs(pt.eval(z)) - std::abs(p.eval(z))) < 1e-12);
  }
}

TEST_CASE("reflection rejects boxes smaller than the support", "[poly]") {
  AnalyticPoly p(1, MultiIndex{2});
  p.set_coeff(MultiIndex{2}, 1.0);
  REQUIRE_THROWS_AS(reflect(p, MultiIndex{1}), DegreeError);
}

TEST_CASE("split_z3 splits and reconstructs", "[poly]") {
  AnalyticPoly p(3, MultiIndex{1, 1, 1});
  p.set_coeff(MultiIndex{0, 0, 0}, 2.0);
  p.set_coeff(MultiIndex{1, 0, 0}, -1.0);
  p.set_coeff(MultiIndex{0, 1, 1}, 1.0);
  auto [a, b] = split_z3(p);
  REQUIRE(a.coeff(MultiIndex{0, 0}) == cd(2.0));
  REQUIRE(a.coeff(MultiIndex{1, 0}) == cd(-1.0));
  REQUIRE(b.coeff(MultiIndex{0, 1}) == cd(1.0));
  REQUIRE(b.coeffs().size() == 1);

  AnalyticPoly one = AnalyticPoly::constant(3, 1.0);
  auto [a1, b1] = split_z3(one);
  REQUIRE(a1.coeff(MultiIndex{0, 0}) == cd(1.0));
  REQUIRE(b1.is_zero());
}

TEST_CASE("split_z3 round-trips on random inputs", "[poly]") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    MultiIndex box{rng.uniform_int(0, 4), rng.uniform_int(0, 3), 1};
    AnalyticPoly p = random_poly(rng, 3, box);
    auto [a, b] = split_z3(p);
    // reassemble a + b*z3 at the declared box and compare exactly
    AnalyticPoly back(3, box);
    for (const auto& [idx, c] : a.coeffs()) back.set_coeff(MultiIndex{idx[0], idx[1], 0}, c);
    for (const auto& [idx, c] : b.coeffs()) back.set_coeff(MultiIndex{idx[0], idx[1], 1}, c);
    REQUIRE(back == p);
  }
}

TEST_CASE("split_z3 rejects z3-degree two", "[poly]") {
  AnalyticPoly p(3, MultiIndex{0, 0, 2});
  p.set_coeff(MultiIndex{0, 0, 2}, 1.0);
  REQUIRE_THROWS_AS(split_z3(p), DegreeError);
}

TEST_CASE("mod_squared_diff on small examples", "[poly]") {
  AnalyticPoly a = AnalyticPoly::constant(1, 2.0).viewed_at(MultiIndex{1});
  AnalyticPoly b = AnalyticPoly::monomial(1, MultiIndex{1}, 1.0);
  TrigPoly t = mod_squared_diff(a, b);
  REQUIRE(std::abs(t.coeff(MultiIndex{0}) - cd(3.0)) < 1e-15);
  REQUIRE(t.coeffs().size() == 1);

  AnalyticPoly a2(1, MultiIndex{1});
  a2.set_coeff(MultiIndex{0}, 2.0);
  a2.set_coeff(MultiIndex{1}, -1.0);
  AnalyticPoly b2(1, MultiIndex{1});
  TrigPoly t2 = mod_squared_diff(a2, b2);
  REQUIRE(std::abs(t2.coeff(MultiIndex{0}) - cd(5.0)) < 1e-15);
  REQUIRE(std::abs(t2.coeff(MultiIndex{1}) - cd(-2.0)) < 1e-15);
  REQUIRE(std::abs(t2.coeff(MultiIndex{-1}) - cd(-2.0)) < 1e-15);
}

TEST_CASE("mod_squared_diff matches pointwise evaluation on the torus", "[poly]") {
  Rng rng(500);
  MultiIndex box{2, 2};
  AnalyticPoly a = random_poly(rng, 2, box);
  AnalyticPoly b = random_poly(rng, 2, box);
  TrigPoly t = mod_squared_diff(a, b);
  REQUIRE(t.is_hermitian());
  for (int i = 0; i < 64; ++i) {
    std::vector<cd> z{rng.torus_point(), rng.torus_point()};
    double expect = std::norm(a.eval(z)) - std::norm(b.eval(z));
    double defect = 0;
    double got = t.eval_real(std::span<const cd>(z.data(), z.size()), &defect);
    REQUIRE(std::abs(got - expect) < 1e-12);
    REQUIRE(defect < 1e-12);
  }
}

TEST_CASE("splitting identity |p|^2-|pt|^2 = (1-|z3|^2)(|a|^2-|b|^2)", "[poly]") {
  Rng rng(9001);
  for (int trial = 0; trial < 20; ++trial) {
    MultiIndex box{rng.uniform_int(1, 3), rng.uniform_int(1, 2), 1};
    AnalyticPoly p = random_poly(rng, 3, box);
    AnalyticPoly pt = reflect(p, box);
    auto [a, b] = split_z3(p);
    TrigPoly t = mod_squared_diff(a, b);
    for (int i = 0; i < 8; ++i) {
      cd z1 = rng.torus_point(), z2 = rng.torus_point();
      cd z3 = 1.5 * rng.disk_point();
      std::vector<cd> z{z1, z2, z3};
      double lhs = std::norm(p.eval(z)) - std::norm(pt.eval(z));
      double rhs = (1.0 - std::norm(z3)) * t.eval_real({z1, z2});
      REQUIRE(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("eval matches the naive coefficient sum", "[poly]") {
  REQUIRE(AnalyticPoly::monomial(3, MultiIndex{1, 1, 1}, 1.0).eval({cd(1.0), cd(1.0), cd(1.0)}) == cd(1.0));
  AnalyticPoly p(1, MultiIndex{1});
  p.set_coeff(MultiIndex{0}, 2.0);
  p.set_coeff(MultiIndex{1}, -1.0);
  REQUIRE(p.eval({cd(0.5)}) == cd(1.5));

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    MultiIndex box{rng.uniform_int(0, 3), rng.uniform_int(0, 3)};
    AnalyticPoly q = random_poly(rng, 2, box);
    std::vector<cd> z{rng.disk_point(1.2), rng.disk_point(1.2)};
    cd naive = 0.0;
    for (const auto& [idx, c] : q.coeffs())
      naive += c * std::pow(z[0], idx[0]) * std::pow(z[1], idx[1]);
    REQUIRE(std::abs(q.eval(z) - naive) < 1e-12 * (1.0 + std::abs(naive)));
  }
}

TEST_CASE("trig poly symmetrization enforces Hermitian coefficients", "[poly]") {
  TrigPoly t(1);
  t.add_term(MultiIndex{1}, cd(1.0, 0.5));
  t.symmetrize();
  REQUIRE(t.is_hermitian());
  REQUIRE(std::abs(t.coeff(MultiIndex{-1}) - std::conj(t.coeff(MultiIndex{1}))) == 0.0);
}

TEST_CASE("vector poly norm matches entrywise sum", "[poly]") {
  Rng rng(4242);
  VectorPoly E(2, MultiIndex{2, 1});
  E.push_back(random_poly(rng, 2, MultiIndex{2, 1}));
  E.push_back(random_poly(rng, 2, MultiIndex{1, 1}));
  TrigPoly n2 = E.norm_sq_laurent();
  for (int i = 0; i < 32; ++i) {
    std::vector<cd> z{rng.torus_point(), rng.torus_point()};
    double direct = E.norm_sq_at(std::span<const cd>(z.data(), z.size()));
    REQUIRE(std::abs(n2.eval_real(std::span<const cd>(z.data(), z.size())) - direct) < 1e-12);
  }
}

TEST_CASE("herm poly mixed coefficients evaluate consistently", "[poly]") {
  Rng rng(99);
  MultiIndex box{2, 1, 1};
  AnalyticPoly p = random_poly(rng, 3, box);
  HermPoly h = HermPoly::mod_sq(p);
  for (int i = 0; i < 16; ++i) {
    std::vector<cd> z{rng.disk_point(1.3), rng.disk_point(1.3), rng.disk_point(1.3)};
    cd got = h.eval(z);
    double expect = std::norm(p.eval(z));
    REQUIRE(std::abs(got - cd(expect)) < 1e-11 * (1.0 + expect));
  }
  // (1-|z1|^2) factor
  HermPoly g = h.times_one_minus_mod_sq(0);
  std::vector<cd> z{cd(0.3, 0.4), cd(0.9), cd(-0.2, 0.1)};
  cd got = g.eval(z);
  double expect = (1.0 - std::norm(z[0])) * std::norm(p.eval(z));
  REQUIRE(std::abs(got - cd(expect)) < 1e-12 * (1.0 + std::abs(expect)));
}

TEST_CASE("herm poly torus reduction collapses Laurent directions", "[poly]") {
  // ||H||^2 for H = [z2 z3] reduces to the constant 1 when z2, z3 are on the torus.
  VectorPoly H(3, MultiIndex{0, 1, 1});
  H.push_back(AnalyticPoly::monomial(3, MultiIndex{0, 1, 1}, 1.0));
  HermPoly h = HermPoly::norm_sq(H);
  HermPoly red = h.reduce_torus({false, true, true});
  REQUIRE(red.coeffs().size() == 1);
  REQUIRE(std::abs(red.coeff({MultiIndex::zeros(3), MultiIndex::zeros(3)}) - cd(1.0)) == 0.0);
}
