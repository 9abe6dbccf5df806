#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "aglercert/fejer_riesz.hpp"
#include "aglercert/rng.hpp"

using namespace aglercert;

namespace {

// build from one-sided data: each term c z^j also contributes conj(c) z^-j
TrigPoly trig1(std::initializer_list<std::pair<int, cd>> terms) {
  TrigPoly t(1);
  for (const auto& [j, c] : terms) {
    t.add_term(MultiIndex{j}, c);
    if (j != 0) t.add_term(MultiIndex{-j}, std::conj(c));
  }
  t.symmetrize();
  return t;
}

MatrixPoly random_matrix_poly(Rng& rng, int k, int deg, double scale) {
  MatrixPoly A(k, deg);
  for (int j = 0; j <= deg; ++j)
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) A.coeff(j)(r, c) = scale * rng.cgaussian();
  return A;
}

double min_eig_on_circle(const MatrixTrigPoly& T, int grid) {
  double m = std::numeric_limits<double>::infinity();
  for (int g = 0; g < grid; ++g) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * g / grid);
    auto [w, V] = hermitian_eigen(T.eval(z));
    m = std::min(m, w.minCoeff());
  }
  return m;
}

VectorPoly random_vector_poly(Rng& rng, int entries, MultiIndex box, double scale) {
  VectorPoly E(box.size(), box);
  for (int i = 0; i < entries; ++i) {
    AnalyticPoly p(box.size(), box);
    std::vector<int> idx(box.size(), 0);
    auto rec = [&](auto&& self, int v) -> void {
      if (v == box.size()) {
        MultiIndex m = MultiIndex::zeros(box.size());
        for (int q = 0; q < box.size(); ++q) m[q] = idx[q];
        p.set_coeff(m, scale * rng.cgaussian());
        return;
      }
      for (idx[v] = 0; idx[v] <= box[v]; ++idx[v]) self(self, v + 1);
    };
    rec(rec, 0);
    E.push_back(p);
  }
  return E;
}

}  // namespace

TEST_CASE("scalar factorization of small examples", "[factor]") {
  AnalyticPoly q1 = scalar_fejer_riesz(trig1({{0, 1.0}}));
  REQUIRE(q1.coeff(MultiIndex{0}) == cd(1.0));
  REQUIRE(q1.coeffs().size() == 1);

  // 5 - 2z - 2/z = |2 - z|^2
  AnalyticPoly q2 = scalar_fejer_riesz(trig1({{0, 5.0}, {1, -2.0}}));
  REQUIRE(std::abs(q2.coeff(MultiIndex{0}) - cd(2.0)) < 1e-10);
  REQUIRE(std::abs(q2.coeff(MultiIndex{1}) - cd(-1.0)) < 1e-10);

  // 2 + z + 1/z = |1 + z|^2, circle zero at -1
  AnalyticPoly q3 = scalar_fejer_riesz(trig1({{0, 2.0}, {1, 1.0}}));
  REQUIRE(std::abs(q3.coeff(MultiIndex{0}) - cd(1.0)) < 1e-7);
  REQUIRE(std::abs(q3.coeff(MultiIndex{1}) - cd(1.0)) < 1e-7);
}

TEST_CASE("scalar factorization rejects negative input", "[factor]") {
  REQUIRE_THROWS_AS(scalar_fejer_riesz(trig1({{0, -1.0}})), NegativeInputError);
  REQUIRE_THROWS_AS(scalar_fejer_riesz(trig1({{1, 1.0}})), NegativeInputError);
}

TEST_CASE("scalar factorization recovers random |q|^2 with outer output", "[factor]") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + rng.uniform_int(0, 5);
    AnalyticPoly q0(1, MultiIndex{n});
    for (int j = 0; j <= n; ++j) q0.set_coeff(MultiIndex{j}, rng.cgaussian());
    TrigPoly t = mod_squared(q0);
    ScalarFactorInfo info;
    AnalyticPoly q = scalar_fejer_riesz(t, 1e-9, &info);
    REQUIRE(info.recon_sup <= 1e-8 * std::max(1.0, t.coeff_one_norm()));
    REQUIRE(q.effective_degree(0) <= n);
    // outer: no roots inside the open disk
    std::vector<cd> qc(q.effective_degree(0) + 1, cd(0.0));
    for (const auto& [idx, c] : q.coeffs()) qc[idx[0]] = c;
    for (const cd& root : detail::polynomial_roots(qc)) REQUIRE(std::abs(root) >= 1.0 - 1e-9);
    // normalization: q(0) real and nonnegative
    REQUIRE(q.coeff(MultiIndex{0}).imag() == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(q.coeff(MultiIndex{0}).real() >= -1e-12);
  }
}

TEST_CASE("matrix factorization of constants and diagonal cases", "[factor]") {
  MatrixTrigPoly T(2);
  T.add_term(0, Eigen::MatrixXcd::Identity(2, 2));
  MatrixPoly A = matrix_fejer_riesz(T);
  REQUIRE((A.coeff(0) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(A.effective_degree() == 0);

  // diag(5 - 2z - 2/z, 1) factors into diag(2 - z, 1) up to the fixed gauge
  MatrixTrigPoly D(2);
  Eigen::MatrixXcd d0 = Eigen::MatrixXcd::Zero(2, 2), d1 = Eigen::MatrixXcd::Zero(2, 2);
  d0(0, 0) = 5.0;
  d0(1, 1) = 1.0;
  d1(0, 0) = -2.0;
  D.add_term(0, d0);
  D.add_term(1, d1);
  D.add_term(-1, d1.adjoint());
  D.symmetrize();
  FactorInfo info;
  MatrixPoly Ad = matrix_fejer_riesz(D, {}, &info);
  REQUIRE(info.recon_sup < 1e-9);
  REQUIRE(std::abs(Ad.coeff(0)(0, 0) - cd(2.0)) < 1e-9);
  REQUIRE(std::abs(Ad.coeff(1)(0, 0) - cd(-1.0)) < 1e-9);
  REQUIRE(std::abs(Ad.coeff(0)(1, 1) - cd(1.0)) < 1e-9);
}

TEST_CASE("matrix factorization construct-and-recover oracle", "[factor]") {
  Rng rng(515);
  int done = 0;
  while (done < 100) {
    int k = 1 + rng.uniform_int(0, 3);
    int deg = rng.uniform_int(0, 5);
    MatrixPoly A0 = random_matrix_poly(rng, k, deg, 1.0 / std::sqrt(k * (deg + 1.0)));
    MatrixTrigPoly T = A0.gram_on_torus();
    if (min_eig_on_circle(T, 64) < 1e-3) continue;  // keep strictly positive draws
    ++done;
    FactorInfo info;
    MatrixPoly A = matrix_fejer_riesz(T, {}, &info);
    REQUIRE(info.recon_sup <= 1e-8);
    REQUIRE(A.effective_degree() <= T.degree());
    // gauge: leading block upper triangular with positive diagonal
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < r; ++c) REQUIRE(std::abs(A.coeff(0)(r, c)) < 1e-9);
      REQUIRE(A.coeff(0)(r, r).real() > 0.0);
      REQUIRE(std::abs(A.coeff(0)(r, r).imag()) < 1e-12);
    }
  }
}

TEST_CASE("matrix factorization reconstruction holds on fresh samples", "[factor]") {
  Rng rng(616);
  MatrixPoly A0 = random_matrix_poly(rng, 3, 3, 0.4);
  MatrixTrigPoly T = A0.gram_on_torus();
  if (min_eig_on_circle(T, 64) < 1e-3) {
    T.add_term(0, 0.5 * Eigen::MatrixXcd::Identity(3, 3));
    T.symmetrize();
  }
  MatrixPoly A = matrix_fejer_riesz(T);
  Rng fresh(999);  // unseen by the solver
  for (int i = 0; i < 256; ++i) {
    cd z = fresh.torus_point();
    Eigen::MatrixXcd R = A.eval(z).adjoint() * A.eval(z) - T.eval(z);
    REQUIRE(R.cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("matrix factorization rejects indefinite input", "[factor]") {
  MatrixTrigPoly T(2);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  T.add_term(0, m);
  REQUIRE_THROWS_AS(matrix_fejer_riesz(T), NotPSDError);
}

TEST_CASE("two-squares decomposition of a constant", "[factor]") {
  TrigPoly t(2);
  t.add_term(MultiIndex{0, 0}, 3.0);
  LemmaInfo info;
  VectorPoly E = lemma_two_squares(t, 1e-9, &info);
  REQUIRE(E.dim() == 2);
  double s = std::sqrt(1.5);
  REQUIRE(std::abs(E.entry(0).coeff(MultiIndex{0, 0}) - cd(s)) < 1e-10);
  REQUIRE(std::abs(E.entry(1).coeff(MultiIndex{0, 1}) - cd(s)) < 1e-10);
  REQUIRE(info.recon_sup < 1e-10);
}

TEST_CASE("two-squares decomposition at the rank-one boundary", "[factor]") {
  // t = 2 + z1 z2 + 1/(z1 z2) = |1 + z1 z2|^2, where t0 = 2|t1| identically
  TrigPoly t(2);
  t.add_term(MultiIndex{0, 0}, 2.0);
  t.add_term(MultiIndex{1, 1}, 1.0);
  t.add_term(MultiIndex{-1, -1}, 1.0);
  t.symmetrize();
  LemmaInfo info;
  VectorPoly E = lemma_two_squares(t, 1e-9, &info);
  REQUIRE(E.dim() == 2);
  REQUIRE(info.factor.eps_shift > 0.0);
  REQUIRE(info.recon_sup <= 1e-8);
  Rng rng(11);
  for (int i = 0; i < 64; ++i) {
    std::vector<cd> z{rng.torus_point(), rng.torus_point()};
    double got = E.norm_sq_at(std::span<const cd>(z.data(), z.size()));
    double want = std::norm(1.0 + z[0] * z[1]);
    REQUIRE(std::abs(got - want) < 1e-7);
  }
}

TEST_CASE("two-squares construct-and-recover", "[factor]") {
  Rng rng(321);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + rng.uniform_int(0, 4);
    VectorPoly E0 = random_vector_poly(rng, 2, MultiIndex{n, 1}, 0.7);
    TrigPoly t = E0.norm_sq_laurent();
    LemmaInfo info;
    VectorPoly E = lemma_two_squares(t, 1e-9, &info);
    REQUIRE(E.dim() == 2);
    REQUIRE(E.box() == MultiIndex{n, 1});
    double sup = 0;
    for (int g = 0; g < 128; ++g) {
      std::vector<cd> z{rng.torus_point(), rng.torus_point()};
      double got = E.norm_sq_at(std::span<const cd>(z.data(), z.size()));
      double want = t.eval_real(std::span<const cd>(z.data(), z.size()));
      sup = std::max(sup, std::abs(got - want));
    }
    REQUIRE(sup <= 1e-8 * std::max(1.0, t.coeff_one_norm()));
  }
}

TEST_CASE("two-squares rejects z2-degree two", "[factor]") {
  TrigPoly t(2);
  t.add_term(MultiIndex{0, 0}, 5.0);
  t.add_term(MultiIndex{0, 2}, 1.0);
  t.add_term(MultiIndex{0, -2}, 1.0);
  t.symmetrize();
  REQUIRE_THROWS_AS(lemma_two_squares(t), DegreeError);
}
