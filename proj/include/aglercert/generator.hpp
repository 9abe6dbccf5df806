#pragma once

#include <numbers>

#include "aglercert/poly.hpp"
#include "aglercert/rng.hpp"
#include "aglercert/stability.hpp"

// Seeded generation of polynomials with no zeros on the closed tridisk.
// a(z1,z2) is a product of one-variable factors (c - z) with roots spread on
// circles of radius > 1, plus a small perturbation re-checked for stability;
// b is a random polynomial scaled so |b| <= lambda |a| pointwise on T^2.
// Then p = a + b z3 cannot vanish for |z3| <= 1.

namespace aglercert {

struct GenOptions {
  double root_radius_lo = 1.45;
  double root_radius_hi = 2.2;
  double perturbation = 0.04;  // relative to the certified minimum of |a|
  int grid = 128;
  int max_retries = 100;
};

namespace detail {

inline AnalyticPoly one_var_factor_product(Rng& rng, int deg, int var, const GenOptions& opt) {
  AnalyticPoly prod = AnalyticPoly::constant(2, 1.0);
  for (int i = 0; i < deg; ++i) {
    double radius = rng.uniform(opt.root_radius_lo, opt.root_radius_hi);
    double angle =
        2.0 * std::numbers::pi * (i + rng.uniform(-0.25, 0.25)) / std::max(deg, 1);
    cd root = std::polar(radius, angle);
    MultiIndex e = var == 0 ? MultiIndex{1, 0} : MultiIndex{0, 1};
    AnalyticPoly factor(2, e);
    factor.set_coeff(MultiIndex{0, 0}, root);
    factor.set_coeff(e, -1.0);
    prod = prod * factor;
  }
  return prod;
}

struct TorusRange {
  double min_lower;  // certified lower bound for min|f|
  double max_upper;  // certified upper bound for max|f|
};

inline TorusRange torus_range(const AnalyticPoly& f, int grid) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      std::vector<cd> z{std::polar(1.0, 2.0 * std::numbers::pi * i / grid),
                        std::polar(1.0, 2.0 * std::numbers::pi * j / grid)};
      double m = std::abs(f.eval(z));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  double slack = f.lipschitz_polydisk() * std::numbers::pi / grid;
  return {std::max(0.0, lo - slack), hi + slack};
}

}  // namespace detail

// Deterministic in (n, m, seed, lambda).  Throws after max_retries failed
// stability re-checks.
inline AnalyticPoly gen_stable(int n, int m, std::uint64_t seed, double lambda,
                               const GenOptions& opt = {}) {
  if (lambda < 0.0 || lambda >= 1.0) throw DegreeError("gen_stable requires 0 <= lambda < 1");
  if (n < 0 || m < 0) throw DegreeError("gen_stable requires nonnegative degrees");
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  MultiIndex nm{n, m};

  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    AnalyticPoly a =
        detail::one_var_factor_product(rng, n, 0, opt) * detail::one_var_factor_product(rng, m, 1, opt);
    a = a.viewed_at(nm);

    auto range_a0 = detail::torus_range(a, opt.grid);
    AnalyticPoly g(2, nm);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= m; ++j) g.set_coeff(MultiIndex{i, j}, rng.cgaussian());
    double gnorm = g.coeff_one_norm();
    if (gnorm > 0)
      a = a + g.scaled(opt.perturbation * range_a0.min_lower / gnorm);
    a = a.viewed_at(nm);

    auto st = stability_check(a, 64);
    if (st.kind != StabilityKind::Stable) continue;

    AnalyticPoly b(2, nm);
    if (lambda > 0.0) {
      AnalyticPoly c(2, nm);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= m; ++j) c.set_coeff(MultiIndex{i, j}, rng.cgaussian());
      auto range_a = detail::torus_range(a, opt.grid);
      auto range_c = detail::torus_range(c, opt.grid);
      if (range_c.max_upper <= 0) continue;
      b = c.scaled(lambda * range_a.min_lower / range_c.max_upper);
    }

    AnalyticPoly p(3, MultiIndex{n, m, 1});
    for (const auto& [idx, v] : a.coeffs()) p.set_coeff(MultiIndex{idx[0], idx[1], 0}, v);
    for (const auto& [idx, v] : b.coeffs()) p.set_coeff(MultiIndex{idx[0], idx[1], 1}, v);

    auto stp = stability_check(p, 64);
    if (stp.kind == StabilityKind::Stable) return p;
  }
  throw Error("gen_stable: could not produce a certified stable instance");
}

}  // namespace aglercert
