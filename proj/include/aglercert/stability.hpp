#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "aglercert/poly.hpp"

// Zero-free test on the closed polydisk.
//
// This is a certified-margin check, not a decision procedure.  The classical
// slice reduction for polydisk stability is used: p has no zeros on the
// closed n-polydisk iff for every k, p is zero-free on
//     T^{k-1} x closed D x {1}^{n-k}.
// Each slice is scanned on a product grid.  A grid minimum that exceeds
// L*h + margin (L the coefficient-weighted Lipschitz constant, h the grid
// covering radius) certifies the slice; an evaluated point with |p| below
// margin_tol is an explicit zero witness.  Anything else is Inconclusive,
// which is an honest outcome and must be overridden explicitly downstream.

namespace aglercert {

enum class StabilityKind { Stable, Unstable, Inconclusive };

struct StabilityResult {
  StabilityKind kind = StabilityKind::Inconclusive;
  double min_modulus = 0.0;      // observed grid minimum over all slices
  double certified_lower = 0.0;  // grid minimum minus L*h (valid when Stable)
  std::vector<cd> witness;       // point with |p| <= margin_tol (Unstable)
  double lipschitz = 0.0;
  int final_density = 0;
  std::string note;
};

namespace detail {

// p with variables var >= keep fixed at 1, folded into fewer variables.
inline AnalyticPoly restrict_tail_to_one(const AnalyticPoly& p, int keep) {
  MultiIndex box = MultiIndex::zeros(keep);
  for (int v = 0; v < keep; ++v) box[v] = p.degree()[v];
  AnalyticPoly r(keep, box);
  for (const auto& [idx, c] : p.coeffs()) {
    MultiIndex k = MultiIndex::zeros(keep);
    for (int v = 0; v < keep; ++v) k[v] = idx[v];
    r.add_coeff(k, c);
  }
  return r;
}

struct SliceScan {
  double grid_min;
  std::vector<cd> argmin;  // in the slice's own variables
  double cover_radius;
};

// Scan |q| over T^{k-1} x closed D with angular density d and K+1 radii for
// the disk variable.  q has k variables; the last one runs over the disk.
inline SliceScan scan_slice(const AnalyticPoly& q, int d, int K) {
  const int k = q.nvars();
  const double two_pi = 2.0 * std::numbers::pi;
  // Coefficients of the disk variable as polynomials in the torus variables.
  const int dlast = q.effective_degree(k - 1);
  std::vector<AnalyticPoly> slice_coeff;
  if (k == 1) {
    for (int j = 0; j <= dlast; ++j)
      slice_coeff.push_back(AnalyticPoly::constant(1, q.coeff(MultiIndex{j})));
  } else {
    MultiIndex tbox = MultiIndex::zeros(k - 1);
    for (int v = 0; v < k - 1; ++v) tbox[v] = q.degree()[v];
    for (int j = 0; j <= dlast; ++j) slice_coeff.emplace_back(k - 1, tbox);
    for (const auto& [idx, c] : q.coeffs()) {
      MultiIndex t = MultiIndex::zeros(k - 1);
      for (int v = 0; v < k - 1; ++v) t[v] = idx[v];
      slice_coeff[idx[k - 1]].add_coeff(t, c);
    }
  }

  std::vector<cd> angle(d);
  for (int a = 0; a < d; ++a) angle[a] = std::polar(1.0, two_pi * a / d);
  std::vector<cd> disk;
  for (int i = 0; i <= K; ++i) {
    double r = static_cast<double>(i) / K;
    int na = i == 0 ? 1 : d;
    for (int a = 0; a < na; ++a) disk.push_back(std::polar(r, two_pi * a / d));
  }

  SliceScan out;
  out.grid_min = std::numeric_limits<double>::infinity();
  out.cover_radius = 1.0 / (2.0 * K) + std::numbers::pi / d;

  std::vector<int> ai(std::max(k - 1, 0), 0);
  std::vector<cd> zt(std::max(k - 1, 0));
  std::vector<cd> cv(slice_coeff.size());
  bool more = true;
  while (more) {
    for (int v = 0; v < k - 1; ++v) zt[v] = angle[ai[v]];
    for (size_t j = 0; j < slice_coeff.size(); ++j)
      cv[j] = k == 1 ? slice_coeff[j].coeff(MultiIndex::zeros(1))
                     : slice_coeff[j].eval(std::span<const cd>(zt.data(), zt.size()));
    for (const cd& w : disk) {
      cd val = 0.0;  // Horner in the disk variable
      for (size_t j = slice_coeff.size(); j-- > 0;) val = val * w + cv[j];
      double m = std::abs(val);
      if (m < out.grid_min) {
        out.grid_min = m;
        out.argmin.assign(zt.begin(), zt.end());
        out.argmin.push_back(w);
      }
    }
    // advance odometer over the torus angles
    more = false;
    for (int v = 0; v < k - 1; ++v) {
      if (++ai[v] < d) {
        more = true;
        break;
      }
      ai[v] = 0;
    }
    if (k == 1) break;
  }
  return out;
}

}  // namespace detail

inline StabilityResult stability_check(const AnalyticPoly& p, int grid_density = 64,
                                       double margin_tol = 1e-9) {
  if (grid_density < 8) throw DegreeError("grid_density must be at least 8");
  StabilityResult res;
  res.lipschitz = p.lipschitz_polydisk();
  const int n = p.nvars();

  if (p.is_zero()) {
    res.kind = StabilityKind::Unstable;
    res.witness.assign(n, cd(0.0));
    res.note = "zero polynomial";
    return res;
  }

  std::vector<AnalyticPoly> slices;
  for (int k = 1; k <= n; ++k) slices.push_back(detail::restrict_tail_to_one(p, k));

  const int max_density = n >= 3 ? 128 : (n == 2 ? 512 : 2048);
  for (int d = grid_density; d <= std::max(grid_density, max_density); d *= 2) {
    const int K = std::max(2, d / 8);
    double worst_min = std::numeric_limits<double>::infinity();
    double worst_cert = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
      auto scan = detail::scan_slice(slices[k - 1], d, K);
      if (scan.grid_min <= margin_tol) {
        res.kind = StabilityKind::Unstable;
        res.min_modulus = scan.grid_min;
        res.witness = scan.argmin;
        while (static_cast<int>(res.witness.size()) < n) res.witness.push_back(cd(1.0));
        res.final_density = d;
        return res;
      }
      worst_min = std::min(worst_min, scan.grid_min);
      worst_cert = std::min(worst_cert, scan.grid_min - res.lipschitz * scan.cover_radius);
    }
    res.min_modulus = worst_min;
    res.certified_lower = worst_cert;
    res.final_density = d;
    if (worst_cert > margin_tol) {
      res.kind = StabilityKind::Stable;
      return res;
    }
  }
  res.kind = StabilityKind::Inconclusive;
  res.note = "grid refinement exhausted without certificate or witness";
  return res;
}

}  // namespace aglercert
