#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "aglercert/hermitian.hpp"
#include "aglercert/poly.hpp"

// One-variable spectral factorization.
//
// Scalar route: roots of z^n t(z) come in (u, 1/conj(u)) pairs; collecting
// one root per pair outside the closed disk (circle zeros have even
// multiplicity and contribute their projection once) gives the outer factor
// q with |q|^2 = t on T and q(0) >= 0.
//
// Matrix route (Bauer): the rows of the banded Cholesky factor of the
// Hermitian block-Toeplitz moment matrix of T converge to the coefficients
// of the spectral factor.  Row i never depends on rows below it, so the
// factorization is computed incrementally and checkpointed at doubling
// windows until successive factor candidates agree.

namespace aglercert {

class MatrixTrigPoly {
 public:
  explicit MatrixTrigPoly(int k) : k_(k) {}

  int size() const { return k_; }
  const std::map<int, Eigen::MatrixXcd>& coeffs() const { return c_; }

  Eigen::MatrixXcd coeff(int j) const {
    auto it = c_.find(j);
    return it == c_.end() ? Eigen::MatrixXcd::Zero(k_, k_) : it->second;
  }

  void add_term(int j, const Eigen::MatrixXcd& m) {
    if (m.rows() != k_ || m.cols() != k_) throw DegreeError("matrix coefficient size mismatch");
    auto [it, fresh] = c_.try_emplace(j, m);
    if (!fresh) it->second += m;
  }

  // coeff(-j) = coeff(j)^* exactly after symmetrization
  void symmetrize() {
    std::map<int, Eigen::MatrixXcd> out;
    for (const auto& [j, m] : c_) {
      Eigen::MatrixXcd avg = 0.5 * (m + coeff(-j).adjoint());
      if (avg.cwiseAbs().maxCoeff() < kCoeffDropTol) continue;
      out[j] = avg;
      if (j != 0) out[-j] = avg.adjoint();
    }
    c_ = std::move(out);
  }

  int degree() const {
    int d = 0;
    for (const auto& [j, m] : c_) d = std::max(d, std::abs(j));
    return d;
  }

  Eigen::MatrixXcd eval(cd z) const {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(k_, k_);
    for (const auto& [j, m] : c_) s += m * (j >= 0 ? std::pow(z, j) : std::pow(1.0 / z, -j));
    return s;
  }

 private:
  int k_;
  std::map<int, Eigen::MatrixXcd> c_;
};

class MatrixPoly {
 public:
  MatrixPoly(int k, int degree) : k_(k), c_(degree + 1, Eigen::MatrixXcd::Zero(k, k)) {}

  int size() const { return k_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Eigen::MatrixXcd& coeff(int j) const { return c_.at(j); }
  Eigen::MatrixXcd& coeff(int j) { return c_.at(j); }

  Eigen::MatrixXcd eval(cd z) const {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(k_, k_);
    cd zp = 1.0;
    for (const auto& m : c_) {
      s += m * zp;
      zp *= z;
    }
    return s;
  }

  // A(z)^* A(z) as a matrix trigonometric polynomial
  MatrixTrigPoly gram_on_torus() const {
    MatrixTrigPoly T(k_);
    for (int i = 0; i <= degree(); ++i)
      for (int j = 0; j <= degree(); ++j) T.add_term(j - i, c_[i].adjoint() * c_[j]);
    T.symmetrize();
    return T;
  }

  int effective_degree(double tol = kCoeffDropTol) const {
    for (int j = degree(); j >= 1; --j)
      if (c_[j].cwiseAbs().maxCoeff() >= tol) return j;
    return 0;
  }

 private:
  int k_;
  std::vector<Eigen::MatrixXcd> c_;
};

struct BauerOptions {
  int window_start = 32;
  int window_max = 1024;
  double iterate_tol = 1e-10;       // max coefficient change between windows
  double psd_tol = 1e-9;            // tolerated negative eigenvalue (relative)
  double shift_threshold = 1e-7;    // relative eigenvalue floor triggering the shift
  double eps_rel = 1e-9;            // relative size of the regularizing shift
  int grid = 256;                   // PSD pre-check density
};

struct FactorInfo {
  double eps_shift = 0.0;
  int window = 0;
  double iterate_diff = 0.0;
  double recon_sup = 0.0;
  double grid_min_eig = 0.0;
  double norm_sup = 0.0;
  bool scalar_used_bauer = false;
};

namespace detail {

// Banded Cholesky of the block-Toeplitz matrix with blocks T'(i,j) = C[i-j],
// run until the bottom block row stabilizes.  Returns the stabilized row as
// blocks G_0..G_n, or nullopt if the matrix loses positivity.
inline std::optional<std::vector<Eigen::MatrixXcd>> bauer_lower_factor(
    const std::vector<Eigen::MatrixXcd>& C, int k, int n, const BauerOptions& opt,
    double scale, FactorInfo* info) {
  const int w = (n + 1) * k - 1;
  const int rows_max = (opt.window_max + 1) * k;
  // banded rows: row p stores columns p-w..p in slots 0..w
  std::vector<std::vector<cd>> L(rows_max, std::vector<cd>(w + 1, cd(0.0)));
  auto toeplitz = [&](int p, int q) -> cd {
    int bi = p / k, bj = q / k;
    int d = bi - bj;
    if (d < 0 || d > n) return 0.0;
    return C[d](p % k, q % k);
  };

  std::vector<Eigen::MatrixXcd> prev;
  double last_diff = std::numeric_limits<double>::infinity();
  int checkpoint = std::max(opt.window_start, n + 1);
  for (int p = 0; p < rows_max; ++p) {
    int lo = std::max(0, p - w);
    for (int q = lo; q <= p; ++q) {
      cd s = toeplitz(p, q);
      int tlo = std::max(lo, q - w);
      for (int t = tlo; t < q; ++t) s -= L[p][t - (p - w)] * std::conj(L[q][t - (q - w)]);
      if (q < p) {
        L[p][q - (p - w)] = s / L[q][q - (q - w)].real();
      } else {
        double diag = s.real();
        if (diag <= 1e-14 * scale) return std::nullopt;  // lost positivity
        L[p][q - (p - w)] = std::sqrt(diag);
      }
    }
    int block_row = p / k;
    if (p % k == k - 1 && (block_row == checkpoint || p == rows_max - 1)) {
      std::vector<Eigen::MatrixXcd> cand(n + 1, Eigen::MatrixXcd::Zero(k, k));
      for (int l = 0; l <= n; ++l)
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) {
            int pp = block_row * k + r;
            int qq = (block_row - l) * k + c;
            // entries above the diagonal vanish by triangularity and are
            // not stored in the band
            cand[l](r, c) = qq > pp ? cd(0.0) : L[pp][qq - (pp - w)];
          }
      if (!prev.empty()) {
        double diff = 0;
        for (int l = 0; l <= n; ++l)
          diff = std::max(diff, (cand[l] - prev[l]).cwiseAbs().maxCoeff());
        last_diff = diff;
        if (diff < opt.iterate_tol) {
          if (info) {
            info->window = block_row;
            info->iterate_diff = diff;
          }
          return cand;
        }
      }
      prev = std::move(cand);
      checkpoint *= 2;
    }
  }
  if (info) {
    info->window = opt.window_max;
    info->iterate_diff = last_diff;
  }
  // Window exhausted; hand back the last candidate so the caller can judge
  // it by reconstruction error.
  return prev;
}

inline double matrix_recon_sup(const MatrixPoly& A, const MatrixTrigPoly& T, int grid) {
  double sup = 0;
  for (int g = 0; g < grid; ++g) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * g / grid);
    Eigen::MatrixXcd R = A.eval(z).adjoint() * A.eval(z) - T.eval(z);
    sup = std::max(sup, R.norm());
  }
  return sup;
}

// One Newton step for X*X = T at the current A: solve the real-linear
// least-squares system  A*D + D*A = T - A*A  for an analytic update D of the
// same degree.  Quadratic convergence near the factor sharpens a rough Bauer
// candidate well below the band-recursion accuracy.
inline bool wilson_newton_step(MatrixPoly& A, const MatrixTrigPoly& T) {
  const int k = A.size();
  const int n = A.degree();
  const int nvar = (n + 1) * k * k;  // complex unknowns
  auto var = [&](int l, int r, int c) { return (l * k + r) * k + c; };

  MatrixTrigPoly R = A.gram_on_torus();
  // rows: coefficients d = 0..n, entries (i,j), real and imaginary parts
  const int nrows = 2 * (n + 1) * k * k;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nrows, 2 * nvar);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nrows);
  int row = 0;
  for (int d = 0; d <= n; ++d) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        cd target = T.coeff(d)(i, j) - R.coeff(d)(i, j);
        // sum_l conj(A_l(m,i)) D_{l+d}(m,j) + conj(D_l(m,i)) A_{l+d}(m,j)
        for (int l = 0; l + d <= n; ++l)
          for (int m = 0; m < k; ++m) {
            cd a1 = std::conj(A.coeff(l)(m, i));  // multiplies D_{l+d}(m,j)
            int v1 = var(l + d, m, j);
            M(row, 2 * v1) += a1.real();
            M(row, 2 * v1 + 1) -= a1.imag();
            M(row + 1, 2 * v1) += a1.imag();
            M(row + 1, 2 * v1 + 1) += a1.real();
            cd a2 = A.coeff(l + d)(m, j);  // multiplies conj(D_l(m,i))
            int v2 = var(l, m, i);
            M(row, 2 * v2) += a2.real();
            M(row, 2 * v2 + 1) += a2.imag();
            M(row + 1, 2 * v2) += a2.imag();
            M(row + 1, 2 * v2 + 1) -= a2.real();
          }
        rhs(row) = target.real();
        rhs(row + 1) = target.imag();
        row += 2;
      }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
  Eigen::VectorXd x = cod.solve(rhs);
  if (!x.allFinite()) return false;
  for (int l = 0; l <= n; ++l)
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) {
        int v = var(l, r, c);
        A.coeff(l)(r, c) += cd(x(2 * v), x(2 * v + 1));
      }
  return true;
}

// Left-unitary gauge: rotate so the leading coefficient block is upper
// triangular with positive diagonal.
inline void fix_factor_gauge(MatrixPoly& A) {
  const int k = A.size();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A.coeff(0));
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd U = Q.adjoint();
  Eigen::MatrixXcd R = U * A.coeff(0);
  Eigen::VectorXcd phases(k);
  for (int i = 0; i < k; ++i) {
    double m = std::abs(R(i, i));
    phases(i) = m < 1e-300 ? cd(1.0) : std::conj(R(i, i)) / m;
  }
  U = phases.asDiagonal() * U;
  for (int l = 0; l <= A.degree(); ++l) A.coeff(l) = U * A.coeff(l);
  // scrub roundoff below the diagonal of the leading block
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < r; ++c)
      if (std::abs(A.coeff(0)(r, c)) < 1e-13) A.coeff(0)(r, c) = 0.0;
    A.coeff(0)(r, r) = cd(std::abs(A.coeff(0)(r, r)), 0.0);
  }
}

}  // namespace detail

inline MatrixPoly matrix_fejer_riesz(const MatrixTrigPoly& Tin, const BauerOptions& opt = {},
                                     FactorInfo* info_out = nullptr) {
  MatrixTrigPoly T = Tin;
  T.symmetrize();
  const int k = T.size();
  const int n = T.degree();
  FactorInfo info;

  // PSD pre-check on the circle
  double min_eig = std::numeric_limits<double>::infinity();
  double norm_sup = 0;
  cd witness = 1.0;
  for (int g = 0; g < opt.grid; ++g) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * g / opt.grid);
    auto [w, V] = hermitian_eigen(T.eval(z));
    if (w.minCoeff() < min_eig) {
      min_eig = w.minCoeff();
      witness = z;
    }
    norm_sup = std::max(norm_sup, std::abs(w.maxCoeff()));
    norm_sup = std::max(norm_sup, std::abs(w.minCoeff()));
  }
  info.grid_min_eig = min_eig;
  info.norm_sup = norm_sup;
  double scale = std::max(norm_sup, 1e-30);
  if (min_eig < -opt.psd_tol * std::max(1.0, scale))
    throw NotPSDError("matrix_fejer_riesz: input not PSD on the torus", {witness}, min_eig);

  double eps = min_eig < opt.shift_threshold * scale ? opt.eps_rel * scale : 0.0;

  // Transposed coefficients: the lower Bauer factor G of T^T satisfies
  // T^T = G G~* on T, so A = G^T gives T = A* A.
  for (int attempt = 0; attempt < 5; ++attempt) {
    std::vector<Eigen::MatrixXcd> C(n + 1);
    for (int d = 0; d <= n; ++d) C[d] = T.coeff(d).transpose();
    C[0] += eps * Eigen::MatrixXcd::Identity(k, k);
    info.eps_shift = eps;

    MatrixTrigPoly Ttarget = T;  // the factored object includes the shift
    if (eps > 0.0) {
      Ttarget.add_term(0, eps * Eigen::MatrixXcd::Identity(k, k));
      Ttarget.symmetrize();
    }

    auto G = detail::bauer_lower_factor(C, k, n, opt, scale, &info);
    if (G && !G->empty()) {
      MatrixPoly A(k, n);
      for (int l = 0; l <= n; ++l) A.coeff(l) = (*G)[l].transpose();
      // Newton sharpening; the band recursion alone loses accuracy when the
      // factor determinant has zeros near the circle.
      double best = detail::matrix_recon_sup(A, Ttarget, 128);
      MatrixPoly bestA = A;
      for (int it = 0; it < 30 && best > 1e-14 * std::max(1.0, scale); ++it) {
        if (!detail::wilson_newton_step(A, Ttarget)) break;
        double recon = detail::matrix_recon_sup(A, Ttarget, 128);
        if (recon < best) {
          best = recon;
          bestA = A;
        } else {
          break;
        }
      }
      detail::fix_factor_gauge(bestA);
      info.recon_sup = detail::matrix_recon_sup(bestA, Ttarget, 128);
      bool converged = info.recon_sup < 1e-10 * std::max(1.0, scale);
      if (converged) {
        if (info_out) *info_out = info;
        return bestA;
      }
      if (eps == 0.0) {
        eps = opt.eps_rel * scale;
        continue;
      }
      throw NoConvergenceError("matrix_fejer_riesz: Bauer iteration stalled", info.iterate_diff);
    }
    // Cholesky broke down: escalate the shift.
    eps = eps == 0.0 ? opt.eps_rel * scale : 10.0 * eps;
    if (eps > 1e-5 * scale)
      throw NotPSDError("matrix_fejer_riesz: input not factorable even after shift", {witness},
                        min_eig);
  }
  throw NoConvergenceError("matrix_fejer_riesz: shift escalation exhausted", info.iterate_diff);
}

// ---------------------------------------------------------------------------
// Scalar factorization by root pairing.

namespace detail {

inline std::vector<cd> polynomial_roots(const std::vector<cd>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) == 0.0) --deg;
  if (deg <= 0) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
  if (es.info() != Eigen::Success) throw Error("companion eigensolver failed");
  std::vector<cd> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return roots;
}

inline double scalar_recon_sup(const AnalyticPoly& q, const TrigPoly& t, int grid) {
  double sup = 0;
  for (int g = 0; g < grid; ++g) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * g / grid);
    std::vector<cd> zs{z};
    double got = std::norm(q.eval(zs));
    double want = t.eval_real(std::span<const cd>(zs.data(), 1));
    sup = std::max(sup, std::abs(got - want));
  }
  return sup;
}

}  // namespace detail

struct ScalarFactorInfo {
  int effective_degree = 0;
  bool used_bauer_fallback = false;
  double recon_sup = 0.0;
  double grid_min = 0.0;
};

inline AnalyticPoly scalar_fejer_riesz(const TrigPoly& tin, double neg_tol = 1e-9,
                                       ScalarFactorInfo* info_out = nullptr) {
  if (tin.nvars() != 1) throw DegreeError("scalar_fejer_riesz expects one variable");
  TrigPoly t = tin;
  t.symmetrize();
  ScalarFactorInfo info;

  double scale = std::max(t.coeff_one_norm(), 1e-30);
  double grid_min = std::numeric_limits<double>::infinity();
  const int grid = 1024;
  for (int g = 0; g < grid; ++g) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * g / grid);
    std::vector<cd> zs{z};
    grid_min = std::min(grid_min, t.eval_real(std::span<const cd>(zs.data(), 1)));
  }
  info.grid_min = grid_min;
  if (grid_min < -neg_tol * std::max(1.0, scale))
    throw NegativeInputError("scalar_fejer_riesz: input negative on the torus", grid_min);

  // effective degree, ignoring coefficients at the noise floor
  int n = 0;
  for (const auto& [idx, c] : t.coeffs())
    if (std::abs(c) > 1e-12 * scale) n = std::max(n, std::abs(idx[0]));
  info.effective_degree = n;

  if (n == 0) {
    double c0 = std::max(0.0, t.coeff(MultiIndex{0}).real());
    AnalyticPoly q = AnalyticPoly::constant(1, std::sqrt(c0));
    if (info_out) *info_out = info;
    return q;
  }

  // roots of P(z) = z^n t(z)
  std::vector<cd> P(2 * n + 1, cd(0.0));
  for (const auto& [idx, c] : t.coeffs())
    if (idx[0] >= -n && idx[0] <= n) P[idx[0] + n] += c;
  std::vector<cd> roots = detail::polynomial_roots(P);

  // Pair roots (u, 1/conj(u)); near-circle leftovers are double circle zeros.
  const double band = 1e-7;
  std::vector<bool> used(roots.size(), false);
  std::vector<cd> selected;
  // outside roots first, largest modulus first (deterministic order)
  std::vector<int> order(roots.size());
  for (size_t i = 0; i < roots.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ma = std::abs(roots[a]), mb = std::abs(roots[b]);
    if (ma != mb) return ma > mb;
    return std::arg(roots[a]) < std::arg(roots[b]);
  });
  for (int i : order) {
    if (used[i]) continue;
    double m = std::abs(roots[i]);
    if (m <= 1.0 + band * (1.0 + m)) continue;  // not clearly outside
    cd target = 1.0 / std::conj(roots[i]);
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < roots.size(); ++j) {
      if (used[j] || static_cast<int>(j) == i) continue;
      double d = std::abs(roots[j] - target);
      if (d < bestd) {
        bestd = d;
        best = static_cast<int>(j);
      }
    }
    used[i] = true;
    if (best >= 0) {
      used[best] = true;
      selected.push_back(0.5 * (roots[i] + 1.0 / std::conj(roots[best])));
    } else {
      selected.push_back(roots[i]);
    }
  }
  // leftover near-circle roots: group angularly, keep one projection per pair
  std::vector<int> leftover;
  for (size_t i = 0; i < roots.size(); ++i)
    if (!used[i]) leftover.push_back(static_cast<int>(i));
  while (leftover.size() >= 2) {
    int i = leftover.front();
    cd ui = roots[i] / std::abs(roots[i]);
    int bestpos = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (size_t k2 = 1; k2 < leftover.size(); ++k2) {
      cd uj = roots[leftover[k2]] / std::abs(roots[leftover[k2]]);
      double d = std::abs(uj - ui);
      if (d < bestd) {
        bestd = d;
        bestpos = static_cast<int>(k2);
      }
    }
    cd uj = roots[leftover[bestpos]] / std::abs(roots[leftover[bestpos]]);
    cd mid = ui + uj;
    selected.push_back(std::abs(mid) < 1e-12 ? ui : mid / std::abs(mid));
    leftover.erase(leftover.begin() + bestpos);
    leftover.erase(leftover.begin());
  }

  AnalyticPoly q(1, MultiIndex{0});
  bool ok = static_cast<int>(selected.size()) == n;
  if (ok) {
    // q = c * prod(z - u), |c|^2 = |t_n| / prod|u|, phase fixed by q(0) >= 0
    std::vector<cd> qc{1.0};
    for (const cd& u : selected) {
      std::vector<cd> next(qc.size() + 1, cd(0.0));
      for (size_t i = 0; i < qc.size(); ++i) {
        next[i + 1] += qc[i];
        next[i] -= qc[i] * u;
      }
      qc = std::move(next);
    }
    double prod_mod = 1.0;
    for (const cd& u : selected) prod_mod *= std::abs(u);
    double cmag = std::sqrt(std::abs(t.coeff(MultiIndex{n})) / prod_mod);
    cd phase = qc[0] == cd(0.0) ? cd(1.0) : std::conj(qc[0] / std::abs(qc[0]));
    cd c = cmag * phase;
    q = AnalyticPoly(1, MultiIndex{n});
    for (int j = 0; j <= n; ++j) q.set_coeff(MultiIndex{j}, c * qc[j]);
    info.recon_sup = detail::scalar_recon_sup(q, t, 1024);
    ok = info.recon_sup <= 1e-8 * std::max(1.0, scale);
  }

  if (!ok) {
    // Root pairing misfired (clustered interior roots).  For strictly
    // positive inputs the Bauer route applies; run it at k = 1.
    if (grid_min <= 0) throw NegativeInputError("scalar_fejer_riesz: pairing failed", grid_min);
    MatrixTrigPoly T(1);
    for (const auto& [idx, c] : t.coeffs()) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = c;
      T.add_term(idx[0], m);
    }
    FactorInfo finfo;
    MatrixPoly A = matrix_fejer_riesz(T, {}, &finfo);
    q = AnalyticPoly(1, MultiIndex{A.degree()});
    for (int j = 0; j <= A.degree(); ++j) q.set_coeff(MultiIndex{j}, A.coeff(j)(0, 0));
    info.used_bauer_fallback = true;
    info.recon_sup = detail::scalar_recon_sup(q, t, 1024);
  }
  if (info_out) *info_out = info;
  return q;
}

// ---------------------------------------------------------------------------
// Two-squares decomposition for nonnegative degree-(n,1) trig polynomials:
// t = t0(z1) + z2 t1(z1) + conj(z2 t1(z1)) with t0 >= 2|t1| embeds into the
// 2x2 matrix polynomial T(z1) = [[t0/2, t1], [t1~, t0/2]], whose spectral
// factor A gives E = A(z1) [1; z2] with ||E||^2 = t on T^2.

struct LemmaInfo {
  FactorInfo factor;
  double recon_sup = 0.0;
  double margin_min = 0.0;  // min over the grid of t0 - 2|t1|
};

inline VectorPoly lemma_two_squares(const TrigPoly& tin, double tol = 1e-9,
                                    LemmaInfo* info_out = nullptr,
                                    const BauerOptions& bopt = {}) {
  if (tin.nvars() != 2) throw DegreeError("lemma_two_squares expects two variables");
  TrigPoly t = tin;
  t.symmetrize();
  if (t.laurent_degree(1) > 1)
    throw DegreeError("lemma_two_squares: z2-degree of t exceeds 1");

  // slices t0 (z2-exponent 0) and t1 (z2-exponent +1), Laurent in z1
  std::map<int, cd> t0, t1;
  for (const auto& [idx, c] : t.coeffs()) {
    if (idx[1] == 0) t0[idx[0]] = c;
    if (idx[1] == 1) t1[idx[0]] = c;
  }
  auto eval_slice = [](const std::map<int, cd>& s, cd z) {
    cd v = 0.0;
    for (const auto& [j, c] : s) v += c * (j >= 0 ? std::pow(z, j) : std::pow(1.0 / z, -j));
    return v;
  };

  LemmaInfo info;
  double scale = std::max(t.coeff_one_norm(), 1e-30);
  double margin = std::numeric_limits<double>::infinity();
  cd witness = 1.0;
  for (int g = 0; g < 1024; ++g) {
    cd z = std::polar(1.0, 2.0 * std::numbers::pi * g / 1024);
    double m = eval_slice(t0, z).real() - 2.0 * std::abs(eval_slice(t1, z));
    if (m < margin) {
      margin = m;
      witness = z;
    }
  }
  info.margin_min = margin;
  if (margin < -tol * std::max(1.0, scale))
    throw NotPSDError("lemma_two_squares: t0 >= 2|t1| fails on the torus", {witness}, margin);

  MatrixTrigPoly T(2);
  int n = t.laurent_degree(0);
  for (int d = -n; d <= n; ++d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    auto get = [](const std::map<int, cd>& s, int j) {
      auto it = s.find(j);
      return it == s.end() ? cd(0.0) : it->second;
    };
    m(0, 0) = 0.5 * get(t0, d);
    m(1, 1) = 0.5 * get(t0, d);
    m(0, 1) = get(t1, d);
    m(1, 0) = std::conj(get(t1, -d));
    if (m.cwiseAbs().maxCoeff() == 0.0) continue;
    T.add_term(d, m);
  }
  T.symmetrize();

  MatrixPoly A = matrix_fejer_riesz(T, bopt, &info.factor);

  VectorPoly E(2, MultiIndex{n, 1});
  for (int i = 0; i < 2; ++i) {
    AnalyticPoly e(2, MultiIndex{n, 1});
    for (int j = 0; j <= A.degree(); ++j) {
      e.add_coeff(MultiIndex{j, 0}, A.coeff(j)(i, 0));
      e.add_coeff(MultiIndex{j, 1}, A.coeff(j)(i, 1));
    }
    E.push_back(e);
  }

  TrigPoly diff = E.norm_sq_laurent() - t;
  info.recon_sup = 0;
  for (const auto& [idx, c] : diff.coeffs()) info.recon_sup += std::abs(c);
  if (info_out) *info_out = info;
  return E;
}

}  // namespace aglercert
