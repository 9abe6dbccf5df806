#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "aglercert/hermitian.hpp"
#include "aglercert/poly.hpp"

// Gram-matrix feasibility: find Hermitian PSD blocks satisfying a list of
// affine coefficient-matching constraints.
//
// The solver is Dykstra's alternating projection between the affine subspace
// and the product of PSD cones.  Hermitian blocks are coordinatized over an
// orthonormal real basis (diagonal entries, sqrt(2)-scaled off-diagonal real
// and imaginary parts) so both projections are exact.  Constraints split into
// independent components (union-find over shared coordinates); each component
// carries its own precomputed least-squares factorization.
//
// Plain alternating projections converge to the intersection but stall at a
// few digits near low-rank solutions, so the loop periodically polishes: it
// freezes the numerical-rank face of the current iterate and solves the
// affine system restricted to that face by least squares.  A consistent
// system on the right face finishes at machine precision.
//
// Infeasibility is never certified, only evidenced by the best residual and
// the iteration trace.
// TODO: dual certificate (separating functional) for Infeasible outcomes.

namespace aglercert {

struct GramCertificate {
  std::vector<MultiIndex> basis;  // sorted, distinct
  Eigen::MatrixXcd matrix;        // Hermitian PSD over the basis
  double psd_defect = 0.0;        // most negative eigenvalue encountered

  bool hermitian_ok(double tol = 1e-12) const {
    return matrix.rows() == 0 || (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }
  bool basis_ok() const {
    for (size_t i = 0; i + 1 < basis.size(); ++i)
      if (!(basis[i] < basis[i + 1])) return false;
    return static_cast<int>(basis.size()) == matrix.rows();
  }
};

struct ConstraintTerm {
  int block;
  int row, col;
  cd coeff;
};

// sum over terms of coeff * X_block[row, col] = rhs; the Hermitian structure
// of the blocks supplies the conjugate counterpart.
struct LinearConstraint {
  std::vector<ConstraintTerm> terms;
  cd rhs;
};

struct AffineConstraintSystem {
  std::vector<LinearConstraint> constraints;
};

struct SolveOptions {
  int max_iterations = 50000;
  double success_tol = 1e-10;   // combined residual for success
  int polish_every = 250;
  double rank_tol = 1e-9;       // relative eigenvalue cut for the face polish
  double drop_tol = 1e-9;       // empty constraints with |rhs| below this are floor
  int lm_rounds = 40;           // Gauss-Newton rescue budget per trigger
};

struct SolveEvidence {
  int iterations = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  double fixed_floor = 0.0;  // residual from constraints touching no variable
  std::vector<double> residual_trace;
  std::string message;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<GramCertificate> blocks;
  SolveEvidence evidence;
};

namespace detail {

// Real coordinates of a Hermitian matrix stack.
struct BlockLayout {
  std::vector<int> sizes;
  std::vector<int> offsets;
  int total = 0;

  explicit BlockLayout(const std::vector<int>& s) : sizes(s) {
    for (int k : sizes) {
      offsets.push_back(total);
      total += k * k;  // real dimension of k x k Hermitian matrices
    }
  }
  // coordinate indices: diagonal i -> (i,i); off-diagonal i<j stores
  // sqrt(2)Re at one slot and sqrt(2)Im at the next.
  int coord_diag(int b, int i) const { return offsets[b] + i; }
  int coord_off(int b, int i, int j, bool imag) const {
    int k = sizes[b];
    // packed index of (i,j), i<j in the strict upper triangle
    int pos = i * k - i * (i + 1) / 2 + (j - i - 1);
    return offsets[b] + k + 2 * pos + (imag ? 1 : 0);
  }

  void to_coords(const std::vector<Eigen::MatrixXcd>& X, Eigen::VectorXd& x) const {
    x.resize(total);
    for (size_t b = 0; b < sizes.size(); ++b) {
      int k = sizes[b];
      for (int i = 0; i < k; ++i) x(coord_diag(b, i)) = X[b](i, i).real();
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
          x(coord_off(b, i, j, false)) = std::numbers::sqrt2 * X[b](i, j).real();
          x(coord_off(b, i, j, true)) = std::numbers::sqrt2 * X[b](i, j).imag();
        }
    }
  }
  void from_coords(const Eigen::VectorXd& x, std::vector<Eigen::MatrixXcd>& X) const {
    X.resize(sizes.size());
    for (size_t b = 0; b < sizes.size(); ++b) {
      int k = sizes[b];
      X[b] = Eigen::MatrixXcd::Zero(k, k);
      for (int i = 0; i < k; ++i) X[b](i, i) = x(coord_diag(b, i));
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
          cd v(x(coord_off(b, i, j, false)) / std::numbers::sqrt2,
               x(coord_off(b, i, j, true)) / std::numbers::sqrt2);
          X[b](i, j) = v;
          X[b](j, i) = std::conj(v);
        }
    }
  }
};

struct RealRow {
  std::vector<std::pair<int, double>> entries;  // (coordinate, weight)
  double rhs = 0.0;
};

// Expand one complex constraint into real rows over Hermitian coordinates.
inline void realify_constraint(const LinearConstraint& c, const BlockLayout& layout,
                               std::vector<RealRow>& rows) {
  RealRow re, im;
  auto add = [&](int coord, cd w) {
    // contribution w * x_coord to the complex constraint value
    if (w.real() != 0.0) re.entries.push_back({coord, w.real()});
    if (w.imag() != 0.0) im.entries.push_back({coord, w.imag()});
  };
  for (const auto& t : c.terms) {
    int k = layout.sizes[t.block];
    (void)k;
    if (t.row == t.col) {
      add(layout.coord_diag(t.block, t.row), t.coeff);
    } else if (t.row < t.col) {
      // X[i,j] = (u + i w)/sqrt(2)
      add(layout.coord_off(t.block, t.row, t.col, false), t.coeff / std::numbers::sqrt2);
      add(layout.coord_off(t.block, t.row, t.col, true),
          t.coeff * cd(0.0, 1.0) / std::numbers::sqrt2);
    } else {
      // X[j,i] with j>i: conjugate coordinates
      add(layout.coord_off(t.block, t.col, t.row, false), t.coeff / std::numbers::sqrt2);
      add(layout.coord_off(t.block, t.col, t.row, true),
          t.coeff * cd(0.0, -1.0) / std::numbers::sqrt2);
    }
  }
  auto fold = [](RealRow& r) {
    std::sort(r.entries.begin(), r.entries.end());
    std::vector<std::pair<int, double>> out;
    for (auto& [coord, w] : r.entries) {
      if (!out.empty() && out.back().first == coord)
        out.back().second += w;
      else
        out.push_back({coord, w});
    }
    r.entries = std::move(out);
  };
  re.rhs = c.rhs.real();
  im.rhs = c.rhs.imag();
  fold(re);
  fold(im);
  if (!re.entries.empty()) rows.push_back(std::move(re));
  if (!im.entries.empty()) rows.push_back(std::move(im));
}

struct Component {
  std::vector<int> coords;                 // global coordinate ids
  Eigen::MatrixXd A;                       // rows x local coords (unit-norm rows)
  Eigen::VectorXd b;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
};

class AffineProjector {
 public:
  AffineProjector(const std::vector<RealRow>& rows, int total_coords) {
    // union-find over coordinates
    parent_.resize(total_coords);
    std::iota(parent_.begin(), parent_.end(), 0);
    for (const auto& r : rows)
      for (size_t i = 1; i < r.entries.size(); ++i)
        unite(r.entries[0].first, r.entries[i].first);
    std::map<int, std::vector<int>> rows_by_root;
    for (size_t ri = 0; ri < rows.size(); ++ri)
      rows_by_root[find(rows[ri].entries[0].first)].push_back(static_cast<int>(ri));

    for (auto& [root, ridx] : rows_by_root) {
      Component comp;
      std::map<int, int> local;
      for (int ri : ridx)
        for (const auto& [coord, w] : rows[ri].entries)
          if (!local.count(coord)) {
            local[coord] = static_cast<int>(comp.coords.size());
            comp.coords.push_back(coord);
          }
      comp.A = Eigen::MatrixXd::Zero(static_cast<int>(ridx.size()),
                                     static_cast<int>(comp.coords.size()));
      comp.b = Eigen::VectorXd::Zero(static_cast<int>(ridx.size()));
      for (size_t r = 0; r < ridx.size(); ++r) {
        const RealRow& row = rows[ridx[r]];
        double norm = 0;
        for (const auto& [coord, w] : row.entries) norm += w * w;
        norm = std::sqrt(norm);
        for (const auto& [coord, w] : row.entries)
          comp.A(static_cast<int>(r), local[coord]) = w / norm;
        comp.b(static_cast<int>(r)) = row.rhs / norm;
      }
      comp.cod.compute(comp.A);
      components_.push_back(std::move(comp));
    }
  }

  // orthogonal projection onto {x : A x = b} (least-squares projection when
  // the rows are inconsistent)
  void project(Eigen::VectorXd& x) const {
    for (const auto& comp : components_) {
      Eigen::VectorXd xl(comp.coords.size());
      for (size_t i = 0; i < comp.coords.size(); ++i) xl(i) = x(comp.coords[i]);
      Eigen::VectorXd r = comp.A * xl - comp.b;
      Eigen::VectorXd corr = comp.cod.solve(r);
      xl -= corr;
      for (size_t i = 0; i < comp.coords.size(); ++i) x(comp.coords[i]) = xl(i);
    }
  }

  double residual(const Eigen::VectorXd& x) const {
    double m = 0;
    for (const auto& comp : components_) {
      Eigen::VectorXd xl(comp.coords.size());
      for (size_t i = 0; i < comp.coords.size(); ++i) xl(i) = x(comp.coords[i]);
      Eigen::VectorXd r = comp.A * xl - comp.b;
      if (r.size()) m = std::max(m, r.cwiseAbs().maxCoeff());
    }
    return m;
  }

 private:
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

  std::vector<int> parent_;
  std::vector<Component> components_;
};

}  // namespace detail

// One basis description per block.
struct BlockSpec {
  std::vector<MultiIndex> basis;
};

inline FeasibilityResult solve_feasibility(const AffineConstraintSystem& system,
                                           const std::vector<BlockSpec>& blocks,
                                           const SolveOptions& opt = {},
                                           const std::vector<Eigen::MatrixXcd>* warm_start =
                                               nullptr) {
  FeasibilityResult result;
  std::vector<int> sizes;
  for (const auto& b : blocks) {
    for (size_t i = 0; i + 1 < b.basis.size(); ++i)
      if (!(b.basis[i] < b.basis[i + 1])) throw DegreeError("block basis must be sorted, distinct");
    sizes.push_back(static_cast<int>(b.basis.size()));
  }
  detail::BlockLayout layout(sizes);

  // constraints that touch no variable can only contribute a fixed residual
  std::vector<detail::RealRow> rows;
  double fixed_floor = 0.0;
  for (const auto& c : system.constraints) {
    bool touches = false;
    for (const auto& t : c.terms)
      if (sizes[t.block] > 0) touches = true;
    if (!touches || c.terms.empty()) {
      fixed_floor = std::max(fixed_floor, std::abs(c.rhs));
      continue;
    }
    detail::realify_constraint(c, layout, rows);
  }
  result.evidence.fixed_floor = fixed_floor;
  if (fixed_floor > opt.drop_tol) {
    result.evidence.best_residual = fixed_floor;
    result.evidence.message = "inconsistent constraints touch no variable";
    return result;
  }

  detail::AffineProjector proj(rows, layout.total);

  std::vector<Eigen::MatrixXcd> X(sizes.size());
  for (size_t b = 0; b < sizes.size(); ++b)
    X[b] = warm_start && warm_start->size() == sizes.size()
               ? (*warm_start)[b]
               : Eigen::MatrixXcd::Zero(sizes[b], sizes[b]);
  Eigen::VectorXd x;
  layout.to_coords(X, x);
  Eigen::VectorXd correction = Eigen::VectorXd::Zero(layout.total);

  double best_res = std::numeric_limits<double>::infinity();
  std::vector<Eigen::MatrixXcd> best_X = X;
  double best_defect = 0.0;

  auto try_polish = [&]() {
    // freeze the numerical-rank face of the current PSD iterate and solve
    // the affine part by least squares on that face
    std::vector<Eigen::MatrixXcd> W(sizes.size());
    std::vector<int> ranks(sizes.size());
    int ycoords = 0;
    for (size_t b = 0; b < sizes.size(); ++b) {
      if (sizes[b] == 0) {
        ranks[b] = 0;
        W[b] = Eigen::MatrixXcd::Zero(0, 0);
        continue;
      }
      auto [w, V] = hermitian_eigen(X[b]);
      double wmax = w.size() ? std::max(0.0, w.maxCoeff()) : 0.0;
      int r = 0;
      for (int i = 0; i < w.size(); ++i)
        if (w(i) > opt.rank_tol * std::max(wmax, 1e-300)) ++r;
      ranks[b] = r;
      W[b] = V.rightCols(r);  // eigenvalues ascending: face spans the top ones
      ycoords += r * r;
    }
    if (ycoords == 0) return;
    // reduced constraints: value = sum_t coeff * (W Y W*)[row,col]
    detail::BlockLayout ylayout(ranks);
    std::vector<detail::RealRow> yrows;
    for (const auto& c : system.constraints) {
      LinearConstraint rc;
      rc.rhs = c.rhs;
      bool any = false;
      std::vector<Eigen::MatrixXcd> D(sizes.size());
      for (size_t b = 0; b < sizes.size(); ++b)
        D[b] = Eigen::MatrixXcd::Zero(ranks[b], ranks[b]);
      for (const auto& t : c.terms) {
        if (ranks[t.block] == 0) continue;
        // coeff * (W Y W*)[row,col] = sum_ab Y[a,b] * coeff*W(row,a)*conj(W(col,b))
        D[t.block] +=
            t.coeff * (W[t.block].row(t.row).transpose() * W[t.block].row(t.col).conjugate());
        any = true;
      }
      if (!any) continue;
      for (size_t b = 0; b < sizes.size(); ++b)
        for (int a = 0; a < ranks[b]; ++a)
          for (int bb = 0; bb < ranks[b]; ++bb)
            if (std::abs(D[b](a, bb)) > 0.0)
              rc.terms.push_back({static_cast<int>(b), a, bb, D[b](a, bb)});
      if (!rc.terms.empty()) detail::realify_constraint(rc, ylayout, yrows);
    }
    if (yrows.empty()) return;
    detail::AffineProjector yproj(yrows, ylayout.total);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(ylayout.total);
    yproj.project(y);  // min-norm least-squares solution on the face
    std::vector<Eigen::MatrixXcd> Y;
    ylayout.from_coords(y, Y);
    std::vector<Eigen::MatrixXcd> cand(sizes.size());
    double defect = 0.0;
    for (size_t b = 0; b < sizes.size(); ++b) {
      if (ranks[b] == 0) {
        cand[b] = Eigen::MatrixXcd::Zero(sizes[b], sizes[b]);
        continue;
      }
      auto [P, d] = psd_project(Y[b]);
      defect = std::min(defect, d);
      cand[b] = W[b] * P * W[b].adjoint();
      cand[b] = 0.5 * (cand[b] + cand[b].adjoint());
    }
    Eigen::VectorXd cx;
    layout.to_coords(cand, cx);
    double res = std::max({proj.residual(cx), -defect, fixed_floor});
    if (res < best_res) {
      best_res = res;
      best_X = cand;
      best_defect = defect;
    }
  };

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    // affine projection
    proj.project(x);
    // cone projection with Dykstra correction
    Eigen::VectorXd y = x + correction;
    std::vector<Eigen::MatrixXcd> Xy;
    layout.from_coords(y, Xy);
    double defect = 0.0;
    for (size_t b = 0; b < sizes.size(); ++b) {
      if (sizes[b] == 0) continue;
      auto [P, d] = psd_project(Xy[b]);
      defect = std::min(defect, d);
      Xy[b] = P;
    }
    Eigen::VectorXd xc;
    layout.to_coords(Xy, xc);
    correction = y - xc;
    x = xc;
    X = Xy;

    double res = std::max(proj.residual(x), fixed_floor);
    if (res < best_res) {
      best_res = res;
      best_X = X;
      best_defect = 0.0;
    }
    if ((it & (it - 1)) == 0 || it % 1000 == 0) result.evidence.residual_trace.push_back(res);
    if (best_res < opt.success_tol) break;
    if (opt.polish_every > 0 && it > 0 && it % opt.polish_every == 0) {
      try_polish();
      if (best_res < opt.success_tol) break;
    }
  }
  // a final face polish sharpens even successful runs: a consistent system
  // restricted to the right face finishes at machine precision
  if (opt.polish_every > 0) try_polish();

  result.evidence.iterations = it;
  result.evidence.best_residual = best_res;
  result.feasible = best_res < opt.success_tol;
  if (!result.feasible && result.evidence.message.empty())
    result.evidence.message = "iteration limit";

  for (size_t b = 0; b < sizes.size(); ++b) {
    GramCertificate g;
    g.basis = blocks[b].basis;
    g.matrix = 0.5 * (best_X[b] + best_X[b].adjoint());
    g.psd_defect = std::min(0.0, best_defect);
    result.blocks.push_back(std::move(g));
  }
  return result;
}

// Split a PSD Gram matrix into explicit squares: entries sqrt(l_i) * u_i^* v(z)
// over the basis monomials, one per eigenvalue above the numerical-rank cut.
inline VectorPoly psd_factor(const GramCertificate& G, int nvars, const MultiIndex& box) {
  if (!G.basis_ok()) throw DegreeError("psd_factor: basis not sorted/distinct");
  const int k = static_cast<int>(G.basis.size());
  VectorPoly F(nvars, box);
  if (k == 0) return F;
  auto [w, V] = hermitian_eigen(G.matrix);
  double wmax = std::max(0.0, w.maxCoeff());
  if (w.minCoeff() < -1e-9 * std::max(wmax, 1e-300) - 1e-15)
    throw NotPSDError("psd_factor: matrix has a negative eigenvalue", {}, w.minCoeff());
  for (int i = k - 1; i >= 0; --i) {  // descending eigenvalues
    if (w(i) <= 1e-9 * std::max(wmax, 1e-300)) break;
    double s = std::sqrt(w(i));
    AnalyticPoly f(nvars, box);
    for (int j = 0; j < k; ++j) f.add_coeff(G.basis[j], s * std::conj(V(j, i)));
    F.push_back(f);
  }
  return F;
}

inline VectorPoly psd_factor(const GramCertificate& G, int nvars) {
  MultiIndex box = MultiIndex::zeros(nvars);
  for (const auto& idx : G.basis)
    for (int v = 0; v < nvars; ++v) box[v] = std::max(box[v], idx[v]);
  return psd_factor(G, nvars, box);
}

// Gram matrix of an explicit vector of polynomials over a basis covering its
// support: G[b,g] = sum_i F_i[g] conj(F_i[b]), so v(z)^* G v(z) = ||F||^2.
inline GramCertificate gram_of_vector(const VectorPoly& F, const std::vector<MultiIndex>& basis) {
  GramCertificate G;
  G.basis = basis;
  const int k = static_cast<int>(basis.size());
  std::map<MultiIndex, int> pos;
  for (int i = 0; i < k; ++i) pos[basis[i]] = i;
  G.matrix = Eigen::MatrixXcd::Zero(k, k);
  for (const auto& f : F.entries())
    for (const auto& [b, cb] : f.coeffs())
      for (const auto& [g, cg] : f.coeffs()) {
        auto ib = pos.find(b), ig = pos.find(g);
        if (ib == pos.end() || ig == pos.end())
          throw DegreeError("gram_of_vector: basis does not cover the support");
        G.matrix(ib->second, ig->second) += cg * std::conj(cb);
      }
  G.matrix = 0.5 * (G.matrix + G.matrix.adjoint());
  return G;
}

}  // namespace aglercert
