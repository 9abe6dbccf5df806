#pragma once

#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "aglercert/fejer_riesz.hpp"
#include "aglercert/gram.hpp"
#include "aglercert/poly.hpp"

// Sum-of-squares search for strictly positive two-variable trigonometric
// polynomials, and the monomial-multiplier escalation: when t of degree
// (n,m) admits no square decomposition over the (n,m) monomial box, the box
// is enlarged to (n+r, m+s) diagonal by diagonal until the Gram search
// succeeds.  For z2-degree-one inputs the matrix spectral factorization
// route settles the question at (0,0) with exactly two squares, before any
// Gram solve is attempted.

namespace aglercert {

struct SosOptions {
  int positivity_grid = 256;
  double conditioning_warn = 1e-6;
  double residual_tol = 1e-9;  // Laurent residual of ||E||^2 - t
  SolveOptions solver;
  bool parallel_escalation = true;
};

struct TrigSosResult {
  bool feasible = false;
  VectorPoly E{2, MultiIndex{0, 0}};
  GramCertificate gram;
  double residual = std::numeric_limits<double>::infinity();
  double grid_min = 0.0;
  bool conditioning_warning = false;
  SolveEvidence evidence;
};

namespace detail {

inline double torus_grid_min(const TrigPoly& t, int grid) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      std::vector<cd> z{std::polar(1.0, 2.0 * std::numbers::pi * i / grid),
                        std::polar(1.0, 2.0 * std::numbers::pi * j / grid)};
      m = std::min(m, t.eval_real(std::span<const cd>(z.data(), z.size())));
    }
  return m;
}

inline std::vector<MultiIndex> box_basis(const MultiIndex& box) {
  std::vector<MultiIndex> basis;
  if (!box.nonneg()) return basis;
  std::vector<int> idx(box.size(), 0);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == box.size()) {
      MultiIndex m = MultiIndex::zeros(box.size());
      for (int q = 0; q < box.size(); ++q) m[q] = idx[q];
      basis.push_back(m);
      return;
    }
    for (idx[v] = 0; idx[v] <= box[v]; ++idx[v]) self(self, v + 1);
  };
  rec(rec, 0);
  return basis;
}

// Constraints matching every Laurent coefficient of t over the given basis.
inline AffineConstraintSystem sos_system(const TrigPoly& t, const std::vector<MultiIndex>& basis) {
  AffineConstraintSystem sys;
  std::map<MultiIndex, LinearConstraint> by_delta;
  const int k = static_cast<int>(basis.size());
  for (int b = 0; b < k; ++b)
    for (int g = 0; g < k; ++g) {
      MultiIndex delta = basis[g] - basis[b];
      if (delta.negated() < delta) continue;
      by_delta[delta].terms.push_back({0, b, g, cd(1.0)});
    }
  for (auto& [delta, c] : by_delta) {
    c.rhs = t.coeff(delta);
    sys.constraints.push_back(std::move(c));
  }
  // Laurent support of t beyond the reachable difference set is a hard
  // inconsistency; surface it as an empty constraint.
  for (const auto& [idx, v] : t.coeffs()) {
    if (idx.negated() < idx) continue;
    if (!by_delta.count(idx)) sys.constraints.push_back({{}, v});
  }
  return sys;
}

inline double laurent_residual(const VectorPoly& E, const TrigPoly& t) {
  TrigPoly diff = E.norm_sq_laurent() - t;
  double m = 0;
  for (const auto& [idx, c] : diff.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace detail

inline TrigSosResult trig_sos(const TrigPoly& tin, std::pair<int, int> search_degree,
                              const SosOptions& opt = {}) {
  if (tin.nvars() != 2) throw DegreeError("trig_sos expects two variables");
  TrigPoly t = tin;
  t.symmetrize();

  TrigSosResult out;
  out.grid_min = detail::torus_grid_min(t, opt.positivity_grid);
  if (out.grid_min <= 0.0)
    throw NegativeInputError("trig_sos: input not strictly positive on the torus grid",
                             out.grid_min);
  out.conditioning_warning = out.grid_min < opt.conditioning_warn;

  MultiIndex box{search_degree.first, search_degree.second};
  std::vector<MultiIndex> basis = detail::box_basis(box);
  auto res = solve_feasibility(detail::sos_system(t, basis), {{basis}}, opt.solver);
  out.evidence = res.evidence;
  if (!res.feasible) return out;

  out.gram = res.blocks[0];
  out.E = psd_factor(out.gram, 2, box);
  out.residual = detail::laurent_residual(out.E, t);
  out.feasible = out.residual <= opt.residual_tol;
  if (!out.feasible) out.evidence.message = "factored residual above tolerance";
  return out;
}

// Re-project the Gram matrix of an explicit decomposition onto the affine
// coefficient-matching set.  A couple of warm-started sweeps push an E with
// solver- or factorization-level error down to near machine precision, which
// keeps the later H search consistent.
inline VectorPoly refine_sos(const VectorPoly& E, const TrigPoly& t, double* residual_out = nullptr) {
  std::vector<MultiIndex> basis = detail::box_basis(E.box());
  GramCertificate G = gram_of_vector(E, basis);
  SolveOptions opt;
  opt.max_iterations = 40;
  opt.polish_every = 10;
  std::vector<Eigen::MatrixXcd> warm{G.matrix};
  auto res = solve_feasibility(detail::sos_system(t, basis), {{basis}}, opt, &warm);
  VectorPoly cand = psd_factor(res.blocks[0], E.nvars(), E.box());
  double before = detail::laurent_residual(E, t);
  double after = detail::laurent_residual(cand, t);
  if (after < before) {
    if (residual_out) *residual_out = after;
    return cand;
  }
  if (residual_out) *residual_out = before;
  return E;
}

// view E at a larger degree box (no reflection semantics attached)
inline VectorPoly pad_to(const VectorPoly& E, const MultiIndex& box) {
  VectorPoly out(E.nvars(), box);
  for (const auto& e : E.entries()) out.push_back(e.viewed_at(box));
  return out;
}

struct MultiplierAttempt {
  int r = 0, s = 0;
  std::string path;  // "lemma" or "gram"
  bool success = false;
  double residual = std::numeric_limits<double>::infinity();
  double best_solver_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::string message;
};

struct MultiplierResult {
  bool found = false;
  int r = 0, s = 0;
  VectorPoly E{2, MultiIndex{0, 0}};
  std::string path;
  double residual = std::numeric_limits<double>::infinity();
  double eps_shift = 0.0;
  bool conditioning_warning = false;
  std::vector<MultiplierAttempt> attempts;  // in search order
};

// Search order: r+s ascending, then r ascending.  max_steps caps r+s.
inline MultiplierResult multiplier_search(const TrigPoly& tin, std::pair<int, int> degree_nm,
                                          int max_steps, const SosOptions& opt = {}) {
  TrigPoly t = tin;
  t.symmetrize();
  MultiplierResult out;
  const int n = degree_nm.first, m = degree_nm.second;

  double grid_min = detail::torus_grid_min(t, opt.positivity_grid);
  if (grid_min <= 0.0)
    throw NegativeInputError("multiplier_search: input not strictly positive", grid_min);
  out.conditioning_warning = grid_min < opt.conditioning_warn;

  if (t.laurent_degree(1) <= 1) {
    MultiplierAttempt att;
    att.path = "lemma";
    try {
      LemmaInfo info;
      VectorPoly E = lemma_two_squares(t, 1e-9, &info);
      double res = 0;
      E = refine_sos(E, t, &res);
      att.residual = res;
      att.success = res <= std::max(opt.residual_tol, 4.0 * info.factor.eps_shift);
      if (att.success) {
        out.attempts.push_back(att);
        out.found = true;
        out.r = 0;
        out.s = 0;
        out.E = E.box() == MultiIndex{n, m} ? E : pad_to(E, MultiIndex{n, m});
        out.path = "lemma";
        out.residual = res;
        out.eps_shift = info.factor.eps_shift;
        return out;
      }
    } catch (const Error& e) {
      att.message = e.what();
    }
    out.attempts.push_back(att);  // fall through to the Gram escalation
  }

  auto run_one = [&](int r, int s) {
    MultiplierAttempt att;
    att.r = r;
    att.s = s;
    att.path = "gram";
    TrigSosResult res = trig_sos(t, {n + r, m + s}, opt);
    att.success = res.feasible;
    att.residual = res.residual;
    att.best_solver_residual = res.evidence.best_residual;
    att.iterations = res.evidence.iterations;
    att.message = res.evidence.message;
    return std::make_pair(att, res);
  };

  for (int d = 0; d <= max_steps; ++d) {
    std::vector<std::pair<int, int>> diag;
    for (int r = 0; r <= d; ++r) diag.push_back({r, d - r});
    std::vector<std::pair<MultiplierAttempt, TrigSosResult>> results(diag.size());
    if (opt.parallel_escalation && diag.size() > 1) {
      std::vector<std::future<std::pair<MultiplierAttempt, TrigSosResult>>> futs;
      for (auto [r, s] : diag)
        futs.push_back(std::async(std::launch::async, run_one, r, s));
      for (size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
    } else {
      for (size_t i = 0; i < diag.size(); ++i) results[i] = run_one(diag[i].first, diag[i].second);
    }
    // merge in search order, not completion order
    for (auto& [att, res] : results) {
      out.attempts.push_back(att);
      if (att.success && !out.found) {
        out.found = true;
        out.r = att.r;
        out.s = att.s;
        out.E = res.E;
        out.path = "gram";
        out.residual = res.residual;
      }
    }
    if (out.found) return out;
  }
  return out;  // Exhausted: attempts carry the evidence bundle
}

}  // namespace aglercert
