#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "aglercert/herm_poly.hpp"
#include "aglercert/rng.hpp"
#include "aglercert/sos.hpp"
#include "aglercert/stability.hpp"

// Certificates for the identity
//
//   |p|^2 - |z1^r z2^s p~|^2
//       = (1-|z1|^2)||H1||^2 + (1-|z2|^2)||H2||^2 + (1-|z3|^2)||E||^2
//
// for p of degree (n,m,1) with no zeros on the closed tridisk.  The E part
// comes from a square decomposition of |a|^2-|b|^2; H1 and H2 are found by a
// Gram feasibility search over the dimensionally forced monomial boxes
// (n+r-1, m+s, 1) and (n+r, m+s-1, 1).  The rational matrix V below extends
// the isometry [p; z3 E] -> [z1^r z2^s p~; E] to a unitary-valued rational
// inner function; it is constructed and tested alongside every certificate.

namespace aglercert {

struct VCheckReport {
  double unitarity_max = 0.0;   // sup over a grid of ||V V* - I||_F
  double mapping_max = 0.0;     // relations V[a;0] and V[b;E], scaled
  double eigenvector_max = 0.0; // action on the orthogonal complement
  int grid = 0;
  int samples = 0;
};

class RationalMatrixFn {
 public:
  RationalMatrixFn(std::vector<std::vector<AnalyticPoly>> num, AnalyticPoly den_a,
                   AnalyticPoly den_c)
      : num_(std::move(num)), den_a_(std::move(den_a)), den_c_(std::move(den_c)) {}

  int size() const { return static_cast<int>(num_.size()); }
  const AnalyticPoly& numerator(int i, int j) const { return num_.at(i).at(j); }
  const AnalyticPoly& denominator_a() const { return den_a_; }
  const AnalyticPoly& denominator_c() const { return den_c_; }

  Eigen::MatrixXcd eval(cd z1, cd z2) const {
    std::vector<cd> z{z1, z2};
    cd den = den_a_.eval(z) * den_c_.eval(z);
    Eigen::MatrixXcd M(size(), size());
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) M(i, j) = num_[i][j].eval(z) / den;
    return M;
  }

 private:
  std::vector<std::vector<AnalyticPoly>> num_;
  AnalyticPoly den_a_, den_c_;
};

struct BuildVOptions {
  int stability_grid = 32;
  bool assume_a_stable = false;  // the certify pipeline has already checked p
};

inline RationalMatrixFn build_V(const AnalyticPoly& a, const AnalyticPoly& b,
                                const VectorPoly& E, int r, int s,
                                const BuildVOptions& opt = {}) {
  if (a.nvars() != 2 || b.nvars() != 2) throw DegreeError("build_V expects bivariate a, b");
  if (E.dim() < 1) throw DegreeError("build_V requires at least one square in E");
  const MultiIndex nm = a.degree();
  if (!(b.degree() == nm)) throw DegreeError("a and b must share a degree box");
  const int N = E.dim();

  AnalyticPoly atil = reflect(a, nm);
  AnalyticPoly btil = reflect(b, nm);
  MultiIndex mono{r, s};
  AnalyticPoly mono_btil = btil.shifted(mono);
  AnalyticPoly c = a + mono_btil;  // a + z1^r z2^s b~

  // E~ reflects at the padded box (n+r, m+s) regardless of E's support
  MultiIndex ebox{nm[0] + r, nm[1] + s};
  if (!ebox.dominates(E.box())) throw DegreeError("build_V: E exceeds the padded box");
  VectorPoly Epad = pad_to(E, ebox);

  if (!opt.assume_a_stable) {
    auto sa = stability_check(a, opt.stability_grid);
    if (sa.kind != StabilityKind::Stable)
      throw DenominatorZeroError("build_V: a not verifiably nonvanishing on the closed bidisk");
  }
  auto sc = stability_check(c, opt.stability_grid);
  if (sc.kind != StabilityKind::Stable)
    throw DenominatorZeroError(
        "build_V: a + z1^r z2^s b~ not verifiably nonvanishing on the closed bidisk");

  VectorPoly Etil = reflect_vector(Epad, ebox);

  // V = (1/a) [ mono b~ , E~^t ; E , (E E~^t - a(mono a~ + b) I)/c ]
  // stored over the common denominator a*c
  AnalyticPoly diag = (atil.shifted(mono) + b) * a;  // a (z1^r z2^s a~ + b)
  std::vector<std::vector<AnalyticPoly>> num(N + 1);
  num[0].resize(N + 1);
  num[0][0] = mono_btil * c;
  for (int j = 0; j < N; ++j) num[0][j + 1] = Etil.entry(j) * c;
  for (int i = 0; i < N; ++i) {
    num[i + 1].resize(N + 1);
    num[i + 1][0] = Epad.entry(i) * c;
    for (int j = 0; j < N; ++j) {
      AnalyticPoly block = Epad.entry(i) * Etil.entry(j);
      if (i == j) block = block - diag;
      num[i + 1][j + 1] = block;
    }
  }
  return RationalMatrixFn(std::move(num), a, c);
}

inline VCheckReport check_V(const RationalMatrixFn& V, const AnalyticPoly& a,
                            const AnalyticPoly& b, const VectorPoly& E, int r, int s,
                            int grid = 64, int samples = 256, std::uint64_t seed = 7) {
  VCheckReport rep;
  rep.grid = grid;
  rep.samples = samples;
  const int N = E.dim();
  const MultiIndex nm = a.degree();
  AnalyticPoly atil = reflect(a, nm);
  AnalyticPoly btil = reflect(b, nm);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N + 1, N + 1);

  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      cd z1 = std::polar(1.0, 2.0 * std::numbers::pi * i / grid);
      cd z2 = std::polar(1.0, 2.0 * std::numbers::pi * j / grid);
      Eigen::MatrixXcd M = V.eval(z1, z2);
      rep.unitarity_max = std::max(rep.unitarity_max, (M * M.adjoint() - I).norm());
    }

  Rng rng(seed);
  for (int q = 0; q < samples; ++q) {
    cd z1 = rng.torus_point(), z2 = rng.torus_point();
    std::vector<cd> z{z1, z2};
    cd mono = std::pow(z1, r) * std::pow(z2, s);
    Eigen::MatrixXcd M = V.eval(z1, z2);
    Eigen::VectorXcd Ez(N);
    for (int i = 0; i < N; ++i) Ez(i) = E.entry(i).eval(z);
    double scale = std::max(1.0, std::abs(a.eval(z)) + Ez.norm());

    Eigen::VectorXcd in1 = Eigen::VectorXcd::Zero(N + 1);
    in1(0) = a.eval(z);
    Eigen::VectorXcd want1(N + 1);
    want1(0) = mono * btil.eval(z);
    want1.tail(N) = Ez;
    rep.mapping_max = std::max(rep.mapping_max, (M * in1 - want1).norm() / scale);

    Eigen::VectorXcd in2(N + 1);
    in2(0) = b.eval(z);
    in2.tail(N) = Ez;
    Eigen::VectorXcd want2 = Eigen::VectorXcd::Zero(N + 1);
    want2(0) = mono * atil.eval(z);
    rep.mapping_max = std::max(rep.mapping_max, (M * in2 - want2).norm() / scale);

    if (N >= 2) {
      // v orthogonal to E(z): every [0; v] is an eigenvector with eigenvalue
      // -(mono a~ + b)/(a + mono b~)
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
      int pivot = 0;
      for (int i = 1; i < N; ++i)
        if (std::abs(Ez(i)) > std::abs(Ez(pivot))) pivot = i;
      int other = pivot == 0 ? 1 : 0;
      v(other) = std::conj(Ez(pivot));
      v(pivot) = -std::conj(Ez(other));
      double vn = v.norm();
      if (vn > 1e-12) {
        v /= vn;
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(N + 1);
        x.tail(N) = v;
        cd lambda = -(mono * atil.eval(z) + b.eval(z)) /
                    (a.eval(z) + mono * btil.eval(z));
        rep.eigenvector_max = std::max(rep.eigenvector_max, (M * x - lambda * x).norm());
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// H search

struct FindHResult {
  bool success = false;
  VectorPoly H1{3, MultiIndex::zeros(3)};
  VectorPoly H2{3, MultiIndex::zeros(3)};
  double residual = std::numeric_limits<double>::infinity();  // coefficient residual of the identity
  SolveEvidence evidence;
};

namespace detail {

inline MultiIndex clamped_box(int a, int b, int c) {
  return MultiIndex{std::max(a, 0), std::max(b, 0), std::max(c, 0)};
}

// target R = |p|^2 - |z1^r z2^s p~|^2 - (1-|z3|^2) ||E||^2 as mixed coefficients
inline HermPoly find_h_target(const AnalyticPoly& p, const VectorPoly& E, int r, int s) {
  AnalyticPoly ptil = reflect(p, p.degree());
  AnalyticPoly shifted = ptil.shifted(MultiIndex{r, s, 0});
  HermPoly R = HermPoly::mod_sq(p) - HermPoly::mod_sq(shifted);
  return R - HermPoly::norm_sq(E, true).times_one_minus_mod_sq(2);
}

}  // namespace detail

struct FindHSystem {
  AffineConstraintSystem system;
  std::vector<MultiIndex> B1, B2;
};

// one constraint per mixed index pair (u,v), u >= v lexicographically:
//   X1[v,u] - X1[v-e1,u-e1] + X2[v,u] - X2[v-e2,u-e2] = R[u,v]
inline FindHSystem find_h_system(const AnalyticPoly& p, const VectorPoly& E, int r, int s) {
  if (p.nvars() != 3) throw DegreeError("find_H expects a trivariate p");
  if (p.degree()[2] > 1) throw DegreeError("find_H: z3-degree exceeds 1");
  const int n = p.degree()[0], m = p.degree()[1];

  FindHSystem out;
  out.B1 = n + r - 1 < 0 ? std::vector<MultiIndex>{}
                         : detail::box_basis(MultiIndex{n + r - 1, m + s, 1});
  out.B2 = m + s - 1 < 0 ? std::vector<MultiIndex>{}
                         : detail::box_basis(MultiIndex{n + r, m + s - 1, 1});
  std::map<MultiIndex, int> pos1, pos2;
  for (size_t i = 0; i < out.B1.size(); ++i) pos1[out.B1[i]] = static_cast<int>(i);
  for (size_t i = 0; i < out.B2.size(); ++i) pos2[out.B2[i]] = static_cast<int>(i);

  HermPoly R = detail::find_h_target(p, E, r, s);

  std::vector<MultiIndex> U = detail::box_basis(MultiIndex{n + r, m + s, 1});
  for (size_t iu = 0; iu < U.size(); ++iu)
    for (size_t iv = 0; iv <= iu; ++iv) {
      const MultiIndex &u = U[iu], &v = U[iv];
      LinearConstraint c;
      auto term = [&](const std::map<MultiIndex, int>& pos, int block, const MultiIndex& row,
                      const MultiIndex& col, double sign) {
        auto ir = pos.find(row);
        auto ic = pos.find(col);
        if (ir == pos.end() || ic == pos.end()) return;
        c.terms.push_back({block, ir->second, ic->second, cd(sign)});
      };
      term(pos1, 0, v, u, 1.0);
      if (u[0] >= 1 && v[0] >= 1) term(pos1, 0, v.shifted(0, -1), u.shifted(0, -1), -1.0);
      term(pos2, 1, v, u, 1.0);
      if (u[1] >= 1 && v[1] >= 1) term(pos2, 1, v.shifted(1, -1), u.shifted(1, -1), -1.0);
      c.rhs = R.coeff({u, v});
      if (c.terms.empty() && std::abs(c.rhs) == 0.0) continue;
      out.system.constraints.push_back(std::move(c));
    }
  // any target support outside U x U is a hard inconsistency
  for (const auto& [k, val] : R.coeffs()) {
    if (k.v < k.u || k.u == k.v) {
      if (k.u.within_box(MultiIndex{n + r, m + s, 1}) && k.v.within_box(MultiIndex{n + r, m + s, 1}))
        continue;
      out.system.constraints.push_back({{}, val});
    }
  }
  return out;
}

inline FindHResult find_H(const AnalyticPoly& p, const VectorPoly& E, int r, int s,
                          const SolveOptions& opt = {}) {
  const int n = p.degree()[0], m = p.degree()[1];
  FindHSystem sys = find_h_system(p, E, r, s);
  const std::vector<MultiIndex>&B1 = sys.B1, &B2 = sys.B2;
  HermPoly R = detail::find_h_target(p, E, r, s);

  auto res = solve_feasibility(sys.system, {{B1}, {B2}}, opt);
  FindHResult out;
  out.evidence = res.evidence;
  if (!res.feasible) return out;

  out.H1 = psd_factor(res.blocks[0], 3, detail::clamped_box(n + r - 1, m + s, 1));
  out.H2 = psd_factor(res.blocks[1], 3, detail::clamped_box(n + r, m + s - 1, 1));

  HermPoly D = R - HermPoly::norm_sq(out.H1).times_one_minus_mod_sq(0) -
               HermPoly::norm_sq(out.H2).times_one_minus_mod_sq(1);
  out.residual = D.max_abs();
  out.success = true;
  return out;
}

// ---------------------------------------------------------------------------
// Certificates and verification

struct CertMetadata {
  std::string path;  // "lemma" or "gram"
  double e_residual = 0.0;
  double eps_shift = 0.0;
  double find_h_residual = 0.0;
  double find_h_solver_residual = 0.0;
  int find_h_iterations = 0;
  double grid_min = 0.0;
  bool conditioning_warning = false;
  double v_unitarity = 0.0;
  double v_mapping = 0.0;
  double v_eigenvector = 0.0;
  std::vector<MultiplierAttempt> search_trace;
  std::string stability;  // outcome of the input check at certify time
  double stability_min_modulus = 0.0;
  std::string created_at;  // empty in compare mode
};

struct AglerCertificate {
  AnalyticPoly p;
  int r = 0, s = 0;
  VectorPoly E{2, MultiIndex{0, 0}};
  VectorPoly H1{3, MultiIndex::zeros(3)};
  VectorPoly H2{3, MultiIndex::zeros(3)};
  CertMetadata metadata;
};

struct VerifyOptions {
  double tol = 1e-8;           // coefficient residual, scaled by max(1, ||p||_1^2)
  int samples = 256;
  std::uint64_t seed = 20240901;
  bool check_stability = true;
  int stability_grid = 32;
};

struct CheckEntry {
  std::string name;
  bool hard = true;
  bool pass = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Report {
  bool pass = false;
  double identity_residual = 0.0;
  double tolerance = 0.0;
  std::vector<CheckEntry> checks;
  StabilityResult stability;
  int count_e = 0, count_h1 = 0, count_h2 = 0;
};

// Adversarial: everything is recomputed from p and the certificate
// polynomials; solver state is never consulted.
inline Report verify_certificate(const AglerCertificate& cert, const VerifyOptions& opt = {}) {
  Report rep;
  const AnalyticPoly& p = cert.p;
  const int r = cert.r, s = cert.s;
  double scale = std::max(1.0, p.coeff_one_norm() * p.coeff_one_norm());
  rep.tolerance = opt.tol * scale;

  auto add = [&](CheckEntry e) { rep.checks.push_back(std::move(e)); };

  // structure
  {
    CheckEntry e{.name = "structure", .hard = true};
    std::string why;
    if (p.nvars() != 3) why = "p must be trivariate";
    else if (p.degree()[2] != 1) why = "declared degree must be (n,m,1)";
    else if (r < 0 || s < 0) why = "negative multiplier";
    else if (cert.E.nvars() != 2) why = "E must be bivariate";
    else if (cert.H1.nvars() != 3 || cert.H2.nvars() != 3) why = "H1, H2 must be trivariate";
    e.pass = why.empty();
    e.detail = why;
    add(e);
    if (!e.pass) {
      rep.pass = false;
      return rep;
    }
  }
  const int n = p.degree()[0], m = p.degree()[1];

  // degree caps: occupied degrees against the forced boxes
  {
    CheckEntry e{.name = "degree-caps", .hard = true};
    auto fits = [](const VectorPoly& F, int d0, int d1, int d2) {
      for (const auto& f : F.entries())
        for (const auto& [idx, c] : f.coeffs()) {
          if (idx[0] > d0 || idx[1] > d1) return false;
          if (idx.size() == 3 && idx[2] > d2) return false;
        }
      return true;
    };
    bool ok = fits(cert.E, n + r, m + s, 0) && fits(cert.H1, n + r - 1, m + s, 1) &&
              fits(cert.H2, n + r, m + s - 1, 1);
    e.pass = ok;
    if (!ok) e.detail = "a square exceeds its forced degree box";
    add(e);
  }

  // square counts: dimensional caps are hard
  rep.count_e = cert.E.dim();
  rep.count_h1 = cert.H1.dim();
  rep.count_h2 = cert.H2.dim();
  {
    CheckEntry e{.name = "square-count-caps", .hard = true};
    int cap_e = (n + r + 1) * (m + s + 1);
    int cap_h1 = (n + r) * (m + s + 1) * 2;
    int cap_h2 = (n + r + 1) * (m + s) * 2;
    e.pass = rep.count_e <= cap_e && rep.count_h1 <= cap_h1 && rep.count_h2 <= cap_h2;
    e.value = static_cast<double>(std::max({rep.count_e, rep.count_h1, rep.count_h2}));
    if (!e.pass) e.detail = "square count exceeds the dimensional cap";
    add(e);
  }
  {
    // reference counts for the z2-degree-one case; reported, never enforced:
    // the 4(n-1) figure degenerates at n = 1
    CheckEntry e{.name = "square-count-reference", .hard = false};
    if (m == 1 && s == 0) {
      bool match = rep.count_e <= 2 && rep.count_h2 <= 2 * (n + 1);
      e.pass = match;
      e.detail = "expected: SOS3 two squares, SOS2 at most 2(n+1), SOS1 at most 4(n-1)";
    } else {
      e.detail = "not a (n,1,1) certificate";
    }
    add(e);
  }

  // the identity, coefficientwise in (z, conj z)
  {
    AnalyticPoly ptil = reflect(p, p.degree());
    AnalyticPoly shifted = ptil.shifted(MultiIndex{r, s, 0});
    HermPoly D = HermPoly::mod_sq(p) - HermPoly::mod_sq(shifted);
    D = D - HermPoly::norm_sq(cert.E, true).times_one_minus_mod_sq(2);
    D = D - HermPoly::norm_sq(cert.H1).times_one_minus_mod_sq(0);
    D = D - HermPoly::norm_sq(cert.H2).times_one_minus_mod_sq(1);
    rep.identity_residual = D.max_abs();
    CheckEntry e{.name = "identity-coefficient-residual", .hard = true};
    e.value = rep.identity_residual;
    e.threshold = rep.tolerance;
    e.pass = e.value <= e.threshold;
    add(e);

    // pointwise residuals on T^2 x D and on D^3
    Rng rng(opt.seed);
    AnalyticPoly pt = shifted;
    double worst = 0;
    for (int q = 0; q < opt.samples; ++q) {
      bool torus = q % 2 == 0;
      std::vector<cd> z{torus ? rng.torus_point() : rng.disk_point(),
                        torus ? rng.torus_point() : rng.disk_point(), rng.disk_point()};
      double lhs = std::norm(p.eval(z)) - std::norm(pt.eval(z));
      std::vector<cd> z2{z[0], z[1]};
      double rhs = (1.0 - std::norm(z[2])) * cert.E.norm_sq_at(std::span<const cd>(z2.data(), 2));
      rhs += (1.0 - std::norm(z[0])) * cert.H1.norm_sq_at(std::span<const cd>(z.data(), 3));
      rhs += (1.0 - std::norm(z[1])) * cert.H2.norm_sq_at(std::span<const cd>(z.data(), 3));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CheckEntry e2{.name = "identity-random-points", .hard = true};
    e2.value = worst;
    e2.threshold = 50.0 * rep.tolerance;
    e2.pass = e2.value <= e2.threshold;
    add(e2);

    // polarized form: z3 and zeta3 decouple through ||E||^2
    double worst_pol = 0;
    for (int q = 0; q < opt.samples / 4; ++q) {
      cd z1 = rng.torus_point(), z2c = rng.torus_point();
      cd z3 = 1.3 * rng.disk_point(), w3 = 1.3 * rng.disk_point();
      std::vector<cd> za{z1, z2c, z3}, zb{z1, z2c, w3}, zt{z1, z2c};
      cd lhs = p.eval(za) * std::conj(p.eval(zb)) - pt.eval(za) * std::conj(pt.eval(zb));
      cd rhs = (1.0 - z3 * std::conj(w3)) *
               cd(cert.E.norm_sq_at(std::span<const cd>(zt.data(), 2)), 0.0);
      worst_pol = std::max(worst_pol, std::abs(lhs - rhs));
    }
    CheckEntry e3{.name = "polarized-identity", .hard = true};
    e3.value = worst_pol;
    e3.threshold = 50.0 * rep.tolerance;
    e3.pass = e3.value <= e3.threshold;
    add(e3);
  }

  // stability of the input (hard only against an explicit zero witness)
  if (opt.check_stability) {
    rep.stability = stability_check(p, opt.stability_grid);
    CheckEntry e{.name = "stability", .hard = true};
    e.pass = rep.stability.kind != StabilityKind::Unstable;
    e.value = rep.stability.min_modulus;
    if (rep.stability.kind == StabilityKind::Inconclusive)
      e.detail = "inconclusive; certificate verified relative to the stability hypothesis";
    if (rep.stability.kind == StabilityKind::Unstable) e.detail = "zero witness in the closed tridisk";
    add(e);
  }

  rep.pass = true;
  for (const auto& e : rep.checks)
    if (e.hard && !e.pass) rep.pass = false;
  return rep;
}

}  // namespace aglercert
