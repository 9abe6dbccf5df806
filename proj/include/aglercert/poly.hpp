#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "aglercert/errors.hpp"
#include "aglercert/multi_index.hpp"

// Multivariate polynomial arithmetic over complex double coefficients.
//
// An AnalyticPoly carries a *declared* degree box in addition to its
// coefficients: reflection depends on the declared box, not on the occupied
// support (the constant 1 viewed at degree (1,1,1) reflects to z1*z2*z3).
// A TrigPoly is a Hermitian Laurent polynomial on the torus: t(-a) equals
// conj(t(a)) exactly after symmetrization, so it is real-valued on T^n.

namespace aglercert {

using cd = std::complex<double>;

// Coefficients below this magnitude are dropped during canonicalization;
// it sits at the noise floor of the convolution arithmetic.
inline constexpr double kCoeffDropTol = 1e-14;

namespace detail {

// Power tables z^0..z^maxdeg per variable, shared by the evaluators.
inline std::vector<std::vector<cd>> power_table(std::span<const cd> z,
                                                std::span<const int> maxdeg) {
  std::vector<std::vector<cd>> pw(z.size());
  for (size_t v = 0; v < z.size(); ++v) {
    pw[v].resize(static_cast<size_t>(maxdeg[v]) + 1);
    pw[v][0] = 1.0;
    for (int k = 1; k <= maxdeg[v]; ++k) pw[v][k] = pw[v][k - 1] * z[v];
  }
  return pw;
}

}  // namespace detail

class AnalyticPoly {
 public:
  AnalyticPoly() : nvars_(1), degree_(MultiIndex::zeros(1)) {}

  AnalyticPoly(int nvars, MultiIndex degree) : nvars_(nvars), degree_(degree) {
    if (nvars < 1 || nvars > 3) throw DegreeError("nvars must be 1..3");
    if (degree.size() != nvars || !degree.nonneg())
      throw DegreeError("degree box must have nvars nonnegative entries");
  }

  static AnalyticPoly constant(int nvars, cd value) {
    AnalyticPoly p(nvars, MultiIndex::zeros(nvars));
    p.set_coeff(MultiIndex::zeros(nvars), value);
    return p;
  }

  static AnalyticPoly monomial(int nvars, const MultiIndex& idx, cd value) {
    AnalyticPoly p(nvars, idx);
    p.set_coeff(idx, value);
    return p;
  }

  int nvars() const { return nvars_; }
  const MultiIndex& degree() const { return degree_; }
  const std::map<MultiIndex, cd>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  cd coeff(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? cd(0.0) : it->second;
  }

  void set_coeff(const MultiIndex& idx, cd value) {
    if (idx.size() != nvars_ || !idx.within_box(degree_))
      throw DegreeError("coefficient index " + idx.str() +
                        " outside declared degree box " + degree_.str());
    if (std::abs(value) < kCoeffDropTol)
      coeffs_.erase(idx);
    else
      coeffs_[idx] = value;
  }

  void add_coeff(const MultiIndex& idx, cd value) { set_coeff(idx, coeff(idx) + value); }

  // Same coefficients re-declared at a (componentwise) larger box.
  AnalyticPoly viewed_at(const MultiIndex& box) const {
    if (!box.dominates(degree_))
      throw DegreeError("viewed_at box " + box.str() + " smaller than " + degree_.str());
    AnalyticPoly p(nvars_, box);
    p.coeffs_ = coeffs_;
    return p;
  }

  int effective_degree(int var) const {
    int d = 0;
    for (const auto& [idx, c] : coeffs_) d = std::max(d, idx[var]);
    return d;
  }

  AnalyticPoly operator+(const AnalyticPoly& o) const {
    AnalyticPoly r(nvars_, max_box(degree_, o.degree_));
    r.coeffs_ = coeffs_;
    for (const auto& [idx, c] : o.coeffs_) {
      auto [it, fresh] = r.coeffs_.try_emplace(idx, c);
      if (!fresh) it->second += c;
    }
    r.canonicalize();
    return r;
  }

  AnalyticPoly operator-(const AnalyticPoly& o) const { return *this + o.scaled(-1.0); }

  AnalyticPoly scaled(cd s) const {
    AnalyticPoly r(nvars_, degree_);
    for (const auto& [idx, c] : coeffs_) {
      cd v = c * s;
      if (std::abs(v) >= kCoeffDropTol) r.coeffs_[idx] = v;
    }
    return r;
  }

  AnalyticPoly operator*(const AnalyticPoly& o) const {
    if (o.nvars_ != nvars_) throw DegreeError("nvars mismatch in product");
    AnalyticPoly r(nvars_, degree_ + o.degree_);
    for (const auto& [i1, c1] : coeffs_)
      for (const auto& [i2, c2] : o.coeffs_) {
        MultiIndex k = i1 + i2;
        auto [it, fresh] = r.coeffs_.try_emplace(k, c1 * c2);
        if (!fresh) it->second += c1 * c2;
      }
    r.canonicalize();
    return r;
  }

  // Multiply by the monomial z^shift (box grows accordingly).
  AnalyticPoly shifted(const MultiIndex& shift) const {
    if (!shift.nonneg()) throw DegreeError("monomial shift must be nonnegative");
    AnalyticPoly r(nvars_, degree_ + shift);
    for (const auto& [idx, c] : coeffs_) r.coeffs_[idx + shift] = c;
    return r;
  }

  cd eval(std::span<const cd> z) const {
    if (static_cast<int>(z.size()) != nvars_) throw DegreeError("point dimension mismatch");
    std::vector<int> md(nvars_);
    for (int v = 0; v < nvars_; ++v) md[v] = effective_degree(v);
    auto pw = detail::power_table(z, md);
    cd s = 0.0;
    for (const auto& [idx, c] : coeffs_) {
      cd term = c;
      for (int v = 0; v < nvars_; ++v) term *= pw[v][idx[v]];
      s += term;
    }
    return s;
  }
  cd eval(std::initializer_list<cd> z) const { return eval(std::span<const cd>(z.begin(), z.size())); }

  double coeff_one_norm() const {
    double s = 0;
    for (const auto& [idx, c] : coeffs_) s += std::abs(c);
    return s;
  }

  // Sup bound for the gradient on the closed polydisk in the sup-metric:
  // |p(z) - p(w)| <= L * max_j |z_j - w_j|.
  double lipschitz_polydisk() const {
    double s = 0;
    for (const auto& [idx, c] : coeffs_) s += std::abs(c) * idx.abs_sum();
    return s;
  }

  friend bool operator==(const AnalyticPoly& a, const AnalyticPoly& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  static MultiIndex max_box(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r = a;
    for (int i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
  }
  void canonicalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (std::abs(it->second) < kCoeffDropTol)
        it = coeffs_.erase(it);
      else
        ++it;
    }
  }

  int nvars_;
  MultiIndex degree_;
  std::map<MultiIndex, cd> coeffs_;
};

// p~(z) = z^d conj(p(1/conj(z))): coefficient at b is conj(coeff of p at d-b).
inline AnalyticPoly reflect(const AnalyticPoly& p, const MultiIndex& d) {
  if (d.size() != p.nvars()) throw DegreeError("reflection box dimension mismatch");
  AnalyticPoly r(p.nvars(), d);
  for (const auto& [idx, c] : p.coeffs()) {
    if (!idx.within_box(d))
      throw DegreeError("reflection box " + d.str() + " smaller than occupied index " + idx.str());
    r.set_coeff(d - idx, std::conj(c));
  }
  return r;
}

// Split p = a(z1,z2) + b(z1,z2)z3 for p of z3-degree at most 1.
inline std::pair<AnalyticPoly, AnalyticPoly> split_z3(const AnalyticPoly& p) {
  if (p.nvars() != 3) throw DegreeError("split requires three variables");
  if (p.effective_degree(2) > 1 || p.degree()[2] > 1)
    throw DegreeError("z3-degree exceeds 1");
  MultiIndex box{p.degree()[0], p.degree()[1]};
  AnalyticPoly a(2, box), b(2, box);
  for (const auto& [idx, c] : p.coeffs()) {
    MultiIndex two{idx[0], idx[1]};
    (idx[2] == 0 ? a : b).set_coeff(two, c);
  }
  return {a, b};
}

class TrigPoly {
 public:
  explicit TrigPoly(int nvars) : nvars_(nvars) {
    if (nvars < 1 || nvars > 2) throw DegreeError("TrigPoly supports 1 or 2 variables");
  }

  int nvars() const { return nvars_; }
  const std::map<MultiIndex, cd>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  cd coeff(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? cd(0.0) : it->second;
  }

  void add_term(const MultiIndex& idx, cd value) {
    if (idx.size() != nvars_) throw DegreeError("TrigPoly index dimension mismatch");
    auto [it, fresh] = coeffs_.try_emplace(idx, value);
    if (!fresh) it->second += value;
  }

  // Enforce t(-a) = conj(t(a)) exactly by averaging conjugate pairs.
  void symmetrize() {
    std::map<MultiIndex, cd> out;
    for (const auto& [idx, c] : coeffs_) {
      MultiIndex n = idx.negated();
      cd v = 0.5 * (c + std::conj(coeff(n)));
      if (std::abs(v) >= kCoeffDropTol) out[idx] = v;
      if (!(n == idx)) {
        cd w = std::conj(v);
        if (std::abs(w) >= kCoeffDropTol) out[n] = w;
      }
    }
    coeffs_ = std::move(out);
  }

  bool is_hermitian() const {
    for (const auto& [idx, c] : coeffs_)
      if (std::abs(coeff(idx.negated()) - std::conj(c)) != 0.0) return false;
    return true;
  }

  int laurent_degree(int var) const {
    int d = 0;
    for (const auto& [idx, c] : coeffs_) d = std::max(d, std::abs(idx[var]));
    return d;
  }

  TrigPoly operator+(const TrigPoly& o) const {
    TrigPoly r = *this;
    for (const auto& [idx, c] : o.coeffs_) r.add_term(idx, c);
    r.drop_small();
    return r;
  }
  TrigPoly operator-(const TrigPoly& o) const { return *this + o.scaled(-1.0); }
  TrigPoly scaled(cd s) const {
    TrigPoly r(nvars_);
    for (const auto& [idx, c] : coeffs_) {
      cd v = c * s;
      if (std::abs(v) >= kCoeffDropTol) r.coeffs_[idx] = v;
    }
    return r;
  }

  // Evaluation with negative powers as true inverses; intended for torus
  // points, where the Hermitian symmetry makes the value real.
  cd eval(std::span<const cd> z) const {
    if (static_cast<int>(z.size()) != nvars_) throw DegreeError("point dimension mismatch");
    std::vector<int> md(nvars_);
    std::vector<cd> zi(z.begin(), z.end());
    for (int v = 0; v < nvars_; ++v) md[v] = laurent_degree(v);
    auto pw = detail::power_table(zi, md);
    std::vector<cd> inv(zi);
    for (auto& w : inv) w = 1.0 / w;
    auto pwinv = detail::power_table(inv, md);
    cd s = 0.0;
    for (const auto& [idx, c] : coeffs_) {
      cd term = c;
      for (int v = 0; v < nvars_; ++v)
        term *= idx[v] >= 0 ? pw[v][idx[v]] : pwinv[v][-idx[v]];
      s += term;
    }
    return s;
  }
  cd eval(std::initializer_list<cd> z) const { return eval(std::span<const cd>(z.begin(), z.size())); }

  // Torus evaluation; the imaginary part (symmetrization roundoff) is
  // discarded and reported through *imag_defect when requested.
  double eval_real(std::span<const cd> z, double* imag_defect = nullptr) const {
    cd v = eval(z);
    if (imag_defect) *imag_defect = std::abs(v.imag());
    return v.real();
  }
  double eval_real(std::initializer_list<cd> z, double* imag_defect = nullptr) const {
    return eval_real(std::span<const cd>(z.begin(), z.size()), imag_defect);
  }

  double coeff_one_norm() const {
    double s = 0;
    for (const auto& [idx, c] : coeffs_) s += std::abs(c);
    return s;
  }
  // |t(z) - t(w)| <= L * max_j |theta_j - theta_j'| on the torus.
  double lipschitz_torus() const {
    double s = 0;
    for (const auto& [idx, c] : coeffs_) s += std::abs(c) * idx.abs_sum();
    return s;
  }

 private:
  void drop_small() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (std::abs(it->second) < kCoeffDropTol)
        it = coeffs_.erase(it);
      else
        ++it;
    }
  }
  int nvars_;
  std::map<MultiIndex, cd> coeffs_;
};

// Laurent expansion of |a|^2 on the torus: coefficient at g is
// sum_b a[b+g] conj(a[b]).
inline TrigPoly mod_squared(const AnalyticPoly& a) {
  TrigPoly t(a.nvars());
  for (const auto& [i1, c1] : a.coeffs())
    for (const auto& [i2, c2] : a.coeffs()) t.add_term(i1 - i2, c1 * std::conj(c2));
  t.symmetrize();
  return t;
}

inline TrigPoly mod_squared_diff(const AnalyticPoly& a, const AnalyticPoly& b) {
  if (a.nvars() != b.nvars()) throw DegreeError("nvars mismatch");
  if (!(a.degree() == b.degree())) throw DegreeError("a and b must share a degree box");
  TrigPoly t = mod_squared(a) - mod_squared(b);
  t.symmetrize();
  return t;
}

class VectorPoly {
 public:
  VectorPoly(int nvars, MultiIndex box) : nvars_(nvars), box_(box) {
    if (box.size() != nvars || !box.nonneg()) throw DegreeError("bad vector degree box");
  }

  int nvars() const { return nvars_; }
  const MultiIndex& box() const { return box_; }
  int dim() const { return static_cast<int>(entries_.size()); }
  const AnalyticPoly& entry(int i) const { return entries_.at(i); }
  const std::vector<AnalyticPoly>& entries() const { return entries_; }

  void push_back(const AnalyticPoly& p) {
    if (p.nvars() != nvars_) throw DegreeError("vector entry nvars mismatch");
    entries_.push_back(p.viewed_at(box_));
  }

  std::vector<cd> eval(std::span<const cd> z) const {
    std::vector<cd> v(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) v[i] = entries_[i].eval(z);
    return v;
  }

  double norm_sq_at(std::span<const cd> z) const {
    double s = 0;
    for (const auto& e : entries_) s += std::norm(e.eval(z));
    return s;
  }
  double norm_sq_at(std::initializer_list<cd> z) const {
    return norm_sq_at(std::span<const cd>(z.begin(), z.size()));
  }

  // ||E||^2 as a Laurent polynomial on the torus.
  TrigPoly norm_sq_laurent() const {
    TrigPoly t(nvars_);
    for (const auto& e : entries_) t = t + mod_squared(e);
    t.symmetrize();
    return t;
  }

 private:
  int nvars_;
  MultiIndex box_;
  std::vector<AnalyticPoly> entries_;
};

inline VectorPoly reflect_vector(const VectorPoly& E, const MultiIndex& box) {
  VectorPoly r(E.nvars(), box);
  for (int i = 0; i < E.dim(); ++i) r.push_back(reflect(E.entry(i), box));
  return r;
}

}  // namespace aglercert
