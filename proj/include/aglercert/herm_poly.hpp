#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "aglercert/poly.hpp"

// Real-valued polynomial expressions in (z, conj(z)), stored as a coefficient
// map over index pairs (u, v) meaning z^u * conj(z)^v.  Quantities such as
// |p|^2, ||H||^2 and (1-|z_j|^2)*S live here; two expressions are equal as
// functions on C^n exactly when these coefficient arrays coincide, which is
// what the certificate identity requires off the torus.

namespace aglercert {

struct HermKey {
  MultiIndex u, v;
  friend auto operator<=>(const HermKey& a, const HermKey& b) {
    if (auto c = a.u <=> b.u; c != 0) return c;
    return a.v <=> b.v;
  }
  friend bool operator==(const HermKey& a, const HermKey& b) = default;
};

class HermPoly {
 public:
  explicit HermPoly(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  const std::map<HermKey, cd>& coeffs() const { return c_; }

  cd coeff(const HermKey& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? cd(0.0) : it->second;
  }

  void add(const MultiIndex& u, const MultiIndex& v, cd value) {
    if (u.size() != nvars_ || v.size() != nvars_)
      throw DegreeError("HermPoly index dimension mismatch");
    HermKey k{u, v};
    auto [it, fresh] = c_.try_emplace(k, value);
    if (!fresh) it->second += value;
    if (std::abs(it->second) == 0.0) c_.erase(it);
  }

  // p(z) * conj(p(z)); coefficient at (u,v) is p[u]*conj(p[v]).
  static HermPoly mod_sq(const AnalyticPoly& p) {
    HermPoly h(p.nvars());
    for (const auto& [u, cu] : p.coeffs())
      for (const auto& [v, cv] : p.coeffs()) h.add(u, v, cu * std::conj(cv));
    return h;
  }

  // Sum of entrywise mod_sq.  With embed3, two-variable entries are lifted
  // to three variables with z3-exponent zero.
  static HermPoly norm_sq(const VectorPoly& E, bool embed3 = false) {
    int nv = embed3 ? 3 : E.nvars();
    HermPoly h(nv);
    for (const auto& e : E.entries())
      for (const auto& [u, cu] : e.coeffs())
        for (const auto& [v, cv] : e.coeffs()) {
          MultiIndex uu = u, vv = v;
          if (embed3 && E.nvars() == 2) {
            uu = u.extended(0);
            vv = v.extended(0);
          }
          h.add(uu, vv, cu * std::conj(cv));
        }
    return h;
  }

  HermPoly operator+(const HermPoly& o) const {
    HermPoly r = *this;
    for (const auto& [k, c] : o.c_) r.add(k.u, k.v, c);
    return r;
  }
  HermPoly operator-(const HermPoly& o) const { return *this + o.scaled(-1.0); }
  HermPoly scaled(cd s) const {
    HermPoly r(nvars_);
    for (const auto& [k, c] : c_)
      if (std::abs(c * s) != 0.0) r.c_[k] = c * s;
    return r;
  }

  // (1 - |z_var|^2) * this
  HermPoly times_one_minus_mod_sq(int var) const {
    HermPoly r(nvars_);
    for (const auto& [k, c] : c_) {
      r.add(k.u, k.v, c);
      r.add(k.u.shifted(var, 1), k.v.shifted(var, 1), -c);
    }
    return r;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& [k, c] : c_) m = std::max(m, std::abs(c));
    return m;
  }

  cd eval(std::span<const cd> z) const {
    if (static_cast<int>(z.size()) != nvars_) throw DegreeError("point dimension mismatch");
    std::vector<int> md(nvars_, 0);
    for (const auto& [k, c] : c_)
      for (int i = 0; i < nvars_; ++i)
        md[i] = std::max({md[i], k.u[i], k.v[i]});
    auto pw = detail::power_table(z, md);
    std::vector<cd> zc(z.begin(), z.end());
    for (auto& w : zc) w = std::conj(w);
    auto pwc = detail::power_table(zc, md);
    cd s = 0.0;
    for (const auto& [k, c] : c_) {
      cd term = c;
      for (int i = 0; i < nvars_; ++i) term *= pw[i][k.u[i]] * pwc[i][k.v[i]];
      s += term;
    }
    return s;
  }
  cd eval(std::initializer_list<cd> z) const { return eval(std::span<const cd>(z.begin(), z.size())); }

  // Restrict the variables selected by `on_torus` to the torus: there
  // z^u conj(z)^v collapses to the Laurent monomial z^(u-v).  The reduced
  // key keeps u-v (possibly negative) in the u slot and zero in v for the
  // reduced variables.
  HermPoly reduce_torus(const std::vector<bool>& on_torus) const {
    HermPoly r(nvars_);
    for (const auto& [k, c] : c_) {
      MultiIndex u = k.u, v = k.v;
      for (int i = 0; i < nvars_; ++i) {
        if (on_torus[i]) {
          u[i] = k.u[i] - k.v[i];
          v[i] = 0;
        }
      }
      r.add(u, v, c);
    }
    return r;
  }

 private:
  int nvars_;
  std::map<HermKey, cd> c_;
};

}  // namespace aglercert
