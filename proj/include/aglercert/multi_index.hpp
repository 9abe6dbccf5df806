#pragma once

#include <array>
#include <cassert>
#include <compare>
#include <cstdlib>
#include <initializer_list>
#include <string>

namespace aglercert {

// Exponent tuple for up to three variables.  Entries may be negative
// (Laurent indices).  Ordering is lexicographic over the active length,
// which makes MultiIndex usable as an ordered map key and gives the
// canonical coefficient order used by the serializers.
class MultiIndex {
 public:
  MultiIndex() = default;

  MultiIndex(std::initializer_list<int> xs) {
    assert(xs.size() >= 1 && xs.size() <= 3);
    len_ = static_cast<int>(xs.size());
    int i = 0;
    for (int x : xs) e_[i++] = x;
  }

  static MultiIndex zeros(int n) {
    MultiIndex m;
    m.len_ = n;
    return m;
  }

  int size() const { return len_; }
  int operator[](int i) const {
    assert(i >= 0 && i < len_);
    return e_[i];
  }
  int& operator[](int i) {
    assert(i >= 0 && i < len_);
    return e_[i];
  }

  MultiIndex operator+(const MultiIndex& o) const {
    assert(len_ == o.len_);
    MultiIndex r = *this;
    for (int i = 0; i < len_; ++i) r.e_[i] += o.e_[i];
    return r;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    assert(len_ == o.len_);
    MultiIndex r = *this;
    for (int i = 0; i < len_; ++i) r.e_[i] -= o.e_[i];
    return r;
  }
  MultiIndex negated() const {
    MultiIndex r = *this;
    for (int i = 0; i < len_; ++i) r.e_[i] = -r.e_[i];
    return r;
  }
  MultiIndex shifted(int var, int by) const {
    MultiIndex r = *this;
    r.e_[var] += by;
    return r;
  }
  // Append one trailing variable with the given exponent.
  MultiIndex extended(int exponent) const {
    assert(len_ < 3);
    MultiIndex r = *this;
    r.e_[r.len_++] = exponent;
    return r;
  }

  bool nonneg() const {
    for (int i = 0; i < len_; ++i)
      if (e_[i] < 0) return false;
    return true;
  }
  // componentwise 0 <= this <= box
  bool within_box(const MultiIndex& box) const {
    assert(len_ == box.len_);
    for (int i = 0; i < len_; ++i)
      if (e_[i] < 0 || e_[i] > box.e_[i]) return false;
    return true;
  }
  bool dominates(const MultiIndex& o) const {
    assert(len_ == o.len_);
    for (int i = 0; i < len_; ++i)
      if (e_[i] < o.e_[i]) return false;
    return true;
  }
  int abs_sum() const {
    int s = 0;
    for (int i = 0; i < len_; ++i) s += std::abs(e_[i]);
    return s;
  }

  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    assert(a.len_ == b.len_);
    for (int i = 0; i < a.len_; ++i) {
      if (auto c = a.e_[i] <=> b.e_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    if (a.len_ != b.len_) return false;
    for (int i = 0; i < a.len_; ++i)
      if (a.e_[i] != b.e_[i]) return false;
    return true;
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < len_; ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }

 private:
  int len_ = 0;
  std::array<int, 3> e_{0, 0, 0};
};

}  // namespace aglercert
