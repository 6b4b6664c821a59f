#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "doublealg/poly_parse.hpp"

namespace doublealg {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

/// Sign of e_I ∧ e_J relative to e_{I∪J}: parity of pairs i in I, j in J
/// with i > j. Zero when I and J overlap.
inline int wedge_sign(Mask I, Mask J) {
  if (I & J) return 0;
  int inversions = 0;
  for (Mask j = J; j; j &= j - 1) {
    Mask low = j & (~j + 1);
    // elements of I above this element of J
    inversions += popcount(I & ~(low | (low - 1)));
  }
  return (inversions % 2) ? -1 : 1;
}

inline std::vector<std::size_t> mask_indices(Mask m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; m; ++i, m >>= 1)
    if (m & 1) out.push_back(i);
  return out;
}

inline Mask bit(std::size_t i) { return Mask(1) << i; }

/// Element of the exterior algebra of a rank-r frame with polynomial
/// coefficients: Σ_I c_I e_{i1} ∧ ... ∧ e_{ik} over sorted index sets I.
/// Used both for multisections of A and for forms (sections of Λ A*).
class Exterior {
 public:
  Exterior() = default;
  Exterior(ChartPtr chart, std::size_t rank) : chart_(std::move(chart)), rank_(rank) {
    if (rank_ > 31) throw Error("rank too large for exterior algebra");
  }

  static Exterior scalar(const Polynomial& f, std::size_t rank) {
    Exterior e(f.chart(), rank);
    e.add(0, f);
    return e;
  }
  static Exterior from_section(const PolyVector& s, const ChartPtr& chart) {
    Exterior e(chart, s.size());
    for (std::size_t a = 0; a < s.size(); ++a) e.add(bit(a), s[a]);
    return e;
  }
  static Exterior basis(const ChartPtr& chart, std::size_t rank, Mask m) {
    Exterior e(chart, rank);
    e.add(m, Polynomial::constant(chart, 1));
    return e;
  }

  const ChartPtr& chart() const { return chart_; }
  std::size_t rank() const { return rank_; }
  const std::map<Mask, Polynomial>& components() const { return comp_; }
  bool is_zero() const { return comp_.empty(); }

  Polynomial component(Mask m) const {
    auto it = comp_.find(m);
    return it == comp_.end() ? Polynomial(chart_) : it->second;
  }

  /// Degree-1 part as a frame-indexed vector.
  PolyVector section() const {
    PolyVector v = zero_vector(chart_, rank_);
    for (const auto& [m, c] : comp_)
      if (popcount(m) == 1) v[mask_indices(m)[0]] = c;
    return v;
  }

  void add(Mask m, const Polynomial& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = comp_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) comp_.erase(it);
    }
  }

  /// Homogeneous part of degree k.
  Exterior part(int k) const {
    Exterior out(chart_, rank_);
    for (const auto& [m, c] : comp_)
      if (popcount(m) == k) out.comp_.emplace(m, c);
    return out;
  }

  /// Degrees present, ascending.
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [m, c] : comp_) {
      int d = popcount(m);
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Degree of a homogeneous element; -1 for zero. Throws if mixed.
  int degree() const {
    auto d = degrees();
    if (d.empty()) return -1;
    if (d.size() > 1) throw Error("exterior element is not homogeneous");
    return d[0];
  }

  Exterior& operator+=(const Exterior& o) {
    check(o);
    for (const auto& [m, c] : o.comp_) add(m, c);
    return *this;
  }
  Exterior& operator-=(const Exterior& o) {
    check(o);
    for (const auto& [m, c] : o.comp_) add(m, -c);
    return *this;
  }
  friend Exterior operator+(Exterior a, const Exterior& b) { return a += b; }
  friend Exterior operator-(Exterior a, const Exterior& b) { return a -= b; }
  friend Exterior operator-(const Exterior& a) {
    Exterior out(a.chart_, a.rank_);
    for (const auto& [m, c] : a.comp_) out.comp_.emplace(m, -c);
    return out;
  }
  friend Exterior operator*(const Polynomial& f, const Exterior& a) {
    Exterior out(a.chart_, a.rank_);
    for (const auto& [m, c] : a.comp_) out.add(m, f * c);
    return out;
  }
  friend Exterior operator*(const Rational& s, const Exterior& a) {
    Exterior out(a.chart_, a.rank_);
    for (const auto& [m, c] : a.comp_) out.add(m, c * s);
    return out;
  }

  friend Exterior wedge(const Exterior& a, const Exterior& b) {
    a.check(b);
    Exterior out(a.chart_, a.rank_);
    for (const auto& [ma, ca] : a.comp_)
      for (const auto& [mb, cb] : b.comp_) {
        int s = wedge_sign(ma, mb);
        if (s == 0) continue;
        Polynomial p = ca * cb;
        out.add(ma | mb, s > 0 ? p : -p);
      }
    return out;
  }

  friend bool operator==(const Exterior& a, const Exterior& b) {
    if (a.rank_ != b.rank_) return false;
    if (a.comp_.size() != b.comp_.size()) return false;
    auto it = b.comp_.begin();
    for (const auto& [m, c] : a.comp_) {
      if (it->first != m || !(it->second == c)) return false;
      ++it;
    }
    return true;
  }

  /// Σ c_I * f_{i1} ^ ... ^ f_{ik} with the given frame names.
  std::string to_string(const std::vector<std::string>& frames) const {
    if (comp_.empty()) return "0";
    PolyVector coeffs;
    std::vector<std::string> names;
    // ascending degree, then ascending index set
    std::vector<std::pair<Mask, Polynomial>> ordered(comp_.begin(), comp_.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& x, const auto& y) { return popcount(x.first) < popcount(y.first); });
    for (const auto& [m, c] : ordered) {
      std::string n;
      for (auto i : mask_indices(m)) n += (n.empty() ? "" : " ^ ") + frames.at(i);
      if (n.empty()) n = "1";
      names.push_back(n);
      coeffs.push_back(c);
    }
    return format_linear(coeffs, names);
  }

 private:
  void check(const Exterior& o) const {
    if (rank_ != o.rank_) throw Error("exterior rank mismatch");
    if (!same_chart(chart_, o.chart_)) throw Error("exterior chart mismatch");
  }

  ChartPtr chart_;
  std::size_t rank_ = 0;
  std::map<Mask, Polynomial> comp_;
};

using Multisection = Exterior;
using Form = Exterior;

/// Random homogeneous element of degree k with coefficients of degree
/// <= max_degree.
inline Exterior random_exterior(const ChartPtr& chart, std::size_t rank, int k, Sampler& rng, unsigned max_degree) {
  Exterior e(chart, rank);
  if (k < 0 || static_cast<std::size_t>(k) > rank) return e;
  for (Mask m = 0; m < (Mask(1) << rank); ++m) {
    if (popcount(m) != k) continue;
    if (rng.uniform(0, 2) == 0) continue;
    e.add(m, random_polynomial(chart, rng, max_degree, 3));
  }
  return e;
}

}  // namespace doublealg
