#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doublealg/chart.hpp"
#include "doublealg/rational.hpp"

namespace doublealg {

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (unsigned k : e) d += k;
  return d;
}

/// Monomial order used for storage and printing: higher total degree first,
/// ties broken lexicographically with the larger exponent of the earlier
/// coordinate first.
struct MonomialOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Sparse polynomial with rational coefficients on a chart.
class Polynomial {
 public:
  using Terms = std::map<Exponents, Rational, MonomialOrder>;

  Polynomial() : chart_(point_chart()) {}
  explicit Polynomial(ChartPtr chart) : chart_(std::move(chart)) {
    if (!chart_) throw Error("polynomial without chart");
  }

  static Polynomial constant(ChartPtr chart, const Rational& c) {
    Polynomial p(std::move(chart));
    p.add_term(Exponents(p.chart_->size(), 0), c);
    return p;
  }
  static Polynomial constant(ChartPtr chart, long c) { return constant(std::move(chart), Rational(c)); }

  static Polynomial variable(ChartPtr chart, std::size_t index) {
    Polynomial p(std::move(chart));
    if (index >= p.chart_->size()) throw Error("variable index out of range");
    Exponents e(p.chart_->size(), 0);
    e[index] = 1;
    p.add_term(e, Rational(1));
    return p;
  }
  static Polynomial variable(ChartPtr chart, const std::string& name) {
    auto i = chart->index_of(name);
    return variable(std::move(chart), i);
  }

  static Polynomial monomial(ChartPtr chart, Exponents e, const Rational& c) {
    Polynomial p(std::move(chart));
    if (e.size() != p.chart_->size()) throw Error("exponent vector has wrong length");
    p.add_term(e, c);
    return p;
  }

  const ChartPtr& chart() const { return chart_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  Rational constant_value() const {
    if (!is_constant()) throw Error("polynomial is not constant");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }
  /// Coefficient of the monomial `e`, zero if absent.
  Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first)); }

  /// Largest combined exponent of the listed coordinates over all terms.
  int degree_in(const std::vector<std::size_t>& vars) const {
    int best = -1;
    for (const auto& [e, c] : terms_) {
      int d = 0;
      for (auto v : vars) d += static_cast<int>(e[v]);
      best = std::max(best, d);
    }
    return best;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (doublealg::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (doublealg::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    if (doublealg::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_chart(b);
    Polynomial out(a.chart_);
    const std::size_t n = a.chart_->size();
    Exponents e(n);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  /// Equality of canonical forms. Charts must agree by value.
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return same_chart(a.chart_, b.chart_) && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(chart_, 1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  Polynomial partial(std::size_t index) const {
    if (index >= chart_->size()) throw Error("partial: coordinate index out of range");
    Polynomial out(chart_);
    for (const auto& [e, c] : terms_) {
      if (e[index] == 0) continue;
      Exponents f = e;
      f[index] -= 1;
      out.add_term(f, c * e[index]);
    }
    return out;
  }
  Polynomial partial(const std::string& name) const { return partial(chart_->index_of(name)); }

  Rational evaluate(const std::vector<Rational>& point) const {
    if (point.size() != chart_->size()) throw Error("evaluate: point has wrong dimension");
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
      sum += t;
    }
    return sum;
  }

  /// Replaces coordinate i by images[i]; all images share one target chart.
  Polynomial substitute(const std::vector<Polynomial>& images, const ChartPtr& target) const {
    if (images.size() != chart_->size()) throw Error("substitute: wrong number of images");
    Polynomial out(target);
    std::vector<std::vector<Polynomial>> powers(images.size());
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(target, c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(constant(target, 1));
        while (pw.size() <= e[i]) pw.push_back(pw.back() * images[i]);
        t = t * pw[e[i]];
      }
      out += t;
    }
    return out;
  }

  /// Re-expresses the polynomial on `target`, matching coordinates by name.
  /// Every coordinate that actually occurs must exist in `target`.
  Polynomial embed(const ChartPtr& target) const {
    if (same_chart(chart_, target)) return with_chart(target);
    std::vector<std::optional<std::size_t>> map(chart_->size());
    for (std::size_t i = 0; i < chart_->size(); ++i) map[i] = target->find(chart_->name(i));
    Polynomial out(target);
    for (const auto& [e, c] : terms_) {
      Exponents f(target->size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!map[i]) throw Error("embed: coordinate '" + chart_->name(i) + "' missing from target chart");
        f[*map[i]] = e[i];
      }
      out.add_term(f, c);
    }
    return out;
  }

  /// Same terms over an equal chart object (used to unify chart pointers).
  Polynomial with_chart(const ChartPtr& target) const {
    if (!same_chart(chart_, target)) throw Error("with_chart: charts differ");
    Polynomial out(target);
    out.terms_ = terms_;
    return out;
  }

  /// Groups terms by their exponents in `vars`; each group's coefficient is
  /// a polynomial in the remaining coordinates (with those exponents zeroed).
  std::map<Exponents, Polynomial> split(const std::vector<std::size_t>& vars) const {
    std::map<Exponents, Polynomial> out;
    for (const auto& [e, c] : terms_) {
      Exponents key(vars.size());
      Exponents rest = e;
      for (std::size_t k = 0; k < vars.size(); ++k) {
        key[k] = e[vars[k]];
        rest[vars[k]] = 0;
      }
      auto it = out.try_emplace(key, Polynomial(chart_)).first;
      it->second.add_term(rest, c);
    }
    return out;
  }

  std::string to_string() const;

 private:
  static const ChartPtr& point_chart() {
    static const ChartPtr c = make_chart({});
    return c;
  }
  void check_chart(const Polynomial& o) const {
    if (!same_chart(chart_, o.chart_)) throw Error("polynomial chart mismatch");
  }

  ChartPtr chart_;
  Terms terms_;
};

/// Linear decomposition in the fibre coordinates `vars`: returns
/// (part free of vars, coefficient of each var). Throws if any term has
/// degree > 1 in vars.
struct LinearSplit {
  Polynomial constant;
  std::vector<Polynomial> linear;
};

inline LinearSplit split_linear(const Polynomial& p, const std::vector<std::size_t>& vars) {
  LinearSplit out{Polynomial(p.chart()), std::vector<Polynomial>(vars.size(), Polynomial(p.chart()))};
  for (auto& [key, coeff] : p.split(vars)) {
    unsigned d = total_degree(key);
    if (d == 0) {
      out.constant = coeff;
    } else if (d == 1) {
      for (std::size_t k = 0; k < key.size(); ++k)
        if (key[k] == 1) out.linear[k] = coeff;
    } else {
      throw Error("expected a polynomial at most linear in fibre coordinates, got " + p.to_string());
    }
  }
  return out;
}

namespace detail {

inline void append_monomial(std::string& out, const Chart& chart, const Exponents& e, const Rational& c,
                            bool first) {
  Rational mag = abs(c);
  if (sgn(c) < 0) out += first ? "-" : " - ";
  else if (!first) out += " + ";
  bool any = false;
  bool unit = mag == 1;
  if (!unit || total_degree(e) == 0) {
    out += doublealg::to_string(mag);
    any = true;
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (any) out += " * ";
    out += chart.name(i);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
    any = true;
  }
}

}  // namespace detail

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    detail::append_monomial(out, *chart_, e, c, first);
    first = false;
  }
  return out;
}

inline Polynomial operator+(Polynomial a, const Rational& c) { return a += Polynomial::constant(a.chart(), c); }

/// Frame-indexed collection of polynomial coefficients, used for sections,
/// vector fields and similar linear objects.
using PolyVector = std::vector<Polynomial>;
using PolyMatrix = std::vector<PolyVector>;

inline PolyVector zero_vector(const ChartPtr& chart, std::size_t n) { return PolyVector(n, Polynomial(chart)); }
inline PolyMatrix zero_matrix(const ChartPtr& chart, std::size_t rows, std::size_t cols) {
  return PolyMatrix(rows, zero_vector(chart, cols));
}

inline bool all_zero(const PolyVector& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

/// Action of the vector field with components `field` (one per chart
/// coordinate) on f.
inline Polynomial apply_field(const PolyVector& field, const Polynomial& f) {
  Polynomial out(f.chart());
  for (std::size_t i = 0; i < field.size(); ++i)
    if (!field[i].is_zero()) out += field[i] * f.partial(i);
  return out;
}

/// Commutator of two vector fields on the same chart.
inline PolyVector field_bracket(const PolyVector& X, const PolyVector& Y) {
  PolyVector out;
  out.reserve(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) out.push_back(apply_field(X, Y[i]) - apply_field(Y, X[i]));
  return out;
}

/// Small deterministic generator wrapper; only the raw 64-bit engine output
/// is used so sequences agree across standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  long uniform(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(next() % span);
  }
  Rational rational(long bound = 5) {
    long num = uniform(-bound, bound);
    long den = uniform(1, 3);
    return make_rational(num, den);
  }

 private:
  std::uint64_t state_;
};

/// Random polynomial of total degree <= max_degree with up to `max_terms`
/// terms and small rational coefficients.
inline Polynomial random_polynomial(const ChartPtr& chart, Sampler& rng, unsigned max_degree,
                                    unsigned max_terms = 4) {
  Polynomial p(chart);
  unsigned terms = static_cast<unsigned>(rng.uniform(0, max_terms));
  for (unsigned t = 0; t < terms; ++t) {
    Exponents e(chart->size(), 0);
    unsigned budget = static_cast<unsigned>(rng.uniform(0, max_degree));
    for (unsigned k = 0; k < budget && !e.empty(); ++k) e[rng.uniform(0, static_cast<long>(e.size()) - 1)] += 1;
    p.add_term(e, rng.rational());
  }
  return p;
}

}  // namespace doublealg
