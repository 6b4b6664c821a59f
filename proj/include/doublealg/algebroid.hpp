#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "doublealg/liealg.hpp"
#include "doublealg/multivector.hpp"

namespace doublealg {

/// Vector field components as text: `x * d/dx - y * d/dy`.
inline std::string format_field(const PolyVector& field, const Chart& chart) {
  std::vector<std::string> names;
  for (const auto& n : chart.names()) names.push_back("d/d" + n);
  return format_linear(field, names);
}

/// Lie algebroid of rank r over a polynomial chart, given on a global frame:
/// anchor a(e_α) = Σ_i anchor[α][i] ∂_i and [e_α, e_β] = Σ_γ c[α][β][γ] e_γ.
class LieAlgebroid {
 public:
  LieAlgebroid() : LieAlgebroid(make_chart({}), {}) {}
  LieAlgebroid(ChartPtr chart, std::vector<std::string> frames)
      : chart_(std::move(chart)), frames_(std::move(frames)) {
    Chart check(frames_);
    for (const auto& f : frames_)
      if (chart_->find(f)) throw Error("frame '" + f + "' clashes with a coordinate");
    anchor_ = zero_matrix(chart_, rank(), chart_->size());
    c_.assign(rank(), std::vector<PolyVector>(rank(), zero_vector(chart_, rank())));
  }

  const ChartPtr& chart() const { return chart_; }
  std::size_t rank() const { return frames_.size(); }
  std::size_t dim() const { return chart_->size(); }
  const std::vector<std::string>& frames() const { return frames_; }
  const PolyVector& anchor(std::size_t a) const { return anchor_.at(a); }
  const PolyMatrix& anchor_matrix() const { return anchor_; }
  const PolyVector& structure(std::size_t a, std::size_t b) const { return c_.at(a).at(b); }

  void set_anchor(std::size_t a, PolyVector field) {
    if (field.size() != dim()) throw Error("anchor field has wrong dimension");
    for (auto& p : field) p = p.embed(chart_);
    anchor_.at(a) = std::move(field);
  }

  /// Sets [e_a, e_b] = v and [e_b, e_a] = -v.
  void set_bracket(std::size_t a, std::size_t b, PolyVector v) {
    if (v.size() != rank()) throw Error("bracket value has wrong rank");
    for (auto& p : v) p = p.embed(chart_);
    if (a == b) {
      if (!all_zero(v)) throw Error("bracket(" + frames_[a] + "," + frames_[a] + ") must vanish");
      return;
    }
    PolyVector neg;
    for (const auto& p : v) neg.push_back(-p);
    c_.at(a).at(b) = std::move(v);
    c_.at(b).at(a) = std::move(neg);
  }

  /// Vector field a(X) for a section X.
  PolyVector anchor_of(const PolyVector& X) const {
    PolyVector out = zero_vector(chart_, dim());
    for (std::size_t a = 0; a < rank(); ++a) {
      if (X[a].is_zero()) continue;
      for (std::size_t i = 0; i < dim(); ++i) out[i] += X[a] * anchor_[a][i];
    }
    return out;
  }

  /// a(X)(f).
  Polynomial act(const PolyVector& X, const Polynomial& f) const { return apply_field(anchor_of(X), f); }
  Polynomial act(std::size_t a, const Polynomial& f) const { return apply_field(anchor_[a], f); }

  PolyVector frame_section(std::size_t a) const {
    PolyVector v = zero_vector(chart_, rank());
    v.at(a) = Polynomial::constant(chart_, 1);
    return v;
  }

  Polynomial coordinate(std::size_t i) const { return Polynomial::variable(chart_, i); }

 private:
  ChartPtr chart_;
  std::vector<std::string> frames_;
  PolyMatrix anchor_;
  std::vector<std::vector<PolyVector>> c_;
};

/// [X, Y] = Σ X^α Y^β [e_α, e_β] + a(X)(Y^β) e_β - a(Y)(X^α) e_α.
inline PolyVector bracket_sections(const LieAlgebroid& L, const PolyVector& X, const PolyVector& Y) {
  const std::size_t r = L.rank();
  if (X.size() != r || Y.size() != r) throw Error("section rank does not match algebroid");
  PolyVector out = zero_vector(L.chart(), r);
  for (std::size_t a = 0; a < r; ++a) {
    if (X[a].is_zero()) continue;
    for (std::size_t b = 0; b < r; ++b) {
      if (Y[b].is_zero() || a == b) continue;
      Polynomial f = X[a] * Y[b];
      const PolyVector& c = L.structure(a, b);
      for (std::size_t g = 0; g < r; ++g)
        if (!c[g].is_zero()) out[g] += f * c[g];
    }
  }
  PolyVector aX = L.anchor_of(X), aY = L.anchor_of(Y);
  for (std::size_t b = 0; b < r; ++b) {
    out[b] += apply_field(aX, Y[b]);
    out[b] -= apply_field(aY, X[b]);
  }
  return out;
}

inline std::string format_section(const LieAlgebroid& L, const PolyVector& X) { return format_linear(X, L.frames()); }

/// a([e_α, e_β]) = [a(e_α), a(e_β)] on frame pairs.
inline Verdict check_anchor_morphism(const LieAlgebroid& L) {
  const std::size_t r = L.rank();
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      PolyVector lhs = L.anchor_of(L.structure(a, b));
      PolyVector rhs = field_bracket(L.anchor(a), L.anchor(b));
      for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
      if (!all_zero(lhs)) {
        return Verdict::fail("algebroid.anchor", "(" + L.frames()[a] + ", " + L.frames()[b] + ")",
                             format_field(lhs, *L.chart()));
      }
    }
  return Verdict::ok("algebroid.anchor");
}

/// Jacobiator on frame triples a < b < c.
inline Verdict check_frame_jacobi(const LieAlgebroid& L) {
  const std::size_t r = L.rank();
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      for (std::size_t c = b + 1; c < r; ++c) {
        auto ea = L.frame_section(a), eb = L.frame_section(b), ec = L.frame_section(c);
        PolyVector j = bracket_sections(L, L.structure(a, b), ec);
        PolyVector k = bracket_sections(L, L.structure(b, c), ea);
        PolyVector m = bracket_sections(L, L.structure(c, a), eb);
        for (std::size_t g = 0; g < r; ++g) j[g] += k[g] + m[g];
        if (!all_zero(j)) {
          return Verdict::fail("algebroid.jacobi",
                               "(" + L.frames()[a] + ", " + L.frames()[b] + ", " + L.frames()[c] + ")",
                               format_section(L, j));
        }
      }
  return Verdict::ok("algebroid.jacobi");
}

/// Anchor morphism on frame pairs, then Jacobi on frame triples.
inline Verdict check_algebroid(const LieAlgebroid& L) {
  if (Verdict v = check_anchor_morphism(L); !v) return v;
  if (Verdict v = check_frame_jacobi(L); !v) return v;
  return Verdict::ok("algebroid");
}

/// Cartan differential of the algebroid on forms (sections of Λ A*).
inline Form differential(const LieAlgebroid& L, const Form& w) {
  const std::size_t r = L.rank();
  if (w.rank() != r) throw Error("form rank does not match algebroid");
  Form out(L.chart(), r);
  for (int k : w.degrees()) {
    if (static_cast<std::size_t>(k) >= r) continue;
    Form wk = w.part(k);
    for (Mask m = 0; m < (Mask(1) << r); ++m) {
      if (popcount(m) != k + 1) continue;
      auto idx = mask_indices(m);
      Polynomial val(L.chart());
      for (std::size_t p = 0; p < idx.size(); ++p) {
        Polynomial t = L.act(idx[p], wk.component(m & ~bit(idx[p])));
        val += (p % 2) ? -t : t;
      }
      for (std::size_t p = 0; p < idx.size(); ++p)
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
          Mask rest = m & ~bit(idx[p]) & ~bit(idx[q]);
          const PolyVector& c = L.structure(idx[p], idx[q]);
          Polynomial t(L.chart());
          for (std::size_t g = 0; g < r; ++g) {
            if (c[g].is_zero()) continue;
            int s = wedge_sign(bit(g), rest);
            if (s == 0) continue;
            Polynomial term = c[g] * wk.component(rest | bit(g));
            t += s > 0 ? term : -term;
          }
          val += ((p + q) % 2) ? -t : t;
        }
      out.add(m, val);
    }
  }
  return out;
}

namespace detail {

/// L_X P for a section X and homogeneous multisection P.
inline Multisection lie_derivative(const LieAlgebroid& L, const PolyVector& X, const Multisection& P) {
  const std::size_t r = L.rank();
  Multisection out(L.chart(), r);
  PolyVector aX = L.anchor_of(X);
  for (const auto& [m, c] : P.components()) {
    out.add(m, apply_field(aX, c));
    auto idx = mask_indices(m);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      PolyVector br = bracket_sections(L, X, L.frame_section(idx[k]));
      Mask before = 0, after = 0;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        if (t < k) before |= bit(idx[t]);
        if (t > k) after |= bit(idx[t]);
      }
      Multisection piece = wedge(wedge(Multisection::basis(L.chart(), r, before), Multisection::from_section(br, L.chart())),
                                 Multisection::basis(L.chart(), r, after));
      out += c * piece;
    }
  }
  return out;
}

inline Multisection schouten_homogeneous(const LieAlgebroid& L, const Multisection& P, int p, const Multisection& Q,
                                         int q) {
  const std::size_t r = L.rank();
  Multisection out(L.chart(), r);
  if (p == 0 && q == 0) return out;
  if (p == 0) {
    // [f, Q] = Σ_J q_J Σ_k (-1)^k a(e_{j_k})(f) e_{J \ j_k}, k 1-based
    const Polynomial f = P.component(0);
    for (const auto& [m, qc] : Q.components()) {
      auto idx = mask_indices(m);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        Polynomial t = qc * L.act(idx[k], f);
        out.add(m & ~bit(idx[k]), (k % 2 == 0) ? -t : t);
      }
    }
    return out;
  }
  if (q == 0) {
    Multisection s = schouten_homogeneous(L, Q, 0, P, p);
    return (p % 2) ? -s : s;
  }
  if (p == 1) return lie_derivative(L, P.section(), Q);
  if (q == 1) return -lie_derivative(L, Q.section(), P);
  // Q = Σ (q_J e_{j1}) ∧ e_{J'}: [P, Y ∧ R] = [P,Y] ∧ R + (-1)^{p-1} Y ∧ [P,R]
  for (const auto& [m, qc] : Q.components()) {
    auto idx = mask_indices(m);
    PolyVector y = zero_vector(L.chart(), r);
    y[idx[0]] = qc;
    Multisection Y = Multisection::from_section(y, L.chart());
    Multisection R = Multisection::basis(L.chart(), r, m & ~bit(idx[0]));
    Multisection PY = -lie_derivative(L, y, P);
    Multisection PR = schouten_homogeneous(L, P, p, R, q - 1);
    out += wedge(PY, R);
    Multisection t = wedge(Y, PR);
    out += ((p - 1) % 2) ? -t : t;
  }
  return out;
}

}  // namespace detail

/// Schouten bracket extending [ , ] and [X, f] = a(X) f, with
/// [P, Q ∧ R] = [P, Q] ∧ R + (-1)^{(p-1)q} Q ∧ [P, R].
inline Multisection schouten(const LieAlgebroid& L, const Multisection& P, const Multisection& Q) {
  if (P.rank() != L.rank() || Q.rank() != L.rank()) throw Error("multisection rank does not match algebroid");
  Multisection out(L.chart(), L.rank());
  for (int p : P.degrees())
    for (int q : Q.degrees()) out += detail::schouten_homogeneous(L, P.part(p), p, Q.part(q), q);
  return out;
}

/// Tangent algebroid of a chart: frames d/dx^i, identity anchor, zero bracket.
inline LieAlgebroid tangent_algebroid(const ChartPtr& chart) {
  std::vector<std::string> frames;
  for (const auto& n : chart->names()) frames.push_back("d/d" + n);
  LieAlgebroid T(chart, frames);
  for (std::size_t i = 0; i < chart->size(); ++i) {
    PolyVector f = zero_vector(chart, chart->size());
    f[i] = Polynomial::constant(chart, 1);
    T.set_anchor(i, f);
  }
  return T;
}

/// Finite-dimensional Lie algebra as an algebroid over a point.
inline LieAlgebroid as_algebroid(const LieAlgebra& g) {
  ChartPtr point = make_chart({});
  LieAlgebroid L(point, g.names());
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = i + 1; j < g.dim(); ++j) {
      PolyVector v;
      for (const auto& c : g.bracket(i, j)) v.push_back(Polynomial::constant(point, c));
      L.set_bracket(i, j, v);
    }
  return L;
}

/// Structure constants of an algebroid over a point. Throws otherwise.
inline LieAlgebra as_lie_algebra(const LieAlgebroid& L) {
  if (L.dim() != 0) throw Error("algebroid is not over a point");
  LieAlgebra g(L.frames());
  for (std::size_t i = 0; i < L.rank(); ++i)
    for (std::size_t j = i + 1; j < L.rank(); ++j) {
      RVector v;
      for (const auto& p : L.structure(i, j)) v.push_back(p.constant_value());
      g.set_bracket(i, j, v);
    }
  return g;
}

/// Same algebroid on the frame e'_α = Σ_β P[α][β] e_β for a constant
/// invertible matrix P.
inline LieAlgebroid reframe(const LieAlgebroid& L, const RMatrix& P, std::vector<std::string> frames) {
  const std::size_t r = L.rank();
  auto Pinv = inverse(P);
  if (!Pinv || P.size() != r) throw Error("reframe: matrix is not invertible of the right size");
  const ChartPtr& ch = L.chart();
  LieAlgebroid out(ch, std::move(frames));
  std::vector<PolyVector> newframe;
  for (std::size_t a = 0; a < r; ++a) {
    PolyVector s = zero_vector(ch, r), field = zero_vector(ch, L.dim());
    for (std::size_t b = 0; b < r; ++b) {
      if (is_zero(P[a][b])) continue;
      s[b] = Polynomial::constant(ch, P[a][b]);
      for (std::size_t i = 0; i < L.dim(); ++i) field[i] += L.anchor(b)[i] * P[a][b];
    }
    out.set_anchor(a, field);
    newframe.push_back(s);
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      PolyVector old = bracket_sections(L, newframe[a], newframe[b]);
      // old coefficients v on e; new coefficients v P^{-1} on e'
      PolyVector nv = zero_vector(ch, r);
      for (std::size_t g = 0; g < r; ++g)
        for (std::size_t k = 0; k < r; ++k)
          if (!is_zero((*Pinv)[k][g])) nv[g] += old[k] * (*Pinv)[k][g];
      out.set_bracket(a, b, nv);
    }
  return out;
}

/// Compares anchors and structure functions frame by frame (frame names are
/// ignored). Charts must agree by value.
inline Verdict compare_algebroids(const LieAlgebroid& A, const LieAlgebroid& B, const std::string& check = "compare") {
  if (!same_chart(A.chart(), B.chart())) return Verdict::fail(check, "chart", "charts differ");
  if (A.rank() != B.rank())
    return Verdict::fail(check, "rank", std::to_string(A.rank()) + " vs " + std::to_string(B.rank()));
  for (std::size_t a = 0; a < A.rank(); ++a) {
    PolyVector d = A.anchor(a);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= B.anchor(a)[i].with_chart(A.chart());
    if (!all_zero(d)) return Verdict::fail(check, "anchor(" + A.frames()[a] + ")", format_field(d, *A.chart()));
  }
  for (std::size_t a = 0; a < A.rank(); ++a)
    for (std::size_t b = a + 1; b < A.rank(); ++b) {
      PolyVector d = A.structure(a, b);
      for (std::size_t g = 0; g < d.size(); ++g) d[g] -= B.structure(a, b)[g].with_chart(A.chart());
      if (!all_zero(d))
        return Verdict::fail(check, "bracket(" + A.frames()[a] + ", " + A.frames()[b] + ")", format_section(A, d));
    }
  return Verdict::ok(check);
}

/// Bivector on a chart: π = Σ_{i<j} pi[i][j] ∂_i ∧ ∂_j, stored as a full
/// antisymmetric matrix. {f, g} = Σ_{i,j} pi[i][j] ∂_i f ∂_j g.
struct PoissonChart {
  ChartPtr chart;
  PolyMatrix pi;

  explicit PoissonChart(ChartPtr c) : chart(std::move(c)), pi(zero_matrix(chart, chart->size(), chart->size())) {}

  void set(std::size_t i, std::size_t j, const Polynomial& v) {
    if (i == j) {
      if (!v.is_zero()) throw Error("Poisson bivector must be antisymmetric");
      return;
    }
    pi.at(i).at(j) = v.embed(chart);
    pi.at(j).at(i) = -pi[i][j];
  }

  Polynomial bracket(const Polynomial& f, const Polynomial& g) const {
    Polynomial out(chart);
    const std::size_t n = chart->size();
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial fi = f.partial(i);
      if (fi.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!pi[i][j].is_zero()) out += pi[i][j] * fi * g.partial(j);
    }
    return out;
  }

  Multisection bivector() const {
    const std::size_t n = chart->size();
    Multisection out(chart, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.add(bit(i) | bit(j), pi[i][j]);
    return out;
  }
};

/// [π, π] = 0 via the Schouten bracket of the tangent algebroid.
inline Verdict check_poisson(const PoissonChart& P) {
  LieAlgebroid T = tangent_algebroid(P.chart);
  Multisection pi = P.bivector();
  Multisection s = schouten(T, pi, pi);
  if (!s.is_zero()) return Verdict::fail("poisson", "[pi, pi]", s.to_string(T.frames()));
  return Verdict::ok("poisson");
}

/// Linear Poisson structure on the dual bundle, chart (x^i, ξ_α):
/// {ξ_α, ξ_β} = Σ c^γ_{αβ} ξ_γ, {ξ_α, x^i} = a^i_α, {x^i, x^j} = 0.
inline PoissonChart dual_poisson(const LieAlgebroid& L, const std::vector<std::string>& fibre) {
  if (fibre.size() != L.rank()) throw Error("dual_poisson: need one fibre coordinate per frame");
  ChartPtr ch = extend_chart(L.chart(), fibre);
  const std::size_t n = L.dim(), r = L.rank();
  PoissonChart P(ch);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t i = 0; i < n; ++i) P.set(n + a, i, L.anchor(a)[i].embed(ch));
    for (std::size_t b = a + 1; b < r; ++b) {
      Polynomial v(ch);
      for (std::size_t g = 0; g < r; ++g) v += L.structure(a, b)[g].embed(ch) * Polynomial::variable(ch, n + g);
      P.set(n + a, n + b, v);
    }
  }
  return P;
}

inline std::vector<std::string> default_dual_fibre(const LieAlgebroid& L) {
  std::vector<std::string> taken = L.chart()->names();
  taken.insert(taken.end(), L.frames().begin(), L.frames().end());
  return fresh_names("xi", L.rank(), taken);
}

/// Cotangent algebroid of a Poisson chart on frames dx^i: anchor
/// π#(dx^i) = Σ_j π^{ij} ∂_j and [dx^i, dx^j] = d(π^{ij}). Throws Rejected
/// when [π, π] != 0.
inline LieAlgebroid cotangent_algebroid(const PoissonChart& P, std::vector<std::string> frames = {}) {
  Verdict v = check_poisson(P);
  if (!v) throw Rejected(v);
  const std::size_t n = P.chart->size();
  if (frames.empty())
    for (const auto& c : P.chart->names()) frames.push_back("d" + c);
  LieAlgebroid L(P.chart, frames);
  for (std::size_t i = 0; i < n; ++i) {
    L.set_anchor(i, P.pi[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      PolyVector d;
      for (std::size_t k = 0; k < n; ++k) d.push_back(P.pi[i][j].partial(k));
      L.set_bracket(i, j, d);
    }
  }
  return L;
}

/// Degree cap for randomized oracles, from DOUBLEALG_MAX_DEGREE (default 2).
inline unsigned max_random_degree() {
  if (const char* s = std::getenv("DOUBLEALG_MAX_DEGREE")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 0 && v <= 16) return static_cast<unsigned>(v);
  }
  return 2;
}

struct BialgebroidOptions {
  std::uint64_t seed = 1;
  unsigned random_pairs = 4;
  unsigned max_degree = max_random_degree();
};

/// Checks d_*[X, Y] = [d_* X, Y] + [X, d_* Y] where d_* is the differential
/// of `Lstar` (on the dual frame of `L`) and brackets are Schouten brackets
/// of `L`. Checked on frame pairs, on pairs (e_α, x^i e_β) and
/// (x^j e_α, x^i e_β) for all chart coordinates, then on seeded random
/// polynomial sections as a redundant oracle.
inline Verdict check_bialgebroid(const LieAlgebroid& L, const LieAlgebroid& Lstar, const BialgebroidOptions& opt = {}) {
  if (!same_chart(L.chart(), Lstar.chart())) throw Error("bialgebroid: charts differ");
  if (L.rank() != Lstar.rank()) throw Error("bialgebroid: ranks differ");
  for (const auto* side : {&L, &Lstar}) {
    Verdict v = check_algebroid(*side);
    if (!v) {
      v.witness->location = (side == &L ? "first algebroid " : "second algebroid ") + v.check + " " + v.witness->location;
      v.check = "bialgebroid";
      return v;
    }
  }
  const ChartPtr& ch = L.chart();
  const std::size_t r = L.rank(), n = L.dim();
  auto test = [&](const PolyVector& x, const PolyVector& y, const std::string& where) -> std::optional<Verdict> {
    Multisection X = Multisection::from_section(x, ch), Y = Multisection::from_section(y, ch);
    Multisection lhs = differential(Lstar, schouten(L, X, Y));
    Multisection rhs = schouten(L, differential(Lstar, X), Y) + schouten(L, X, differential(Lstar, Y));
    Multisection d = lhs - rhs;
    if (d.is_zero()) return std::nullopt;
    return Verdict::fail("bialgebroid", where, d.to_string(L.frames()));
  };
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      if (auto v = test(L.frame_section(a), L.frame_section(b), "(" + L.frames()[a] + ", " + L.frames()[b] + ")"))
        return *v;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t i = 0; i < n; ++i) {
        PolyVector y = zero_vector(ch, r);
        y[b] = L.coordinate(i);
        if (auto v = test(L.frame_section(a), y,
                          "(" + L.frames()[a] + ", " + ch->name(i) + " * " + L.frames()[b] + ")"))
          return *v;
      }
  // The defect D satisfies D(X, fY) = f D(X, Y) + T(X, f) ^ Y with T a
  // derivation in f, and T(fX, g) = f T(X, g) + S(X; f, g) with S a
  // biderivation. The pairs above pin down D on frames and T; these pin
  // down S, so together they decide the identity for rank >= 2.
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          PolyVector x = zero_vector(ch, r), y = zero_vector(ch, r);
          x[a] = L.coordinate(j);
          y[b] = L.coordinate(i);
          if (auto v = test(x, y,
                            "(" + ch->name(j) + " * " + L.frames()[a] + ", " + ch->name(i) + " * " + L.frames()[b] + ")"))
            return *v;
        }
  Sampler rng(opt.seed);
  for (unsigned t = 0; t < opt.random_pairs && r > 0; ++t) {
    PolyVector x, y;
    for (std::size_t a = 0; a < r; ++a) x.push_back(random_polynomial(ch, rng, opt.max_degree, 3));
    for (std::size_t a = 0; a < r; ++a) y.push_back(random_polynomial(ch, rng, opt.max_degree, 3));
    if (auto v = test(x, y, "random pair (" + format_section(L, x) + ", " + format_section(L, y) + ")")) return *v;
  }
  return Verdict::ok("bialgebroid");
}

/// Tangent prolongation TA -> TM of an algebroid A, on the chart (x, v)
/// with v = velocity coordinates of TM. Frames are the tangent lifts T e_α
/// followed by the core lifts ê_α.
inline LieAlgebroid tangent_prolongation(const LieAlgebroid& A, const std::vector<std::string>& velocity,
                                         std::vector<std::string> frames = {}) {
  const std::size_t n = A.dim(), r = A.rank();
  if (velocity.size() != n) throw Error("tangent_prolongation: need one velocity coordinate per base coordinate");
  ChartPtr ch = extend_chart(A.chart(), velocity);
  if (frames.empty()) {
    for (const auto& f : A.frames()) frames.push_back("T" + f);
    for (const auto& f : A.frames()) frames.push_back("V" + f);
  }
  LieAlgebroid P(ch, frames);
  // tangent lift of a function: f^T = Σ v^i ∂_i f
  auto lift = [&](const Polynomial& f) {
    Polynomial g = f.embed(ch), out(ch);
    for (std::size_t i = 0; i < n; ++i) out += Polynomial::variable(ch, n + i) * g.partial(i);
    return out;
  };
  for (std::size_t a = 0; a < r; ++a) {
    PolyVector comp = zero_vector(ch, 2 * n), vert = zero_vector(ch, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      comp[i] = A.anchor(a)[i].embed(ch);
      comp[n + i] = lift(A.anchor(a)[i]);
      vert[n + i] = A.anchor(a)[i].embed(ch);
    }
    P.set_anchor(a, comp);
    P.set_anchor(r + a, vert);
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      if (a == b) continue;
      const PolyVector& c = A.structure(a, b);
      if (a < b) {
        PolyVector tt = zero_vector(ch, 2 * r);
        for (std::size_t g = 0; g < r; ++g) {
          tt[g] = c[g].embed(ch);
          tt[r + g] = lift(c[g]);
        }
        P.set_bracket(a, b, tt);
      }
      PolyVector tv = zero_vector(ch, 2 * r);
      for (std::size_t g = 0; g < r; ++g) tv[r + g] = c[g].embed(ch);
      P.set_bracket(a, r + b, tv);
    }
  return P;
}

/// Morphism L -> L' over the base map φ (images of the coordinates of L'
/// as polynomials on L's chart), with F(e_k) = Σ_l F[k][l] φ^!e'_l:
///   a(e_k)(φ^j) = Σ_l F[k][l] φ^*(a'(e'_l)(u^j)),
///   F([e_k, e_m]) = Σ F[k][l] F[m][p] φ^*[e'_l, e'_p] + a(e_k)(F[m]) - a(e_m)(F[k]).
inline Verdict check_morphism(const LieAlgebroid& L, const LieAlgebroid& Lp, const PolyVector& phi, const PolyMatrix& F,
                              const std::string& check = "morphism") {
  const std::size_t r = L.rank(), rp = Lp.rank();
  if (phi.size() != Lp.dim() || F.size() != r) throw Error("check_morphism: shapes do not fit");
  const ChartPtr& ch = L.chart();
  PolyVector images;
  for (const auto& p : phi) images.push_back(p.embed(ch));
  auto pull = [&](const Polynomial& g) { return g.substitute(images, ch); };
  PolyMatrix Fm;
  for (const auto& row : F) {
    if (row.size() != rp) throw Error("check_morphism: shapes do not fit");
    PolyVector v;
    for (const auto& p : row) v.push_back(p.embed(ch));
    Fm.push_back(v);
  }
  std::vector<std::string> uframes;
  for (const auto& n : Lp.chart()->names()) uframes.push_back("d/d" + n);
  for (std::size_t k = 0; k < r; ++k) {
    PolyVector d;
    for (std::size_t j = 0; j < Lp.dim(); ++j) {
      Polynomial v = apply_field(L.anchor(k), images[j]);
      for (std::size_t l = 0; l < rp; ++l)
        if (!Fm[k][l].is_zero()) v -= Fm[k][l] * pull(Lp.anchor(l)[j]);
      d.push_back(v);
    }
    if (!all_zero(d)) return Verdict::fail(check, "anchor(" + L.frames()[k] + ")", format_linear(d, uframes));
  }
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t m = k + 1; m < r; ++m) {
      PolyVector d = zero_vector(ch, rp);
      for (std::size_t s = 0; s < r; ++s)
        if (!L.structure(k, m)[s].is_zero())
          for (std::size_t n = 0; n < rp; ++n) d[n] += L.structure(k, m)[s] * Fm[s][n];
      for (std::size_t l = 0; l < rp; ++l) {
        if (Fm[k][l].is_zero()) continue;
        for (std::size_t p = 0; p < rp; ++p) {
          if (Fm[m][p].is_zero() || l == p) continue;
          Polynomial f = Fm[k][l] * Fm[m][p];
          for (std::size_t n = 0; n < rp; ++n)
            if (!Lp.structure(l, p)[n].is_zero()) d[n] -= f * pull(Lp.structure(l, p)[n]);
        }
      }
      for (std::size_t n = 0; n < rp; ++n) d[n] -= L.act(k, Fm[m][n]) - L.act(m, Fm[k][n]);
      if (!all_zero(d))
        return Verdict::fail(check, "(" + L.frames()[k] + ", " + L.frames()[m] + ")", format_linear(d, Lp.frames()));
    }
  return Verdict::ok(check);
}

/// Derivative endomorphism of a vector bundle with frame f_j: base vector
/// field X and D(f_j) = Σ_i action[i][j] f_i, so that
/// D(s f) = s D(f) + X(s) f.
struct Derivation {
  PolyVector base_field;
  PolyMatrix action;

  static Derivation zero(const ChartPtr& chart, std::size_t rank) {
    return {zero_vector(chart, chart->size()), zero_matrix(chart, rank, rank)};
  }

  std::size_t rank() const { return action.size(); }

  PolyVector apply(const PolyVector& s) const {
    PolyVector out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(apply_field(base_field, s[i]));
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j].is_zero()) continue;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (!action[i][j].is_zero()) out[i] += action[i][j] * s[j];
    }
    return out;
  }

  /// Contragredient derivation on the dual bundle: ⟨D*φ, s⟩ = X⟨φ, s⟩ - ⟨φ, Ds⟩,
  /// i.e. action -Mᵀ on the dual frame.
  Derivation dual() const {
    Derivation d{base_field, action};
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) d.action[i][j] = -action[j][i];
    return d;
  }

  bool operator==(const Derivation&) const = default;
};

/// [D1, D2] as a derivation: base field [X1, X2], action
/// X1(M2) - X2(M1) + M1 M2 - M2 M1.
inline Derivation commutator(const Derivation& d1, const Derivation& d2) {
  const std::size_t r = d1.rank();
  Derivation out{field_bracket(d1.base_field, d2.base_field), d1.action};
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Polynomial v = apply_field(d1.base_field, d2.action[i][j]) - apply_field(d2.base_field, d1.action[i][j]);
      for (std::size_t k = 0; k < r; ++k) v += d1.action[i][k] * d2.action[k][j] - d2.action[i][k] * d1.action[k][j];
      out.action[i][j] = v;
    }
  return out;
}

inline Derivation scale(const Derivation& d, const Polynomial& f) {
  Derivation out = d;
  for (auto& p : out.base_field) p = f * p;
  for (auto& row : out.action)
    for (auto& p : row) p = f * p;
  return out;
}

inline Derivation operator+(const Derivation& a, const Derivation& b) {
  Derivation out = a;
  for (std::size_t i = 0; i < out.base_field.size(); ++i) out.base_field[i] += b.base_field[i];
  for (std::size_t i = 0; i < out.rank(); ++i)
    for (std::size_t j = 0; j < out.rank(); ++j) out.action[i][j] += b.action[i][j];
  return out;
}

inline Derivation operator-(const Derivation& a, const Derivation& b) {
  Derivation out = a;
  for (std::size_t i = 0; i < out.base_field.size(); ++i) out.base_field[i] -= b.base_field[i];
  for (std::size_t i = 0; i < out.rank(); ++i)
    for (std::size_t j = 0; j < out.rank(); ++j) out.action[i][j] -= b.action[i][j];
  return out;
}

inline bool is_zero(const Derivation& d) {
  if (!all_zero(d.base_field)) return false;
  for (const auto& row : d.action)
    if (!all_zero(row)) return false;
  return true;
}

/// Derivation printed as `{ field: ...; f1: ...; f2: ... }` with the images
/// of each frame element.
inline std::string format_derivation(const Derivation& d, const Chart& chart, const std::vector<std::string>& frames) {
  std::string out = "{ field: " + format_field(d.base_field, chart);
  for (std::size_t j = 0; j < d.rank(); ++j) {
    PolyVector col;
    for (std::size_t i = 0; i < d.rank(); ++i) col.push_back(d.action[i][j]);
    out += "; " + frames[j] + ": " + format_linear(col, frames);
  }
  return out + " }";
}

}  // namespace doublealg
