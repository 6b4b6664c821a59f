#pragma once

#include <string>
#include <vector>

#include "doublealg/algebroid.hpp"
#include "doublealg/linalg.hpp"

namespace doublealg {

/// Split double vector bundle D = A ×_M B ×_M C over a chart, with side
/// bundles A, B and core C given by frame names.
struct DecomposedDVB {
  ChartPtr chart;
  std::vector<std::string> A, B, C;

  std::size_t rank_A() const { return A.size(); }
  std::size_t rank_B() const { return B.size(); }
  std::size_t rank_C() const { return C.size(); }
  bool operator==(const DecomposedDVB& o) const {
    return same_chart(chart, o.chart) && A == o.A && B == o.B && C == o.C;
  }
};

/// Element d with outline (d; a, b; m) and core component c.
struct DVBElement {
  RVector m, a, b, c;
  bool operator==(const DVBElement&) const = default;
};

enum class Leg { A, B };

inline void check_shape(const DecomposedDVB& D, const DVBElement& d) {
  if (d.m.size() != D.chart->size() || d.a.size() != D.rank_A() || d.b.size() != D.rank_B() ||
      d.c.size() != D.rank_C())
    throw Error("element does not fit the double vector bundle");
}

inline RVector vadd(const RVector& x, const RVector& y) {
  if (x.size() != y.size()) throw Error("vector length mismatch");
  RVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}
inline RVector vneg(RVector x) {
  for (auto& v : x) v = -v;
  return x;
}
inline RVector vzero(std::size_t n) { return RVector(n, Rational(0)); }

/// Addition in D -> A (leg A, same a) or in D -> B (leg B, same b).
inline DVBElement add(const DVBElement& d1, const DVBElement& d2, Leg leg) {
  if (d1.m != d2.m) throw Error("add: base points differ");
  if (leg == Leg::A) {
    if (d1.a != d2.a) throw Error("add over A: side components differ");
    return {d1.m, d1.a, vadd(d1.b, d2.b), vadd(d1.c, d2.c)};
  }
  if (d1.b != d2.b) throw Error("add over B: side components differ");
  return {d1.m, vadd(d1.a, d2.a), d1.b, vadd(d1.c, d2.c)};
}

/// Zero of D -> A over a (written 0~_a).
inline DVBElement zero_over_A(const DecomposedDVB& D, const RVector& m, const RVector& a) {
  return {m, a, vzero(D.rank_B()), vzero(D.rank_C())};
}
/// Zero of D -> B over b (written 0~_b).
inline DVBElement zero_over_B(const DecomposedDVB& D, const RVector& m, const RVector& b) {
  return {m, vzero(D.rank_A()), b, vzero(D.rank_C())};
}
/// Double zero over m.
inline DVBElement double_zero(const DecomposedDVB& D, const RVector& m) {
  return {m, vzero(D.rank_A()), vzero(D.rank_B()), vzero(D.rank_C())};
}
/// Core element c̄ over m.
inline DVBElement core_element(const DecomposedDVB& D, const RVector& m, const RVector& c) {
  return {m, vzero(D.rank_A()), vzero(D.rank_B()), c};
}

/// Element of D⫯A (leg A: side a ∈ A, covector ψ ∈ B*) or of D⫯B (leg B:
/// side b ∈ B, covector φ ∈ A*); both carry κ ∈ C*.
struct DualDVBElement {
  Leg leg;
  RVector m;
  RVector side;
  RVector cov;
  RVector kappa;
  bool operator==(const DualDVBElement&) const = default;
};

/// ⟨Φ, d⟩ = ⟨ψ, b⟩ + ⟨κ, c⟩ for Φ ∈ D⫯A over d's a-component; symmetric
/// ⟨d, Ψ⟩ = ⟨φ, a⟩ + ⟨κ, c⟩ for Ψ ∈ D⫯B.
inline Rational evaluate(const DualDVBElement& f, const DVBElement& d) {
  if (f.m != d.m) throw Error("evaluate: base points differ");
  if (f.leg == Leg::A) {
    if (f.side != d.a) throw Error("evaluate: outline mismatch over A");
    return dot(f.cov, d.b) + dot(f.kappa, d.c);
  }
  if (f.side != d.b) throw Error("evaluate: outline mismatch over B");
  return dot(f.cov, d.a) + dot(f.kappa, d.c);
}

/// Addition over C* (same κ): sides and covectors add.
inline DualDVBElement add_over_cstar(const DualDVBElement& x, const DualDVBElement& y) {
  if (x.leg != y.leg || x.m != y.m || x.kappa != y.kappa) throw Error("add over C*: outlines differ");
  return {x.leg, x.m, vadd(x.side, y.side), vadd(x.cov, y.cov), x.kappa};
}

/// Addition over the side bundle (same side): covectors and κ add.
inline DualDVBElement add_over_side(const DualDVBElement& x, const DualDVBElement& y) {
  if (x.leg != y.leg || x.m != y.m || x.side != y.side) throw Error("add over side: outlines differ");
  return {x.leg, x.m, x.side, vadd(x.cov, y.cov), vadd(x.kappa, y.kappa)};
}

/// ⟨Φ | Ψ⟩ = ⟨Φ, d⟩ - ⟨d, Ψ⟩ for any d with outline (d; a, b; m), here with
/// core component c.
inline Rational pair_with(const DualDVBElement& Phi, const DualDVBElement& Psi, const RVector& c) {
  if (Phi.leg != Leg::A || Psi.leg != Leg::B) throw Error("pair: expects an element of each dual");
  if (Phi.m != Psi.m) throw Error("pair: base points differ");
  if (Phi.kappa != Psi.kappa) throw Error("pair: core covectors differ");
  DVBElement d{Phi.m, Phi.side, Psi.side, c};
  return evaluate(Phi, d) - evaluate(Psi, d);
}

inline Rational pair(const DualDVBElement& Phi, const DualDVBElement& Psi) {
  return pair_with(Phi, Psi, vzero(Phi.kappa.size()));
}

/// Element of a dual over C*: D⫯B⫯C* (from = Leg::A, side a ∈ A, core ψ ∈ B*)
/// or D⫯A⫯C* (from = Leg::B, side b ∈ B, core φ ∈ A*), over κ.
struct CStarDualElement {
  Leg from;
  RVector m;
  RVector kappa;
  RVector side;
  RVector core;
  bool operator==(const CStarDualElement&) const = default;
};

/// Pairing of D⫯B⫯C* with D⫯B (or D⫯A⫯C* with D⫯A) over a common κ: the
/// side pairs with the other core and the core with the other side.
inline Rational evaluate_cstar(const CStarDualElement& z, const DualDVBElement& x) {
  if (z.m != x.m || z.kappa != x.kappa) throw Error("evaluate over C*: outlines differ");
  if ((z.from == Leg::A) != (x.leg == Leg::B)) throw Error("evaluate over C*: wrong dual");
  return dot(z.side, x.cov) + dot(z.core, x.side);
}

/// Z_A : D⫯A -> D⫯B⫯C*, (a, ψ, κ) ↦ (-a, ψ, κ). Satisfies ⟨Z_A Φ, Ψ⟩ = ⟨Φ|Ψ⟩.
inline CStarDualElement z_A(const DualDVBElement& Phi) {
  if (Phi.leg != Leg::A) throw Error("Z_A expects an element of D⫯A");
  return {Leg::A, Phi.m, Phi.kappa, vneg(Phi.side), Phi.cov};
}

/// Z_B : D⫯B -> D⫯A⫯C*, (b, φ, κ) ↦ (b, -φ, κ); the transpose of Z_A.
inline CStarDualElement z_B(const DualDVBElement& Psi) {
  if (Psi.leg != Leg::B) throw Error("Z_B expects an element of D⫯B");
  return {Leg::B, Psi.m, Psi.kappa, Psi.side, vneg(Psi.cov)};
}

/// Z_A^{-1} : D⫯B⫯C* -> D⫯A, (a, ψ, κ) ↦ (-a, ψ, κ).
inline DualDVBElement z_A_inverse(const CStarDualElement& z) {
  if (z.from != Leg::A) throw Error("Z_A^-1 expects an element of D⫯B⫯C*");
  return {Leg::A, z.m, vneg(z.side), z.core, z.kappa};
}

/// Fibre pairing matrix over (m, κ): rows run over the basis (e_a, 0) then
/// (0, ε^ψ) of D⫯A, columns over (e_b, 0) then (0, ε^φ) of D⫯B.
inline RMatrix pairing_matrix(const DecomposedDVB& D, const RVector& m, const RVector& kappa) {
  const std::size_t rA = D.rank_A(), rB = D.rank_B();
  auto unit = [](std::size_t n, std::size_t i) {
    RVector v = vzero(n);
    v[i] = 1;
    return v;
  };
  std::vector<DualDVBElement> rows, cols;
  for (std::size_t i = 0; i < rA; ++i) rows.push_back({Leg::A, m, unit(rA, i), vzero(rB), kappa});
  for (std::size_t i = 0; i < rB; ++i) rows.push_back({Leg::A, m, vzero(rA), unit(rB, i), kappa});
  for (std::size_t i = 0; i < rB; ++i) cols.push_back({Leg::B, m, unit(rB, i), vzero(rA), kappa});
  for (std::size_t i = 0; i < rA; ++i) cols.push_back({Leg::B, m, vzero(rB), unit(rA, i), kappa});
  RMatrix M = zeros(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) M[i][j] = pair(rows[i], cols[j]);
  return M;
}

/// Cotangent double (T*A; A, A*; M) of a vector bundle A with the given
/// frame over `chart`: sides A and A*, core T*M.
inline DecomposedDVB cotangent_dvb(const ChartPtr& chart, const std::vector<std::string>& frames) {
  std::vector<std::string> dual, core;
  for (const auto& f : frames) dual.push_back(f + "_dual");
  for (const auto& x : chart->names()) core.push_back("d" + x);
  return {chart, frames, dual, core};
}

/// The same bundle seen from A*: (T*A*; A*, A; M).
inline DecomposedDVB cotangent_dvb_of_dual(const DecomposedDVB& TstarA) {
  return {TstarA.chart, TstarA.B, TstarA.A, TstarA.C};
}

/// R : T*A* -> T*A in split form, (m; φ, a; p) ↦ (m; a, φ; -p).
inline DVBElement r_map(const DVBElement& F) { return {F.m, F.b, F.a, vneg(F.c)}; }

/// Tangent vector to a vector bundle at the point `fibre` over m, with base
/// velocity xdot and fibre velocity fibre_dot.
struct BundleTangent {
  RVector m, fibre, xdot, fibre_dot;
};

/// ⟨F, X⟩ for F ∈ T*E in split form (m; e, e*; p) and X tangent to E at e:
/// p·ẋ + ⟨e*, ė⟩.
inline Rational cotangent_pairing(const DVBElement& F, const BundleTangent& X) {
  if (F.m != X.m || F.a != X.fibre) throw Error("cotangent pairing: outline mismatch");
  return dot(F.c, X.xdot) + dot(F.b, X.fibre_dot);
}

/// ⟨⟨X, ξ⟩⟩ = d/dt ⟨φ_t, a_t⟩ at t = 0 for X ∈ T(A*), ξ ∈ TA over the same
/// tangent vector of M, expanded as ⟨φ̇, a⟩ + ⟨φ, ȧ⟩.
inline Rational tangent_pairing(const BundleTangent& X, const BundleTangent& xi) {
  if (X.m != xi.m || X.xdot != xi.xdot) throw Error("tangent pairing: base tangent vectors differ");
  return dot(X.fibre_dot, xi.fibre) + dot(X.fibre, xi.fibre_dot);
}

inline std::string format_element(const DVBElement& d) {
  auto v = [](const RVector& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + to_string(x[i]);
    return s + ")";
  };
  return "(" + v(d.m) + "; " + v(d.a) + ", " + v(d.b) + "; " + v(d.c) + ")";
}

}  // namespace doublealg
