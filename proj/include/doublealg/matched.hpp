#pragma once

#include <string>
#include <utility>
#include <vector>

#include "doublealg/doublela.hpp"

namespace doublealg {

/// ρ : A -> 𝒟(B) given on the frame of the acting algebroid: one derivation
/// of the target bundle per frame, with base field the anchor of that frame.
using RepresentationMap = std::vector<Derivation>;

/// Algebroids A, B on one chart with ρ acting on B and σ acting on A.
struct MatchedPair {
  LieAlgebroid A;
  LieAlgebroid B;
  RepresentationMap rho;
  RepresentationMap sigma;
};

/// Base fields equal the anchor, and ρ_{[e_k, e_m]} = [ρ_{e_k}, ρ_{e_m}].
inline Verdict check_representation(const LieAlgebroid& L, const RepresentationMap& rep, std::size_t target_rank,
                                    const std::vector<std::string>& target, const std::string& check) {
  const std::size_t r = L.rank();
  if (rep.size() != r) throw Error(check + ": need one derivation per frame");
  for (std::size_t k = 0; k < r; ++k) {
    if (rep[k].rank() != target_rank || rep[k].base_field.size() != L.dim())
      throw Error(check + ": derivation has the wrong shape");
    for (auto& p : rep[k].base_field)
      if (!same_chart(p.chart(), L.chart())) throw Error(check + ": chart mismatch");
    if (rep[k].base_field != L.anchor(k)) {
      PolyVector d = rep[k].base_field;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= L.anchor(k)[i];
      return Verdict::fail(check, "field(" + L.frames()[k] + ")", format_field(d, *L.chart()));
    }
  }
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t m = k + 1; m < r; ++m) {
      Derivation expect = Derivation::zero(L.chart(), target_rank);
      for (std::size_t s = 0; s < r; ++s)
        if (!L.structure(k, m)[s].is_zero()) expect = expect + scale(rep[s], L.structure(k, m)[s]);
      Derivation d = commutator(rep[k], rep[m]) - expect;
      if (!is_zero(d))
        return Verdict::fail(check, "(" + L.frames()[k] + ", " + L.frames()[m] + ")",
                             format_derivation(d, *L.chart(), target));
    }
  return Verdict::ok(check);
}

namespace detail {

/// ρ_X(Y) = Σ X^k ρ_{e_k}(Y).
inline PolyVector act_on(const RepresentationMap& rep, const PolyVector& X, const PolyVector& Y) {
  PolyVector out = zero_vector(Y.empty() ? X[0].chart() : Y[0].chart(), Y.size());
  for (std::size_t k = 0; k < X.size(); ++k) {
    if (X[k].is_zero()) continue;
    PolyVector v = rep[k].apply(Y);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += X[k] * v[i];
  }
  return out;
}

inline void subtract(PolyVector& a, const PolyVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
}
inline void accumulate(PolyVector& a, const PolyVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

inline void validate_pair(const MatchedPair& mp) {
  if (!same_chart(mp.A.chart(), mp.B.chart())) throw Error("matched pair: charts differ");
  if (mp.rho.size() != mp.A.rank() || mp.sigma.size() != mp.B.rank())
    throw Error("matched pair: need one derivation per frame");
  for (const auto& d : mp.rho)
    if (d.rank() != mp.B.rank()) throw Error("matched pair: ρ has the wrong shape");
  for (const auto& d : mp.sigma)
    if (d.rank() != mp.A.rank()) throw Error("matched pair: σ has the wrong shape");
}

}  // namespace detail

/// Both algebroids, both representations, then on frames
///   (1) ρ_X[Y1,Y2] = [ρ_X Y1, Y2] + [Y1, ρ_X Y2] + ρ_{σ_{Y2} X} Y1 - ρ_{σ_{Y1} X} Y2,
///   (2) σ_Y[X1,X2] = [σ_Y X1, X2] + [X1, σ_Y X2] + σ_{ρ_{X2} Y} X1 - σ_{ρ_{X1} Y} X2,
///   (3) a(σ_Y X) - b(ρ_X Y) = [b(Y), a(X)].
/// (3) is tensorial; given (3), so are (1) and (2), hence frames suffice.
inline Verdict check_matched(const MatchedPair& mp) {
  detail::validate_pair(mp);
  const LieAlgebroid& A = mp.A;
  const LieAlgebroid& B = mp.B;
  for (const auto* L : {&A, &B}) {
    Verdict v = check_algebroid(*L);
    if (!v) return Verdict::fail("matched.algebroid", (L == &A ? "A " : "B ") + v.check + " " + v.witness->location,
                                 v.witness->defect);
  }
  if (Verdict v = check_representation(A, mp.rho, B.rank(), B.frames(), "matched.rho"); !v) return v;
  if (Verdict v = check_representation(B, mp.sigma, A.rank(), A.frames(), "matched.sigma"); !v) return v;
  const std::size_t rA = A.rank(), rB = B.rank();

  for (std::size_t al = 0; al < rA; ++al)
    for (std::size_t b1 = 0; b1 < rB; ++b1)
      for (std::size_t b2 = b1 + 1; b2 < rB; ++b2) {
        PolyVector X = A.frame_section(al), Y1 = B.frame_section(b1), Y2 = B.frame_section(b2);
        PolyVector d = detail::act_on(mp.rho, X, B.structure(b1, b2));
        detail::subtract(d, bracket_sections(B, detail::act_on(mp.rho, X, Y1), Y2));
        detail::subtract(d, bracket_sections(B, Y1, detail::act_on(mp.rho, X, Y2)));
        detail::subtract(d, detail::act_on(mp.rho, detail::act_on(mp.sigma, Y2, X), Y1));
        detail::accumulate(d, detail::act_on(mp.rho, detail::act_on(mp.sigma, Y1, X), Y2));
        if (!all_zero(d))
          return Verdict::fail("matched.equation1",
                               "(" + A.frames()[al] + "; " + B.frames()[b1] + ", " + B.frames()[b2] + ")",
                               format_section(B, d));
      }
  for (std::size_t be = 0; be < rB; ++be)
    for (std::size_t a1 = 0; a1 < rA; ++a1)
      for (std::size_t a2 = a1 + 1; a2 < rA; ++a2) {
        PolyVector Y = B.frame_section(be), X1 = A.frame_section(a1), X2 = A.frame_section(a2);
        PolyVector d = detail::act_on(mp.sigma, Y, A.structure(a1, a2));
        detail::subtract(d, bracket_sections(A, detail::act_on(mp.sigma, Y, X1), X2));
        detail::subtract(d, bracket_sections(A, X1, detail::act_on(mp.sigma, Y, X2)));
        detail::subtract(d, detail::act_on(mp.sigma, detail::act_on(mp.rho, X2, Y), X1));
        detail::accumulate(d, detail::act_on(mp.sigma, detail::act_on(mp.rho, X1, Y), X2));
        if (!all_zero(d))
          return Verdict::fail("matched.equation2",
                               "(" + B.frames()[be] + "; " + A.frames()[a1] + ", " + A.frames()[a2] + ")",
                               format_section(A, d));
      }
  for (std::size_t al = 0; al < rA; ++al)
    for (std::size_t be = 0; be < rB; ++be) {
      PolyVector X = A.frame_section(al), Y = B.frame_section(be);
      PolyVector d = A.anchor_of(detail::act_on(mp.sigma, Y, X));
      detail::subtract(d, B.anchor_of(detail::act_on(mp.rho, X, Y)));
      detail::subtract(d, field_bracket(B.anchor(be), A.anchor(al)));
      if (!all_zero(d))
        return Verdict::fail("matched.equation3", "(" + A.frames()[al] + ", " + B.frames()[be] + ")",
                             format_field(d, *A.chart()));
    }
  return Verdict::ok("matched");
}

namespace detail {

inline LieAlgebroid bowtie_unchecked(const MatchedPair& mp) {
  validate_pair(mp);
  const LieAlgebroid& A = mp.A;
  const LieAlgebroid& B = mp.B;
  const std::size_t rA = A.rank(), rB = B.rank();
  const ChartPtr& ch = A.chart();
  std::vector<std::string> frames = A.frames();
  frames.insert(frames.end(), B.frames().begin(), B.frames().end());
  LieAlgebroid L(ch, frames);
  for (std::size_t a = 0; a < rA; ++a) L.set_anchor(a, A.anchor(a));
  for (std::size_t b = 0; b < rB; ++b) L.set_anchor(rA + b, B.anchor(b));
  auto widen = [&](const PolyVector& x, const PolyVector& y) {
    PolyVector v = x;
    v.insert(v.end(), y.begin(), y.end());
    return v;
  };
  for (std::size_t a = 0; a < rA; ++a)
    for (std::size_t a2 = a + 1; a2 < rA; ++a2) L.set_bracket(a, a2, widen(A.structure(a, a2), zero_vector(ch, rB)));
  for (std::size_t b = 0; b < rB; ++b)
    for (std::size_t b2 = b + 1; b2 < rB; ++b2)
      L.set_bracket(rA + b, rA + b2, widen(zero_vector(ch, rA), B.structure(b, b2)));
  // [X, Y] = -σ_Y(X) ⊕ ρ_X(Y)
  for (std::size_t a = 0; a < rA; ++a)
    for (std::size_t b = 0; b < rB; ++b) {
      PolyVector s = mp.sigma[b].apply(A.frame_section(a));
      for (auto& p : s) p = -p;
      L.set_bracket(a, rA + b, widen(s, mp.rho[a].apply(B.frame_section(b))));
    }
  return L;
}

}  // namespace detail

/// A ⋈ B on A ⊕ B (frames of A then B): anchor a + b and
/// [X1⊕Y1, X2⊕Y2] = {[X1,X2] + σ_{Y1}X2 - σ_{Y2}X1} ⊕ {[Y1,Y2] + ρ_{X1}Y2 - ρ_{X2}Y1}.
/// Throws Rejected when the pair is not matched.
inline LieAlgebroid build_bowtie(const MatchedPair& mp) {
  if (Verdict v = check_matched(mp); !v) throw Rejected(v);
  return detail::bowtie_unchecked(mp);
}

/// Reads ρ and σ off [X⊕0, 0⊕Y] = -σ_Y(X) ⊕ ρ_X(Y) for an algebroid on
/// A ⊕ B whose first `rank_A` frames span A. Throws Rejected (witness: the
/// leaking bracket) when A ⊕ 0 or 0 ⊕ B is not closed.
inline MatchedPair extract_actions(const LieAlgebroid& L, std::size_t rank_A) {
  const std::size_t r = L.rank();
  if (rank_A > r) throw Error("extract_actions: rank of A exceeds the rank of the algebroid");
  const std::size_t rA = rank_A, rB = r - rank_A;
  const ChartPtr& ch = L.chart();
  std::vector<std::string> fa(L.frames().begin(), L.frames().begin() + rA), fb(L.frames().begin() + rA, L.frames().end());
  auto closed = [&](std::size_t lo, std::size_t hi, std::size_t out_lo, std::size_t out_hi) {
    for (std::size_t k = lo; k < hi; ++k)
      for (std::size_t m = k + 1; m < hi; ++m)
        for (std::size_t s = out_lo; s < out_hi; ++s)
          if (!L.structure(k, m)[s].is_zero())
            throw Rejected(Verdict::fail("extract.closed", "(" + L.frames()[k] + ", " + L.frames()[m] + ")",
                                         format_section(L, L.structure(k, m))));
  };
  closed(0, rA, rA, r);
  closed(rA, r, 0, rA);
  LieAlgebroid A(ch, fa), B(ch, fb);
  for (std::size_t a = 0; a < rA; ++a) {
    A.set_anchor(a, L.anchor(a));
    for (std::size_t a2 = a + 1; a2 < rA; ++a2)
      A.set_bracket(a, a2, PolyVector(L.structure(a, a2).begin(), L.structure(a, a2).begin() + rA));
  }
  for (std::size_t b = 0; b < rB; ++b) {
    B.set_anchor(b, L.anchor(rA + b));
    for (std::size_t b2 = b + 1; b2 < rB; ++b2)
      B.set_bracket(b, b2, PolyVector(L.structure(rA + b, rA + b2).begin() + rA, L.structure(rA + b, rA + b2).end()));
  }
  MatchedPair mp{A, B, {}, {}};
  for (std::size_t a = 0; a < rA; ++a) mp.rho.push_back({A.anchor(a), zero_matrix(ch, rB, rB)});
  for (std::size_t b = 0; b < rB; ++b) mp.sigma.push_back({B.anchor(b), zero_matrix(ch, rA, rA)});
  for (std::size_t a = 0; a < rA; ++a)
    for (std::size_t b = 0; b < rB; ++b) {
      const PolyVector& c = L.structure(a, rA + b);
      for (std::size_t a2 = 0; a2 < rA; ++a2) mp.sigma[b].action[a2][a] = -c[a2];
      for (std::size_t b2 = 0; b2 < rB; ++b2) mp.rho[a].action[b2][b] = c[rA + b2];
    }
  return mp;
}

/// E = A* ⋊ B on A* ⊕ B (frames dual to A, then B) and E* = A^op ⋉ B* on
/// A ⊕ B* (frames of A, then dual to B), on dual frames of one another:
///   e(φ⊕Y) = b(Y),   [φ1⊕Y1, φ2⊕Y2] = {σ*_{Y1}φ2 - σ*_{Y2}φ1} ⊕ [Y1,Y2],
///   e_*(X⊕ψ) = -a(X), [X1⊕ψ1, X2⊕ψ2] = [X2,X1] ⊕ {ρ*_{X2}ψ1 - ρ*_{X1}ψ2},
/// with σ*, ρ* the contragredient representations.
struct Semidirects {
  LieAlgebroid E;
  LieAlgebroid Estar;
};

inline Semidirects build_semidirects(const MatchedPair& mp) {
  detail::validate_pair(mp);
  const LieAlgebroid& A = mp.A;
  const LieAlgebroid& B = mp.B;
  const std::size_t rA = A.rank(), rB = B.rank(), r = rA + rB;
  const ChartPtr& ch = A.chart();
  std::vector<std::string> fe = dual_frame_names(A.frames()), fs = A.frames();
  fe.insert(fe.end(), B.frames().begin(), B.frames().end());
  for (const auto& n : dual_frame_names(B.frames())) fs.push_back(n);
  LieAlgebroid E(ch, fe), Es(ch, fs);

  for (std::size_t b = 0; b < rB; ++b) E.set_anchor(rA + b, B.anchor(b));
  for (std::size_t b = 0; b < rB; ++b)
    for (std::size_t b2 = b + 1; b2 < rB; ++b2) {
      PolyVector v = zero_vector(ch, r);
      for (std::size_t k = 0; k < rB; ++k) v[rA + k] = B.structure(b, b2)[k];
      E.set_bracket(rA + b, rA + b2, v);
    }
  for (std::size_t b = 0; b < rB; ++b) {
    Derivation s = mp.sigma[b].dual();
    for (std::size_t a = 0; a < rA; ++a) {
      // [Y, φ] = σ*_Y(φ)
      PolyVector v = zero_vector(ch, r);
      for (std::size_t k = 0; k < rA; ++k) v[k] = s.action[k][a];
      E.set_bracket(rA + b, a, v);
    }
  }

  for (std::size_t a = 0; a < rA; ++a) {
    PolyVector f = A.anchor(a);
    for (auto& p : f) p = -p;
    Es.set_anchor(a, f);
    for (std::size_t a2 = a + 1; a2 < rA; ++a2) {
      PolyVector v = zero_vector(ch, r);
      for (std::size_t k = 0; k < rA; ++k) v[k] = -A.structure(a, a2)[k];
      Es.set_bracket(a, a2, v);
    }
  }
  for (std::size_t a = 0; a < rA; ++a) {
    Derivation p = mp.rho[a].dual();
    for (std::size_t b = 0; b < rB; ++b) {
      // [X, ψ] = -ρ*_X(ψ)
      PolyVector v = zero_vector(ch, r);
      for (std::size_t k = 0; k < rB; ++k) v[rA + k] = -p.action[k][b];
      Es.set_bracket(a, rA + b, v);
    }
  }
  return {E, Es};
}

/// Lie bialgebroid condition on the semidirect pair.
inline Verdict check_cor_sdp(const MatchedPair& mp, const BialgebroidOptions& opt = {}) {
  Semidirects s = build_semidirects(mp);
  Verdict v = check_bialgebroid(s.E, s.Estar, opt);
  v.check = "semidirect." + v.check;
  return v;
}

namespace detail {

/// D = A ×_M B with D -> A the action algebroid of η(Y) (Λ = σ*) and D -> B
/// that of ξ(X) (Λ = ρ*). No validity checks.
inline DoubleLieAlgebroid vacant_unchecked(const MatchedPair& mp) {
  validate_pair(mp);
  const ChartPtr& M = mp.A.chart();
  std::vector<std::string> taken = M->names();
  taken.insert(taken.end(), mp.A.frames().begin(), mp.A.frames().end());
  taken.insert(taken.end(), mp.B.frames().begin(), mp.B.frames().end());
  std::vector<std::string> y = fresh_names("y", mp.A.rank(), taken);
  taken.insert(taken.end(), y.begin(), y.end());
  std::vector<std::string> w = fresh_names("w", mp.B.rank(), taken);
  LAVBundle vert = make_lavb(mp.B, mp.A.frames(), {}, y, {});
  LAVBundle hor = make_lavb(mp.A, mp.B.frames(), {}, w, {});
  for (std::size_t b = 0; b < mp.B.rank(); ++b) vert.lambda[b] = mp.sigma[b].dual();
  for (std::size_t a = 0; a < mp.A.rank(); ++a) hor.lambda[a] = mp.rho[a].dual();
  return {{M, mp.A.frames(), mp.B.frames(), {}}, vert, hor};
}

}  // namespace detail

/// The vacant double of a matched pair. Throws Rejected when the pair is not
/// matched.
inline DoubleLieAlgebroid vacant_from_matched(const MatchedPair& mp) {
  if (Verdict v = check_matched(mp); !v) throw Rejected(v);
  return detail::vacant_unchecked(mp);
}

/// ρ, σ recovered from the linear anchors of a vacant double (σ = (Λ^vertical)*,
/// ρ = (Λ^horizontal)*). Throws Error when the core is not zero.
inline MatchedPair matched_from_vacant(const DoubleLieAlgebroid& d) {
  validate_double(d);
  if (d.dvb.rank_C() != 0) throw Error("matched_from_vacant: the double is not vacant");
  MatchedPair mp{d.side_A(), d.side_B(), {}, {}};
  for (const auto& l : d.horizontal.lambda) mp.rho.push_back(l.dual());
  for (const auto& l : d.vertical.lambda) mp.sigma.push_back(l.dual());
  return mp;
}

/// A ⋈ B for the matched pair of a vacant double.
inline LieAlgebroid diagonal_structure(const DoubleLieAlgebroid& d) { return build_bowtie(matched_from_vacant(d)); }

/// ρ = ad*, σ = ad* for dual Lie algebras g, g* on dual frames:
/// ⟨ad*_X ψ, Y⟩ = -⟨ψ, [X, Y]⟩.
inline MatchedPair coadjoint_pair(const LieAlgebroid& g, const LieAlgebroid& gstar) {
  if (g.dim() != 0 || gstar.dim() != 0 || g.rank() != gstar.rank())
    throw Error("coadjoint_pair: expects dual Lie algebras over a point");
  const ChartPtr& ch = g.chart();
  const std::size_t n = g.rank();
  MatchedPair mp{g, gstar, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Derivation r = Derivation::zero(ch, n), s = Derivation::zero(ch, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        r.action[k][j] = -g.structure(i, k)[j];
        s.action[k][j] = -gstar.structure(i, k)[j];
      }
    mp.rho.push_back(r);
    mp.sigma.push_back(s);
  }
  return mp;
}

}  // namespace doublealg
