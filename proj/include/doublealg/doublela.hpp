#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "doublealg/dvb.hpp"
#include "doublealg/lavb.hpp"

namespace doublealg {

/// Two LA-vector bundle structures on one split double vector bundle:
/// vertical D -> A over side B, horizontal D -> B over side A.
struct DoubleLieAlgebroid {
  DecomposedDVB dvb;
  LAVBundle vertical;
  LAVBundle horizontal;

  const LieAlgebroid& side_A() const { return horizontal.side; }
  const LieAlgebroid& side_B() const { return vertical.side; }
};

/// Throws Error when either structure does not sit on `dvb`.
inline void validate_double(const DoubleLieAlgebroid& d) {
  const auto& D = d.dvb;
  auto bad = [](const std::string& what) { throw Error("double: " + what); };
  if (!same_chart(D.chart, d.vertical.chart()) || !same_chart(D.chart, d.horizontal.chart())) bad("charts differ");
  if (d.vertical.base != D.A || d.vertical.side.frames() != D.B) bad("vertical structure does not match the sides");
  if (d.horizontal.base != D.B || d.horizontal.side.frames() != D.A)
    bad("horizontal structure does not match the sides");
  if (d.vertical.core != D.C || d.horizontal.core != D.C) bad("core does not match");
  if (d.vertical.core_coords != d.horizontal.core_coords) bad("the two structures use different coordinates on C*");
}

/// The structures with the roles of A and B exchanged.
inline DoubleLieAlgebroid transpose(const DoubleLieAlgebroid& d) {
  return {{d.dvb.chart, d.dvb.B, d.dvb.A, d.dvb.C}, d.horizontal, d.vertical};
}

/// ⟪𝒳, 𝒴⟫ = ⟨𝒳, Z_A^{-1}(𝒴)⟩ on frames: rows run over the frames of
/// D⫯A⫯C* (ξ^⊓_β then φ̄_a), columns over those of D⫯B⫯C* (η^⊓_α then ψ̄_b).
inline RMatrix frame_pairing(const DecomposedDVB& D) {
  const std::size_t rA = D.rank_A(), rB = D.rank_B(), rC = D.rank_C();
  const RVector m = vzero(D.chart->size()), kappa = vzero(rC);
  auto unit = [](std::size_t n, std::size_t i) {
    RVector v = vzero(n);
    v[i] = 1;
    return v;
  };
  std::vector<CStarDualElement> rows, cols;
  for (std::size_t b = 0; b < rB; ++b) rows.push_back({Leg::B, m, kappa, unit(rB, b), vzero(rA)});
  for (std::size_t a = 0; a < rA; ++a) rows.push_back({Leg::B, m, kappa, vzero(rB), unit(rA, a)});
  for (std::size_t a = 0; a < rA; ++a) cols.push_back({Leg::A, m, kappa, unit(rA, a), vzero(rB)});
  for (std::size_t b = 0; b < rB; ++b) cols.push_back({Leg::A, m, kappa, vzero(rA), unit(rB, b)});
  RMatrix G = zeros(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) G[i][j] = evaluate_cstar(rows[i], z_A_inverse(cols[j]));
  return G;
}

/// The two induced algebroids over C*, the second re-expressed on the frame
/// dual to the first under ⟪ , ⟫.
struct InducedPair {
  LieAlgebroid first;
  LieAlgebroid second;
};

inline InducedPair induced_pair(const DoubleLieAlgebroid& d) {
  validate_double(d);
  LieAlgebroid E1 = induced_dual_algebroid(d.vertical);
  LieAlgebroid E2 = induced_dual_algebroid(d.horizontal);
  RMatrix G = frame_pairing(d.dvb);
  auto P = inverse(transpose(G));
  if (!P) throw Error("double: pairing over C* is degenerate");
  return {E1, reframe(E2, *P, dual_frame_names(E1.frames()))};
}

/// Both LA-vector bundle checks, then the Lie bialgebroid condition on the
/// induced pair over C*.
inline CheckReport check_double(const DoubleLieAlgebroid& d, const BialgebroidOptions& opt = {}) {
  validate_double(d);
  CheckReport rep;
  Verdict v = check_lavb(d.vertical), h = check_lavb(d.horizontal);
  v.check = "double.vertical";
  h.check = "double.horizontal";
  rep.add(v);
  rep.add(h);
  if (v && h) {
    InducedPair p = induced_pair(d);
    Verdict b = check_bialgebroid(p.first, p.second, opt);
    b.check = "double.bialgebroid";
    rep.add(b);
  }
  return rep;
}

/// Base Poisson structure of the induced pair on C*:
/// {f, g} = Σ_k e(X_k)(f) e_*(Y_k)(g) for dual frames X_k, Y_k.
inline PoissonChart induced_base_poisson(const InducedPair& p) {
  const ChartPtr& ch = p.first.chart();
  PoissonChart P(ch);
  const std::size_t n = ch->size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial v(ch);
      for (std::size_t k = 0; k < p.first.rank(); ++k) v += p.first.anchor(k)[i] * p.second.anchor(k)[j];
      P.pi[i][j] = v;
    }
  return P;
}

/// Core algebroid on C read off from the linear Poisson structure on C*:
/// {κ_γ, κ_γ'} = ℓ_{[c_γ, c_γ']}, {κ_γ, f} = a_C(c_γ)(f). Throws Error if the
/// structure is not linear.
inline LieAlgebroid core_algebroid(const DoubleLieAlgebroid& d) {
  InducedPair p = induced_pair(d);
  PoissonChart P = induced_base_poisson(p);
  const std::size_t n = d.dvb.chart->size(), rC = d.dvb.rank_C();
  std::vector<std::size_t> ks;
  for (std::size_t g = 0; g < rC; ++g) ks.push_back(n + g);
  const ChartPtr& M = d.dvb.chart;
  LieAlgebroid C(M, d.dvb.C);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!P.pi[i][j].is_zero()) throw Error("core algebroid: base functions do not commute");
  for (std::size_t g = 0; g < rC; ++g) {
    PolyVector field;
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial v = P.pi[n + g][i];
      if (v.degree_in(ks) > 0) throw Error("core algebroid: anchor depends on C* fibre coordinates");
      field.push_back(v.embed(M));
    }
    C.set_anchor(g, field);
    for (std::size_t g2 = g + 1; g2 < rC; ++g2) {
      LinearSplit s = split_linear(P.pi[n + g][n + g2], ks);
      if (!s.constant.is_zero()) throw Error("core algebroid: bracket of linear functions is not linear");
      PolyVector v;
      for (const auto& c : s.linear) v.push_back(c.embed(M));
      C.set_bracket(g, g2, v);
    }
  }
  return C;
}

namespace detail {

/// ∂ : C -> A applied to a C-section.
inline PolyVector apply_core_map(const PolyMatrix& del, const PolyVector& c) {
  PolyVector out;
  for (const auto& row : del) {
    Polynomial v(c.empty() ? row[0].chart() : c[0].chart());
    for (std::size_t g = 0; g < c.size(); ++g) v += row[g] * c[g];
    out.push_back(v);
  }
  return out;
}

/// Δ_A : D -> TA as a morphism from D -> B (the `over` structure) to the
/// tangent prolongation of the side algebroid of `over`, over the anchor of
/// the side algebroid of `along`. `along` supplies Λ and ∂.
inline Verdict anchor_morphism(const LAVBundle& along, const LAVBundle& over, const std::string& check) {
  const LieAlgebroid& Aalg = over.side;  // A
  const LieAlgebroid& Balg = along.side;  // B
  const std::size_t n = Aalg.dim(), rA = Aalg.rank(), rB = Balg.rank(), rC = over.rank_core();
  LieAlgebroid L = total_algebroid(over);  // chart (x, w), frames η_α then c̄_γ
  std::vector<std::string> taken = L.chart()->names();
  taken.insert(taken.end(), L.frames().begin(), L.frames().end());
  std::vector<std::string> vel = fresh_names("v", n, taken);
  std::vector<std::string> lifted;
  for (const auto& f : Aalg.frames()) lifted.push_back("T" + f);
  for (const auto& f : Aalg.frames()) lifted.push_back("V" + f);
  taken.insert(taken.end(), vel.begin(), vel.end());
  for (auto& f : lifted)
    while (std::find(taken.begin(), taken.end(), f) != taken.end()) f += "_";
  LieAlgebroid Lp = tangent_prolongation(Aalg, vel, lifted);
  const ChartPtr& ch = L.chart();
  auto w = [&](std::size_t b) { return Polynomial::variable(ch, n + b); };
  PolyVector phi;
  for (std::size_t i = 0; i < n; ++i) phi.push_back(Polynomial::variable(ch, i));
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial v(ch);
    for (std::size_t b = 0; b < rB; ++b) v += w(b) * Balg.anchor(b)[i].embed(ch);
    phi.push_back(v);
  }
  PolyMatrix F = zero_matrix(ch, rA + rC, 2 * rA);
  for (std::size_t a = 0; a < rA; ++a) {
    F[a][a] = Polynomial::constant(ch, 1);
    for (std::size_t a2 = 0; a2 < rA; ++a2)
      for (std::size_t b = 0; b < rB; ++b) F[a][rA + a2] += w(b) * along.lambda[b].action[a][a2].embed(ch);
  }
  for (std::size_t g = 0; g < rC; ++g)
    for (std::size_t a = 0; a < rA; ++a) F[rA + g][rA + a] = along.core_anchor[a][g].embed(ch);
  return check_morphism(L, Lp, phi, F, check);
}

}  // namespace detail

/// Consequences of a passing check_double, recomputed independently:
/// a∘∂_A = b∘∂_B; the core algebroid on C with anchor a∘∂_A and ∂_A, ∂_B
/// bracket-preserving; Δ_A, Δ_B algebroid morphisms. Throws Rejected if
/// check_double fails.
inline CheckReport structural_diagnostics(const DoubleLieAlgebroid& d, const BialgebroidOptions& opt = {}) {
  CheckReport pre = check_double(d, opt);
  if (!pre.pass()) throw Rejected(pre.summary("double"));
  CheckReport rep;
  const ChartPtr& M = d.dvb.chart;
  const std::size_t rC = d.dvb.rank_C(), n = M->size();
  const LieAlgebroid& A = d.side_A();
  const LieAlgebroid& B = d.side_B();
  const PolyMatrix& delA = d.vertical.core_anchor;
  const PolyMatrix& delB = d.horizontal.core_anchor;
  std::vector<PolyVector> aDel;
  Verdict anchors = Verdict::ok("diagnostics.anchors");
  for (std::size_t g = 0; g < rC; ++g) {
    PolyVector cg = zero_vector(M, rC);
    cg[g] = Polynomial::constant(M, 1);
    PolyVector fa = A.anchor_of(detail::apply_core_map(delA, cg));
    PolyVector fb = B.anchor_of(detail::apply_core_map(delB, cg));
    aDel.push_back(fa);
    PolyVector diff = fa;
    for (std::size_t i = 0; i < n; ++i) diff[i] -= fb[i];
    if (anchors && !all_zero(diff)) anchors = Verdict::fail("diagnostics.anchors", d.dvb.C[g], format_field(diff, *M));
  }
  rep.add(anchors);

  Verdict core = Verdict::ok("diagnostics.core_algebroid");
  Verdict morph = Verdict::ok("diagnostics.core_morphisms");
  try {
    LieAlgebroid C = core_algebroid(d);
    for (std::size_t g = 0; g < rC && core; ++g) {
      PolyVector diff = C.anchor(g);
      for (std::size_t i = 0; i < n; ++i) diff[i] -= aDel[g][i];
      if (!all_zero(diff))
        core = Verdict::fail("diagnostics.core_algebroid", "anchor(" + d.dvb.C[g] + ")", format_field(diff, *M));
    }
    if (core) {
      Verdict c = check_algebroid(C);
      if (!c) core = Verdict::fail("diagnostics.core_algebroid", c.check + " " + c.witness->location, c.witness->defect);
    }
    for (std::size_t g = 0; g < rC && morph; ++g)
      for (std::size_t g2 = g + 1; g2 < rC && morph; ++g2)
        for (const auto* side : {&d.horizontal, &d.vertical}) {
          const PolyMatrix& del = side == &d.horizontal ? delA : delB;
          const LieAlgebroid& S = side->side;
          PolyVector lhs = detail::apply_core_map(del, C.structure(g, g2));
          PolyVector rhs = bracket_sections(S, detail::apply_core_map(del, C.frame_section(g)),
                                            detail::apply_core_map(del, C.frame_section(g2)));
          for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] -= rhs[k];
          if (!all_zero(lhs)) {
            morph = Verdict::fail("diagnostics.core_morphisms",
                                  std::string(side == &d.horizontal ? "del_A" : "del_B") + " (" + d.dvb.C[g] + ", " +
                                      d.dvb.C[g2] + ")",
                                  format_section(S, lhs));
            break;
          }
        }
  } catch (const Error& e) {
    core = Verdict::fail("diagnostics.core_algebroid", "induced Poisson structure on C*", e.what());
  }
  rep.add(core);
  rep.add(morph);
  rep.add(detail::anchor_morphism(d.vertical, d.horizontal, "diagnostics.delta_A"));
  rep.add(detail::anchor_morphism(d.horizontal, d.vertical, "diagnostics.delta_B"));
  return rep;
}

/// T²M over `chart`: sides A = TM and B = TM, core TM; both structures are
/// the tangent LA-vector bundle with ∂ = identity.
inline DoubleLieAlgebroid tangent_double(const ChartPtr& chart) {
  std::vector<std::string> A, B, C, ya, yb, k;
  for (const auto& x : chart->names()) {
    A.push_back("A_" + x);
    B.push_back("B_" + x);
    C.push_back("C_" + x);
    ya.push_back("a_" + x);
    yb.push_back("b_" + x);
    k.push_back("k_" + x);
  }
  LieAlgebroid T = tangent_algebroid(chart);
  RMatrix id = identity(T.rank());
  LAVBundle vert = make_lavb(reframe(T, id, B), A, C, ya, k);
  LAVBundle hor = make_lavb(reframe(T, id, A), B, C, yb, k);
  for (std::size_t i = 0; i < chart->size(); ++i)
    vert.core_anchor[i][i] = hor.core_anchor[i][i] = Polynomial::constant(chart, 1);
  return {{chart, A, B, C}, vert, hor};
}

/// (T*A; A, A*; M) for algebroids L on A and Lstar on A* (on the dual
/// frame). Vertical: cotangent algebroid of the Poisson structure on A dual
/// to Lstar; horizontal: cotangent algebroid of the Poisson structure on A*
/// dual to L, carried over by R (core frames change sign). Validity is
/// decided by check_double.
inline DoubleLieAlgebroid build_cotangent_double(const LieAlgebroid& L, const LieAlgebroid& Lstar) {
  if (!same_chart(L.chart(), Lstar.chart()) || L.rank() != Lstar.rank())
    throw Error("cotangent double: algebroids must be dual bundles over one chart");
  for (const auto* s : {&L, &Lstar})
    if (Verdict v = check_algebroid(*s); !v) throw Rejected(v);
  const ChartPtr& M = L.chart();
  const std::size_t n = M->size(), r = L.rank();
  DecomposedDVB D = cotangent_dvb(M, L.frames());
  std::vector<std::string> taken = M->names();
  for (const auto* v : {&D.A, &D.B, &D.C}) taken.insert(taken.end(), v->begin(), v->end());
  std::vector<std::string> y = fresh_names("y", r, taken);
  taken.insert(taken.end(), y.begin(), y.end());
  std::vector<std::string> q = fresh_names("q", r, taken);
  taken.insert(taken.end(), q.begin(), q.end());
  std::vector<std::string> k = fresh_names("t", n, taken);

  // chart order (x, fibre): cotangent frames d x^i then d fibre^a
  auto assemble = [&](const LieAlgebroid& S, const std::vector<std::string>& fibre,
                      const std::vector<std::string>& linear_names, const Rational& core_sign,
                      const std::vector<std::string>& base_names) {
    LieAlgebroid cot = cotangent_algebroid(dual_poisson(S, fibre));
    RMatrix P = zeros(r + n, n + r);
    for (std::size_t a = 0; a < r; ++a) P[a][n + a] = 1;
    for (std::size_t i = 0; i < n; ++i) P[r + i][i] = core_sign;
    std::vector<std::string> frames = linear_names;
    frames.insert(frames.end(), D.C.begin(), D.C.end());
    return lavb_from_total(reframe(cot, P, frames), M, r, base_names, k);
  };
  LAVBundle vert = assemble(Lstar, y, D.B, Rational(1), D.A);
  LAVBundle hor = assemble(L, q, D.A, Rational(-1), D.B);
  return {D, vert, hor};
}

}  // namespace doublealg
