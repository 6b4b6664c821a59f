#pragma once

#include <string>
#include <variant>
#include <vector>

#include "doublealg/algebroid.hpp"

namespace doublealg {

/// LA-vector bundle (D; A, B; M) with algebroids D -> A and B -> M, in a
/// fixed splitting. Generators of Γ_A D are the linear sections ξ_β (lifting
/// the B-frame) and the core sections c̄_γ. On the total space A, with
/// linear coordinates y^a = ℓ_{ε^a}:
///   Δ(ξ_β) = X_β + Σ_a ℓ_{Λ_β ε^a} ∂/∂y^a,    Δ(c̄_γ) = Σ_a ∂[a][γ] ∂/∂y^a,
///   [ξ_β, ξ_β'] = Σ c ξ + Σ_γ (Σ_a twist[β][β'][γ][a] y^a) c̄_γ,
///   [ξ_β, c̄_γ] = Q_β(c_γ)‾,                    [c̄, c̄] = 0.
struct LAVBundle {
  LieAlgebroid side;
  std::vector<std::string> base;         // frames of A
  std::vector<std::string> core;         // frames of C
  std::vector<std::string> base_coords;  // y^a on A
  std::vector<std::string> core_coords;  // κ_γ on C*
  std::vector<Derivation> lambda;        // Λ_β on A*
  std::vector<Derivation> q;             // Q_β on C
  std::vector<std::vector<PolyMatrix>> twist;
  PolyMatrix core_anchor;                // ∂: C -> A, rank A × rank C

  std::size_t rank_side() const { return side.rank(); }
  std::size_t rank_base() const { return base.size(); }
  std::size_t rank_core() const { return core.size(); }
  const ChartPtr& chart() const { return side.chart(); }
};

/// All-zero generator data over `side`; Λ_β and Q_β get the side anchor as
/// base field.
inline LAVBundle make_lavb(LieAlgebroid side, std::vector<std::string> base, std::vector<std::string> core,
                           std::vector<std::string> base_coords, std::vector<std::string> core_coords) {
  LAVBundle V{std::move(side), std::move(base), std::move(core), std::move(base_coords), std::move(core_coords),
              {}, {}, {}, {}};
  const ChartPtr& ch = V.chart();
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core();
  for (std::size_t b = 0; b < rB; ++b) {
    V.lambda.push_back({V.side.anchor(b), zero_matrix(ch, rA, rA)});
    V.q.push_back({V.side.anchor(b), zero_matrix(ch, rC, rC)});
  }
  V.twist.assign(rB, std::vector<PolyMatrix>(rB, zero_matrix(ch, rC, rA)));
  V.core_anchor = zero_matrix(ch, rA, rC);
  return V;
}

/// Sets twist[β][β'] = m and twist[β'][β] = -m.
inline void set_twist(LAVBundle& V, std::size_t b1, std::size_t b2, PolyMatrix m) {
  if (b1 == b2) throw Error("twist of a frame with itself must vanish");
  PolyMatrix neg = m;
  for (auto& row : neg)
    for (auto& p : row) p = -p;
  V.twist.at(b1).at(b2) = std::move(m);
  V.twist.at(b2).at(b1) = std::move(neg);
}

namespace detail {

inline void validate_shape(const LAVBundle& V) {
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core(), n = V.side.dim();
  auto bad = [](const std::string& what) { throw Error("lavb: " + what); };
  if (V.base_coords.size() != rA) bad("need one base coordinate per frame of A");
  if (V.core_coords.size() != rC) bad("need one core coordinate per frame of C");
  if (V.lambda.size() != rB || V.q.size() != rB) bad("need one derivation per side frame");
  for (std::size_t b = 0; b < rB; ++b) {
    if (V.lambda[b].rank() != rA || V.lambda[b].base_field.size() != n) bad("Λ has the wrong shape");
    if (V.q[b].rank() != rC || V.q[b].base_field.size() != n) bad("Q has the wrong shape");
  }
  if (V.twist.size() != rB) bad("twist has the wrong shape");
  for (std::size_t b = 0; b < rB; ++b) {
    if (V.twist[b].size() != rB) bad("twist has the wrong shape");
    for (std::size_t c = 0; c < rB; ++c) {
      if (V.twist[b][c].size() != rC) bad("twist has the wrong shape");
      for (const auto& row : V.twist[b][c])
        if (row.size() != rA) bad("twist has the wrong shape");
    }
  }
  if (V.core_anchor.size() != rA) bad("core anchor has the wrong shape");
  for (const auto& row : V.core_anchor)
    if (row.size() != rC) bad("core anchor has the wrong shape");
}

}  // namespace detail

/// `name_dual` for `name`, and back.
inline std::string dual_name(const std::string& n) {
  const std::string suffix = "_dual";
  if (n.size() > suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0)
    return n.substr(0, n.size() - suffix.size());
  return n + suffix;
}

inline std::vector<std::string> dual_frame_names(const std::vector<std::string>& ns) {
  std::vector<std::string> out;
  for (const auto& n : ns) out.push_back(dual_name(n));
  return out;
}

/// Names of the core frames φ̄ of the induced algebroid, one per A-frame.
inline std::vector<std::string> induced_core_names(const std::vector<std::string>& base) {
  std::vector<std::string> out;
  for (const auto& n : base) out.push_back("bar_" + dual_name(n));
  return out;
}

/// The algebroid D -> A on the chart (x, y), frames ξ_β then c̄_γ.
inline LieAlgebroid total_algebroid(const LAVBundle& V) {
  detail::validate_shape(V);
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core(), n = V.side.dim();
  ChartPtr ch = extend_chart(V.chart(), V.base_coords);
  std::vector<std::string> frames = V.side.frames();
  frames.insert(frames.end(), V.core.begin(), V.core.end());
  LieAlgebroid T(ch, frames);
  auto y = [&](std::size_t a) { return Polynomial::variable(ch, n + a); };
  for (std::size_t b = 0; b < rB; ++b) {
    PolyVector field = zero_vector(ch, n + rA);
    for (std::size_t i = 0; i < n; ++i) field[i] = V.side.anchor(b)[i].embed(ch);
    for (std::size_t a = 0; a < rA; ++a)
      for (std::size_t k = 0; k < rA; ++k) field[n + a] += V.lambda[b].action[k][a].embed(ch) * y(k);
    T.set_anchor(b, field);
  }
  for (std::size_t g = 0; g < rC; ++g) {
    PolyVector field = zero_vector(ch, n + rA);
    for (std::size_t a = 0; a < rA; ++a) field[n + a] = V.core_anchor[a][g].embed(ch);
    T.set_anchor(rB + g, field);
  }
  for (std::size_t b1 = 0; b1 < rB; ++b1) {
    for (std::size_t b2 = b1 + 1; b2 < rB; ++b2) {
      PolyVector v = zero_vector(ch, rB + rC);
      for (std::size_t k = 0; k < rB; ++k) v[k] = V.side.structure(b1, b2)[k].embed(ch);
      for (std::size_t g = 0; g < rC; ++g)
        for (std::size_t a = 0; a < rA; ++a) v[rB + g] += V.twist[b1][b2][g][a].embed(ch) * y(a);
      T.set_bracket(b1, b2, v);
    }
    for (std::size_t g = 0; g < rC; ++g) {
      PolyVector v = zero_vector(ch, rB + rC);
      for (std::size_t k = 0; k < rC; ++k) v[rB + k] = V.q[b1].action[k][g].embed(ch);
      T.set_bracket(b1, rB + g, v);
    }
  }
  return T;
}

/// Reads generator data back from an algebroid on (x, y) whose first
/// `side_rank` frames are linear and the rest core. Throws Error when the
/// weights are wrong (e.g. a core anchor depending on y).
inline LAVBundle lavb_from_total(const LieAlgebroid& T, const ChartPtr& base_chart, std::size_t side_rank,
                                 std::vector<std::string> base, std::vector<std::string> core_coords) {
  const std::size_t n = base_chart->size();
  const std::size_t rA = T.dim() >= n ? T.dim() - n : 0, rB = side_rank;
  if (T.dim() < n || rB > T.rank()) throw Error("lavb_from_total: shapes do not fit");
  const std::size_t rC = T.rank() - rB;
  for (std::size_t i = 0; i < n; ++i)
    if (T.chart()->name(i) != base_chart->name(i)) throw Error("lavb_from_total: chart does not extend the base");
  if (base.size() != rA) throw Error("lavb_from_total: need one frame name per fibre coordinate");
  std::vector<std::string> base_coords(T.chart()->names().begin() + static_cast<long>(n), T.chart()->names().end());
  std::vector<std::size_t> ys;
  for (std::size_t a = 0; a < rA; ++a) ys.push_back(n + a);
  auto weight = [&](const Polynomial& p, int w, const std::string& what) {
    LinearSplit s = split_linear(p, ys);
    if (w == 0) {
      for (const auto& c : s.linear)
        if (!c.is_zero()) throw Error("lavb_from_total: " + what + " must not depend on fibre coordinates");
      return s;
    }
    if (!s.constant.is_zero()) throw Error("lavb_from_total: " + what + " must be linear in fibre coordinates");
    return s;
  };
  auto down = [&](const Polynomial& p) { return p.embed(base_chart); };

  LieAlgebroid side(base_chart, std::vector<std::string>(T.frames().begin(), T.frames().begin() + static_cast<long>(rB)));
  std::vector<std::string> core(T.frames().begin() + static_cast<long>(rB), T.frames().end());
  for (std::size_t b = 0; b < rB; ++b) {
    PolyVector f;
    for (std::size_t i = 0; i < n; ++i) f.push_back(down(weight(T.anchor(b)[i], 0, "linear anchor").constant));
    side.set_anchor(b, f);
    for (std::size_t b2 = b + 1; b2 < rB; ++b2) {
      PolyVector v;
      for (std::size_t k = 0; k < rB; ++k)
        v.push_back(down(weight(T.structure(b, b2)[k], 0, "linear bracket").constant));
      side.set_bracket(b, b2, v);
    }
  }
  LAVBundle V = make_lavb(side, std::move(base), core, std::move(base_coords), std::move(core_coords));
  for (std::size_t b = 0; b < rB; ++b) {
    for (std::size_t a = 0; a < rA; ++a) {
      LinearSplit s = weight(T.anchor(b)[n + a], 1, "linear anchor");
      for (std::size_t k = 0; k < rA; ++k) V.lambda[b].action[k][a] = down(s.linear[k]);
    }
    for (std::size_t b2 = b + 1; b2 < rB; ++b2) {
      PolyMatrix m = zero_matrix(base_chart, rC, rA);
      for (std::size_t g = 0; g < rC; ++g) {
        LinearSplit s = weight(T.structure(b, b2)[rB + g], 1, "linear bracket");
        for (std::size_t a = 0; a < rA; ++a) m[g][a] = down(s.linear[a]);
      }
      set_twist(V, b, b2, m);
    }
    for (std::size_t g = 0; g < rC; ++g) {
      const PolyVector& v = T.structure(b, rB + g);
      for (std::size_t k = 0; k < rB; ++k)
        if (!v[k].is_zero()) throw Error("lavb_from_total: [linear, core] must be a core section");
      for (std::size_t k = 0; k < rC; ++k) V.q[b].action[k][g] = down(weight(v[rB + k], 0, "[linear, core]").constant);
    }
  }
  for (std::size_t g = 0; g < rC; ++g) {
    for (std::size_t i = 0; i < n; ++i)
      if (!T.anchor(rB + g)[i].is_zero()) throw Error("lavb_from_total: core anchor must be vertical");
    for (std::size_t a = 0; a < rA; ++a)
      V.core_anchor[a][g] = down(weight(T.anchor(rB + g)[n + a], 0, "core anchor").constant);
    for (std::size_t g2 = g + 1; g2 < rC; ++g2)
      if (!all_zero(T.structure(rB + g, rB + g2))) throw Error("lavb_from_total: [core, core] must vanish");
  }
  return V;
}

struct LinearSection {
  PolyVector x;    // component along the side frame
  PolyMatrix hom;  // Hom(A, C) part, rank C × rank A
};

struct CoreSection {
  PolyVector c;
};

using Generator = std::variant<LinearSection, CoreSection>;

namespace detail {

inline PolyVector total_section(const LAVBundle& V, const LieAlgebroid& T, const Generator& s) {
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core(), n = V.side.dim();
  const ChartPtr& ch = T.chart();
  PolyVector out = zero_vector(ch, rB + rC);
  if (const auto* l = std::get_if<LinearSection>(&s)) {
    if (l->x.size() != rB || l->hom.size() != rC) throw Error("linear section has the wrong shape");
    for (std::size_t b = 0; b < rB; ++b) out[b] = l->x[b].embed(ch);
    for (std::size_t g = 0; g < rC; ++g) {
      if (l->hom[g].size() != rA) throw Error("linear section has the wrong shape");
      for (std::size_t a = 0; a < rA; ++a) out[rB + g] += l->hom[g][a].embed(ch) * Polynomial::variable(ch, n + a);
    }
  } else {
    const auto& c = std::get<CoreSection>(s).c;
    if (c.size() != rC) throw Error("core section has the wrong shape");
    for (std::size_t g = 0; g < rC; ++g) out[rB + g] = c[g].embed(ch);
  }
  return out;
}

}  // namespace detail

/// Bracket of two generators in Γ_A D, decomposed again: linear for two
/// linear arguments, core otherwise.
inline Generator bracket_generators(const LAVBundle& V, const Generator& s1, const Generator& s2) {
  LieAlgebroid T = total_algebroid(V);
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core(), n = V.side.dim();
  PolyVector r = bracket_sections(T, detail::total_section(V, T, s1), detail::total_section(V, T, s2));
  std::vector<std::size_t> ys;
  for (std::size_t a = 0; a < rA; ++a) ys.push_back(n + a);
  const ChartPtr& M = V.chart();
  if (std::holds_alternative<LinearSection>(s1) && std::holds_alternative<LinearSection>(s2)) {
    LinearSection out{zero_vector(M, rB), zero_matrix(M, rC, rA)};
    for (std::size_t b = 0; b < rB; ++b) out.x[b] = r[b].embed(M);
    for (std::size_t g = 0; g < rC; ++g) {
      LinearSplit s = split_linear(r[rB + g], ys);
      if (!s.constant.is_zero()) throw Error("bracket of linear sections is not linear");
      for (std::size_t a = 0; a < rA; ++a) out.hom[g][a] = s.linear[a].embed(M);
    }
    return out;
  }
  for (std::size_t b = 0; b < rB; ++b)
    if (!r[b].is_zero()) throw Error("bracket with a core section is not a core section");
  CoreSection out{zero_vector(M, rC)};
  for (std::size_t g = 0; g < rC; ++g) out.c[g] = r[rB + g].embed(M);
  return out;
}

namespace detail {

/// Brackets and anchors of the induced algebroid on D⫯A⫯C* -> C*, chart (x, κ), frames
/// ξ^⊓_β then φ̄_a (a over A*-frames).
inline LieAlgebroid induced_unchecked(const LAVBundle& V) {
  validate_shape(V);
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core(), n = V.side.dim();
  ChartPtr ch = extend_chart(V.chart(), V.core_coords);
  std::vector<std::string> frames = V.side.frames();
  for (const auto& a : induced_core_names(V.base)) frames.push_back(a);
  LieAlgebroid E(ch, frames);
  auto kappa = [&](std::size_t g) { return Polynomial::variable(ch, n + g); };
  for (std::size_t b = 0; b < rB; ++b) {
    PolyVector field = zero_vector(ch, n + rC);
    for (std::size_t i = 0; i < n; ++i) field[i] = V.side.anchor(b)[i].embed(ch);
    // e(ξ^⊓)(ℓ_c) = ℓ_{Q(c)}
    for (std::size_t g = 0; g < rC; ++g)
      for (std::size_t k = 0; k < rC; ++k) field[n + g] += V.q[b].action[k][g].embed(ch) * kappa(k);
    E.set_anchor(b, field);
  }
  for (std::size_t a = 0; a < rA; ++a) {
    PolyVector field = zero_vector(ch, n + rC);
    for (std::size_t g = 0; g < rC; ++g) field[n + g] = -V.core_anchor[a][g].embed(ch);
    E.set_anchor(rB + a, field);
  }
  for (std::size_t b1 = 0; b1 < rB; ++b1) {
    for (std::size_t b2 = b1 + 1; b2 < rB; ++b2) {
      PolyVector v = zero_vector(ch, rB + rA);
      for (std::size_t k = 0; k < rB; ++k) v[k] = V.side.structure(b1, b2)[k].embed(ch);
      for (std::size_t a = 0; a < rA; ++a)
        for (std::size_t g = 0; g < rC; ++g) v[rB + a] += V.twist[b1][b2][g][a].embed(ch) * kappa(g);
      E.set_bracket(b1, b2, v);
    }
    for (std::size_t a = 0; a < rA; ++a) {
      PolyVector v = zero_vector(ch, rB + rA);
      for (std::size_t k = 0; k < rA; ++k) v[rB + k] = V.lambda[b1].action[k][a].embed(ch);
      E.set_bracket(b1, rB + a, v);
    }
  }
  return E;
}

}  // namespace detail

/// Side, derivation base fields, generator Jacobi, anchor morphism, and the
/// induced algebroid, in that order.
inline CheckReport lavb_report(const LAVBundle& V) {
  CheckReport rep;
  detail::validate_shape(V);
  Verdict side = check_algebroid(V.side);
  rep.add(side ? Verdict::ok("lavb.side") : Verdict::fail("lavb.side", side.check + " " + side.witness->location,
                                                            side.witness->defect));
  Verdict leib = Verdict::ok("lavb.leibniz");
  for (std::size_t b = 0; b < V.rank_side() && leib; ++b)
    for (const auto* d : {&V.lambda[b], &V.q[b]}) {
      PolyVector diff = d->base_field;
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= V.side.anchor(b)[i];
      if (!all_zero(diff)) {
        leib = Verdict::fail("lavb.leibniz", std::string(d == &V.lambda[b] ? "Lambda" : "Q") + "(" +
                                                 V.side.frames()[b] + ")",
                             format_field(diff, *V.chart()));
        break;
      }
    }
  rep.add(leib);
  LieAlgebroid T = total_algebroid(V);
  Verdict jac = check_frame_jacobi(T);
  rep.add(jac ? Verdict::ok("lavb.jacobi") : Verdict::fail("lavb.jacobi", jac.witness->location, jac.witness->defect));
  Verdict anc = check_anchor_morphism(T);
  rep.add(anc ? Verdict::ok("lavb.anchor") : Verdict::fail("lavb.anchor", anc.witness->location, anc.witness->defect));
  Verdict ind = check_algebroid(detail::induced_unchecked(V));
  rep.add(ind ? Verdict::ok("lavb.induced")
              : Verdict::fail("lavb.induced", ind.check + " " + ind.witness->location, ind.witness->defect));
  return rep;
}

inline Verdict check_lavb(const LAVBundle& V) { return lavb_report(V).summary("lavb"); }

/// The induced algebroid on D⫯A⫯C* -> C*. Throws Rejected for an invalid
/// LA-vector bundle.
inline LieAlgebroid induced_dual_algebroid(const LAVBundle& V) {
  Verdict v = check_lavb(V);
  if (!v) throw Rejected(v);
  return detail::induced_unchecked(V);
}

/// Same algebroid computed from the linear Poisson structure on D⫯A: the
/// C*-linear functions ψ_β = ℓ_{ξ_β} and y^a = ℓ_{φ̄_a} are bracketed and
/// read off as linear combinations with coefficients in (x, κ).
inline LieAlgebroid induced_via_poisson(const LAVBundle& V) {
  LieAlgebroid T = total_algebroid(V);
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core(), n = V.side.dim();
  std::vector<std::string> taken = T.chart()->names();
  taken.insert(taken.end(), V.core_coords.begin(), V.core_coords.end());
  taken.insert(taken.end(), T.frames().begin(), T.frames().end());
  std::vector<std::string> fibre = fresh_names("psi", rB, taken);
  fibre.insert(fibre.end(), V.core_coords.begin(), V.core_coords.end());
  PoissonChart P = dual_poisson(T, fibre);
  const ChartPtr& big = P.chart;
  ChartPtr target = extend_chart(V.chart(), V.core_coords);
  std::vector<std::string> frames = V.side.frames();
  for (const auto& a : induced_core_names(V.base)) frames.push_back(a);
  LieAlgebroid E(target, frames);
  // linear function of frame k: ψ_k for k < rB, y^{k - rB} otherwise
  std::vector<std::size_t> lin;
  for (std::size_t b = 0; b < rB; ++b) lin.push_back(n + rA + b);
  for (std::size_t a = 0; a < rA; ++a) lin.push_back(n + a);
  std::vector<std::size_t> base_fns;
  for (std::size_t i = 0; i < n; ++i) base_fns.push_back(i);
  for (std::size_t g = 0; g < rC; ++g) base_fns.push_back(n + rA + rB + g);
  auto fn = [&](std::size_t idx) { return Polynomial::variable(big, idx); };
  for (std::size_t k = 0; k < rB + rA; ++k) {
    PolyVector field;
    for (std::size_t idx : base_fns) field.push_back(P.bracket(fn(lin[k]), fn(idx)).embed(target));
    E.set_anchor(k, field);
    for (std::size_t l = k + 1; l < rB + rA; ++l) {
      LinearSplit s = split_linear(P.bracket(fn(lin[k]), fn(lin[l])), lin);
      if (!s.constant.is_zero()) throw Error("induced_via_poisson: bracket is not linear over C*");
      PolyVector v;
      for (const auto& c : s.linear) v.push_back(c.embed(target));
      E.set_bracket(k, l, v);
    }
  }
  return E;
}

/// Generator data of D⫯A⫯C* as an LA-vector bundle over C* with side B
/// and core A*: Λ' = Q, Q' = Λ, twist' = twistᵀ, ∂' = -∂ᵀ.
inline LAVBundle dual_lavb(const LAVBundle& V) {
  detail::validate_shape(V);
  const std::size_t rB = V.rank_side(), rA = V.rank_base(), rC = V.rank_core();
  LAVBundle W = make_lavb(V.side, dual_frame_names(V.core), induced_core_names(V.base), V.core_coords, V.base_coords);
  W.lambda = V.q;
  W.q = V.lambda;
  for (std::size_t b1 = 0; b1 < rB; ++b1)
    for (std::size_t b2 = 0; b2 < rB; ++b2)
      for (std::size_t a = 0; a < rA; ++a)
        for (std::size_t g = 0; g < rC; ++g) W.twist[b1][b2][a][g] = V.twist[b1][b2][g][a];
  for (std::size_t g = 0; g < rC; ++g)
    for (std::size_t a = 0; a < rA; ++a) W.core_anchor[g][a] = -V.core_anchor[a][g];
  return W;
}

/// Generator data equal up to names.
inline bool same_generators(const LAVBundle& V, const LAVBundle& W) {
  if (!compare_algebroids(V.side, W.side)) return false;
  if (V.rank_base() != W.rank_base() || V.rank_core() != W.rank_core()) return false;
  return V.lambda == W.lambda && V.q == W.q && V.twist == W.twist && V.core_anchor == W.core_anchor;
}

/// (TA; A, TM; M) for a vector bundle A over `chart` with D = TA -> A the
/// tangent algebroid of A: side TM, Λ = 0, Q = 0, no twist, ∂ = identity.
inline LAVBundle tangent_lavb(const ChartPtr& chart, std::vector<std::string> base,
                              std::vector<std::string> base_coords, std::vector<std::string> core_coords) {
  std::vector<std::string> core;
  for (const auto& a : base) core.push_back(a + "_core");
  LAVBundle V = make_lavb(tangent_algebroid(chart), std::move(base), std::move(core), std::move(base_coords),
                          std::move(core_coords));
  for (std::size_t a = 0; a < V.rank_base(); ++a) V.core_anchor[a][a] = Polynomial::constant(chart, 1);
  return V;
}

}  // namespace doublealg
