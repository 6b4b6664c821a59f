#include <gtest/gtest.h>

#include "doublealg/algebroid.hpp"

using namespace doublealg;

namespace {

constexpr int kIterations = 200;

ChartPtr chart_x() {
  static ChartPtr c = make_chart({"x"});
  return c;
}
ChartPtr chart_xy() {
  static ChartPtr c = make_chart({"x", "y"});
  return c;
}
ChartPtr chart_xyz() {
  static ChartPtr c = make_chart({"x", "y", "z"});
  return c;
}

Polynomial P(const std::string& s, const ChartPtr& c) { return parse_polynomial(s, c); }

PoissonChart poisson_xdxdy() {
  PoissonChart pc(chart_xy());
  pc.set(0, 1, P("x", chart_xy()));
  return pc;
}

// [e1, e2] = e2 on a point.
LieAlgebroid two_dim_algebra() {
  LieAlgebra g({"e1", "e2"});
  g.set_bracket(0, 1, {Rational(0), Rational(1)});
  return as_algebroid(g);
}

// Rank 2 over (x, y): a(e1) = x ∂x, a(e2) = x ∂y, [e1, e2] = e2.
LieAlgebroid anchored_rank_two() {
  LieAlgebroid L(chart_xy(), {"e1", "e2"});
  L.set_anchor(0, {P("x", chart_xy()), P("0", chart_xy())});
  L.set_anchor(1, {P("0", chart_xy()), P("x", chart_xy())});
  L.set_bracket(0, 1, {P("0", chart_xy()), P("1", chart_xy())});
  return L;
}

std::vector<LieAlgebroid> valid_catalog() {
  std::vector<LieAlgebroid> out{tangent_algebroid(chart_xyz()), cotangent_algebroid(poisson_xdxdy()),
                                two_dim_algebra(), anchored_rank_two()};
  out.push_back(tangent_prolongation(anchored_rank_two(), {"u", "v"}));
  return out;
}

// Oracle: vector-field commutator evaluated on a test function, using only
// polynomial partial derivatives.
Polynomial apply_oracle(const PolyVector& X, const Polynomial& f) {
  Polynomial out(f.chart());
  for (std::size_t i = 0; i < X.size(); ++i) out += X[i] * f.partial(i);
  return out;
}

// Oracle: Koszul bracket of 1-forms given by coefficient vectors.
// (L_X β)_k = Σ_i X^i ∂_i β_k + Σ_i β_i ∂_k X^i.
PolyVector lie_on_one_form(const PolyVector& X, const PolyVector& beta) {
  PolyVector out;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    Polynomial s(beta[k].chart());
    for (std::size_t i = 0; i < X.size(); ++i) s += X[i] * beta[k].partial(i) + beta[i] * X[i].partial(k);
    out.push_back(s);
  }
  return out;
}

PolyVector koszul(const PoissonChart& pc, const PolyVector& alpha, const PolyVector& beta) {
  const std::size_t n = alpha.size();
  auto sharp = [&](const PolyVector& a) {
    PolyVector v = zero_vector(pc.chart, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[j] += a[i] * pc.pi[i][j];
    return v;
  };
  Polynomial pab(pc.chart);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pab += pc.pi[i][j] * alpha[i] * beta[j];
  PolyVector a = lie_on_one_form(sharp(alpha), beta), b = lie_on_one_form(sharp(beta), alpha);
  for (std::size_t k = 0; k < n; ++k) a[k] = a[k] - b[k] - pab.partial(k);
  return a;
}

}  // namespace

TEST(Bracket, AbelianZeroAnchor) {
  LieAlgebroid L(chart_xy(), {"a", "b"});
  EXPECT_TRUE(all_zero(bracket_sections(L, L.frame_section(0), L.frame_section(1))));
}

TEST(Bracket, TangentMatchesCommutator) {
  LieAlgebroid T = tangent_algebroid(chart_x());
  PolyVector X{P("1", chart_x())}, Y{P("x", chart_x())};
  PolyVector br = bracket_sections(T, X, Y);
  EXPECT_EQ(br[0], P("1", chart_x()));
  Sampler rng(1);
  for (int it = 0; it < kIterations; ++it) {
    PolyVector A{random_polynomial(chart_x(), rng, 3)}, B{random_polynomial(chart_x(), rng, 3)};
    Polynomial f = random_polynomial(chart_x(), rng, 3);
    Polynomial expect = apply_oracle(A, apply_oracle(B, f)) - apply_oracle(B, apply_oracle(A, f));
    ASSERT_EQ(apply_oracle(bracket_sections(T, A, B), f), expect);
  }
}

TEST(Bracket, Antisymmetric) {
  Sampler rng(2);
  for (const auto& L : valid_catalog()) {
    for (int it = 0; it < 40; ++it) {
      PolyVector X, Y;
      for (std::size_t a = 0; a < L.rank(); ++a) {
        X.push_back(random_polynomial(L.chart(), rng, 2));
        Y.push_back(random_polynomial(L.chart(), rng, 2));
      }
      PolyVector s = bracket_sections(L, X, Y), t = bracket_sections(L, Y, X);
      for (std::size_t a = 0; a < L.rank(); ++a) ASSERT_EQ(s[a], -t[a]);
    }
  }
}

TEST(CheckAlgebroid, CatalogPasses) {
  for (const auto& L : valid_catalog()) EXPECT_TRUE(check_algebroid(L).pass) << check_algebroid(L).witness->defect;
}

TEST(CheckAlgebroid, NonPoissonCotangentFails) {
  // π = x ∂x∧∂y + y^2 ∂y∧∂z: {x,{y,z}} + {y,{z,x}} + {z,{x,y}} = 2xy
  PoissonChart pc(chart_xyz());
  pc.set(0, 1, P("x", chart_xyz()));
  pc.set(1, 2, P("y^2", chart_xyz()));
  Polynomial x = P("x", chart_xyz()), y = P("y", chart_xyz()), z = P("z", chart_xyz());
  Polynomial jac = pc.bracket(x, pc.bracket(y, z)) + pc.bracket(y, pc.bracket(z, x)) + pc.bracket(z, pc.bracket(x, y));
  EXPECT_EQ(jac, P("2 * x * y", chart_xyz()));
  EXPECT_FALSE(check_poisson(pc).pass);
  EXPECT_THROW(cotangent_algebroid(pc), Rejected);
  // assembled without the guard, the algebroid check catches it
  LieAlgebroid L(chart_xyz(), {"dx", "dy", "dz"});
  for (std::size_t i = 0; i < 3; ++i) {
    L.set_anchor(i, pc.pi[i]);
    for (std::size_t j = i + 1; j < 3; ++j) {
      PolyVector d;
      for (std::size_t k = 0; k < 3; ++k) d.push_back(pc.pi[i][j].partial(k));
      L.set_bracket(i, j, d);
    }
  }
  Verdict v = check_algebroid(L);
  ASSERT_FALSE(v.pass);
  EXPECT_TRUE(v.witness.has_value());
  EXPECT_NE(v.witness->defect, "0");
}

TEST(CheckAlgebroid, BrokenAnchorWitness) {
  LieAlgebroid L = anchored_rank_two();
  L.set_bracket(0, 1, {P("0", chart_xy()), P("2", chart_xy())});
  Verdict v = check_algebroid(L);
  ASSERT_FALSE(v.pass);
  EXPECT_EQ(v.check, "algebroid.anchor");
  EXPECT_EQ(v.witness->location, "(e1, e2)");
  EXPECT_EQ(v.witness->defect, "x * d/dy");
}

TEST(Cotangent, PoissonXExample) {
  LieAlgebroid L = cotangent_algebroid(poisson_xdxdy());
  EXPECT_EQ(L.frames(), (std::vector<std::string>{"dx", "dy"}));
  EXPECT_EQ(format_field(L.anchor(0), *L.chart()), "x * d/dy");
  EXPECT_EQ(format_field(L.anchor(1), *L.chart()), "-x * d/dx");
  EXPECT_EQ(format_section(L, L.structure(0, 1)), "dx");
  EXPECT_TRUE(check_algebroid(L).pass);
}

TEST(Cotangent, MatchesKoszulOracle) {
  PoissonChart pc(chart_xyz());
  // a linear Poisson structure (so(3)* like): {x,y} = z, {y,z} = x, {z,x} = y
  pc.set(0, 1, P("z", chart_xyz()));
  pc.set(1, 2, P("x", chart_xyz()));
  pc.set(2, 0, P("y", chart_xyz()));
  ASSERT_TRUE(check_poisson(pc).pass);
  LieAlgebroid L = cotangent_algebroid(pc);
  Sampler rng(4);
  for (int it = 0; it < 60; ++it) {
    PolyVector a, b;
    for (int k = 0; k < 3; ++k) {
      a.push_back(random_polynomial(chart_xyz(), rng, 2, 2));
      b.push_back(random_polynomial(chart_xyz(), rng, 2, 2));
    }
    ASSERT_EQ(bracket_sections(L, a, b), koszul(pc, a, b));
  }
}

TEST(Cotangent, ConstantSymplectic) {
  ChartPtr qp = make_chart({"q", "p"});
  PoissonChart pc(qp);
  pc.set(0, 1, P("1", qp));
  LieAlgebroid L = cotangent_algebroid(pc);
  EXPECT_TRUE(all_zero(L.structure(0, 1)));
  RMatrix anchor{{Rational(0), Rational(1)}, {Rational(-1), Rational(0)}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(L.anchor(i)[j], Polynomial::constant(qp, anchor[i][j]));
  EXPECT_NE(determinant(anchor), 0);
}

TEST(Cotangent, ZeroPoisson) {
  LieAlgebroid L = cotangent_algebroid(PoissonChart(chart_xy()));
  EXPECT_TRUE(all_zero(L.structure(0, 1)));
  EXPECT_TRUE(all_zero(L.anchor(0)));
}

TEST(Differential, DeRhamExample) {
  LieAlgebroid T = tangent_algebroid(chart_xy());
  Form w(chart_xy(), 2);
  w.add(bit(1), P("x", chart_xy()));
  Form dw = differential(T, w);
  Form expect(chart_xy(), 2);
  expect.add(bit(0) | bit(1), P("1", chart_xy()));
  EXPECT_EQ(dw, expect);
  LieAlgebroid Z(chart_xy(), {"a"});
  EXPECT_TRUE(differential(Z, Form::scalar(P("3", chart_xy()), 1)).is_zero());
}

TEST(Differential, SquaresToZero) {
  Sampler rng(21);
  auto cat = valid_catalog();
  unsigned max_deg = max_random_degree();
  for (int it = 0; it < kIterations; ++it) {
    const auto& L = cat[it % cat.size()];
    int k = static_cast<int>(rng.uniform(0, static_cast<long>(L.rank())));
    Form w = random_exterior(L.chart(), L.rank(), k, rng, max_deg);
    ASSERT_TRUE(differential(L, differential(L, w)).is_zero()) << w.to_string(L.frames());
  }
}

TEST(Differential, FunctionsGiveAnchorDual) {
  LieAlgebroid L = anchored_rank_two();
  Polynomial f = P("x^2 * y", chart_xy());
  Form df = differential(L, Form::scalar(f, 2));
  for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(df.component(bit(a)), apply_oracle(L.anchor(a), f));
}

TEST(Schouten, FunctionCase) {
  LieAlgebroid L = anchored_rank_two();
  Polynomial f = P("x * y^2", chart_xy());
  Multisection X = Multisection::from_section(L.frame_section(1), L.chart());
  Multisection F = Multisection::scalar(f, 2);
  EXPECT_EQ(schouten(L, X, F).component(0), L.act(1, f));
  EXPECT_EQ(schouten(L, F, X).component(0), -L.act(1, f));
}

TEST(Schouten, PoissonBivector) {
  LieAlgebroid T = tangent_algebroid(chart_xy());
  Multisection pi = poisson_xdxdy().bivector();
  EXPECT_TRUE(schouten(T, pi, pi).is_zero());
}

TEST(Schouten, ExtendsSectionBracket) {
  LieAlgebroid L = anchored_rank_two();
  Sampler rng(3);
  for (int it = 0; it < 50; ++it) {
    PolyVector x{random_polynomial(L.chart(), rng, 2), random_polynomial(L.chart(), rng, 2)};
    PolyVector y{random_polynomial(L.chart(), rng, 2), random_polynomial(L.chart(), rng, 2)};
    Multisection s = schouten(L, Multisection::from_section(x, L.chart()), Multisection::from_section(y, L.chart()));
    ASSERT_EQ(s, Multisection::from_section(bracket_sections(L, x, y), L.chart()));
  }
}

TEST(Schouten, GradedAntisymmetry) {
  Sampler rng(31);
  auto cat = valid_catalog();
  for (int it = 0; it < kIterations; ++it) {
    const auto& L = cat[it % cat.size()];
    int p = static_cast<int>(rng.uniform(0, std::min<long>(3, L.rank())));
    int q = static_cast<int>(rng.uniform(0, std::min<long>(3, L.rank())));
    Multisection P1 = random_exterior(L.chart(), L.rank(), p, rng, 2);
    Multisection Q1 = random_exterior(L.chart(), L.rank(), q, rng, 2);
    Multisection lhs = schouten(L, P1, Q1);
    Multisection rhs = schouten(L, Q1, P1);
    if (((p - 1) * (q - 1)) % 2 == 0) rhs = -rhs;
    ASSERT_EQ(lhs, rhs) << "p=" << p << " q=" << q;
  }
}

TEST(Schouten, GradedJacobi) {
  Sampler rng(41);
  auto cat = valid_catalog();
  unsigned max_deg = max_random_degree();
  for (int it = 0; it < kIterations; ++it) {
    const auto& L = cat[it % cat.size()];
    long cap = std::min<long>(2, L.rank());
    int p = static_cast<int>(rng.uniform(0, cap)), q = static_cast<int>(rng.uniform(0, cap));
    int r = static_cast<int>(rng.uniform(0, std::min<long>(cap, 4 - p - q < 0 ? 0 : 4 - p - q)));
    Multisection A = random_exterior(L.chart(), L.rank(), p, rng, max_deg);
    Multisection B = random_exterior(L.chart(), L.rank(), q, rng, max_deg);
    Multisection C = random_exterior(L.chart(), L.rank(), r, rng, max_deg);
    // [A,[B,C]] = [[A,B],C] + (-1)^{(p-1)(q-1)} [B,[A,C]]
    Multisection lhs = schouten(L, A, schouten(L, B, C));
    Multisection t = schouten(L, B, schouten(L, A, C));
    Multisection rhs = schouten(L, schouten(L, A, B), C) + ((((p - 1) * (q - 1)) % 2 == 0) ? t : -t);
    ASSERT_EQ(lhs, rhs) << "p=" << p << " q=" << q << " r=" << r;
  }
}

TEST(Schouten, BiderivationRule) {
  Sampler rng(51);
  LieAlgebroid L = tangent_prolongation(anchored_rank_two(), {"u", "v"});
  for (int it = 0; it < 40; ++it) {
    int p = static_cast<int>(rng.uniform(0, 2)), q = static_cast<int>(rng.uniform(0, 2));
    int s = static_cast<int>(rng.uniform(0, 1));
    Multisection A = random_exterior(L.chart(), L.rank(), p, rng, 1);
    Multisection Q = random_exterior(L.chart(), L.rank(), q, rng, 1);
    Multisection R = random_exterior(L.chart(), L.rank(), s, rng, 1);
    Multisection lhs = schouten(L, A, wedge(Q, R));
    Multisection t = wedge(Q, schouten(L, A, R));
    Multisection rhs = wedge(schouten(L, A, Q), R) + ((((p - 1) * q) % 2 == 0) ? t : -t);
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(DualPoisson, Examples) {
  LieAlgebroid Z(make_chart({}), {"a", "b"});
  PoissonChart z = dual_poisson(Z, {"p", "q"});
  EXPECT_TRUE(z.bivector().is_zero());

  PoissonChart two = dual_poisson(two_dim_algebra(), {"xi1", "xi2"});
  EXPECT_EQ(two.pi[0][1], P("xi2", two.chart));

  PoissonChart t = dual_poisson(tangent_algebroid(chart_x()), {"xi"});
  EXPECT_EQ(t.bracket(P("xi", t.chart), P("x", t.chart)), P("1", t.chart));
}

TEST(DualPoisson, PoissonIffAlgebroid) {
  for (const auto& L : valid_catalog()) EXPECT_TRUE(check_poisson(dual_poisson(L, default_dual_fibre(L))).pass);
  LieAlgebroid bad = anchored_rank_two();
  bad.set_bracket(0, 1, {P("0", chart_xy()), P("2", chart_xy())});
  EXPECT_FALSE(check_poisson(dual_poisson(bad, default_dual_fibre(bad))).pass);
  LieAlgebra g({"a", "b", "c"});
  g.set_bracket(0, 1, {Rational(0), Rational(0), Rational(1)});
  g.set_bracket(1, 2, {Rational(1), Rational(0), Rational(0)});
  g.set_bracket(0, 2, {Rational(1), Rational(0), Rational(0)});
  LieAlgebroid nj = as_algebroid(g);
  EXPECT_FALSE(check_algebroid(nj).pass);
  EXPECT_FALSE(check_poisson(dual_poisson(nj, {"p", "q", "r"})).pass);
}

TEST(DualPoisson, CotangentOfDualRecoversConstants) {
  LieAlgebroid g = two_dim_algebra();
  LieAlgebroid back = cotangent_algebroid(dual_poisson(g, {"xi1", "xi2"}));
  // frames dxi1, dxi2 over the chart (xi1, xi2): [dxi_a, dxi_b] = Σ c^γ_{ab} dxi_γ
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        EXPECT_EQ(back.structure(a, b)[c], Polynomial::constant(back.chart(), g.structure(a, b)[c].constant_value()));
}

TEST(Bialgebroid, AbelianPair) {
  LieAlgebroid A(chart_xy(), {"a"}), B(chart_xy(), {"b"});
  EXPECT_TRUE(check_bialgebroid(A, B).pass);
}

TEST(Bialgebroid, PointBaseAgreesWithCocycle) {
  // the two-dimensional bialgebra and a failing three-dimensional one
  LieAlgebra g({"e1", "e2"});
  g.set_bracket(0, 1, {Rational(0), Rational(1)});
  Cobracket d(2);
  d.set(1, 0, 1, 1);
  Bialgebra b{g, d};
  LieAlgebroid A = as_algebroid(g), As = as_algebroid(dual_bracket(b));
  EXPECT_EQ(check_bialgebroid(A, As).pass, check_cocycle(b).pass);
  EXPECT_TRUE(check_bialgebroid(A, As).pass);

  LieAlgebra h({"e1", "e2", "e3"});
  h.set_bracket(0, 1, {Rational(0), Rational(1), Rational(0)});
  Cobracket dh(3);
  dh.set(2, 0, 1, 1);
  Bialgebra bh{h, dh};
  LieAlgebroid H = as_algebroid(h), Hs = as_algebroid(dual_bracket(bh));
  EXPECT_FALSE(check_cocycle(bh).pass);
  EXPECT_FALSE(check_bialgebroid(H, Hs).pass);
  EXPECT_FALSE(check_bialgebroid(Hs, H).pass);
}

TEST(Bialgebroid, TangentCotangentPoisson) {
  LieAlgebroid T = tangent_algebroid(chart_xy());
  LieAlgebroid C = cotangent_algebroid(poisson_xdxdy());
  EXPECT_TRUE(check_bialgebroid(T, C).pass);
  EXPECT_TRUE(check_bialgebroid(C, T).pass);
}

TEST(Bialgebroid, BrokenAnchorPairFailsBothWays) {
  LieAlgebroid T = tangent_algebroid(chart_xy());
  LieAlgebroid S(chart_xy(), {"dx", "dy"});
  S.set_anchor(0, {P("0", chart_xy()), P("1", chart_xy())});
  ASSERT_TRUE(check_algebroid(S).pass);
  Verdict v = check_bialgebroid(T, S);
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(check_bialgebroid(S, T).pass);
}

TEST(Prolongation, BracketsAndAnchors) {
  LieAlgebroid P1 = tangent_prolongation(tangent_algebroid(chart_x()), {"v"});
  EXPECT_EQ(format_field(P1.anchor(0), *P1.chart()), "d/dx");
  EXPECT_EQ(format_field(P1.anchor(1), *P1.chart()), "d/dv");
  EXPECT_TRUE(check_algebroid(tangent_prolongation(anchored_rank_two(), {"u", "v"})).pass);
}

TEST(Reframe, RoundTrip) {
  LieAlgebroid L = anchored_rank_two();
  RMatrix P{{Rational(1), Rational(2)}, {Rational(0), Rational(-1)}};
  LieAlgebroid R = reframe(L, P, {"f1", "f2"});
  EXPECT_TRUE(check_algebroid(R).pass);
  LieAlgebroid back = reframe(R, *inverse(P), {"e1", "e2"});
  EXPECT_TRUE(compare_algebroids(back, L).pass);
}

TEST(Morphism, AnchorIsAMorphismToTheTangentBundle) {
  for (const LieAlgebroid& L : valid_catalog()) {
    LieAlgebroid T = tangent_algebroid(L.chart());
    PolyVector id;
    for (std::size_t i = 0; i < L.dim(); ++i) id.push_back(L.coordinate(i));
    EXPECT_TRUE(check_morphism(L, T, id, L.anchor_matrix()).pass);
  }
  // doubling the anchor map breaks the anchor condition
  LieAlgebroid L = anchored_rank_two();
  PolyMatrix F = L.anchor_matrix();
  for (auto& row : F)
    for (auto& p : row) p = p * Rational(2);
  PolyVector id{L.coordinate(0), L.coordinate(1)};
  Verdict v = check_morphism(L, tangent_algebroid(L.chart()), id, F);
  ASSERT_FALSE(v.pass);
  EXPECT_EQ(v.witness->location, "anchor(e1)");
}

TEST(Morphism, ProjectionOfProlongationCoversBaseProjection) {
  // TA -> A over TM -> M: T e ↦ e, V e ↦ 0
  LieAlgebroid A = anchored_rank_two();
  LieAlgebroid TA = tangent_prolongation(A, {"u", "v"});
  PolyVector proj{TA.coordinate(0), TA.coordinate(1)};
  PolyMatrix F = zero_matrix(TA.chart(), 4, 2);
  F[0][0] = F[1][1] = Polynomial::constant(TA.chart(), 1);
  EXPECT_TRUE(check_morphism(TA, A, proj, F).pass);
}
