#include <gtest/gtest.h>

#include "doublealg/liealg.hpp"

using namespace doublealg;

namespace {

RVector vec(std::initializer_list<long> xs) {
  RVector v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

// [e1, e2] = e2, δ(e1) = 0, δ(e2) = e1 ^ e2
Bialgebra two_dim() {
  LieAlgebra g({"e1", "e2"});
  g.set_bracket(0, 1, vec({0, 1}));
  Cobracket d(2);
  d.set(1, 0, 1, 1);
  return {g, d};
}

Bialgebra abelian(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  return {LieAlgebra(names), Cobracket(n)};
}

// aff(1) + R with δ(e3) = e1 ^ e2: co-Jacobi holds, cocycle fails.
Bialgebra non_cocycle() {
  LieAlgebra g({"e1", "e2", "e3"});
  g.set_bracket(0, 1, vec({0, 1, 0}));
  Cobracket d(3);
  d.set(2, 0, 1, 1);
  return {g, d};
}

// Determinant pairing <a ^ b, X ^ Y> evaluated from scratch.
Rational det_pair(const RVector& a, const RVector& b, const RVector& X, const RVector& Y) {
  return dot(a, X) * dot(b, Y) - dot(a, Y) * dot(b, X);
}

// Independent Jacobi oracle: all ordered triples, brute force.
bool jacobi_all_triples(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        auto a = g.basis_vector(i), b = g.basis_vector(j), c = g.basis_vector(k);
        auto s = g.bracket(a, g.bracket(b, c));
        auto t = g.bracket(b, g.bracket(c, a));
        auto u = g.bracket(c, g.bracket(a, b));
        for (std::size_t m = 0; m < n; ++m)
          if (s[m] + t[m] + u[m] != 0) return false;
      }
  return true;
}

}  // namespace

TEST(LieAlgebra, AntisymmetryEnforced) {
  LieAlgebra g({"a", "b"});
  EXPECT_THROW(g.set_bracket(0, 0, vec({1, 0})), Error);
  g.set_bracket(0, 1, vec({1, 1}));
  EXPECT_EQ(g.bracket(1, 0), vec({-1, -1}));
  EXPECT_THROW(LieAlgebra({"a", "a"}), Error);
}

TEST(LieAlgebra, JacobiWitness) {
  LieAlgebra g({"a", "b", "c"});
  g.set_bracket(0, 1, vec({0, 0, 1}));
  g.set_bracket(1, 2, vec({1, 0, 0}));
  g.set_bracket(0, 2, vec({1, 0, 0}));
  EXPECT_FALSE(jacobi_all_triples(g));
  Verdict v = check_jacobi(g);
  ASSERT_FALSE(v.pass);
  EXPECT_EQ(v.witness->location, "(a, b, c)");
}

TEST(DualBracket, AbelianGivesAbelian) {
  LieAlgebra d = dual_bracket(abelian(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(d.bracket(i, j), vec({0, 0, 0}));
}

TEST(DualBracket, TwoDimExampleMatchesDeterminantPairing) {
  Bialgebra b = two_dim();
  LieAlgebra d = dual_bracket(b);
  EXPECT_EQ(d.bracket(0, 1), vec({0, 1}));
  // <[ε^i, ε^j]_*, e_k> = <ε^i ^ ε^j, δ(e_k)>, δ(e_k) expanded as Σ_{a<b} δ^{ab}_k e_a ^ e_b
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        Rational rhs(0);
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t c = a + 1; c < 2; ++c)
            rhs += b.delta.of(k)[a][c] * det_pair(b.algebra.basis_vector(i), b.algebra.basis_vector(j),
                                                  b.algebra.basis_vector(a), b.algebra.basis_vector(c));
        EXPECT_EQ(d.bracket(i, j)[k], rhs);
      }
}

TEST(DualBracket, Biduality) {
  for (const Bialgebra& b : {two_dim(), abelian(2), non_cocycle()}) {
    Bialgebra dual = dual_bialgebra(b);
    LieAlgebra back = dual_bracket(dual, b.algebra.names());
    EXPECT_EQ(back, b.algebra);
  }
}

TEST(DualBracket, RejectsNonCoJacobi) {
  // δ dual to a bracket violating Jacobi
  Cobracket d(3);
  d.set(2, 0, 1, 1);
  d.set(0, 1, 2, 1);
  d.set(0, 0, 2, 1);
  Bialgebra b{LieAlgebra({"e1", "e2", "e3"}), d};
  EXPECT_THROW(dual_bracket(b), Rejected);
}

TEST(Cocycle, AbelianAndTwoDimPass) {
  EXPECT_TRUE(check_cocycle(abelian(3)).pass);
  EXPECT_TRUE(check_cocycle(two_dim()).pass);
}

TEST(Cocycle, EveryCobracketOnTwoDimAlgebraIsACocycle) {
  // δ(e1) = p e1^e2, δ(e2) = q e1^e2 always satisfies the cocycle identity
  // on [e1,e2] = e2; this is why the failing examples are 3-dimensional.
  for (long p = -2; p <= 2; ++p)
    for (long q = -2; q <= 2; ++q) {
      Bialgebra b = two_dim();
      b.delta.set(0, 0, 1, p);
      b.delta.set(1, 0, 1, q);
      EXPECT_TRUE(check_cocycle(b).pass);
    }
}

TEST(Cocycle, NonCocycleWitness) {
  Verdict v = check_cocycle(non_cocycle());
  ASSERT_FALSE(v.pass);
  EXPECT_EQ(v.witness->location, "(1,3)");
  // δ([e1,e3]) = 0 while ad_{e1} δ(e3) = [e1,e1]^e2 + e1^[e1,e2] = e1^e2
  EXPECT_EQ(v.witness->defect, "-e1 ^ e2");
}

TEST(Drinfeld, AbelianDouble) {
  PairedAlgebra d = drinfeld_double(abelian(2));
  EXPECT_EQ(d.pairing, hyperbolic_pairing(2));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(d.algebra.bracket(i, j), vec({0, 0, 0, 0}));
  EXPECT_TRUE(check_manin(d).pass);
}

TEST(Drinfeld, TwoDimDouble) {
  PairedAlgebra d = drinfeld_double(two_dim());
  EXPECT_TRUE(jacobi_all_triples(d.algebra));
  EXPECT_TRUE(check_manin(d).pass);
  // restrictions reproduce g and g*
  LieAlgebra gstar = dual_bracket(two_dim());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(d.algebra.bracket(i, j)[k], two_dim().algebra.bracket(i, j)[k]);
        EXPECT_EQ(d.algebra.bracket(2 + i, 2 + j)[2 + k], gstar.bracket(i, j)[k]);
        EXPECT_EQ(d.algebra.bracket(i, j)[2 + k], 0);
        EXPECT_EQ(d.algebra.bracket(2 + i, 2 + j)[k], 0);
      }
  // [e2, ε2] = ad*_{e2} ε2 - ad*_{ε2} e2; <ad*_{e2} ε2, e1> = -<ε2, [e2,e1]> = 1
  // and <ad*_{ε2} e2, ε1> = -<e2, [ε2, ε1]_*> = 1, so [e2, ε2] = ε1 - e1.
  EXPECT_EQ(d.algebra.bracket(1, 3), vec({-1, 0, 1, 0}));
}

TEST(Drinfeld, NonCocycleRejectedWithTriple) {
  try {
    drinfeld_double(non_cocycle());
    FAIL() << "expected rejection";
  } catch (const Rejected& r) {
    EXPECT_EQ(r.verdict().check, "double.jacobi");
    ASSERT_TRUE(r.verdict().witness);
    EXPECT_FALSE(r.verdict().witness->location.empty());
  }
  // the raw bracket itself fails the brute-force oracle
  Bialgebra b = non_cocycle();
  EXPECT_FALSE(jacobi_all_triples(double_bracket(b.algebra, dual_bracket(b))));
}

TEST(Manin, HyperbolicAbelianPasses) {
  for (std::size_t n = 1; n <= 3; ++n) {
    Bialgebra b = abelian(n);
    PairedAlgebra p = drinfeld_double(b);
    EXPECT_TRUE(check_manin(p).pass);
  }
}

TEST(Manin, IdentityPairingFailsIsotropy) {
  PairedAlgebra p = drinfeld_double(abelian(2));
  p.pairing = identity(4);
  Verdict v = check_manin(p);
  ASSERT_FALSE(v.pass);
  EXPECT_EQ(v.check, "manin.isotropy");
  EXPECT_EQ(v.witness->defect, "1");
}

TEST(Manin, InvalidPairingThrows) {
  PairedAlgebra p = drinfeld_double(abelian(1));
  p.pairing = zeros(2, 2);
  EXPECT_THROW(check_manin(p), Error);
}

TEST(Manin, NonInvariantPairingFails) {
  PairedAlgebra p = drinfeld_double(two_dim());
  // break invariance by rescaling one mixed bracket
  LieAlgebra g = p.algebra;
  RVector v = g.bracket(1, 3);
  for (auto& x : v) x *= 2;
  g.set_bracket(1, 3, v);
  p.algebra = g;
  Verdict r = check_manin(p);
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(r.check, "manin.invariance");
}

TEST(Drinfeld, ManinPropertyOnCocycleCatalog) {
  // every bialgebra passing the cocycle check yields a Manin triple, and the
  // double's Jacobi identity agrees with the cocycle verdict
  std::vector<Bialgebra> catalog{abelian(1), abelian(3), two_dim(), non_cocycle()};
  Bialgebra b2 = non_cocycle();
  b2.delta = Cobracket(3);
  b2.delta.set(2, 1, 2, 1);  // δ(e3) = e2 ^ e3
  catalog.push_back(b2);
  Bialgebra b3 = two_dim();
  b3.delta.set(0, 0, 1, 5);
  catalog.push_back(b3);
  for (const auto& b : catalog) {
    bool cocycle = check_cocycle(b).pass;
    bool jac = jacobi_all_triples(double_bracket(b.algebra, dual_bracket(b)));
    EXPECT_EQ(cocycle, jac);
    if (cocycle) EXPECT_TRUE(check_manin(drinfeld_double(b)).pass);
    else EXPECT_THROW(drinfeld_double(b), Rejected);
  }
}
