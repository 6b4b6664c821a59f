#include <gtest/gtest.h>

#include "doublealg/linalg.hpp"
#include "doublealg/poly_parse.hpp"

using namespace doublealg;

namespace {

ChartPtr xy() {
  static ChartPtr c = make_chart({"x", "y"});
  return c;
}

Polynomial P(const std::string& s, const ChartPtr& c = xy()) { return parse_polynomial(s, c); }

// Oracle: a product of sums expanded term by term without any merging,
// then compared by evaluation at rational points.
struct RawTerm {
  Rational c;
  std::vector<unsigned> e;
};

std::vector<RawTerm> raw(const Polynomial& p) {
  std::vector<RawTerm> out;
  for (const auto& [e, c] : p.terms()) out.push_back({c, e});
  return out;
}

std::vector<RawTerm> distribute(const std::vector<RawTerm>& a, const std::vector<RawTerm>& b) {
  std::vector<RawTerm> out;
  for (const auto& s : a)
    for (const auto& t : b) {
      RawTerm u{s.c * t.c, s.e};
      for (std::size_t i = 0; i < u.e.size(); ++i) u.e[i] += t.e[i];
      out.push_back(u);
    }
  return out;
}

Rational eval_raw(const std::vector<RawTerm>& terms, const std::vector<Rational>& pt) {
  Rational s(0);
  for (const auto& t : terms) {
    Rational v = t.c;
    for (std::size_t i = 0; i < pt.size(); ++i)
      for (unsigned k = 0; k < t.e[i]; ++k) v *= pt[i];
    s += v;
  }
  return s;
}

constexpr int kIterations = 200;

}  // namespace

TEST(Rational, ReducedForm) {
  Rational r = make_rational(6, -4);
  EXPECT_EQ(to_string(r), "-3/2");
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(parse_rational("10/4"), make_rational(5, 2));
  EXPECT_THROW(make_rational(1, 0), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
}

TEST(Polynomial, RingIdentities) {
  EXPECT_EQ(P("x + 1") * P("x - 1"), P("x^2 - 1"));
  Polynomial p = P("3 * x * y - 1/2");
  EXPECT_EQ(p + Polynomial(xy()), p);
}

TEST(Polynomial, SquareMatchesDistribution) {
  Polynomial s = P("x + y");
  Polynomial sq = s * s;
  EXPECT_EQ(sq.to_string(), "x^2 + 2 * x * y + y^2");
  auto oracle = distribute(raw(s), raw(s));
  Sampler rng(3);
  for (int i = 0; i < 20; ++i) {
    std::vector<Rational> pt{rng.rational(), rng.rational()};
    EXPECT_EQ(sq.evaluate(pt), eval_raw(oracle, pt));
  }
}

TEST(Polynomial, RandomProductsMatchDistribution) {
  Sampler rng(11);
  for (int it = 0; it < kIterations; ++it) {
    Polynomial a = random_polynomial(xy(), rng, 3), b = random_polynomial(xy(), rng, 3);
    auto oracle = distribute(raw(a), raw(b));
    std::vector<Rational> pt{rng.rational(), rng.rational()};
    ASSERT_EQ((a * b).evaluate(pt), eval_raw(oracle, pt));
  }
}

TEST(Polynomial, NoZeroCoefficientsStored) {
  Polynomial p = P("x + y") - P("x");
  EXPECT_EQ(p.size(), 1u);
  EXPECT_TRUE((P("x*y") - P("y*x")).is_zero());
}

TEST(Polynomial, ChartMismatchThrows) {
  ChartPtr other = make_chart({"u"});
  EXPECT_THROW(P("x") + parse_polynomial("u", other), Error);
  EXPECT_THROW(P("x") * parse_polynomial("u", other), Error);
}

TEST(Polynomial, Partials) {
  EXPECT_EQ(P("x^2 * y").partial("x"), P("2 * x * y"));
  EXPECT_TRUE(P("7/3").partial("x").is_zero());
  EXPECT_THROW(P("x").partial("z"), Error);
}

TEST(Polynomial, RingAxiomsOnRandomInputs) {
  Sampler rng(5);
  for (int it = 0; it < kIterations; ++it) {
    Polynomial p = random_polynomial(xy(), rng, 3), q = random_polynomial(xy(), rng, 3),
               r = random_polynomial(xy(), rng, 3);
    ASSERT_EQ((p + q) + r, p + (q + r));
    ASSERT_EQ(p * (q + r), p * q + p * r);
    ASSERT_EQ(p * q, q * p);
    ASSERT_EQ((p * q) * r, p * (q * r));
  }
}

TEST(Polynomial, MixedPartialsCommute) {
  Sampler rng(7);
  for (int it = 0; it < kIterations; ++it) {
    Polynomial p = random_polynomial(xy(), rng, 4, 6);
    ASSERT_EQ(p.partial(0).partial(1), p.partial(1).partial(0));
  }
}

TEST(Polynomial, PartialIsDerivation) {
  Sampler rng(9);
  for (int it = 0; it < kIterations; ++it) {
    Polynomial p = random_polynomial(xy(), rng, 3), q = random_polynomial(xy(), rng, 3);
    for (std::size_t i = 0; i < 2; ++i) ASSERT_EQ((p * q).partial(i), p * q.partial(i) + q * p.partial(i));
  }
}

TEST(Polynomial, PrinterParserRoundTrip) {
  Sampler rng(13);
  for (int it = 0; it < kIterations; ++it) {
    Polynomial p = random_polynomial(xy(), rng, 4, 6);
    std::string s = p.to_string();
    Polynomial q = P(s);
    ASSERT_EQ(p, q) << s;
    ASSERT_EQ(q.to_string(), s);
  }
  EXPECT_EQ(P("0").to_string(), "0");
  EXPECT_EQ(P("-x").to_string(), "-x");
  EXPECT_EQ(P("-1/2 * x^3 * y + 4").to_string(), "-1/2 * x^3 * y + 4");
}

TEST(Polynomial, ParserErrors) {
  EXPECT_THROW(P("x +"), ParseError);
  EXPECT_THROW(P("z"), ParseError);
  EXPECT_THROW(P("x $ y"), ParseError);
  EXPECT_THROW(P("1/0"), ParseError);
  try {
    P("x + q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(Polynomial, LinearExpressions) {
  PolyVector v = parse_linear("x * d/dx - y^2 * d/dy", xy(), {"d/dx", "d/dy"});
  EXPECT_EQ(v[0], P("x"));
  EXPECT_EQ(v[1], P("-y^2"));
  EXPECT_EQ(format_linear(v, {"d/dx", "d/dy"}), "x * d/dx - y^2 * d/dy");
  PolyVector w = parse_linear("e2 ^ e1 + 3 * e1 ^ e3", xy(), {"e1^e2", "e1^e3", "e2^e3"});
  EXPECT_EQ(w[0], P("-1"));
  EXPECT_EQ(w[1], P("3"));
  EXPECT_THROW(parse_linear("x", xy(), {"e1"}), ParseError);
  EXPECT_THROW(parse_linear("e1 * e1", xy(), {"e1"}), ParseError);
  EXPECT_TRUE(all_zero(parse_linear("e1 ^ e1", xy(), {"e1^e2"})));
}

TEST(Polynomial, SubstituteAndEmbed) {
  ChartPtr big = make_chart({"y", "z", "x"});
  Polynomial p = P("x^2 * y + 3");
  Polynomial q = p.embed(big);
  EXPECT_EQ(q, parse_polynomial("x^2 * y + 3", big));
  EXPECT_EQ(q.embed(xy()), p);
  Polynomial s = p.substitute({P("x + y"), P("2")}, xy());
  EXPECT_EQ(s, P("2 * (x + y)^2 + 3"));
}

TEST(Polynomial, SplitLinear) {
  ChartPtr c = make_chart({"x", "u", "v"});
  auto s = split_linear(parse_polynomial("x^2 + x * u - 3 * v", c), {1, 2});
  EXPECT_EQ(s.constant, parse_polynomial("x^2", c));
  EXPECT_EQ(s.linear[0], parse_polynomial("x", c));
  EXPECT_EQ(s.linear[1], parse_polynomial("-3", c));
  EXPECT_THROW(split_linear(parse_polynomial("u * v", c), {1, 2}), Error);
}

TEST(Linalg, InverseAndRank) {
  RMatrix m{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
  auto inv = inverse(m);
  ASSERT_TRUE(inv);
  EXPECT_EQ(multiply(m, *inv), identity(2));
  EXPECT_EQ(determinant(m), Rational(-2));
  RMatrix s{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  EXPECT_FALSE(inverse(s));
  EXPECT_EQ(rank(s), 1u);
}
