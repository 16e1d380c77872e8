#include "zerolab/ratpoly.h"

#include <gtest/gtest.h>

#include <random>

#include "zerolab/errors.h"

namespace zerolab {
namespace {

Poly lin(int a) { return Poly(std::vector<Rational>{a, 1}); }  // s + a

GTEST_TEST(ParseRational, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("-4.6"), Rational(-23, 5));
  EXPECT_EQ(parse_rational("0.787"), Rational(787, 1000));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("+7"), Rational(7));
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
}

GTEST_TEST(Rational, SumIsExact) {
  Rational a(1, 3), c(2, 7);
  EXPECT_EQ((a + c) - a, c);
}

GTEST_TEST(Poly, ArithmeticAndPrinting) {
  Poly p = lin(1) * lin(2);
  EXPECT_EQ(p.to_string(), "s^2 + 3s + 2");
  EXPECT_EQ((p - p).degree(), -1);
  EXPECT_EQ(Poly(std::vector<Rational>{Rational(-1), 0, Rational(1, 2)}).to_string(),
            "(1/2)s^2 - 1");
  EXPECT_EQ(Poly().to_string(), "0");
  EXPECT_EQ(p.eval(Rational(-1)), 0);
  EXPECT_EQ(p.derivative(), Poly(std::vector<Rational>{3, 2}));
}

GTEST_TEST(PolyGcd, SharedLinearFactor) {
  Poly a = lin(-1) * lin(1);
  EXPECT_EQ(poly_gcd(a, lin(1)), lin(1));
  EXPECT_THROW(poly_gcd(Poly(), Poly()), DomainError);
  EXPECT_EQ(poly_gcd(Poly(3) * lin(2), Poly()), lin(2));
}

GTEST_TEST(PolyGcd, NumeratorsOfTwoByTwoMinors) {
  Poly s2 = pow(lin(2), 2);
  std::vector<Poly> nums = {Poly(3) * s2, Poly(3) * lin(3) * s2, -pow(lin(2), 3),
                            Poly::s() * lin(1) * s2};
  Poly g = nums[0];
  for (const auto& p : nums) g = poly_gcd(g, p);
  EXPECT_EQ(g, s2);
}

GTEST_TEST(PolyGcd, ConstructThenRecover) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    Poly g = lin(d(rng)) * lin(d(rng));
    Poly a = lin(10 + trial);
    Poly b = lin(-10 - trial) * lin(20 + trial);
    Poly p = Poly(d(rng) | 1) * g * a;
    Poly q = g * b;
    EXPECT_EQ(poly_gcd(p, q), g.monic());
    EXPECT_TRUE(divides(poly_gcd(p, q), p));
    EXPECT_TRUE(divides(poly_gcd(p, q), q));
  }
}

GTEST_TEST(Squarefree, KnownCases) {
  auto f = squarefree_decompose(pow(lin(2), 2));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].first, lin(2));
  EXPECT_EQ(f[0].second, 2);
  f = squarefree_decompose(pow(Poly::s(), 3));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].first, Poly::s());
  EXPECT_EQ(f[0].second, 3);
  EXPECT_THROW(squarefree_decompose(Poly()), DomainError);
}

GTEST_TEST(Squarefree, ConstructThenRecover) {
  Poly p = Poly(5) * lin(1) * pow(lin(-2), 2) * pow(lin(3), 3) * pow(lin(4), 3);
  auto f = squarefree_decompose(p);
  Poly back(1);
  for (const auto& [g, m] : f) back *= pow(g, m);
  EXPECT_EQ(back, p.monic());
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], std::make_pair(lin(1), 1));
  EXPECT_EQ(f[1], std::make_pair(lin(-2), 2));
  EXPECT_EQ(f[2], std::make_pair(lin(3) * lin(4), 3));
}

GTEST_TEST(Roots, RealPair) {
  RootSet r = roots(lin(1) * lin(2));
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_NEAR(r.roots[0].value.real(), -2, 1e-12);
  EXPECT_NEAR(r.roots[1].value.real(), -1, 1e-12);
  EXPECT_EQ(r.count(), 2);
}

GTEST_TEST(Roots, ComplexPairAgainstQuadraticFormula) {
  Poly p(std::vector<Rational>{2, -1, 1});  // s^2 - s + 2
  RootSet r = roots(p);
  ASSERT_EQ(r.roots.size(), 2u);
  const double im = std::sqrt(7.0) / 2;
  EXPECT_NEAR(r.roots[0].value.real(), 0.5, 1e-12);
  EXPECT_NEAR(r.roots[0].value.imag(), -im, 1e-12);
  EXPECT_NEAR(r.roots[1].value.imag(), im, 1e-12);
  EXPECT_NEAR(im, 1.3229, 1e-4);
}

GTEST_TEST(Roots, ZeroAndMultiplicity) {
  RootSet r = roots(Poly::s());
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_EQ(r.roots[0].value, std::complex<double>(0, 0));
  r = roots(pow(lin(2), 2) * lin(-1));
  EXPECT_EQ(r.count(), 3);
  EXPECT_EQ(r.roots[0].multiplicity, 2);
  EXPECT_THROW(roots(Poly()), DomainError);
}

GTEST_TEST(Roots, ReconstructAtRandomPoints) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> c;
    for (int k = 0; k < 6; ++k) c.emplace_back(d(rng));
    c.emplace_back(1 + trial % 3);
    Poly p(c);
    RootSet r = roots(p);
    EXPECT_EQ(r.count(), p.degree());
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 10; ++k) {
      std::complex<double> z(u(rng), u(rng));
      std::complex<double> prod = 1;
      for (auto x : r.flat()) prod *= z - x;
      std::complex<double> want = p.eval(z) / p.lead().get_d();
      EXPECT_LE(std::abs(prod - want), 1e-9 * p.degree() * (1 + std::abs(want)));
    }
  }
}

GTEST_TEST(Multiset, IntersectionAndDifference) {
  using C = std::complex<double>;
  std::vector<C> a = {1.0, -1.0, 3.0}, b = {3.0 + 1e-9, 1.0};
  auto i = multiset_intersection(a, b);
  ASSERT_EQ(i.size(), 2u);
  auto d = multiset_difference(a, b);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], C(-1.0));
  EXPECT_TRUE(multiset_equal({1.0, 2.0}, {2.0, 1.0}));
  EXPECT_FALSE(multiset_equal({1.0, 1.0}, {1.0, 2.0}));
}

GTEST_TEST(RatFn, NormalizesToCoprimeMonic) {
  RatFn f(Poly(2) * lin(1) * lin(3), Poly(4) * lin(1) * lin(-1));
  EXPECT_EQ(f.den(), lin(-1));
  EXPECT_EQ(f.num(), Poly(Rational(1, 2)) * lin(3));
  RatFn g = f + RatFn(1);
  EXPECT_EQ(g * RatFn(lin(-1)), RatFn(Poly(Rational(1, 2)) * lin(3) + lin(-1)));
  EXPECT_TRUE(RatFn(Poly(1), lin(2)).is_strictly_proper());
  EXPECT_THROW(RatFn(Poly(1), Poly()), DomainError);
}

}  // namespace
}  // namespace zerolab
