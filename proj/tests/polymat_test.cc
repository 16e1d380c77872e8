#include "zerolab/polymat.h"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.h"

namespace zerolab {
namespace {

using fixtures::mcmillan_fixture;
using fixtures::smith_fixture;

Poly P(std::vector<int> c) {
  std::vector<Rational> q(c.begin(), c.end());
  return Poly(q);
}
const Poly s = Poly::s();

PMat random_pmat(std::mt19937_64& rng, int rows, int cols, int deg) {
  std::uniform_int_distribution<int> d(-3, 3);
  PMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      std::vector<Rational> c;
      for (int k = 0; k <= deg; ++k) c.emplace_back(d(rng));
      m(i, j) = Poly(c);
    }
  return m;
}

// Reference determinant by cofactor expansion along the first row.
Poly cofactor_det(const PMat& m) {
  const int n = m.rows();
  if (n == 0) return Poly(1);
  Poly acc;
  for (int j = 0; j < n; ++j) {
    std::vector<int> rs, cs;
    for (int i = 1; i < n; ++i) rs.push_back(i);
    for (int k = 0; k < n; ++k)
      if (k != j) cs.push_back(k);
    Poly term = m(0, j) * cofactor_det(m.select(rs, cs));
    acc += (j % 2 ? -term : term);
  }
  return acc;
}

// A product of elementary operations, so its determinant is a nonzero constant.
PMat random_unimodular(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> pick(0, n - 1), kind(0, 2), d(-2, 2);
  PMat u = PMat::identity(n);
  for (int step = 0; step < 6; ++step) {
    int a = pick(rng), b = pick(rng);
    PMat e = PMat::identity(n);
    switch (kind(rng)) {
      case 0:
        if (a == b) break;
        e(a, a) = 0;
        e(b, b) = 0;
        e(a, b) = 1;
        e(b, a) = 1;
        break;
      case 1:
        e(a, a) = Poly(d(rng) | 1);
        break;
      default:
        if (a != b) e(a, b) = P({d(rng), d(rng)});
    }
    u = u * e;
  }
  return u;
}

GTEST_TEST(NormalRank, Fixtures) {
  EXPECT_EQ(normal_rank(smith_fixture()), 3);
  EXPECT_EQ(normal_rank(PMat(3, 2)), 0);
}

GTEST_TEST(NormalRank, ProductOfThinFactors) {
  std::mt19937_64 rng(3);
  for (int k = 1; k <= 3; ++k) {
    PMat x = random_pmat(rng, 4, k, 1), y = random_pmat(rng, k, 5, 1);
    EXPECT_EQ(normal_rank(x * y), k);
  }
}

GTEST_TEST(Minor, SystemMatrixDeletingLastRow) {
  PMat p{{s - Poly(1), 0, 0, 0},
         {0, s + Poly(1), 0, 1},
         {0, 0, s + Poly(3), 1},
         {1, -1, 0, 0},
         {0, 2, 0, 0}};
  EXPECT_EQ(minor(p, {1, 2, 3, 4}, {0, 1, 2, 3}), Poly(-2) * (s + Poly(3)));
  EXPECT_EQ(minor(p, {}, {}), Poly(1));
  EXPECT_THROW(minor(p, {0, 9}, {0, 1}), DomainError);
}

GTEST_TEST(Minor, MatchesCofactorExpansion) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    PMat m = random_pmat(rng, 4, 4, 2);
    EXPECT_EQ(det(m), cofactor_det(m));
  }
}

GTEST_TEST(Minor, ParallelMatchesSerial) {
  std::mt19937_64 rng(9);
  PMat m = random_pmat(rng, 5, 6, 1);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(nonzero_minors(m, k), nonzero_minors_serial(m, k));
    EXPECT_EQ(minor_gcd(m, k), minor_gcd_serial(m, k));
  }
  EXPECT_THROW(nonzero_minors(PMat(9, 9), 1), SizeError);
}

void expect_valid_smith(const PMat& p, const SmithDecomposition& sd) {
  EXPECT_EQ(sd.U_L * p * sd.U_R, sd.S);
  EXPECT_TRUE(det(sd.U_L).is_constant() && !det(sd.U_L).is_zero());
  EXPECT_TRUE(det(sd.U_R).is_constant() && !det(sd.U_R).is_zero());
  for (int i = 0; i < sd.S.rows(); ++i)
    for (int j = 0; j < sd.S.cols(); ++j)
      if (i != j) EXPECT_TRUE(sd.S(i, j).is_zero());
  for (size_t i = 0; i + 1 < sd.invariant_polys.size(); ++i)
    EXPECT_TRUE(divides(sd.invariant_polys[i], sd.invariant_polys[i + 1]));
  EXPECT_EQ(static_cast<int>(sd.invariant_polys.size()), normal_rank(p));
}

GTEST_TEST(Smith, ThreeByThreeFixture) {
  PMat p = smith_fixture();
  SmithDecomposition sd = smith_form(p);
  expect_valid_smith(p, sd);
  ASSERT_EQ(sd.invariant_polys.size(), 3u);
  EXPECT_EQ(sd.invariant_polys[0], Poly(1));
  EXPECT_EQ(sd.invariant_polys[1], Poly(1));
  EXPECT_EQ(sd.invariant_polys[2], s * (s * s - Poly(1)));
}

GTEST_TEST(Smith, Identity) {
  SmithDecomposition sd = smith_form(PMat::identity(3));
  EXPECT_EQ(sd.S, PMat::identity(3));
  EXPECT_EQ(sd.U_L, PMat::identity(3));
  EXPECT_EQ(sd.U_R, PMat::identity(3));
}

GTEST_TEST(Smith, MatchesMinorQuotients) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 8; ++t) {
    PMat p = random_pmat(rng, 3, 4, 2);
    if (t % 2) p.set_block(2, 0, Poly(s + Poly(t)) * p.block(0, 0, 1, 4));
    SmithDecomposition sd = smith_form(p);
    expect_valid_smith(p, sd);
    EXPECT_EQ(sd.invariant_polys, invariant_polys_by_minors(p));
  }
}

GTEST_TEST(Smith, InvariantUnderUnimodularEquivalence) {
  std::mt19937_64 rng(33);
  PMat p = smith_fixture();
  auto base = smith_form(p).invariant_polys;
  for (int t = 0; t < 10; ++t) {
    PMat q = random_unimodular(rng, 3) * p * random_unimodular(rng, 3);
    EXPECT_EQ(smith_form(q).invariant_polys, base);
  }
}

GTEST_TEST(SmithMcMillan, FourByThreeFixture) {
  auto sm = smith_mcmillan(mcmillan_fixture());
  Poly s1 = s + Poly(1);
  EXPECT_EQ(sm.phi, s * s1 * s1);
  ASSERT_EQ(sm.eps.size(), 3u);
  EXPECT_EQ(sm.eps[0], Poly(1));
  EXPECT_EQ(sm.psi[0], s * s1 * s1);
  EXPECT_EQ(sm.eps[1], s + Poly(2));
  EXPECT_EQ(sm.psi[1], s1 * s1);
  EXPECT_EQ(sm.eps[2], s + Poly(2));
  EXPECT_EQ(sm.psi[2], s1);
}

GTEST_TEST(SmithMcMillan, DiagonalInput) {
  RMat w(2, 2);
  w(0, 0) = RatFn(Poly(1), s * (s + Poly(1)));
  w(1, 1) = RatFn(s + Poly(2), s + Poly(1));
  auto sm = smith_mcmillan(w);
  EXPECT_EQ(sm.eps, (std::vector<Poly>{Poly(1), s + Poly(2)}));
  EXPECT_EQ(sm.psi, (std::vector<Poly>{s * (s + Poly(1)), s + Poly(1)}));
}

GTEST_TEST(SmithMcMillan, ChainsAndCoprimeness) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 6; ++t) {
    RMat w(2, 2);
    PMat n = random_pmat(rng, 2, 2, 1);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) w(i, j) = RatFn(n(i, j), (s + Poly(i + 1)) * (s + Poly(j + t)));
    auto sm = smith_mcmillan(w);
    for (size_t i = 0; i < sm.eps.size(); ++i) {
      EXPECT_EQ(poly_gcd(sm.eps[i], sm.psi[i]), Poly(1));
      if (i + 1 < sm.eps.size()) {
        EXPECT_TRUE(divides(sm.eps[i], sm.eps[i + 1]));
        EXPECT_TRUE(divides(sm.psi[i + 1], sm.psi[i]));
      }
    }
    if (!sm.psi.empty()) EXPECT_EQ(sm.psi[0], sm.phi);
    // prod eps / prod psi equals det W.
    if (sm.eps.size() == 2) {
      RatFn dw = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
      RatFn prod = RatFn(sm.eps[0] * sm.eps[1], sm.psi[0] * sm.psi[1]);
      EXPECT_EQ(RatFn(dw.num().monic(), dw.den()), prod);
    }
  }
}

}  // namespace
}  // namespace zerolab
