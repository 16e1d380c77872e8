#include "zerolab/statespace.h"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.h"

namespace zerolab {
namespace {

using namespace fixtures;

GTEST_TEST(StateSpace, RejectsBadShapes) {
  EXPECT_THROW(StateSpace(QMat(2, 3), QMat(2, 1), QMat(1, 2)), DomainError);
  EXPECT_THROW(StateSpace(QMat(2, 2), QMat(3, 1), QMat(1, 2)), DomainError);
  EXPECT_THROW(StateSpace(QMat(2, 2), QMat(2, 1), QMat(1, 2), QMat(2, 2)), DomainError);
  StateSpace ok(QMat(2, 2), QMat(2, 1), QMat(1, 2));
  EXPECT_FALSE(ok.has_feedthrough());
  StateSpace fd(QMat(2, 2), QMat(2, 1), QMat(1, 2), QMat{{1}});
  EXPECT_TRUE(fd.has_feedthrough());
  EXPECT_THROW(fd.require_strictly_proper("zeros"), PreconditionError);
}

GTEST_TEST(Controllability, ControllabilityIndices) {
  auto a = controllability(asseo_pair());
  EXPECT_TRUE(a.controllable);
  EXPECT_EQ(a.nu, 2);
  EXPECT_EQ(a.l_list, (std::vector<int>{2, 2}));

  auto y = controllability(yoko_pair());
  EXPECT_TRUE(y.controllable);
  EXPECT_EQ(y.nu, 3);
  EXPECT_EQ(y.l_list, (std::vector<int>{1, 1, 2}));

  auto s = controllability(single_input_3());
  EXPECT_EQ(s.nu, 3);
  EXPECT_EQ(s.l_list, (std::vector<int>{1, 1, 1}));
}

GTEST_TEST(Controllability, IdentityInputIsOneStep) {
  auto c = controllability(StateSpace(QMat(3, 3), QMat::identity(3), QMat(0, 3)));
  EXPECT_TRUE(c.controllable);
  EXPECT_EQ(c.nu, 1);
  EXPECT_EQ(c.l_list, (std::vector<int>{3}));
}

GTEST_TEST(Observability, DeficientSystems) {
  // Mode -3 is invisible in y for both systems.
  EXPECT_EQ(observability(siso_double_zero()).rank_Y, 2);
  EXPECT_EQ(observability(nonsquare_decoupling()).rank_Y, 2);
  EXPECT_EQ(controllability(nonsquare_decoupling()).rank_Y, 2);
}

GTEST_TEST(Pbh, StabilizableAndDetectable) {
  EXPECT_TRUE(stabilizable(antenna()));
  EXPECT_TRUE(detectable(antenna()));
  // Unstable mode 1 not reached by the input.
  StateSpace bad(QMat{{1, 0}, {0, -1}}, QMat{{0}, {1}}, QMat{{1, 1}});
  EXPECT_FALSE(stabilizable(bad));
  EXPECT_TRUE(detectable(bad));
  // Unobservable stable mode only.
  EXPECT_TRUE(detectable(siso_double_zero()));
  // Unobservable unstable mode.
  EXPECT_FALSE(detectable(StateSpace(QMat{{2, 0}, {0, -1}}, QMat{{1}, {1}}, QMat{{0, 1}})));
}

GTEST_TEST(Pbh, ExactAtRationalEigenvalues) {
  auto es = eigen_structure(nonsquare_decoupling());
  ASSERT_EQ(es.pbh.size(), 3u);
  for (const auto& p : es.pbh) {
    EXPECT_TRUE(p.exact);
    if (p.lambda.real() == 1) EXPECT_EQ(p.rank_controllable, 2);
    if (p.lambda.real() == -3) EXPECT_EQ(p.rank_observable, 2);
  }
}

GTEST_TEST(Pbh, AgreesWithKalmanOnRandomPairs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int t = 0; t < 30; ++t) {
    QMat A(3, 3), B(3, 1);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A(i, j) = d(rng);
      B(i, 0) = t % 3 == 0 && i == 2 ? 0 : d(rng);
    }
    StateSpace sys(A, B, QMat(0, 3));
    bool kalman = controllability(sys).controllable;
    bool pbh = true;
    for (const auto& p : eigen_structure(sys).pbh) pbh = pbh && p.rank_controllable == 3;
    EXPECT_EQ(kalman, pbh) << to_string(A);
  }
}

GTEST_TEST(Similarity, PreservesCharpoly) {
  StateSpace s = yoko_square_a();
  QMat N{{1, 2, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 3}, {1, 0, 0, 1}};
  StateSpace t = similarity(s, N);
  EXPECT_EQ(charpoly(t.A), charpoly(s.A));
  EXPECT_EQ(t.C * t.B, s.C * s.B);
  EXPECT_EQ(dual(dual(s)).A, s.A);
}

}  // namespace
}  // namespace zerolab
