#include <gtest/gtest.h>

#include "support.hpp"

using namespace spirallax;

TEST(Spiral, AllowedSizes) {
  for (int n : {5, 6, 8, 9, 11, 12}) EXPECT_TRUE(n_allowed(n)) << n;
  for (int n : {-1, 0, 3, 4, 7, 10, 13}) EXPECT_FALSE(n_allowed(n)) << n;
  EXPECT_THROW(check_n(7), InvalidN);
  EXPECT_THROW(random_seed(10, 1, 0.1), InvalidN);
}

TEST(Spiral, PentagonMapClosesUpToProjectivity) {
  std::mt19937_64 g(11);
  for (int t = 0; t < 20; ++t) {
    auto P = testkit::random_convex_polygon(5, g);
    auto Q = closed_pentagram_T(P);
    EXPECT_LT(invariant_defect(P, Q), 1e-8);
    EXPECT_TRUE(projectively_equivalent(P, Q));
  }
}

TEST(Spiral, HexagonSquareClosesUpToProjectivity) {
  std::mt19937_64 g(13);
  for (int t = 0; t < 20; ++t) {
    auto P = testkit::random_convex_polygon(6, g);
    auto Q = closed_pentagram_T(closed_pentagram_T(P));
    EXPECT_TRUE(projectively_equivalent(P, Q)) << invariant_defect(P, Q) << " " << map_defect(P, Q);
  }
}

TEST(Spiral, HexagonImageIsNotEquivalentAfterOneStep) {
  std::mt19937_64 g(17);
  auto P = testkit::random_convex_polygon(6, g);
  EXPECT_FALSE(projectively_equivalent(P, closed_pentagram_T(P)));
}

TEST(Spiral, HeptagonImageStaysConvex) {
  std::mt19937_64 g(19);
  for (int t = 0; t < 20; ++t) {
    auto P = testkit::random_convex_polygon(7, g);
    auto Q = closed_pentagram_T(P);
    for (auto& q : Q) q = proj_normalize(q);
    bool fwd = strictly_convex(Q);
    std::reverse(Q.begin(), Q.end());
    EXPECT_TRUE(fwd || strictly_convex(Q));
  }
}

TEST(Spiral, LiftTUsesShortDiagonals) {
  HVec a(0, 0, 1), b(1, 0, 1), c(1, 1, 1), d(0, 1, 1);
  // diagonals of the unit square meet at its centre
  HVec q = lift_T(a, b, c, d);
  EXPECT_TRUE(projectively_equal(q, HVec(0.5, 0.5, 1)));
}

TEST(Spiral, SeedsAreDeterministic) {
  auto s = random_seed(6, 42, 0.1), t = random_seed(6, 42, 0.1);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(s.p(k), t.p(k));
  EXPECT_EQ(s.side, t.side);
  EXPECT_EQ(s.monodromy, t.monodromy);
  EXPECT_NE(random_seed(6, 43, 0.1).p(1), s.p(1));
}

TEST(Spiral, ZeroTwistGivesIdentityMonodromy) {
  EXPECT_EQ(random_seed(5, 3, 0).monodromy, Mat3::Identity());
}

// Property: generated seeds satisfy every seed precondition.
TEST(Spiral, GeneratedSeedsAreValid) {
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 250; ++k) {
      auto s = testkit::instance(n, k);
      EXPECT_NO_THROW(validate_seed(s));
      EXPECT_NEAR(s.monodromy.determinant(), 1.0, 1e-10);
      EXPECT_LT(std::abs(triple(s.p(n), s.side, s.monodromy * s.p(1))),
                1e-9 * s.p(n).norm() * s.side.norm() * (s.monodromy * s.p(1)).norm());
    }
}

TEST(Spiral, SeedValidationRejects) {
  auto s = random_seed(5, 1, 0.1);
  auto bad = s;
  bad.side = bad.side + HVec(0.3, -0.2, 0);
  EXPECT_THROW(validate_seed(bad), InvalidSeed);
  bad = s;
  bad.monodromy *= 2;
  EXPECT_THROW(validate_seed(bad), InvalidSeed);
  bad = s;
  bad.points.pop_back();
  EXPECT_THROW(validate_seed(bad), InvalidSeed);
  bad = s;
  bad.points[2] = 0.5 * (bad.points[1] + bad.points[3]);
  EXPECT_THROW(validate_seed(bad), InvalidSeed);
}

TEST(Spiral, ExtendIsConsistentWithRecurrence) {
  auto s = random_seed(8, 4, 0.1);
  auto ls = canonical_lift(s);
  auto w = extend(s, ls.V, 12, 10);
  // stored vertices unchanged
  for (auto& [i, v] : ls.V.v) EXPECT_EQ(w.at(i), v);
  // p_{i+N+1} ~ M T(p_i) everywhere on the window
  int checked = 0;
  for (int i = w.lo() + 1; i + s.n + 1 <= w.hi(); ++i, ++checked) {
    HVec q = s.monodromy * lift_T(w.at(i - 1), w.at(i), w.at(i + 1), w.at(i + 2));
    EXPECT_TRUE(projectively_equal(q, w.at(i + s.n + 1), Tolerances{.proj = 1e-7})) << i;
  }
  EXPECT_GT(checked, 20);
}

TEST(Spiral, ExtendNoOpOnZero) {
  auto s = random_seed(5, 2, 0.1);
  auto ls = canonical_lift(s);
  auto w = extend(s, ls.V, 0, 0);
  EXPECT_EQ(w.lo(), ls.V.lo());
  EXPECT_EQ(w.hi(), ls.V.hi());
}
