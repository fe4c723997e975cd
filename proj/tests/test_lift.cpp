#include <gtest/gtest.h>

#include "support.hpp"

using namespace spirallax;

namespace {

double dense_det(const IntMatrix& A) {
  const int n = static_cast<int>(A.size());
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = static_cast<double>(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return M.determinant();
}

}  // namespace

TEST(Lift, DeterminantTrichotomy) {
  for (int n : {5, 6, 8, 9, 11, 12}) {
    EXPECT_EQ(std::abs(bareiss_det(lambda_matrix(n))), 3) << n;
    EXPECT_NEAR(std::abs(dense_det(lambda_matrix(n))), 3.0, 1e-9) << n;
  }
  for (int n : {7, 10, 13}) {
    EXPECT_EQ(bareiss_det(lambda_matrix(n)), 0) << n;
    EXPECT_NEAR(dense_det(lambda_matrix(n)), 0.0, 1e-9) << n;
  }
}

TEST(Lift, ReducedTailMatrices) {
  IntMatrix m4{{1, 1, 1, 0}, {0, 1, 1, 1}, {0, 1, 1, 1}, {-1, 0, 0, 1}};
  IntMatrix m5{{1, 1, 1, 0, 0}, {0, 1, 1, 1, 0}, {0, 0, 1, 1, 1}, {0, 1, 0, 1, 1}, {-1, 0, 0, 0, 1}};
  IntMatrix m6{{1, 1, 1, 0, 0, 0}, {0, 1, 1, 1, 0, 0}, {0, 0, 1, 1, 1, 0},
               {0, 0, 0, 1, 1, 1}, {0, 1, 0, 0, 1, 1}, {-1, 0, 0, 0, 0, 1}};
  EXPECT_EQ(bareiss_det(m4), 0);
  EXPECT_EQ(bareiss_det(m5), 3);
  EXPECT_EQ(bareiss_det(m6), 3);
}

TEST(Lift, BoundaryRowsMatchPrintedMatrix) {
  for (int n : {9, 11, 12, 14}) {
    auto A = lambda_matrix(n);
    std::vector<long long> r1(static_cast<std::size_t>(n + 1), 0), r2 = r1;
    long long h1[] = {1, 1, 2, 1, 1, 1}, t1[] = {1, 2, 2};
    long long h2[] = {2, 2, 3, 2, 1, 1}, t2[] = {1, 1, 2};
    for (int k = 0; k < 6; ++k) r1[static_cast<std::size_t>(k)] = h1[k], r2[static_cast<std::size_t>(k)] = h2[k];
    for (int k = 0; k < 3; ++k)
      r1[static_cast<std::size_t>(n - 2 + k)] = t1[k], r2[static_cast<std::size_t>(n - 2 + k)] = t2[k];
    EXPECT_EQ(A[static_cast<std::size_t>(n - 1)], r1) << n;
    EXPECT_EQ(A[static_cast<std::size_t>(n)], r2) << n;
    for (int i = 0; i + 2 < n - 1; ++i) {
      std::vector<long long> band(static_cast<std::size_t>(n + 1), 0);
      for (int k = i; k <= i + 2; ++k) band[static_cast<std::size_t>(k)] = 1;
      EXPECT_EQ(A[static_cast<std::size_t>(i)], band) << n << " row " << i;
    }
  }
}

TEST(Lift, UnitRhsGivesUnitLambdas) {
  for (int n : testkit::valid_ns) {
    auto lam = solve_lambdas(build_lambda_system(n, std::vector<double>(static_cast<std::size_t>(n + 1), 1.0)));
    for (double l : lam) EXPECT_NEAR(l, 1.0, 1e-13);
  }
}

// Property: the solved lambdas reproduce g (sign and size) through the reduced system.
TEST(Lift, LambdasSolveSignedSystem) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> mag(0.1, 10);
  std::bernoulli_distribution neg(0.4);
  for (int n : testkit::valid_ns)
    for (int t = 0; t < 50; ++t) {
      std::vector<double> g;
      for (int i = 0; i <= n; ++i) g.push_back((neg(gen) ? -1 : 1) * mag(gen));
      auto sys = build_lambda_system(n, g);
      auto lam = solve_lambdas(sys);
      for (int i = 0; i <= n; ++i) {
        double p = 1;
        for (int j = 0; j <= n; ++j)
          p *= std::pow(lam[static_cast<std::size_t>(j)], static_cast<double>(sys.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
        EXPECT_NEAR(p / g[static_cast<std::size_t>(i)], 1.0, 1e-11) << n << " row " << i;
      }
    }
}

TEST(Lift, BadSystems) {
  EXPECT_THROW(build_lambda_system(5, {1, 1, 1}), IndexOutOfRange);
  EXPECT_THROW(build_lambda_system(5, {1, 1, 0, 1, 1, 1}), DegenerateConfiguration);
  LambdaSystem s;
  s.n = 7;
  EXPECT_THROW(solve_lambdas(s), NotLiftable);
}

TEST(Lift, SevenGonSpiralIsNotLiftable) {
  auto s = detail::make_seed(7, 1, 0.1);
  EXPECT_THROW(canonical_lift(s), NotLiftable);
}

TEST(Lift, Gf2Solve) {
  IntMatrix A{{1, 1, 0}, {0, 1, 1}, {1, 0, 0}};
  auto x = gf2_solve(A, {1, 0, 1});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (std::vector<std::uint8_t>{1, 0, 0}));
  IntMatrix B{{1, 1}, {2, 2}};
  EXPECT_FALSE(gf2_solve(B, {1, 1}));
}

// Property: 100 seeds per N, every consecutive determinant on the seed window is 1 (direct triple products).
TEST(Lift, CanonicalLiftHasUnitDeterminants) {
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 100; ++k) {
      auto s = testkit::instance(n, k);
      auto ls = canonical_lift(s);
      double worst = 0;
      for (int i = 0; i <= n; ++i) worst = std::max(worst, std::abs(triple(ls[i], ls[i + 1], ls[i + 2]) - 1));
      EXPECT_LT(worst, 1e-9) << n << " " << k;
      EXPECT_LT(lift_residual(ls), 1e-9);
      for (int j = 1; j <= n; ++j) EXPECT_TRUE(projectively_equal(ls[j], s.p(j)));
      EXPECT_TRUE(projectively_equal(ls[n + 1], s.side));
    }
}

TEST(Lift, TwistedPeriodicity) {
  auto s = random_seed(6, 8, 0.2);
  auto ls = canonical_lift(s);
  auto w = extend(s, ls.V, 4, 0);
  // p_{N+1} = M T(p_0)
  EXPECT_TRUE(projectively_equal(s.monodromy * lift_T(w.at(-1), w.at(0), w.at(1), w.at(2)), w.at(7)));
}

TEST(Lift, UniqueUnderRescaling) {
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 12; ++k) EXPECT_LT(lift_uniqueness_dev(testkit::instance(n, k), 100 + k), 1e-8);
}
