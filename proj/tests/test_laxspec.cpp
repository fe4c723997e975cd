#include <gtest/gtest.h>

#include "support.hpp"

using namespace spirallax;

namespace {

// M(mu) from numeric matrices only: K_0 ... K_N A_1(mu)^{-1} K_{-1}. Also returns the max entry of the
// product of entrywise absolute values, the scale of its rounding error.
std::pair<Mat3, double> numeric_monodromy(const Coords& c, double mu) {
  auto t = formula_table(c, derive(c));
  Mat3 P = Mat3::Identity(), E = Mat3::Identity();
  auto mul = [&](const Mat3& X) {
    P = P * X;
    E = E * X.cwiseAbs();
  };
  for (int i = 0; i <= c.n; ++i) mul(evaluate<Mat3>(K_mu(i, t), mu));
  mul(evaluate<Mat3>(gauge_A_mu(1, t), mu).inverse());
  mul(evaluate<Mat3>(K_mu(-1, t), mu));
  return {P, E.maxCoeff()};
}

double block_eval(const SpectralTable& T, int r, double mu) {
  double s = 0;
  for (int e : T.mu_support(r)) s += T.at(e, r) * std::pow(mu, e);
  return s;
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

double printed_I5(const Coords& c) {
  const auto& a = c.a;
  double A1 = 1 + a[1] * c.b[0];
  return (a[1] * a[3] * A1 * A1 + c.cN * c.cN * a[4] * a[2]) / (A1 * a[3] * c.cN);
}

double printed_I6(const Coords& c) {
  const auto& a = c.a;
  const auto& b = c.b;
  double A1 = 1 + a[1] * b[0], A2 = 1 + a[2] * b[1];
  return (a[0] * a[2] * c.cN * c.cN + a[4] * A1 * A2 * (a[3] * A2 + a[0] * (1 + a[1] * b[3] + a[3] * b[2])) +
          A1 * A2 * a[0] * a[1] * (1 + a[1] * b[4])) /
         (A1 * A2 * a[0]);
}

}  // namespace

TEST(Laxspec, KMuGrading) {
  auto K = K_mu(0.5, 2, 3);
  Mat3 k = evaluate<Mat3>(K, 2.0);
  EXPECT_EQ(k, companion(0.5, 1.0, 6.0));
  EXPECT_DOUBLE_EQ(det(K).coeff(0), 0.5);
}

TEST(Laxspec, TableMatchesNumericCharacteristicPolynomial) {
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 5; ++k) {
      auto c = extract_coords(canonical_lift(testkit::instance(n, k)));
      auto T = spectral_table(c);
      for (double mu : {0.8, 1.0, 1.25}) {
        auto [M, err] = numeric_monodromy(c, mu);
        double tr = M.trace(), s2 = 0.5 * (tr * tr - (M * M).trace()), dt = M.determinant();
        double sc = std::max(1.0, M.cwiseAbs().maxCoeff()), e = 1e-13 * std::max(1.0, err);
        EXPECT_NEAR(block_eval(T, 2, mu), tr, 3 * e) << n;
        EXPECT_NEAR(block_eval(T, 1, mu), -s2, 6 * e * sc) << n;
        EXPECT_NEAR(block_eval(T, 0, mu), dt, 12 * e * sc * sc) << n;
        EXPECT_DOUBLE_EQ(T.at(0, 3), -1.0);
      }
    }
}

TEST(Laxspec, MonodromyAtOneIsConjugateToM) {
  for (int n : testkit::valid_ns) {
    auto ls = canonical_lift(testkit::instance(n, 2));
    auto c = extract_coords(ls);
    Mat3 rho0 = columns(ls[0], ls[1], ls[2]);
    EXPECT_LT(eval_dev(monodromy_mu(c), 1.0, Mat3(rho0.inverse() * ls.M * rho0)), 1e-10) << n;
  }
}

TEST(Laxspec, DeterminantDirectVersusFactorwise) {
  for (int k = 0; k < 10; ++k) {
    auto c = extract_coords(canonical_lift(testkit::instance(5, k)));
    auto D = derive(c);
    auto direct = det(monodromy_mu(c, D));
    direct.trim(1e-10, 1e-15);
    auto fw = monodromy_det_mu(c, D);
    ASSERT_EQ(fw.terms().size(), 1u);
    EXPECT_NEAR(fw.coeff(0), 1.0, 1e-10);
    ASSERT_EQ(direct.terms().size(), 1u);
    EXPECT_NEAR(direct.coeff(0), 1.0, 1e-8);
  }
}

TEST(Laxspec, PentagonSupport) {
  for (int k = 0; k < 10; ++k) {
    auto T = spectral_table(extract_coords(canonical_lift(testkit::instance(5, k))));
    EXPECT_EQ(as_set(T.mu_support(1)), (std::set<int>{-7, -4, -1, 2}));
    EXPECT_EQ(as_set(T.mu_support(2)), (std::set<int>{-2, 1, 4}));
    EXPECT_EQ(as_set(T.mu_support(0)), (std::set<int>{0}));
    EXPECT_NEAR(T.at(0, 0), 1.0, 1e-10);
    EXPECT_DOUBLE_EQ(T.at(0, 3), -1.0);
  }
}

TEST(Laxspec, PentagonClosedForms) {
  for (int k = 0; k < 20; ++k) {
    auto c = extract_coords(canonical_lift(testkit::instance(5, k)));
    auto T = spectral_table(c);
    auto I = pentagon_invariants(c);
    auto near = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
    EXPECT_LT(near(T.at(4, 2), c.a[1] * c.a[2] * c.a[3] * c.a[4]), 1e-6);
    EXPECT_LT(near(T.at(4, 2), I.I7), 1e-6);
    EXPECT_LT(near(T.at(-7, 1), -I.I1), 1e-6);
    EXPECT_LT(near(T.at(-2, 2), I.I3), 1e-6);
    EXPECT_LT(near(T.at(2, 1), -I.I5), 1e-6);
    EXPECT_LT(near(T.at(1, 2), I.I6), 1e-6);
    // the displayed I5, I6 carry typos and miss the computed coefficients
    EXPECT_GT(near(T.at(2, 1), -printed_I5(c)), 1e-4);
    EXPECT_GT(near(T.at(1, 2), printed_I6(c)), 1e-4);
  }
}

TEST(Laxspec, PrintedFormsDriftAlongOrbit) {
  auto c = extract_coords(canonical_lift(testkit::instance(5, 3)));
  auto x = shift_coords(c);
  EXPECT_GT(std::abs(printed_I5(x) / printed_I5(c) - 1), 1e-4);
  auto I0 = pentagon_invariants(c), I1 = pentagon_invariants(x);
  EXPECT_NEAR(I1.I5 / I0.I5, 1.0, 1e-9);
  EXPECT_NEAR(I1.I6 / I0.I6, 1.0, 1e-9);
  EXPECT_NEAR(I1.I1 / I0.I1, 1.0, 1e-9);
  EXPECT_NEAR(I1.I3 / I0.I3, 1.0, 1e-9);
}

TEST(Laxspec, LaxEquationIsMuIndependent) {
  std::vector<double> mus{-1, 0.5, 1, 2};
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 10; ++k) {
      auto c = extract_coords(canonical_lift(testkit::instance(n, k)));
      auto L = verify_lax(c, mus);
      EXPECT_TRUE(L.report.pass) << L.report.detail << " " << L.report.max_dev;
      ASSERT_EQ(L.profile.size(), mus.size());
      for (std::size_t m = 1; m < mus.size(); ++m)
        for (std::size_t i = 0; i < L.profile[0].size(); ++i)
          EXPECT_LT(std::abs(L.profile[m][i] - L.profile[0][i]), 1e-7);
    }
}

TEST(Laxspec, RMatrixIsDiagonalOfLiftFactors) {
  auto c = extract_coords(canonical_lift(testkit::instance(6, 1)));
  auto ab = alpha_beta(c);
  Mat3 R = R_mat(0, ab, 6);
  EXPECT_NEAR(R(0, 0), ab.pow(0, 1), 1e-14 * std::abs(R(0, 0)));
  EXPECT_EQ(R(0, 1), 0.0);
  EXPECT_THROW(R_mat(7, ab, 6), IndexOutOfRange);
}

// Property: the full table is constant along orbits of length N+2.
TEST(Laxspec, SpectralInvariance) {
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 10; ++k) {
      auto c = extract_coords(canonical_lift(testkit::instance(n, k)));
      auto r = verify_spectral_invariance(c, n + 2);
      EXPECT_TRUE(r.pass) << n << " " << k << " " << r.detail << " " << r.max_dev;
      EXPECT_TRUE(trace_single_residue(spectral_table(c)));
    }
}

TEST(Laxspec, EigenvaluesAreConserved) {
  for (int n : testkit::valid_ns)
    for (int k = 0; k < 5; ++k) {
      auto c = extract_coords(canonical_lift(testkit::instance(n, k)));
      EXPECT_TRUE(verify_eigenvalue_invariance(c, {0.5, 1, 2}, n + 2).pass);
      EXPECT_TRUE(verify_scaling_consistency(c, 2.5, {-1, 0.5, 1, 2}).pass);
    }
}

TEST(Laxspec, TableDevSeesChanges) {
  SpectralTable a, b;
  a.entries[{2, 1}] = 2.0;
  b.entries[{2, 1}] = 2.0;
  EXPECT_EQ(table_dev(a, b), 0.0);
  b.entries[{2, 4}] = 0.5;
  EXPECT_NEAR(table_dev(a, b), 0.25, 1e-15);
  b.entries[{2, 2}] = 1.0;
  EXPECT_FALSE(trace_single_residue(b));
}
