#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "spiral.hpp"

namespace spirallax {

using IntMatrix = std::vector<std::vector<long long>>;

struct LambdaSystem {
  int n = 0;
  IntMatrix A;                        // (N+1) x (N+1)
  std::vector<double> rhs_log;        // ln|g_i|
  std::vector<std::uint8_t> rhs_sign; // 1 where g_i < 0
};

namespace detail {

// Coefficients of Lambda_j over Lambda_0..Lambda_N.
inline std::vector<long long> expand_lambda(int N, int j, std::map<int, std::vector<long long>>& memo) {
  if (auto it = memo.find(j); it != memo.end()) return it->second;
  std::vector<long long> v(static_cast<std::size_t>(N + 1), 0);
  auto add = [&](int k) {
    auto e = expand_lambda(N, k, memo);
    for (std::size_t t = 0; t < v.size(); ++t) v[t] += e[t];
  };
  if (j >= 0 && j <= N) {
    v[static_cast<std::size_t>(j)] = 1;
  } else if (j == -1) {
    for (int k : {N + 4, N, N - 1, N - 2}) add(k);
  } else if (j > N) {
    int k = j - N;
    for (int t = k - 2; t <= k + 1; ++t) add(t);
  } else {
    throw IndexOutOfRange("lambda expansion", j);
  }
  memo[j] = v;
  return v;
}

}  // namespace detail

// Row i: Lambda_i + Lambda_{i+1} + Lambda_{i+2}, reduced onto Lambda_0..Lambda_N.
inline IntMatrix lambda_matrix(int N) {
  std::map<int, std::vector<long long>> memo;
  IntMatrix A;
  for (int i = 0; i <= N; ++i) {
    std::vector<long long> row(static_cast<std::size_t>(N + 1), 0);
    for (int j = i; j <= i + 2; ++j) {
      auto e = detail::expand_lambda(N, j, memo);
      for (std::size_t t = 0; t < row.size(); ++t) row[t] += e[t];
    }
    A.push_back(row);
  }
  return A;
}

// Fraction-free Gaussian elimination.
inline long long bareiss_det(IntMatrix A) {
  const std::size_t n = A.size();
  long long sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && A[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(A[k], A[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
    prev = A[k][k];
  }
  return sign * A[n - 1][n - 1];
}

inline std::optional<std::vector<std::uint8_t>> gf2_solve(const IntMatrix& A, const std::vector<std::uint8_t>& b) {
  const std::size_t n = A.size();
  std::vector<std::vector<std::uint8_t>> M(n, std::vector<std::uint8_t>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = static_cast<std::uint8_t>(((A[i][j] % 2) + 2) % 2);
    M[i][n] = b[i] & 1u;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !M[p][c]) ++p;
    if (p == n) return std::nullopt;
    std::swap(M[c], M[p]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != c && M[i][c])
        for (std::size_t j = c; j <= n; ++j) M[i][j] ^= M[c][j];
  }
  std::vector<std::uint8_t> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n];
  return x;
}

inline LambdaSystem build_lambda_system(int N, const std::vector<double>& g) {
  if (g.size() != static_cast<std::size_t>(N + 1)) throw IndexOutOfRange("lambda system rhs", static_cast<long>(g.size()));
  LambdaSystem s;
  s.n = N;
  s.A = lambda_matrix(N);
  for (double x : g) {
    if (x == 0 || !std::isfinite(x)) throw DegenerateConfiguration("zero determinant in the arbitrary lift");
    s.rhs_log.push_back(std::log(std::abs(x)));
    s.rhs_sign.push_back(x < 0 ? 1 : 0);
  }
  return s;
}

inline std::vector<double> solve_lambdas(const LambdaSystem& s, const Tolerances& tol = {}) {
  if (s.n % 3 == 1) throw NotLiftable(s.n);
  const int n = s.n + 1;
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    r(i) = s.rhs_log[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) A(i, j) = static_cast<double>(s.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  Eigen::VectorXd L = A.partialPivLu().solve(r);
  if ((A * L - r).cwiseAbs().maxCoeff() > tol.lift * std::max(1.0, r.cwiseAbs().maxCoeff()))
    throw IllConditioned("lambda log system residual");
  auto sg = gf2_solve(s.A, s.rhs_sign);
  if (!sg) throw IllConditioned("sign system has no solution");
  std::vector<double> lam;
  for (int i = 0; i < n; ++i) lam.push_back(((*sg)[static_cast<std::size_t>(i)] ? -1.0 : 1.0) * std::exp(L(i)));
  return lam;
}

struct LiftedSpiral {
  int n = 0;
  VertexWindow V;  // canonical, at least [-3, N+5]
  Mat3 M = Mat3::Identity();
  Seed seed;       // the seed it was lifted from, with the side point it used
  std::vector<double> lambda;

  const HVec& operator[](int i) const { return V.at(i); }
  double d(int i) const { return V.d(i); }
  LiftedSpiral extended(int lo, int hi, const Tolerances& tol = {}) const {
    LiftedSpiral out = *this;
    out.V = extend(seed, V, std::max(0, hi - V.hi()), std::max(0, V.lo() - lo), tol);
    return out;
  }
};

inline constexpr int lift_lo = -3;
inline constexpr int lift_hi_offset = 5;

// Canonical lift from an arbitrary lift V_0..V_N of p_0..p_N.
inline LiftedSpiral canonical_lift_from(const Seed& s, const std::vector<HVec>& core, const Tolerances& tol = {}) {
  const int N = s.n;
  if (N % 3 == 1) throw NotLiftable(N);
  validate_seed(s, tol);
  VertexWindow w;
  for (int k = 0; k <= N; ++k) w.set(k, core.at(static_cast<std::size_t>(k)));
  w = extend(s, w, 2, 0, tol);
  std::vector<double> g;
  for (int i = 0; i <= N; ++i) g.push_back(1.0 / w.d(i));
  auto lam = solve_lambdas(build_lambda_system(N, g), tol);
  VertexWindow c;
  c.canonical = true;
  for (int k = 0; k <= N; ++k) c.set(k, lam[static_cast<std::size_t>(k)] * w.at(k));
  LiftedSpiral ls;
  ls.n = N;
  ls.M = s.monodromy;
  ls.seed = s;
  ls.lambda = lam;
  ls.V = extend(s, c, lift_hi_offset, -lift_lo, tol);
  for (int i = 0; i <= N; ++i)
    if (std::abs(ls.d(i) - 1) > tol.lift) throw IllConditioned("unit-determinant residual at index " + std::to_string(i));
  return ls;
}

inline LiftedSpiral canonical_lift(const Seed& s, const Tolerances& tol = {}) {
  if (s.n % 3 == 1) throw NotLiftable(s.n);
  validate_seed(s, tol);
  auto w = seed_window(s, tol);
  std::vector<HVec> core;
  for (int k = 0; k <= s.n; ++k) core.push_back(w.at(k));
  return canonical_lift_from(s, core, tol);
}

inline double lift_residual(const LiftedSpiral& ls) {
  double m = 0;
  for (int i = 0; i <= ls.n; ++i) m = std::max(m, std::abs(ls.d(i) - 1));
  return m;
}

}  // namespace spirallax
