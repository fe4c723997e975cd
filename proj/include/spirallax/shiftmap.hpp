#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "coords.hpp"

namespace spirallax {

struct AlphaBeta {
  double alpha = 1, beta = 1;
  int branch = 2;  // N mod 3

  double pow(int r, int s) const { return std::pow(alpha, r) * std::pow(beta, s); }
};

// Exponents (r, s) with V-hat_j = alpha^r beta^s V_j, j in [0, N+4].
inline std::pair<int, int> lift_exponents(int N, int j) {
  if (j < 0 || j > N + 4) throw IndexOutOfRange("lift exponent table", j);
  if (N % 3 == 2) {
    if (j == 0 || j == N + 3) return {-1, -1};
    if (j == N + 4) return {1, 0};
    switch (j % 3) {
      case 1: return {-1, -1};
      case 2: return {1, 0};
      default: return {0, 1};
    }
  }
  if (N % 3 == 0) {
    if (j == 0 || j == N + 4) return {-1, -1};
    if (j == N + 3) return {0, 1};
    switch (j % 3) {
      case 1: return {0, 1};
      case 2: return {-1, -1};
      default: return {1, 0};
    }
  }
  throw InvalidN(N);
}

// S(V_i) = alpha^{r_i} beta^{s_i} V_{i+1}.
struct ExpSchedule {
  int n = 0;
  std::pair<int, int> operator()(int i) const { return lift_exponents(n, i + 1); }
};

inline AlphaBeta alpha_beta(const Coords& c, const DerivedInv& D) {
  const double A0 = D.A[0], A1 = D.A[1], A3 = D.A[3];
  if (c.cN == 0 || A0 == 0 || A1 == 0 || A3 == 0) throw GenericityViolation("alpha/beta divisor vanishes");
  const double Q = A1 / (A3 * A0);
  AlphaBeta ab;
  ab.branch = c.n % 3;
  if (ab.branch == 2) {
    // alpha^2 beta = c_N, alpha beta^2 = Q
    double u = std::cbrt(c.cN * Q);
    ab.alpha = c.cN / u;
    ab.beta = u * u / c.cN;
  } else if (ab.branch == 0) {
    // alpha beta^{-1} = c_N, alpha^2 beta = Q
    ab.alpha = std::cbrt(c.cN * Q);
    ab.beta = ab.alpha / c.cN;
  } else {
    throw InvalidN(c.n);
  }
  if (!std::isfinite(ab.alpha) || !std::isfinite(ab.beta) || ab.alpha == 0 || ab.beta == 0)
    throw GenericityViolation("alpha/beta not finite");
  return ab;
}

inline AlphaBeta alpha_beta(const Coords& c) { return alpha_beta(c, derive(c)); }

// Relative residuals of the two defining equations.
inline std::array<double, 2> alpha_beta_residuals(const Coords& c, const DerivedInv& D, const AlphaBeta& ab) {
  const double Q = D.A[1] / (D.A[3] * D.A[0]);
  auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
  if (ab.branch == 2) return {rel(ab.pow(2, 1), c.cN), rel(ab.pow(-1, -2), 1 / Q)};
  return {rel(ab.pow(1, -1), c.cN), rel(ab.pow(-2, -1), 1 / Q)};
}

inline Coords shift_coords(const Coords& c) {
  const int N = c.n;
  auto D = derive(c);
  auto ab = alpha_beta(c, D);
  std::array<double, 3> fa{}, fb{};
  double aN, bN, cN1;
  if (N % 3 == 2) {
    fa = {ab.pow(-1, 1), ab.pow(-1, -2), ab.pow(2, 1)};
    fb = {ab.pow(1, 2), ab.pow(-2, -1), ab.pow(1, -1)};
    aN = D.a_N;
    bN = ab.pow(-1, -2) * D.b_N;
    cN1 = ab.pow(1, -1) * D.c_N1;
  } else {
    fa = {ab.pow(2, 1), ab.pow(-1, 1), ab.pow(-1, -2)};
    fb = {ab.pow(1, -1), ab.pow(1, 2), ab.pow(-2, -1)};
    aN = ab.pow(1, 2) * D.a_N;
    bN = D.b_N;
    cN1 = ab.pow(-1, -2) * D.c_N1;
  }
  Coords out;
  out.n = N;
  for (int k = 1; k < N; ++k) {
    out.a.push_back(fa[static_cast<std::size_t>(k % 3)] * c.a[static_cast<std::size_t>(k)]);
    out.b.push_back(fb[static_cast<std::size_t>(k % 3)] * c.b[static_cast<std::size_t>(k)]);
  }
  out.a.push_back(aN);
  out.b.push_back(bN);
  out.cN = cN1;
  return out;
}

inline Coords shift_coords(const Coords& c, int steps) {
  Coords x = c;
  for (int k = 0; k < steps; ++k) x = shift_coords(x);
  return x;
}

// Seed {p_2, ..., p_N, p_{N+1}; p_{N+2}} with the same monodromy.
inline Seed geometric_shift(const Seed& s, const Tolerances& tol = {}) {
  auto ls = canonical_lift(s, tol);
  Seed out;
  out.n = s.n;
  out.monodromy = s.monodromy;
  for (int k = 2; k <= s.n + 1; ++k) out.points.push_back(proj_normalize(ls[k]));
  out.side = proj_normalize(ls[s.n + 2]);
  validate_seed(out, tol);
  return out;
}

inline Coords scaling_action(const Coords& c, double mu) {
  Coords out = c;
  for (auto& x : out.a) x *= mu;
  for (auto& x : out.b) x /= mu;
  return out;
}

struct CheckReport {
  std::string check;
  double max_dev = 0;
  bool pass = true;
  std::string detail;
};

inline double coords_dev(const Coords& x, const Coords& y) {
  double m = rel_dev(x.cN, y.cN);
  for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max({m, rel_dev(x.a[i], y.a[i]), rel_dev(x.b[i], y.b[i])});
  return m;
}

inline CheckReport verify_equivariance(const Coords& c, double mu, const Tolerances& tol = {}) {
  CheckReport r{"scaling_equivariance", 0, true, "mu=" + std::to_string(mu)};
  r.max_dev = coords_dev(shift_coords(scaling_action(c, mu)), scaling_action(shift_coords(c), mu));
  r.pass = r.max_dev <= tol.shift;
  return r;
}

// Closed-form shift against the coordinates of the geometrically shifted seed.
inline CheckReport verify_commutation(const Seed& s, const Tolerances& tol = {}) {
  CheckReport r{"shift_commutation", 0, true, ""};
  auto c = extract_coords(canonical_lift(s, tol), tol);
  auto g = extract_coords(canonical_lift(geometric_shift(s, tol), tol), tol);
  r.max_dev = coords_dev(shift_coords(c), g);
  r.pass = r.max_dev <= tol.shift;
  return r;
}

// Measured V-hat_j / V_j for j in [0, N+4].
inline std::vector<double> measured_lift_ratios(const Seed& s, const Tolerances& tol = {}) {
  auto ls = canonical_lift(s, tol);
  auto hat = canonical_lift(geometric_shift(s, tol), tol);
  std::vector<double> f;
  for (int j = 0; j <= s.n + 4; ++j) f.push_back(proportionality(hat[j - 1], ls[j]));
  return f;
}

// Lift ratios against the exponent table.
inline CheckReport verify_lift_ratios(const Seed& s, const Tolerances& tol = {}) {
  CheckReport r{"lift_exponent_table", 0, true, ""};
  auto f = measured_lift_ratios(s, tol);
  auto ab = alpha_beta(extract_coords(canonical_lift(s, tol), tol));
  for (int j = 0; j <= s.n + 4; ++j) {
    auto [e1, e2] = lift_exponents(s.n, j);
    double want = ab.pow(e1, e2);
    r.max_dev = std::max(r.max_dev, std::abs(f[static_cast<std::size_t>(j)] - want) / std::abs(want));
  }
  r.pass = r.max_dev <= tol.shift;
  return r;
}

// F with V_0 = F M^{-1} Tbar(V_{N+1}), V_{N+1} = M T(V_0).
inline double tbar_failure_factor(const LiftedSpiral& ls, const Tolerances& tol = {}) {
  const int N = ls.n;
  double c = ls.d(N + 3) / ls.d(N + 2);
  HVec w = inverse(ls.M, tol) * lift_Tbar(ls[N - 1], ls[N], ls[N + 1], ls[N + 2], c, tol);
  return proportionality(ls[0], w);
}

// The same factor predicted from alpha, beta: alpha beta^2 (N = 3s+2), alpha^2 beta (N = 3s).
inline double tbar_failure_predicted(const AlphaBeta& ab) { return ab.branch == 2 ? ab.pow(1, 2) : ab.pow(2, 1); }

}  // namespace spirallax
