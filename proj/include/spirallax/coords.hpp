#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "lift.hpp"

namespace spirallax {

struct Coords {
  int n = 0;
  std::vector<double> a, b;  // indices 0..N-1
  double cN = 1;
};

// Recurrence coefficients V_{i+3} = a_i V_{i+2} + b_i V_{i+1} + c_i V_i and d_i = det rho_i.
struct InvariantTable {
  int n = 0;
  std::map<int, double> a, b, c, d;

  bool has(int i) const { return a.count(i) && b.count(i) && c.count(i) && d.count(i); }
  static double get(const std::map<int, double>& m, int i, const char* what) {
    auto it = m.find(i);
    if (it == m.end()) throw IndexOutOfRange(std::string("invariant ") + what, i);
    return it->second;
  }
  double A(int i) const { return get(c, i, "c") + get(a, i, "a") * get(b, i - 1, "b"); }
  Mat3 K(int i) const {
    Mat3 k;
    k << 0, 0, get(c, i, "c"), 1, 0, get(b, i, "b"), 0, 1, get(a, i, "a");
    return k;
  }
};

inline Mat3 companion(double c, double b, double a) {
  Mat3 k;
  k << 0, 0, c, 1, 0, b, 0, 1, a;
  return k;
}

// Geometric extraction on [lo, hi]. d is det rho on [0, N] and propagated by c outside.
inline InvariantTable extract_table(const LiftedSpiral& ls, int lo, int hi) {
  InvariantTable t;
  t.n = ls.n;
  std::map<int, double> D;
  for (int i = lo; i <= hi + 1; ++i) D[i] = ls.d(i);
  for (int i = lo; i <= hi; ++i) {
    const HVec &v0 = ls[i], &v1 = ls[i + 1], &v2 = ls[i + 2], &v3 = ls[i + 3];
    t.a[i] = triple(v0, v1, v3) / D[i];
    t.b[i] = triple(v0, v3, v2) / D[i];
    t.c[i] = D[i + 1] / D[i];
  }
  const int N = ls.n;
  int a0 = std::max(lo, 0), a1 = std::min(hi, N);
  for (int i = a0; i <= a1; ++i) t.d[i] = D[i];
  for (int i = a1 + 1; i <= hi; ++i) t.d[i] = t.d[i - 1] * t.c[i - 1];
  for (int i = a0 - 1; i >= lo; --i) t.d[i] = t.d[i + 1] / t.c[i];
  return t;
}

namespace detail {

inline double div(double num, double den, const char* what) {
  if (den == 0 || !std::isfinite(den) || std::abs(den) < 1e-12 * std::abs(num))
    throw GenericityViolation(std::string("vanishing ") + what);
  return num / den;
}

}  // namespace detail

struct DerivedInv {
  std::vector<double> A;  // A_0..A_N
  double B_N = 0;
  double a_N = 0, b_N = 0, c_N1 = 0;
  double a_N1 = 0, b_N1 = 0;
  double a_m1 = 0, b_m1 = 0, c_m1 = 0;
};

inline void check_shape(const Coords& c) {
  if (c.n < 5) throw InvalidN(c.n);
  if (c.a.size() != static_cast<std::size_t>(c.n) || c.b.size() != static_cast<std::size_t>(c.n))
    throw InvalidInput("coordinates need N values of a and of b");
}

inline DerivedInv derive(const Coords& c) {
  check_shape(c);
  const int N = c.n;
  const auto& a = c.a;
  const auto& b = c.b;
  auto ai = [&](int i) { return a[static_cast<std::size_t>(i)]; };
  auto bi = [&](int i) { return b[static_cast<std::size_t>(i)]; };
  if (c.cN == 0) throw GenericityViolation("vanishing c_N");
  DerivedInv D;
  D.A.assign(static_cast<std::size_t>(N + 1), 0);
  for (int i = 1; i < N; ++i) D.A[static_cast<std::size_t>(i)] = 1 + ai(i) * bi(i - 1);
  const double A1 = D.A[1], A2 = D.A[2];
  double A0 = detail::div(ai(N - 1) * c.cN, A1 * ai(0), "A_1 a_0");
  D.A[0] = A0;
  D.a_N = ai(1);
  D.b_N = detail::div(c.cN, ai(N - 2), "a_{N-2}") * (detail::div(c.cN, A1 * A2, "A_1 A_2") - 1);
  D.A[static_cast<std::size_t>(N)] = c.cN + D.a_N * bi(N - 1);
  D.B_N = c.cN + D.b_N * ai(N - 2);
  D.c_N1 = detail::div(c.cN, D.B_N, "B_N");
  D.c_m1 = detail::div(ai(N - 1), ai(0), "a_0");
  D.b_m1 = detail::div(A0 - 1, ai(0), "a_0");
  D.a_m1 = detail::div(ai(N - 1) * ai(N - 1) * ai(N - 2) * A1 * A2, ai(0) * ai(0) * c.cN * A0, "a_0^2 c_N A_0");
  detail::div(1, D.A[3], "A_3");
  D.a_N1 = ai(2);
  D.b_N1 = detail::div(D.b_m1 * A2, A0, "A_0");
  return D;
}

// Invariants on [-1, N+1] from the closed forms.
inline InvariantTable formula_table(const Coords& c, const DerivedInv& D) {
  InvariantTable t;
  const int N = c.n;
  t.n = N;
  for (int i = 0; i < N; ++i) {
    t.a[i] = c.a[static_cast<std::size_t>(i)];
    t.b[i] = c.b[static_cast<std::size_t>(i)];
    t.c[i] = 1;
    t.d[i] = 1;
  }
  t.a[-1] = D.a_m1, t.b[-1] = D.b_m1, t.c[-1] = D.c_m1, t.d[-1] = 1 / D.c_m1;
  t.a[N] = D.a_N, t.b[N] = D.b_N, t.c[N] = c.cN, t.d[N] = 1;
  t.a[N + 1] = D.a_N1, t.b[N + 1] = D.b_N1, t.c[N + 1] = D.c_N1, t.d[N + 1] = c.cN;
  return t;
}

inline Coords coords_of(const InvariantTable& t) {
  Coords c;
  c.n = t.n;
  for (int i = 0; i < t.n; ++i) {
    c.a.push_back(InvariantTable::get(t.a, i, "a"));
    c.b.push_back(InvariantTable::get(t.b, i, "b"));
  }
  c.cN = InvariantTable::get(t.c, t.n, "c");
  return c;
}

inline Coords extract_coords(const LiftedSpiral& ls, const Tolerances& tol = {}) {
  auto t = extract_table(ls, 0, ls.n);
  for (int i = 0; i < ls.n; ++i)
    if (std::abs(t.c[i] - 1) > tol.lift) throw IllConditioned("c_" + std::to_string(i) + " differs from 1; lift is not canonical");
  Coords c = coords_of(t);
  derive(c);
  return c;
}

// Columns d_{k-1}(c_{k-1},0,a_{k-1}), d_k K_{k-1}(c_k,0,a_k), d_{k+1} K_{k-1}K_k(c_{k+1},0,a_{k+1}), k = i-1.
inline Mat3 gauge_A(int i, const InvariantTable& t) {
  const int k = i - 1;
  for (int j = k - 1; j <= k + 1; ++j)
    if (!t.has(j)) throw IndexOutOfRange("gauge_A", i);
  auto stub = [&](int j) { return HVec(t.c.at(j), 0, t.a.at(j)); };
  Mat3 G;
  G.col(0) = t.d.at(k - 1) * stub(k - 1);
  G.col(1) = t.d.at(k) * (t.K(k - 1) * stub(k));
  G.col(2) = t.d.at(k + 1) * (t.K(k - 1) * t.K(k) * stub(k + 1));
  return G;
}

// Columns c_{m+2}d_{m-1}(c_{m-1},b_{m-1},0), c_{m+3}d_m K_{m-1}(c_m,b_m,0), c_{m+4}d_{m+1}K_{m-1}K_m(c_{m+1},b_{m+1},0), m = N-i.
inline Mat3 gauge_B(int i, const InvariantTable& t) {
  const int m = t.n - i;
  if (i < 3) throw IndexOutOfRange("gauge_B", i);
  for (int j = m - 1; j <= m + 1; ++j)
    if (!t.has(j)) throw IndexOutOfRange("gauge_B", i);
  for (int j = m + 2; j <= m + 4; ++j)
    if (!t.c.count(j)) throw IndexOutOfRange("gauge_B", i);
  auto stub = [&](int j) { return HVec(t.c.at(j), t.b.at(j), 0); };
  Mat3 G;
  G.col(0) = t.c.at(m + 2) * t.d.at(m - 1) * stub(m - 1);
  G.col(1) = t.c.at(m + 3) * t.d.at(m) * (t.K(m - 1) * stub(m));
  G.col(2) = t.c.at(m + 4) * t.d.at(m + 1) * (t.K(m - 1) * t.K(m) * stub(m + 1));
  return G;
}

// rho_0 = I, rho_{i+1} = rho_i K_i; count frames, count <= N+3.
inline std::vector<Mat3> reconstruct_frames(const Coords& c, const DerivedInv& D, int count) {
  if (count < 1 || count > c.n + 3) throw IndexOutOfRange("reconstruct_frames", count);
  auto t = formula_table(c, D);
  std::vector<Mat3> rho{Mat3::Identity()};
  for (int i = 0; i + 1 < count; ++i) rho.push_back(rho.back() * t.K(i));
  return rho;
}

// rho_0^{-1} M rho_0 = K_0 K_1 ... K_N A_1^{-1} K_{-1}
inline Mat3 monodromy_representative(const Coords& c, const DerivedInv& D) {
  auto t = formula_table(c, D);
  Mat3 P = Mat3::Identity();
  for (int i = 0; i <= c.n; ++i) P = P * t.K(i);
  return P * inverse(gauge_A(1, t)) * t.K(-1);
}

// The seed whose canonical lift has rho_0 = I and the given coordinates.
inline Seed seed_from_coords(const Coords& c, const Tolerances& tol = {}) {
  check_n(c.n);
  auto D = derive(c);
  auto rho = reconstruct_frames(c, D, c.n + 2);
  Seed s;
  s.n = c.n;
  for (int k = 1; k <= c.n; ++k) s.points.push_back(proj_normalize(rho[static_cast<std::size_t>(k)].col(0)));
  s.side = proj_normalize(rho[static_cast<std::size_t>(c.n + 1)].col(0));
  // det 1 up to rounding
  Mat3 rep = monodromy_representative(c, D);
  double d = rep.determinant();
  if (!std::isfinite(d) || d <= 0) throw GenericityViolation("monodromy representative has no unit determinant");
  s.monodromy = rep / std::cbrt(d);
  // whiten the point set by an SL(3) change of frame
  Mat3 G = Mat3::Zero();
  for (int k = 1; k <= c.n + 1; ++k) {
    HVec u = k <= c.n ? s.p(k) : s.side;
    G += u * u.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(G);
  Mat3 H = es.operatorInverseSqrt();
  H /= std::cbrt(H.determinant());
  for (auto& p : s.points) p = proj_normalize(H * p);
  s.side = proj_normalize(H * s.side);
  s.monodromy = H * s.monodromy * H.inverse();
  s.monodromy /= std::cbrt(s.monodromy.determinant());
  validate_seed(s, tol);
  return s;
}

// c_{-1}/(1 + a_0 b_{-1}) - c_N/((c_N + b_N a_{N-2})(1 + a_2 b_1)), relative.
inline double rel_residual(const Coords& c, const DerivedInv& D) {
  double lhs = D.c_m1 / (1 + c.a[0] * D.b_m1);
  double rhs = c.cN / (D.B_N * (1 + c.a[2] * c.b[1]));
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

}  // namespace spirallax
