#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "projgeo.hpp"

namespace spirallax {

struct Seed {
  int n = 0;
  std::vector<HVec> points;  // p_1 .. p_N
  HVec side = HVec::Zero();  // p_{N+1}
  Mat3 monodromy = Mat3::Identity();

  const HVec& p(int k) const { return points.at(static_cast<std::size_t>(k - 1)); }
};

// Contiguous window of lifted vertices indexed by spiral position.
struct VertexWindow {
  std::map<int, HVec> v;
  bool canonical = false;

  bool empty() const { return v.empty(); }
  int lo() const { return v.begin()->first; }
  int hi() const { return v.rbegin()->first; }
  bool has(int i) const { return v.count(i) != 0; }
  const HVec& at(int i) const {
    auto it = v.find(i);
    if (it == v.end()) throw IndexOutOfRange("vertex window", i);
    return it->second;
  }
  void set(int i, const HVec& x) { v[i] = x; }
  VertexWindow slice(int a, int b) const {
    VertexWindow w;
    w.canonical = canonical;
    for (int i = a; i <= b; ++i) w.v[i] = at(i);
    return w;
  }
  // det(V_i, V_{i+1}, V_{i+2})
  double d(int i) const { return triple(at(i), at(i + 1), at(i + 2)); }
};

inline bool n_allowed(int n) { return n >= 5 && n % 3 != 1; }

inline void check_n(int n) {
  if (!n_allowed(n)) throw InvalidN(n);
}

// Pentagram image of the vertex V0 with neighbours V_{-1}, V1, V2.
inline HVec lift_T(const HVec& vm1, const HVec& v0, const HVec& v1, const HVec& v2, const Tolerances& tol = {}) {
  return meet_of_joins(vm1, v1, v0, v2, tol);
}

// Backward image c_{i+1} (V_i x V_{i+1}) x (V_{i-2} x V_{i-1}).
inline HVec lift_Tbar(const HVec& vm2, const HVec& vm1, const HVec& v0, const HVec& v1, double c_next,
                      const Tolerances& tol = {}) {
  return c_next * meet_of_joins(v0, v1, vm2, vm1, tol);
}

// p_0 = M^{-1} (line(p_{N-1}, p_N) meet line(p_{N+1}, M p_2))
inline HVec p0_of(const Seed& s, const Tolerances& tol = {}) {
  const Mat3& M = s.monodromy;
  HVec q = meet_of_joins(s.p(s.n - 1), s.p(s.n), s.side, M * s.p(2), tol);
  return inverse(M, tol) * q;
}

namespace detail {

template <class F>
auto at_index(int i, F&& f) {
  try {
    return f();
  } catch (const DegenerateConfiguration& e) {
    if (e.indexed) throw;
    throw DegenerateConfiguration("lines do not meet in a unique point", i, true);
  }
}

// Fills V_{N+2..N+4}, then V_{-1} and V_{N+1} through the side point.
inline void close_boundary(const Seed& s, VertexWindow& w, const Tolerances& tol) {
  const int N = s.n;
  const Mat3& M = s.monodromy;
  for (int k = 2; k <= 4; ++k)
    if (!w.has(N + k))
      w.set(N + k, at_index(N + k, [&] {
              return HVec(M * lift_T(w.at(k - 2), w.at(k - 1), w.at(k), w.at(k + 1), tol));
            }));
  const HVec& W = s.side;
  double den = triple(W, w.at(N + 2), w.at(N + 3));
  if (den == 0) throw DegenerateConfiguration("side point collinear with its successors", N + 1, true);
  double c = triple(w.at(N + 2), w.at(N + 3), w.at(N + 4)) / den;
  Mat3 Mi = inverse(M, tol);
  if (!w.has(-1))
    w.set(-1, at_index(-1, [&] {
            return HVec(Mi * lift_Tbar(w.at(N - 2), w.at(N - 1), w.at(N), W, c, tol));
          }));
  if (!w.has(N + 1))
    w.set(N + 1, at_index(N + 1, [&] {
            return HVec(M * lift_T(w.at(-1), w.at(0), w.at(1), w.at(2), tol));
          }));
}

inline void forward_to(const Seed& s, VertexWindow& w, int target, const Tolerances& tol) {
  const int N = s.n;
  for (int m = w.hi() + 1; m <= target; ++m) {
    if (w.has(m)) continue;
    int k = m - N;
    if (k == 1 && !w.has(-1)) {
      close_boundary(s, w, tol);
      continue;
    }
    if (k < 1) throw IndexOutOfRange("forward extension", m);
    w.set(m, at_index(m, [&] {
            return HVec(s.monodromy * lift_T(w.at(k - 2), w.at(k - 1), w.at(k), w.at(k + 1), tol));
          }));
  }
}

}  // namespace detail

// Window extended to [lo - bwd, hi + fwd]. Backward steps need a canonical window.
inline VertexWindow extend(const Seed& s, const VertexWindow& in, int fwd, int bwd, const Tolerances& tol = {}) {
  VertexWindow w = in;
  const int N = s.n;
  const int lo = in.lo() - bwd, hi = in.hi() + fwd;
  detail::forward_to(s, w, hi, tol);
  if (bwd > 0 && !w.canonical && lo < -1) throw IllConditioned("backward extension needs a canonical lift");
  if (lo < w.lo()) {
    Mat3 Mi = inverse(s.monodromy, tol);
    for (int m = w.lo() - 1; m >= lo; --m) {
      if (m == -1 && !w.has(-1)) {
        detail::close_boundary(s, w, tol);
        continue;
      }
      int i = -m, j = N - i + 1;
      detail::forward_to(s, w, j + 4, tol);
      double c = w.d(j + 2) / w.d(j + 1);
      w.set(m, detail::at_index(m, [&] {
              return HVec(Mi * lift_Tbar(w.at(j - 2), w.at(j - 1), w.at(j), w.at(j + 1), c, tol));
            }));
    }
  }
  return w.slice(lo, hi);
}

inline double polygon_turn(const HVec& a, const HVec& b, const HVec& c) {
  HVec x = a / a.z(), y = b / b.z(), z = c / c.z();
  return (y.x() - x.x()) * (z.y() - y.y()) - (y.y() - x.y()) * (z.x() - y.x());
}

inline bool strictly_convex(const std::vector<HVec>& P, double margin = 0) {
  const std::size_t n = P.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(polygon_turn(P[i], P[(i + 1) % n], P[(i + 2) % n]) > margin)) return false;
  return true;
}

inline void validate_seed(const Seed& s, const Tolerances& tol = {}) {
  check_n(s.n);
  if (static_cast<int>(s.points.size()) != s.n) throw InvalidSeed("expected N base points");
  if (std::abs(s.monodromy.determinant() - 1) > 1e-8) throw InvalidSeed("monodromy must have determinant 1");
  HVec mp1 = s.monodromy * s.p(1);
  double col = triple(s.p(s.n).normalized(), s.side.normalized(), mp1.normalized());
  if (std::abs(col) > tol.proj) throw InvalidSeed("side point is not on the line through p_N and M p_1");
  std::vector<HVec> q(s.points);
  q.push_back(s.side);
  for (std::size_t i = 0; i + 2 < q.size(); ++i)
    if (std::abs(triple(q[i].normalized(), q[i + 1].normalized(), q[i + 2].normalized())) <= tol.deg)
      throw InvalidSeed("three consecutive points are collinear");
}

namespace detail {

// Consecutive vertices of the spiral on [-1, N+5] are far from collinear.
inline bool well_conditioned(const Seed& s, double margin = 1e-4) {
  try {
    validate_seed(s);
    VertexWindow w;
    w.set(0, p0_of(s));
    for (int k = 1; k <= s.n; ++k) w.set(k, s.p(k));
    w = extend(s, w, 5, 1);
    for (int i = w.lo(); i + 2 <= w.hi(); ++i)
      if (std::abs(triple(w.at(i).normalized(), w.at(i + 1).normalized(), w.at(i + 2).normalized())) < margin) return false;
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline Seed make_seed(int N, std::uint64_t rng_seed, double twist) {
  std::mt19937_64 gen(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Seed s;
  s.n = N;
  double amp = 0.1;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 0 && attempt % 20 == 0) amp *= 0.5;
    s.points.clear();
    for (int k = 0; k < N; ++k) {
      double th = 2 * std::numbers::pi * k / N;
      double r = amp * unit(gen), phi = 2 * std::numbers::pi * unit(gen);
      s.points.emplace_back(std::cos(th) + r * std::cos(phi), std::sin(th) + r * std::sin(phi), 1.0);
    }
    Mat3 X;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) X(i, j) = normal(gen);
    double t = 0.2 + 0.6 * unit(gen);
    if (!strictly_convex(s.points, 1e-3)) continue;
    s.monodromy = twist == 0 ? Mat3::Identity() : normalize_to_sl3(Mat3((twist * X).exp()));
    HVec b = s.monodromy * s.points[0];
    if (std::abs(b.z()) < 1e-3) continue;
    b /= b.z();
    s.side = (1 - t) * s.points[N - 1] + t * b;
    if (n_allowed(N) && !well_conditioned(s)) continue;
    return s;
  }
}

}  // namespace detail

// Perturbed regular N-gon, side point on segment p_N -- M p_1, M = exp(twist X) in SL(3).
// Draws whose spiral has nearly collinear consecutive vertices near the seed are redrawn.
inline Seed random_seed(int N, std::uint64_t rng_seed, double twist) {
  check_n(N);
  Seed s = detail::make_seed(N, rng_seed, twist);
  validate_seed(s);
  return s;
}

// Vertices p_1..p_{N+1} with the arbitrary lift V_0 = p_0.
inline VertexWindow seed_window(const Seed& s, const Tolerances& tol = {}) {
  VertexWindow w;
  w.set(0, p0_of(s, tol));
  for (int k = 1; k <= s.n; ++k) w.set(k, s.p(k));
  return w;
}

inline std::vector<HVec> closed_pentagram_T(const std::vector<HVec>& P, const Tolerances& tol = {}) {
  const int n = static_cast<int>(P.size());
  if (n < 5) throw InvalidSeed("closed pentagram map needs at least 5 points");
  auto at = [&](int i) -> const HVec& { return P[static_cast<std::size_t>(((i % n) + n) % n)]; };
  std::vector<HVec> q;
  for (int i = 0; i < n; ++i)
    q.push_back(detail::at_index(i, [&] { return lift_T(at(i - 1), at(i), at(i + 1), at(i + 2), tol); }));
  return q;
}

// Cross-ratio of the pencil at o through a, b, c, d.
inline double pencil_cross_ratio(const HVec& o, const HVec& a, const HVec& b, const HVec& c, const HVec& d) {
  return triple(o, a, c) * triple(o, b, d) / (triple(o, a, d) * triple(o, b, c));
}

// Per-vertex projective invariants: pencil at p_i through p_{i-2}, p_{i-1}, p_{i+1}, p_{i+2}.
inline std::vector<double> corner_invariants(const std::vector<HVec>& P) {
  const int n = static_cast<int>(P.size());
  auto at = [&](int i) -> const HVec& { return P[static_cast<std::size_t>(((i % n) + n) % n)]; };
  std::vector<double> x;
  for (int i = 0; i < n; ++i) x.push_back(pencil_cross_ratio(at(i), at(i - 2), at(i - 1), at(i + 1), at(i + 2)));
  return x;
}

// H with H src_k ~ dst_k for k = 0..3.
inline Mat3 projective_map_4pt(const std::array<HVec, 4>& src, const std::array<HVec, 4>& dst) {
  auto frame = [](const std::array<HVec, 4>& p) {
    Mat3 B = columns(p[0], p[1], p[2]);
    HVec l = B.partialPivLu().solve(p[3]);
    return Mat3(B * l.asDiagonal());
  };
  return frame(dst) * frame(src).inverse();
}

namespace detail {

inline std::vector<int> relabel(int n, int shift, bool reversed) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (((reversed ? -i : i) + shift) % n + n) % n;
  return s;
}

}  // namespace detail

// Smallest max deviation of corner invariants over cyclic relabelings and reversal.
inline double invariant_defect(const std::vector<HVec>& P, const std::vector<HVec>& Q) {
  if (P.size() != Q.size()) return INFINITY;
  const int n = static_cast<int>(P.size());
  auto x = corner_invariants(P), y = corner_invariants(Q);
  double best = INFINITY;
  for (int r = 0; r < 2; ++r)
    for (int sh = 0; sh < n; ++sh) {
      auto sg = detail::relabel(n, sh, r == 1);
      double m = 0;
      for (int i = 0; i < n; ++i) m = std::max(m, rel_dev(y[static_cast<std::size_t>(sg[static_cast<std::size_t>(i)])], x[static_cast<std::size_t>(i)]));
      best = std::min(best, m);
    }
  return best;
}

// Smallest max deviation after mapping the first four vertices onto Q, over relabelings.
inline double map_defect(const std::vector<HVec>& P, const std::vector<HVec>& Q) {
  if (P.size() != Q.size() || P.size() < 4) return INFINITY;
  const int n = static_cast<int>(P.size());
  double best = INFINITY;
  for (int r = 0; r < 2; ++r)
    for (int sh = 0; sh < n; ++sh) {
      auto sg = detail::relabel(n, sh, r == 1);
      auto q = [&](int i) { return Q[static_cast<std::size_t>(sg[static_cast<std::size_t>(i)])]; };
      Mat3 H = projective_map_4pt({P[0], P[1], P[2], P[3]}, {q(0), q(1), q(2), q(3)});
      double m = 0;
      for (int i = 0; i < n; ++i) {
        HVec a = proj_normalize(H * P[static_cast<std::size_t>(i)]), b = proj_normalize(q(i));
        m = std::max(m, std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff()));
      }
      best = std::min(best, m);
    }
  return best;
}

inline bool projectively_equivalent(const std::vector<HVec>& P, const std::vector<HVec>& Q, double tol = 1e-8) {
  return invariant_defect(P, Q) <= tol && map_defect(P, Q) <= tol;
}

}  // namespace spirallax
