#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <spirallax/spirallax.hpp>

namespace testkit {

using namespace spirallax;

inline constexpr int valid_ns[] = {5, 6, 8, 9};

// Seeds for instance k of size N, twist drawn in [0.02, 0.3].
inline Seed instance(int N, int k, double twist = -1) {
  std::mt19937_64 g(static_cast<std::uint64_t>(7919 * N + k));
  if (twist < 0) twist = std::uniform_real_distribution<double>(0.02, 0.3)(g);
  return random_seed(N, g(), twist);
}

inline Mat3 random_sl3(std::mt19937_64& g, double spread = 0.4) {
  std::normal_distribution<double> nd(0, spread);
  for (;;) {
    Mat3 X = Mat3::Identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) X(i, j) += nd(g);
    double d = X.determinant();
    if (std::abs(d) > 0.2) return X / std::cbrt(d);
  }
}

// Convex n-gon: random angles on an ellipse with a minimum gap, then an affine map.
inline std::vector<HVec> random_convex_polygon(int n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> th;
  for (;;) {
    th.clear();
    for (int i = 0; i < n; ++i) th.push_back(2 * std::numbers::pi * u(g));
    std::sort(th.begin(), th.end());
    double gap = 2 * std::numbers::pi - th.back() + th.front();
    for (int i = 0; i + 1 < n; ++i) gap = std::min(gap, th[static_cast<std::size_t>(i + 1)] - th[static_cast<std::size_t>(i)]);
    if (gap > 0.25) break;
  }
  double ax = 0.5 + u(g), by = 0.5 + u(g), sh = u(g) - 0.5, tx = u(g), ty = u(g);
  std::vector<HVec> P;
  for (double t : th) {
    double x = ax * std::cos(t), y = by * std::sin(t);
    P.emplace_back(x + sh * y + tx, y + ty, 1.0);
  }
  return P;
}

// Coefficients of V_{i+3} in the basis V_i, V_{i+1}, V_{i+2}, by a QR solve.
inline HVec recurrence_by_solve(const LiftedSpiral& ls, int i) {
  Mat3 B = columns(ls[i], ls[i + 1], ls[i + 2]);
  return B.colPivHouseholderQr().solve(ls[i + 3]);  // (c, b, a)
}

inline double max_rel(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, rel_dev(x[k], y[k]));
  return m;
}

}  // namespace testkit
