#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "laurent.hpp"
#include "shiftmap.hpp"

namespace spirallax {

// K_i(mu): c carries mu^0, b carries mu^-1, a carries mu^1.
inline LaurentMat3 K_mu(double c, double b, double a) {
  LaurentMat3 K;
  K[0][2] = c;
  K[1][0] = 1.0;
  K[1][2] = LaurentPoly::monomial(b, -1);
  K[2][1] = 1.0;
  K[2][2] = LaurentPoly::monomial(a, 1);
  return K;
}

inline LaurentMat3 K_mu(int i, const InvariantTable& t) {
  if (!t.has(i)) throw IndexOutOfRange("K_mu", i);
  return K_mu(t.c.at(i), t.b.at(i), t.a.at(i));
}

// Gauge matrix A_i with its entries graded by their scaling degree.
inline LaurentMat3 gauge_A_mu(int i, const InvariantTable& t) {
  const int k = i - 1;
  for (int j = k - 1; j <= k + 1; ++j)
    if (!t.has(j)) throw IndexOutOfRange("gauge_A_mu", i);
  auto stub = [&](int j) {
    LaurentMat3 v;
    v[0][0] = t.c.at(j);
    v[2][0] = LaurentPoly::monomial(t.a.at(j), 1);
    return v;
  };
  auto scale = [](double s, LaurentMat3 v) {
    for (auto& row : v)
      for (auto& x : row) x = s * x;
    return v;
  };
  LaurentMat3 c0 = scale(t.d.at(k - 1), stub(k - 1));
  LaurentMat3 c1 = scale(t.d.at(k), K_mu(k - 1, t) * stub(k));
  LaurentMat3 c2 = scale(t.d.at(k + 1), K_mu(k - 1, t) * K_mu(k, t) * stub(k + 1));
  LaurentMat3 G;
  for (int r = 0; r < 3; ++r) {
    G[r][0] = c0[r][0];
    G[r][1] = c1[r][0];
    G[r][2] = c2[r][0];
  }
  return G;
}

inline Mat3 R_mat(int i, const AlphaBeta& ab, int N) {
  if (i < 0 || i > N) throw IndexOutOfRange("R_mat", i);
  ExpSchedule sched{N};
  Mat3 R = Mat3::Zero();
  for (int k = 0; k < 3; ++k) {
    auto [r, s] = sched(i + k);
    R(k, k) = ab.pow(r, s);
  }
  return R;
}

// M(mu) = K_0(mu) ... K_N(mu) A_1(mu)^{-1} K_{-1}(mu)
inline LaurentMat3 monodromy_mu(const Coords& c, const DerivedInv& D, const Tolerances& tol = {}) {
  auto t = formula_table(c, D);
  LaurentMat3 A1 = gauge_A_mu(1, t);
  LaurentPoly dA = det(A1);
  dA.trim(tol.trim, tol.cancel, tol.floor, tol.noise);
  LaurentMat3 P = laurent_identity();
  for (int i = 0; i <= c.n; ++i) P = P * K_mu(i, t);
  P = P * adjugate(A1) * K_mu(-1, t);
  for (auto& row : P)
    for (auto& x : row) {
      x = x.divided_by(dA, tol.trim, tol.cancel, tol.floor, tol.noise);
      x.trim(tol.trim, tol.cancel, tol.floor, tol.noise);
    }
  return P;
}

inline LaurentMat3 monodromy_mu(const Coords& c, const Tolerances& tol = {}) { return monodromy_mu(c, derive(c), tol); }

// det M(mu) as det K_0 ... det K_N det K_{-1} / det A_1(mu), all in the Laurent ring.
inline LaurentPoly monodromy_det_mu(const Coords& c, const DerivedInv& D, const Tolerances& tol = {}) {
  auto t = formula_table(c, D);
  LaurentPoly dA = det(gauge_A_mu(1, t));
  dA.trim(tol.trim, tol.cancel, tol.floor, tol.noise);
  LaurentPoly p = det(K_mu(-1, t));
  for (int i = 0; i <= c.n; ++i) p = p * det(K_mu(i, t));
  p.trim(tol.trim, tol.cancel, tol.floor, tol.noise);
  return p.divided_by(dA, tol.trim, tol.cancel, tol.floor, tol.noise).trim(tol.trim, tol.cancel, tol.floor, tol.noise);
}

// Coefficients of det(M(mu) - r I), keyed by (r_pow, mu_pow).
struct SpectralTable {
  std::map<std::pair<int, int>, double> entries;

  double at(int mu_pow, int r_pow) const {
    auto it = entries.find({r_pow, mu_pow});
    return it == entries.end() ? 0.0 : it->second;
  }
  std::set<std::pair<int, int>> support() const {
    std::set<std::pair<int, int>> s;
    for (auto& [k, v] : entries) s.insert(k);
    return s;
  }
  std::vector<int> mu_support(int r_pow) const {
    std::vector<int> s;
    for (auto& [k, v] : entries)
      if (k.first == r_pow) s.push_back(k.second);
    return s;
  }
  double block_max(int r_pow) const {
    double m = 0;
    for (auto& [k, v] : entries)
      if (k.first == r_pow) m = std::max(m, std::abs(v));
    return m;
  }
};

// -r^3 + tr r^2 - sigma_2 r + det; det_M is the constant block when known independently.
inline SpectralTable spectral_table(const LaurentMat3& M, const Tolerances& tol = {},
                                    const LaurentPoly* det_M = nullptr) {
  SpectralTable T;
  auto put = [&](int k, LaurentPoly p, double sign) {
    p.trim(tol.trim, tol.cancel, tol.floor, tol.noise);
    for (auto& [e, x] : p.terms()) T.entries[{k, e}] = sign * x.v;
  };
  put(0, det_M ? *det_M : det(M), 1);
  put(1, sigma2(M), -1);
  put(2, trace(M), 1);
  T.entries[{3, 0}] = -1;
  return T;
}

inline SpectralTable spectral_table(const Coords& c, const Tolerances& tol = {}) {
  auto D = derive(c);
  auto d = monodromy_det_mu(c, D, tol);
  return spectral_table(monodromy_mu(c, D, tol), tol, &d);
}

// Max per-entry deviation normalized by the largest coefficient of the same r-degree.
inline double table_dev(const SpectralTable& x, const SpectralTable& y) {
  double m = 0;
  std::set<std::pair<int, int>> keys = x.support();
  for (auto& k : y.support()) keys.insert(k);
  for (auto& k : keys) {
    double s = std::max({x.block_max(k.first), y.block_max(k.first), 1e-300});
    m = std::max(m, std::abs(x.at(k.second, k.first) - y.at(k.second, k.first)) / s);
  }
  return m;
}

inline bool trace_single_residue(const SpectralTable& t) {
  auto s = t.mu_support(2);
  for (int e : s)
    if (((e - s.front()) % 3 + 3) % 3 != 0) return false;
  return true;
}

inline CheckReport verify_spectral_invariance(const Coords& c, int steps, const Tolerances& tol = {}) {
  CheckReport r{"spectral_invariance", 0, true, ""};
  auto T0 = spectral_table(c, tol);
  if (!trace_single_residue(T0)) {
    r.pass = false;
    r.detail = "trace support spans several residues mod 3";
  }
  Coords x = c;
  for (int k = 1; k <= steps; ++k) {
    x = shift_coords(x);
    auto Tk = spectral_table(x, tol);
    double d = table_dev(T0, Tk);
    r.max_dev = std::max(r.max_dev, d);
    if (Tk.support() != T0.support() && r.pass) {
      r.pass = false;
      r.detail = "support changed at step " + std::to_string(k);
    }
    if (d > tol.spec && r.pass) {
      r.pass = false;
      r.detail = "coefficients drift at step " + std::to_string(k);
    }
  }
  return r;
}

struct LaxReport {
  CheckReport report{"lax_compatibility", 0, true, ""};
  std::vector<double> mu;
  std::vector<std::vector<double>> profile;  // [mu][i] residual
};

// S(K_i)(mu) against R_i^{-1} K_{i+1}(mu) R_{i+1} = N_i^{-1} K_i N_{i+1}, i = 0..N-1.
inline LaxReport verify_lax(const Coords& c, const std::vector<double>& mus, const Tolerances& tol = {}) {
  LaxReport L;
  const int N = c.n;
  auto D = derive(c);
  auto ab = alpha_beta(c, D);
  auto t = formula_table(c, D);
  auto s = shift_coords(c);
  for (double mu : mus) {
    std::vector<double> prof;
    for (int i = 0; i < N; ++i) {
      Mat3 lhs = evaluate<Mat3>(K_mu(1.0, s.b[static_cast<std::size_t>(i)], s.a[static_cast<std::size_t>(i)]), mu);
      Mat3 rhs = R_mat(i, ab, N).inverse() * evaluate<Mat3>(K_mu(i + 1, t), mu) * R_mat(i + 1, ab, N);
      double dv = rel_dev(lhs, rhs);
      prof.push_back(dv);
      if (dv > L.report.max_dev) {
        L.report.max_dev = dv;
        L.report.detail = "worst at i=" + std::to_string(i) + " mu=" + std::to_string(mu);
      }
    }
    L.mu.push_back(mu);
    L.profile.push_back(prof);
  }
  L.report.pass = L.report.max_dev <= tol.shift;
  return L;
}

// Osborne diagonal balancing; a similarity, so the spectrum is unchanged.
inline Mat3 balanced(Mat3 B) {
  for (int sweep = 0; sweep < 50; ++sweep) {
    bool done = true;
    for (int i = 0; i < 3; ++i) {
      double c = 0, r = 0;
      for (int j = 0; j < 3; ++j)
        if (j != i) c += std::abs(B(j, i)), r += std::abs(B(i, j));
      if (c == 0 || r == 0) continue;
      double f = std::sqrt(r / c);
      if (std::abs(f - 1) > 1e-3) done = false;
      B.col(i) *= f;
      B.row(i) /= f;
    }
    if (done) break;
  }
  return B;
}

// Eigenvalues sorted by modulus, then argument.
inline std::vector<std::complex<double>> sorted_eigenvalues(const Mat3& M) {
  Eigen::EigenSolver<Mat3> es(balanced(M), false);
  std::vector<std::complex<double>> ev;
  for (int k = 0; k < 3; ++k) ev.push_back(es.eigenvalues()(k));
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) {
    if (std::abs(std::abs(x) - std::abs(y)) > 1e-9 * std::max(1.0, std::abs(x))) return std::abs(x) < std::abs(y);
    return std::arg(x) < std::arg(y);
  });
  return ev;
}

// Deviation scaled by max(1, norm of the balanced matrices), the backward error scale of the eigensolver.
inline double eigen_dev(const Mat3& X, const Mat3& Y) {
  auto a = sorted_eigenvalues(X), b = sorted_eigenvalues(Y);
  double scale = std::max({1.0, balanced(X).norm(), balanced(Y).norm()});
  double m = 0;
  for (std::size_t k = 0; k < 3; ++k) m = std::max(m, std::abs(a[k] - b[k]) / scale);
  return m;
}

inline CheckReport verify_eigenvalue_invariance(const Coords& c, const std::vector<double>& mus, int steps,
                                                const Tolerances& tol = {}) {
  CheckReport r{"eigenvalue_invariance", 0, true, ""};
  auto M0 = monodromy_mu(c, tol);
  Coords x = c;
  for (int k = 1; k <= steps; ++k) {
    x = shift_coords(x);
    auto Mk = monodromy_mu(x, tol);
    for (double mu : mus) r.max_dev = std::max(r.max_dev, eigen_dev(evaluate<Mat3>(Mk, mu), evaluate<Mat3>(M0, mu)));
  }
  r.pass = r.max_dev <= tol.spec;
  return r;
}

// M built from scale_nu(c) at mu against M built from c at nu*mu.
inline CheckReport verify_scaling_consistency(const Coords& c, double nu, const std::vector<double>& mus,
                                              const Tolerances& tol = {}) {
  CheckReport r{"mu_grading", 0, true, "nu=" + std::to_string(nu)};
  auto M = monodromy_mu(c, tol);
  auto Ms = monodromy_mu(scaling_action(c, nu), tol);
  for (double mu : mus) r.max_dev = std::max(r.max_dev, rel_dev(evaluate<Mat3>(Ms, mu), evaluate<Mat3>(M, nu * mu)));
  r.pass = r.max_dev <= tol.spec;
  return r;
}

// Closed forms of five N = 5 spectral coefficients, as they appear in det(M(mu) + r I).
struct PentagonInvariants {
  double I1, I3, I5, I6, I7;
};

inline PentagonInvariants pentagon_invariants(const Coords& c) {
  if (c.n != 5) throw InvalidN(c.n);
  const auto& a = c.a;
  const auto& b = c.b;
  const double c5 = c.cN;
  auto A = [&](int i) { return 1 + a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i - 1)]; };
  const double A1 = A(1), A2 = A(2), A3 = A(3), A4 = A(4);
  PentagonInvariants I{};
  I.I7 = a[1] * a[2] * a[3] * a[4];
  I.I1 = b[0] * b[1] * b[2] * b[3] * b[4] / (a[4] * a[3] * a[0] * A1 * A1 * A2) * (A1 * A2 - c5) * (a[4] * c5 - a[0] * A1);
  I.I5 = (a[1] * a[3] * A1 * A1 + c5 * c5 * a[4] * a[2]) / (A1 * c5);
  I.I3 = (b[1] * A4 + b[4] * (A2 + a[0] * b[2])) / a[0] - c5 * (b[0] + b[3] * A1) / (A1 * a[3]) -
         A1 / (c5 * a[4]) * (b[1] + b[4] * A2) + c5 * c5 / (A1 * A1 * A2 * a[3]) * (b[3] * A1 + b[0] * A3);
  I.I6 = (a[0] * a[2] * c5 * c5 + a[4] * A1 * A2 * (a[3] * A2 + a[0] * (1 + a[1] * b[3] + a[3] * b[2])) +
          A1 * A2 * a[0] * a[1] * (1 + a[2] * b[4])) /
         (A1 * A2 * a[0]);
  return I;
}

}  // namespace spirallax
