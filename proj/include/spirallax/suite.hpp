#pragma once

#include <random>
#include <string>
#include <vector>

#include "laxspec.hpp"

namespace spirallax {

struct SuiteOptions {
  Tolerances tol;
  std::vector<double> mu_samples{-1, 0.5, 1, 2};
  std::vector<double> scale_samples{0.3, 1, 2.5};
  std::uint64_t rescale_seed = 7;
};

namespace detail {

inline CheckReport report(std::string name, double dev, double tol, std::string detail = "") {
  return {std::move(name), dev, dev <= tol, std::move(detail)};
}

}  // namespace detail

// Max componentwise deviation between two canonical lifts after arbitrary per-vertex rescaling of the input.
inline double lift_uniqueness_dev(const Seed& s, std::uint64_t rng_seed, const Tolerances& tol = {}) {
  auto ref = canonical_lift(s, tol);
  auto w = seed_window(s, tol);
  std::mt19937_64 gen(rng_seed);
  std::uniform_real_distribution<double> mag(0.25, 4.0);
  std::bernoulli_distribution flip(0.5);
  std::vector<HVec> core;
  for (int k = 0; k <= s.n; ++k) core.push_back((flip(gen) ? -1.0 : 1.0) * mag(gen) * w.at(k));
  auto again = canonical_lift_from(s, core, tol);
  double m = 0;
  for (auto& [i, v] : ref.V.v)
    for (int k = 0; k < 3; ++k) m = std::max(m, rel_dev(again[i][k], v[k]));
  return m;
}

// Formula against geometry for the boundary invariants, and the closed identities among them.
inline std::vector<CheckReport> coordinate_checks(const LiftedSpiral& ls, const Tolerances& tol = {}) {
  const int N = ls.n;
  auto g = extract_table(ls, -1, N + 1);
  auto c = coords_of(g);
  auto D = derive(c);
  double ident = std::max({rel_dev(g.a.at(N), c.a[1]), rel_dev(g.c.at(-1), c.a[N - 1] / c.a[0]),
                           rel_dev(D.A[0] * D.A[1] / c.cN, D.c_m1),
                           rel_dev(g.c.at(N + 1), c.cN / (c.cN + D.b_N * c.a[static_cast<std::size_t>(N - 2)])),
                           rel_residual(c, D)});
  double geo = std::max({rel_dev(D.a_m1, g.a.at(-1)), rel_dev(D.b_m1, g.b.at(-1)), rel_dev(D.b_N, g.b.at(N)),
                         rel_dev(D.c_N1, g.c.at(N + 1)), rel_dev(D.c_m1, g.c.at(-1))});
  return {detail::report("coordinate_identities", ident, 1e-8),
          detail::report("boundary_formulas_vs_geometry", geo, tol.shift)};
}

// K_{N+i} = A_i^{-1} K_{i-2} A_{i+1}, i = 1..4; K_{-i} = B_{-i}^{-1} K_{N-i-1} B_{-i+1}, i = 4..N; (Kn).
inline std::vector<CheckReport> gauge_checks(const LiftedSpiral& ls0, const Tolerances& tol = {}) {
  const int N = ls0.n;
  auto ls = ls0.extended(-N, N + 7, tol);
  auto g = extract_table(ls, -N, N + 4);
  double fwd = 0;
  for (int i = 1; i <= 4; ++i)
    fwd = std::max(fwd, rel_dev(Mat3(inverse(gauge_A(i, g)) * g.K(i - 2) * gauge_A(i + 1, g)), g.K(N + i)));
  double bwd = 0;
  for (int i = 4; i <= N; ++i)
    bwd = std::max(bwd, rel_dev(Mat3(inverse(gauge_B(i, g)) * g.K(N - i - 1) * gauge_B(i - 1, g)), g.K(-i)));
  auto c = coords_of(g);
  auto D = derive(c);
  auto f = formula_table(c, D);
  Mat3 kn = inverse(gauge_A(1, f)) * f.K(-1) * gauge_A(2, f);
  Mat3 want = companion(D.c_m1 * D.A[2] / D.A[0], D.b_m1 * D.A[2] / D.A[0], c.a[2]);
  double knd = std::max({rel_dev(kn, want), rel_dev(kn, g.K(N + 1)),
                         rel_dev(gauge_A(1, f).determinant() / D.c_m1, c.cN)});
  return {detail::report("gauge_forward", fwd, tol.shift), detail::report("gauge_backward", bwd, tol.shift),
          detail::report("gauge_Kn", knd, tol.shift)};
}

inline std::vector<CheckReport> run_suite(const Seed& s, const SuiteOptions& o = {}) {
  const Tolerances& tol = o.tol;
  std::vector<CheckReport> out;
  auto ls = canonical_lift(s, tol);
  out.push_back(detail::report("lift_unit_determinants", lift_residual(ls), std::min(tol.lift, 1e-9)));
  out.push_back(detail::report("lift_uniqueness", lift_uniqueness_dev(s, o.rescale_seed, tol), tol.lift));
  for (auto& r : coordinate_checks(ls, tol)) out.push_back(r);
  for (auto& r : gauge_checks(ls, tol)) out.push_back(r);

  auto c = extract_coords(ls, tol);
  auto D = derive(c);
  auto ab = alpha_beta(c, D);
  auto res = alpha_beta_residuals(c, D, ab);
  out.push_back(detail::report("alpha_beta_equations", std::max(res[0], res[1]), 1e-12));
  out.push_back(verify_commutation(s, tol));
  out.push_back(verify_lift_ratios(s, tol));
  out.push_back(detail::report("tbar_failure_factor",
                               std::abs(tbar_failure_factor(ls, tol) / tbar_failure_predicted(ab) - 1), tol.shift));

  double eq = 0, abd = 0;
  for (double mu : o.scale_samples) {
    eq = std::max(eq, verify_equivariance(c, mu, tol).max_dev);
    auto sab = alpha_beta(scaling_action(c, mu));
    abd = std::max({abd, std::abs(sab.alpha / ab.alpha - 1), std::abs(sab.beta / ab.beta - 1)});
  }
  out.push_back(detail::report("scaling_equivariance", eq, tol.shift));
  out.push_back(detail::report("alpha_beta_scaling_invariance", abd, 1e-10));

  out.push_back(verify_lax(c, o.mu_samples, tol).report);

  auto M = monodromy_mu(c, D, tol);
  Mat3 rho0 = columns(ls[0], ls[1], ls[2]);
  out.push_back(detail::report("monodromy_at_one", eval_dev(M, 1.0, Mat3(rho0.inverse() * ls.M * rho0)), tol.spec));
  out.push_back(detail::report("monodromy_det", std::abs(monodromy_representative(c, D).determinant() - 1), tol.spec));
  out.push_back(verify_scaling_consistency(c, 2.5, o.mu_samples, tol));
  out.push_back(verify_spectral_invariance(c, c.n + 2, tol));
  out.push_back(verify_eigenvalue_invariance(c, {0.5, 1, 2}, c.n + 2, tol));

  Coords rt = extract_coords(canonical_lift(seed_from_coords(c, tol), tol), tol);
  out.push_back(detail::report("coords_round_trip", coords_dev(rt, c), tol.shift));
  return out;
}

}  // namespace spirallax
