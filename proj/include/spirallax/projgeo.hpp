#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace spirallax {

using HVec = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Tolerances {
  double lin = 1e-10;     // algebraic identities, relative
  double proj = 1e-8;     // projective equality
  double deg = 1e-12;     // degeneracy, relative to input scale
  double lift = 1e-8;     // unit-determinant residuals
  double shift = 1e-7;    // closed-form vs geometric shift
  double spec = 1e-6;     // spectral coefficients, relative per r-degree
  double trim = 1e-13;    // Laurent coefficient pruning, relative to max
  double cancel = 1e-15;  // Laurent pruning relative to accumulated magnitude
  double floor = 1e-8;    // ...applied only below this fraction of the max
  double noise = 1e-19;   // Laurent pruning relative to accumulated magnitude, at any size
};

inline HVec cross(const HVec& u, const HVec& v) { return u.cross(v); }

inline double triple(const HVec& u, const HVec& v, const HVec& w) { return u.dot(v.cross(w)); }

// (a x b) x (c x d): the meet of line ab and line cd.
inline HVec meet_of_joins(const HVec& a, const HVec& b, const HVec& c, const HVec& d,
                          const Tolerances& tol = {}) {
  HVec l1 = a.cross(b), l2 = c.cross(d);
  HVec p = l1.cross(l2);
  double scale = a.norm() * b.norm() * c.norm() * d.norm();
  if (!(p.norm() > tol.deg * scale)) throw DegenerateConfiguration("lines do not meet in a unique point");
  return p;
}

inline double det(const Mat3& m) { return m.determinant(); }

inline HVec apply(const Mat3& m, const HVec& v) { return m * v; }

// |det| over the product of column norms; 0 for dependent columns, 1 for orthogonal ones.
inline double hadamard_ratio(const Mat3& m) {
  double p = m.col(0).norm() * m.col(1).norm() * m.col(2).norm();
  return p > 0 ? std::abs(m.determinant()) / p : 0.0;
}

// Hadamard ratio after alternately scaling rows and columns to unit norm; blind to diagonal scalings.
inline double equilibrated_ratio(Mat3 m) {
  for (int it = 0; it < 8; ++it) {
    for (int i = 0; i < 3; ++i) {
      double r = m.row(i).norm();
      if (!(r > 0) || !std::isfinite(r)) return 0.0;
      m.row(i) /= r;
    }
    for (int j = 0; j < 3; ++j) {
      double c = m.col(j).norm();
      if (!(c > 0)) return 0.0;
      m.col(j) /= c;
    }
  }
  return hadamard_ratio(m);
}

inline Mat3 inverse(const Mat3& m, const Tolerances& tol = {}) {
  if (!(equilibrated_ratio(m) > tol.deg)) throw SingularMatrix("determinant vanishes");
  return m.inverse();
}

// Rescale by the real cube root of 1/det.
inline Mat3 normalize_to_sl3(const Mat3& m, const Tolerances& tol = {}) {
  if (!(equilibrated_ratio(m) > tol.deg)) throw SingularMatrix("cannot normalize to det 1");
  return m / std::cbrt(m.determinant());
}

inline Mat3 columns(const HVec& u, const HVec& v, const HVec& w) {
  Mat3 m;
  m << u, v, w;
  return m;
}

// Unit Euclidean norm, first nonzero component positive.
inline HVec proj_normalize(const HVec& v) {
  double n = v.norm();
  if (n == 0) return v;
  HVec u = v / n;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(u[k]) > 1e-14) {
      if (u[k] < 0) u = -u;
      break;
    }
  }
  return u;
}

inline bool projectively_equal(const HVec& u, const HVec& v, const Tolerances& tol = {}) {
  HVec a = proj_normalize(u), b = proj_normalize(v);
  return (a - b).cwiseAbs().maxCoeff() <= tol.proj || (a + b).cwiseAbs().maxCoeff() <= tol.proj;
}

// Scalar f minimizing |u - f v|.
inline double proportionality(const HVec& u, const HVec& v) { return u.dot(v) / v.dot(v); }

// |x - y| / max(1, |y|)
inline double rel_dev(double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }

inline double rel_dev(const Mat3& x, const Mat3& y) {
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, rel_dev(x(i, j), y(i, j)));
  return m;
}

}  // namespace spirallax
