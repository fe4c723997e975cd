#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "errors.hpp"

namespace spirallax {

// Finite Laurent polynomial in mu over doubles. Each coefficient carries the sum of the
// magnitudes of the terms that produced it, so cancellation noise can be told from signal.
class LaurentPoly {
 public:
  struct Term {
    double v = 0;
    double mass = 0;
  };

  LaurentPoly() = default;
  LaurentPoly(double c) {  // NOLINT: constants convert implicitly
    if (c != 0) t_[0] = {c, std::abs(c)};
  }
  static LaurentPoly monomial(double c, int e) {
    LaurentPoly p;
    if (c != 0) p.t_[e] = {c, std::abs(c)};
    return p;
  }

  const std::map<int, Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  double coeff(int e) const {
    auto it = t_.find(e);
    return it == t_.end() ? 0.0 : it->second.v;
  }
  int min_exp() const { return t_.begin()->first; }
  int max_exp() const { return t_.rbegin()->first; }
  double max_abs() const {
    double m = 0;
    for (auto& [e, x] : t_) m = std::max(m, std::abs(x.v));
    return m;
  }

  double eval(double mu) const {
    double s = 0;
    for (auto& [e, x] : t_) s += x.v * std::pow(mu, e);
    return s;
  }
  // sum |v| |mu|^e, the rounding scale of eval
  double eval_scale(double mu) const {
    double s = 0;
    for (auto& [e, x] : t_) s += std::abs(x.v * std::pow(mu, e));
    return s;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (auto& [e, x] : o.t_) {
      auto& y = t_[e];
      y.v += x.v;
      y.mass += x.mass;
    }
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (auto& [e, x] : o.t_) {
      auto& y = t_[e];
      y.v -= x.v;
      y.mass += x.mass;
    }
    return *this;
  }
  LaurentPoly operator-() const {
    LaurentPoly p = *this;
    for (auto& [e, x] : p.t_) x.v = -x.v;
    return p;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly p;
    for (auto& [i, x] : a.t_)
      for (auto& [j, y] : b.t_) {
        auto& z = p.t_[i + j];
        z.v += x.v * y.v;
        z.mass += x.mass * y.mass;
      }
    return p;
  }
  friend LaurentPoly operator*(double s, LaurentPoly a) {
    for (auto& [e, x] : a.t_) {
      x.v *= s;
      x.mass *= std::abs(s);
    }
    return a;
  }

  // Drop |v| <= rel * max|v|, |v| <= noise * mass, and |v| <= cancel * mass when also |v| <= floor * max|v|.
  LaurentPoly& trim(double rel, double cancel, double floor = 1.0, double noise = 0.0) {
    double m = max_abs();
    for (auto it = t_.begin(); it != t_.end();) {
      double a = std::abs(it->second.v);
      if (a == 0 || a <= rel * m || a <= noise * it->second.mass || (a <= cancel * it->second.mass && a <= floor * m))
        it = t_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  // Exact quotient by d; throws if the remainder is not negligible.
  LaurentPoly divided_by(const LaurentPoly& d, double rel, double cancel, double floor = 1.0, double noise = 0.0) const {
    if (d.is_zero()) throw NonDivisible("division by zero polynomial");
    LaurentPoly r = *this;
    r.trim(rel, cancel, floor, noise);
    LaurentPoly q;
    const int dl = d.min_exp(), dh = d.max_exp();
    const Term lead = d.t_.at(dl);
    const double scale = std::max(max_abs(), 1e-300);
    while (!r.is_zero() && r.max_exp() - r.min_exp() >= dh - dl) {
      const int e = r.min_exp();
      const Term top = r.t_.at(e);
      LaurentPoly m;
      m.t_[e - dl] = {top.v / lead.v, top.mass / std::abs(lead.v)};
      q += m;
      r -= m * d;
      r.t_.erase(e);
      for (auto it = r.t_.begin(); it != r.t_.end();) {
        double a = std::abs(it->second.v);
        bool drop = a == 0 || a <= rel * scale || a <= noise * it->second.mass ||
                    (a <= cancel * it->second.mass && a <= floor * scale);
        it = drop ? r.t_.erase(it) : std::next(it);
      }
    }
    if (!r.is_zero())
      throw NonDivisible("remainder of size " + std::to_string(r.max_abs()) + " at mu^" + std::to_string(r.min_exp()));
    return q;
  }

 private:
  std::map<int, Term> t_;
};

using LaurentMat3 = std::array<std::array<LaurentPoly, 3>, 3>;

inline LaurentMat3 operator*(const LaurentMat3& A, const LaurentMat3& B) {
  LaurentMat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) C[i][j] += A[i][k] * B[k][j];
  return C;
}

inline LaurentMat3 laurent_identity() {
  LaurentMat3 I;
  for (int i = 0; i < 3; ++i) I[i][i] = 1.0;
  return I;
}

inline LaurentPoly det(const LaurentMat3& A) {
  return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
         A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
}

inline LaurentPoly trace(const LaurentMat3& A) { return A[0][0] + A[1][1] + A[2][2]; }

// Sum of principal 2x2 minors.
inline LaurentPoly sigma2(const LaurentMat3& A) {
  LaurentPoly s;
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) s += A[i][i] * A[j][j] - A[i][j] * A[j][i];
  return s;
}

inline LaurentMat3 adjugate(const LaurentMat3& A) {
  LaurentMat3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // cofactor of (j, i)
      int r0 = j == 0 ? 1 : 0, r1 = j == 2 ? 1 : 2;
      int c0 = i == 0 ? 1 : 0, c1 = i == 2 ? 1 : 2;
      LaurentPoly m = A[r0][c0] * A[r1][c1] - A[r0][c1] * A[r1][c0];
      R[i][j] = (i + j) % 2 ? -m : m;
    }
  return R;
}

template <class Mat>
inline Mat evaluate(const LaurentMat3& A, double mu) {
  Mat m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = A[i][j].eval(mu);
  return m;
}

// Entrywise |A(mu) - Y| over max(1, evaluation scale of the entry).
template <class Mat>
inline double eval_dev(const LaurentMat3& A, double mu, const Mat& Y) {
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m = std::max(m, std::abs(A[i][j].eval(mu) - Y(i, j)) / std::max(1.0, A[i][j].eval_scale(mu)));
  return m;
}

inline void trim(LaurentMat3& A, double rel, double cancel, double floor = 1.0, double noise = 0.0) {
  for (auto& row : A)
    for (auto& x : row) x.trim(rel, cancel, floor, noise);
}

}  // namespace spirallax
