#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace vep {

struct Tensor3;

/// Symmetric 3x3 tensor stored as six independent components.
///
/// The contraction `a.dot(b)` weights the off-diagonal entries by 2, so it
/// equals the full 3x3 Frobenius contraction a:b without storing redundant
/// entries.
struct SymTensor3 {
  double xx = 0.0, yy = 0.0, zz = 0.0;
  double xy = 0.0, xz = 0.0, yz = 0.0;

  static SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static SymTensor3 diag(double a, double b, double c) {
    return {a, b, c, 0.0, 0.0, 0.0};
  }

  double trace() const { return xx + yy + zz; }

  SymTensor3 sph() const {
    const double t = trace() / 3.0;
    return {t, t, t, 0.0, 0.0, 0.0};
  }

  SymTensor3 dev() const {
    const double t = trace() / 3.0;
    return {xx - t, yy - t, zz - t, xy, xz, yz};
  }

  double dot(const SymTensor3& o) const {
    return xx * o.xx + yy * o.yy + zz * o.zz +
           2.0 * (xy * o.xy + xz * o.xz + yz * o.yz);
  }

  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  SymTensor3& operator+=(const SymTensor3& o) {
    xx += o.xx; yy += o.yy; zz += o.zz;
    xy += o.xy; xz += o.xz; yz += o.yz;
    return *this;
  }
  SymTensor3& operator-=(const SymTensor3& o) {
    xx -= o.xx; yy -= o.yy; zz -= o.zz;
    xy -= o.xy; xz -= o.xz; yz -= o.yz;
    return *this;
  }
  SymTensor3& operator*=(double s) {
    xx *= s; yy *= s; zz *= s;
    xy *= s; xz *= s; yz *= s;
    return *this;
  }

  friend SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
  friend SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
  friend SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }
  friend SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
  friend SymTensor3 operator-(SymTensor3 a) { return a *= -1.0; }

  Tensor3 full() const;
};

/// General 3x3 tensor (velocity gradients, spins).
struct Tensor3 {
  // m[i][j] = component (row i, column j)
  std::array<std::array<double, 3>, 3> m{};

  static Tensor3 zero() { return Tensor3{}; }
  static Tensor3 identity() {
    Tensor3 t;
    t.m[0][0] = t.m[1][1] = t.m[2][2] = 1.0;
    return t;
  }

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  double trace() const { return m[0][0] + m[1][1] + m[2][2]; }

  double dot(const Tensor3& o) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += m[i][j] * o.m[i][j];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Tensor3 transpose() const {
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
    return t;
  }

  Tensor3& operator+=(const Tensor3& o) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] -= o.m[i][j];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] *= s;
    return *this;
  }
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
};

Tensor3 matmul(const Tensor3& a, const Tensor3& b);

struct Decomposition {
  SymTensor3 sph;
  SymTensor3 dev;
  double trace;
};

/// Spherical/deviatoric split: sph = (tr A / 3) I, dev = A - sph.
Decomposition decompose(const SymTensor3& a);

struct SymSkewSplit {
  SymTensor3 sym;
  Tensor3 skew;
};

/// G = sym(G) + skew(G), exact in exact arithmetic.
SymSkewSplit sym_skew(const Tensor3& g);

/// Spin commutator E W - W E of the objective strain rate.
///
/// Requires W skew-symmetric (checked); the result is symmetric and
/// trace-free.
SymTensor3 jaumann_bracket(const SymTensor3& e, const Tensor3& w, double skew_tol = 1e-12);

}  // namespace vep
