#include "vep/tensor.hpp"

namespace vep {

Tensor3 SymTensor3::full() const {
  Tensor3 t;
  t.m[0][0] = xx; t.m[0][1] = xy; t.m[0][2] = xz;
  t.m[1][0] = xy; t.m[1][1] = yy; t.m[1][2] = yz;
  t.m[2][0] = xz; t.m[2][1] = yz; t.m[2][2] = zz;
  return t;
}

Tensor3 matmul(const Tensor3& a, const Tensor3& b) {
  Tensor3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
      c.m[i][j] = s;
    }
  return c;
}

Decomposition decompose(const SymTensor3& a) {
  Decomposition d;
  d.sph = a.sph();
  d.dev = a - d.sph;
  d.trace = a.trace();
  return d;
}

SymSkewSplit sym_skew(const Tensor3& g) {
  SymSkewSplit s;
  s.sym.xx = g(0, 0);
  s.sym.yy = g(1, 1);
  s.sym.zz = g(2, 2);
  s.sym.xy = 0.5 * (g(0, 1) + g(1, 0));
  s.sym.xz = 0.5 * (g(0, 2) + g(2, 0));
  s.sym.yz = 0.5 * (g(1, 2) + g(2, 1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.skew.m[i][j] = 0.5 * (g(i, j) - g(j, i));
  return s;
}

SymTensor3 jaumann_bracket(const SymTensor3& e, const Tensor3& w, double skew_tol) {
  const Tensor3 wt = w.transpose();
  double drift = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) drift = std::max(drift, std::abs(w(i, j) + wt(i, j)));
  if (drift > skew_tol * (1.0 + w.norm()))
    throw std::invalid_argument("jaumann_bracket: spin tensor is not skew-symmetric");

  // c = E W - W E; symmetric because (E W)^T = -W E for symmetric E, skew W.
  const Tensor3 ef = e.full();
  const Tensor3 ew = matmul(ef, w);
  SymTensor3 c;
  c.xx = 2.0 * ew(0, 0);
  c.yy = 2.0 * ew(1, 1);
  c.zz = 2.0 * ew(2, 2);
  c.xy = ew(0, 1) + ew(1, 0);
  c.xz = ew(0, 2) + ew(2, 0);
  c.yz = ew(1, 2) + ew(2, 1);
  return c;
}

}  // namespace vep
