#pragma once

#include <array>

#include "vep/field.hpp"
#include "vep/mesh.hpp"
#include "vep/tensor.hpp"

namespace vep {

/// 2x2 Gauss data on the reference cell of a uniform grid.  Q1 basis values
/// and physical-space derivatives are identical for every cell, so they are
/// precomputed once.
///
/// With bilinear fields, this rule integrates products up to bi-cubic
/// exactly; the discrete energy-transport and convection identities the
/// scheme relies on hold to roundoff because of that exactness.
struct GaussRule {
  static constexpr int npts = 4;
  std::array<std::array<double, 4>, npts> N;     // basis values
  std::array<std::array<double, 4>, npts> dNdx;  // physical x-derivatives
  std::array<std::array<double, 4>, npts> dNdy;
  std::array<double, npts> ox, oy;  // gauss offsets within a cell
  double weight = 0.0;              // physical weight per point

  static GaussRule make(const Mesh& m);
};

struct Vec2 {
  double x = 0.0, y = 0.0;
};

/// Values of a velocity field at one quadrature point.
struct VelocityPointValues {
  Vec2 v;
  Tensor3 grad;  // grad(i,j) = d_j v_i, third row/column zero
  double div = 0.0;
  SymTensor3 sym;  // D(v)
  Tensor3 skew;    // W(v)
};

/// Values of a symmetric-tensor field at one quadrature point.
struct TensorPointValues {
  SymTensor3 val;
  SymTensor3 gx, gy;  // componentwise spatial derivatives
};

inline VelocityPointValues eval_velocity(const GaussRule& q, int g,
                                         const std::array<int, 4>& nodes,
                                         const VectorField& f) {
  VelocityPointValues out;
  double dxvx = 0, dyvx = 0, dxvy = 0, dyvy = 0;
  for (int k = 0; k < 4; ++k) {
    const double vx = f.vx(nodes[k]);
    const double vy = f.vy(nodes[k]);
    out.v.x += q.N[g][k] * vx;
    out.v.y += q.N[g][k] * vy;
    dxvx += q.dNdx[g][k] * vx;
    dyvx += q.dNdy[g][k] * vx;
    dxvy += q.dNdx[g][k] * vy;
    dyvy += q.dNdy[g][k] * vy;
  }
  out.grad(0, 0) = dxvx;
  out.grad(0, 1) = dyvx;
  out.grad(1, 0) = dxvy;
  out.grad(1, 1) = dyvy;
  out.div = dxvx + dyvy;
  out.sym.xx = dxvx;
  out.sym.yy = dyvy;
  out.sym.xy = 0.5 * (dyvx + dxvy);
  out.skew(0, 1) = 0.5 * (dyvx - dxvy);
  out.skew(1, 0) = -out.skew(0, 1);
  return out;
}

inline TensorPointValues eval_tensor(const GaussRule& q, int g,
                                     const std::array<int, 4>& nodes,
                                     const TensorField& f) {
  TensorPointValues out;
  for (int k = 0; k < 4; ++k) {
    const SymTensor3 s = f.node(nodes[k]);
    out.val += q.N[g][k] * s;
    out.gx += q.dNdx[g][k] * s;
    out.gy += q.dNdy[g][k] * s;
  }
  return out;
}

inline Vec2 eval_vec2(const GaussRule& q, int g, const std::array<int, 4>& nodes,
                      const VectorField& f) {
  Vec2 v;
  for (int k = 0; k < 4; ++k) {
    v.x += q.N[g][k] * f.vx(nodes[k]);
    v.y += q.N[g][k] * f.vy(nodes[k]);
  }
  return v;
}

/// Newtonian stress S(v) = 2 mu1 dev D + 3 mu2 sph D from the symmetric
/// gradient.
inline SymTensor3 newtonian_stress(const SymTensor3& d, double mu1, double mu2) {
  const auto dc = decompose(d);
  return 2.0 * mu1 * dc.dev + 3.0 * mu2 * dc.sph;
}

}  // namespace vep
