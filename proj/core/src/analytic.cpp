#include "vep/analytic.hpp"

#include <cmath>

namespace vep {

VectorField interpolate(const Mesh& mesh, const AnalyticVelocity& f) {
  VectorField out(mesh);
  if (f.empty()) return out;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Vec2 v = f.value(mesh.node_x(i), mesh.node_y(i));
    out.vx(i) = v.x;
    out.vy(i) = v.y;
  }
  return out;
}

TensorField interpolate(const Mesh& mesh, const AnalyticTensor& f) {
  TensorField out(mesh);
  if (f.empty()) return out;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    out.set_node(i, f.value(mesh.node_x(i), mesh.node_y(i)));
  return out;
}

SampledNorms sample_norms(const Mesh& mesh, const AnalyticVelocity* psi,
                          const AnalyticTensor* Psi, double safety) {
  SampledNorms n;
  const int rx = 4 * mesh.nx(), ry = 4 * mesh.ny();
  auto visit = [&](double x, double y) {
    if (psi != nullptr && !psi->empty()) {
      const Vec2 v = psi->value(x, y);
      n.psi_inf = std::max(n.psi_inf, std::sqrt(v.x * v.x + v.y * v.y));
      const auto g = psi->grad(x, y);
      n.grad_psi_inf = std::max(
          n.grad_psi_inf,
          std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]));
      const double div = g[0] + g[3];
      n.div_psi_inf = std::max(n.div_psi_inf, std::abs(div));
      n.div_psi_plus_inf = std::max(n.div_psi_plus_inf, std::max(div, 0.0));
    }
    if (Psi != nullptr && !Psi->empty()) {
      n.Psi_inf = std::max(n.Psi_inf, Psi->value(x, y).norm());
      const auto g = Psi->grad(x, y);
      n.grad_Psi_inf =
          std::max(n.grad_Psi_inf, std::sqrt(g[0].norm2() + g[1].norm2()));
    }
  };
  for (int j = 0; j <= ry; ++j)
    for (int i = 0; i <= rx; ++i)
      visit(i * mesh.lx() / rx, j * mesh.ly() / ry);

  // quadrature values of the nodal interpolants
  const GaussRule q = GaussRule::make(mesh);
  VectorField pv;
  TensorField Pv;
  if (psi != nullptr && !psi->empty()) pv = interpolate(mesh, *psi);
  if (Psi != nullptr && !Psi->empty()) Pv = interpolate(mesh, *Psi);
  for (int cj = 0; cj < mesh.ny(); ++cj)
    for (int ci = 0; ci < mesh.nx(); ++ci) {
      const auto nodes = mesh.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        if (pv.mesh != nullptr) {
          const auto vp = eval_velocity(q, g, nodes, pv);
          n.psi_inf = std::max(n.psi_inf,
                               std::sqrt(vp.v.x * vp.v.x + vp.v.y * vp.v.y));
          n.grad_psi_inf = std::max(n.grad_psi_inf, vp.grad.norm());
          n.div_psi_inf = std::max(n.div_psi_inf, std::abs(vp.div));
          n.div_psi_plus_inf = std::max(n.div_psi_plus_inf, std::max(vp.div, 0.0));
        }
        if (Pv.mesh != nullptr) {
          const auto tp = eval_tensor(q, g, nodes, Pv);
          n.Psi_inf = std::max(n.Psi_inf, tp.val.norm());
          n.grad_Psi_inf =
              std::max(n.grad_Psi_inf, std::sqrt(tp.gx.norm2() + tp.gy.norm2()));
        }
      }
    }

  n.psi_inf *= safety;
  n.grad_psi_inf *= safety;
  n.div_psi_inf *= safety;
  n.div_psi_plus_inf *= safety;
  n.Psi_inf *= safety;
  n.grad_Psi_inf *= safety;
  return n;
}

}  // namespace vep
