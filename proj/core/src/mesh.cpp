#include "vep/mesh.hpp"

#include <cmath>

namespace vep {

Mesh Mesh::build(int nx, int ny, double lx, double ly, const BoundarySpec& bc) {
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("Mesh::build: need nx, ny >= 2");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("Mesh::build: extents must be positive");
  if (bc.all_slip() && !bc.allow_all_slip)
    throw std::invalid_argument(
        "Mesh::build: all-slip boundary rejected; enable the rigid-motion "
        "filter to accept it");

  Mesh m;
  m.nx_ = nx;
  m.ny_ = ny;
  m.lx_ = lx;
  m.ly_ = ly;
  m.bc_ = bc;
  const int n = m.num_nodes();
  m.fix_vx_.assign(n, 0);
  m.fix_vy_.assign(n, 0);

  auto constrain = [&](int idx, BoundaryTag tag, bool normal_is_x) {
    if (tag == BoundaryTag::dirichlet) {
      m.fix_vx_[idx] = 1;
      m.fix_vy_[idx] = 1;
    } else if (normal_is_x) {
      m.fix_vx_[idx] = 1;
    } else {
      m.fix_vy_[idx] = 1;
    }
  };

  for (int j = 0; j <= ny; ++j) {
    constrain(m.node_index(0, j), bc.left, true);
    constrain(m.node_index(nx, j), bc.right, true);
  }
  for (int i = 0; i <= nx; ++i) {
    constrain(m.node_index(i, 0), bc.bottom, false);
    constrain(m.node_index(i, ny), bc.top, false);
  }

  for (int idx = 0; idx < n; ++idx)
    if (m.on_boundary(idx)) m.boundary_nodes_.push_back(idx);
  return m;
}

std::array<double, 2> Mesh::outward_normal(int idx) const {
  const int i = idx % (nx_ + 1), j = idx / (nx_ + 1);
  double nxv = 0.0, nyv = 0.0;
  if (i == 0) nxv -= 1.0;
  if (i == nx_) nxv += 1.0;
  if (j == 0) nyv -= 1.0;
  if (j == ny_) nyv += 1.0;
  const double len = std::sqrt(nxv * nxv + nyv * nyv);
  if (len == 0.0) throw std::invalid_argument("outward_normal: interior node");
  return {nxv / len, nyv / len};
}

BoundaryTag Mesh::side_tag(int side) const {
  switch (side) {
    case 0: return bc_.left;
    case 1: return bc_.right;
    case 2: return bc_.bottom;
    case 3: return bc_.top;
  }
  throw std::invalid_argument("side_tag: side must be in 0..3");
}

std::vector<int> Mesh::side_nodes(int side) const {
  std::vector<int> out;
  if (side == 0 || side == 1) {
    const int i = side == 0 ? 0 : nx_;
    for (int j = 0; j <= ny_; ++j) out.push_back(node_index(i, j));
  } else {
    const int j = side == 2 ? 0 : ny_;
    for (int i = 0; i <= nx_; ++i) out.push_back(node_index(i, j));
  }
  return out;
}

}  // namespace vep
