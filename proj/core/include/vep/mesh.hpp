#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vep {

enum class BoundaryTag : std::uint8_t {
  dirichlet,  // no-slip: v = 0
  slip,       // perfect slip: v.n = 0, tangential traction natural
};

/// One tag per side of the rectangle, in the order left, right, bottom, top.
struct BoundarySpec {
  BoundaryTag left = BoundaryTag::dirichlet;
  BoundaryTag right = BoundaryTag::dirichlet;
  BoundaryTag bottom = BoundaryTag::dirichlet;
  BoundaryTag top = BoundaryTag::dirichlet;

  // An all-slip tagging is rejected unless this is set; on a rectangle the
  // slip constraints alone already exclude rigid motions, so enabling the
  // filter is safe.
  bool allow_all_slip = false;

  bool all_slip() const {
    return left == BoundaryTag::slip && right == BoundaryTag::slip &&
           bottom == BoundaryTag::slip && top == BoundaryTag::slip;
  }
};

/// Uniform quadrilateral grid on [0,lx] x [0,ly] with nx x ny cells and
/// bilinear (Q1) nodes, plane-strain embedded: all tensors are full 3x3,
/// velocities have two active components.
class Mesh {
 public:
  static Mesh build(int nx, int ny, double lx, double ly, const BoundarySpec& bc);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }
  const BoundarySpec& boundary() const { return bc_; }

  int num_nodes() const { return (nx_ + 1) * (ny_ + 1); }
  int num_cells() const { return nx_ * ny_; }

  int node_index(int i, int j) const { return j * (nx_ + 1) + i; }
  double node_x(int idx) const { return (idx % (nx_ + 1)) * hx(); }
  double node_y(int idx) const { return (idx / (nx_ + 1)) * hy(); }

  /// Counter-clockwise corner nodes of cell (ci, cj).
  std::array<int, 4> cell_nodes(int ci, int cj) const {
    return {node_index(ci, cj), node_index(ci + 1, cj),
            node_index(ci + 1, cj + 1), node_index(ci, cj + 1)};
  }

  bool on_boundary(int idx) const {
    const int i = idx % (nx_ + 1), j = idx / (nx_ + 1);
    return i == 0 || i == nx_ || j == 0 || j == ny_;
  }

  /// Velocity constraint masks resolved from the side tags: a Dirichlet
  /// side fixes both components of its nodes, a slip side fixes the normal
  /// component; Dirichlet wins at corners.
  bool fixed_vx(int idx) const { return fix_vx_[idx]; }
  bool fixed_vy(int idx) const { return fix_vy_[idx]; }

  int num_boundary_nodes() const { return static_cast<int>(boundary_nodes_.size()); }
  const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }

  /// Outward unit normal at a boundary node (unit diagonal at corners).
  std::array<double, 2> outward_normal(int idx) const;

  /// Tag of a full side; side in {0:left, 1:right, 2:bottom, 3:top}.
  BoundaryTag side_tag(int side) const;

  /// Tagged boundary nodes per side (corners appear on both adjacent sides).
  std::vector<int> side_nodes(int side) const;

 private:
  Mesh() = default;
  int nx_ = 0, ny_ = 0;
  double lx_ = 0.0, ly_ = 0.0;
  BoundarySpec bc_;
  std::vector<std::uint8_t> fix_vx_, fix_vy_;
  std::vector<int> boundary_nodes_;
};

}  // namespace vep
