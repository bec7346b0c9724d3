#pragma once

#include <Eigen/Dense>

#include "vep/mesh.hpp"
#include "vep/tensor.hpp"

namespace vep {

/// Nodal Q1 velocity field with two active components per node,
/// layout [vx_0, vy_0, vx_1, vy_1, ...].
struct VectorField {
  const Mesh* mesh = nullptr;
  Eigen::VectorXd data;

  VectorField() = default;
  explicit VectorField(const Mesh& m)
      : mesh(&m), data(Eigen::VectorXd::Zero(2 * m.num_nodes())) {}

  double vx(int node) const { return data[2 * node]; }
  double vy(int node) const { return data[2 * node + 1]; }
  double& vx(int node) { return data[2 * node]; }
  double& vy(int node) { return data[2 * node + 1]; }

  /// Zero out every constrained component (v = 0 on Dirichlet nodes,
  /// v.n = 0 on slip nodes).
  void apply_constraints() {
    for (int i = 0; i < mesh->num_nodes(); ++i) {
      if (mesh->fixed_vx(i)) vx(i) = 0.0;
      if (mesh->fixed_vy(i)) vy(i) = 0.0;
    }
  }

  bool admissible(double tol = 0.0) const {
    for (int i = 0; i < mesh->num_nodes(); ++i) {
      if (mesh->fixed_vx(i) && std::abs(vx(i)) > tol) return false;
      if (mesh->fixed_vy(i) && std::abs(vy(i)) > tol) return false;
    }
    return true;
  }
};

/// Nodal Q1 symmetric-tensor field, six components per node in the order
/// [xx, yy, zz, xy, xz, yz].
struct TensorField {
  const Mesh* mesh = nullptr;
  Eigen::VectorXd data;

  TensorField() = default;
  explicit TensorField(const Mesh& m)
      : mesh(&m), data(Eigen::VectorXd::Zero(6 * m.num_nodes())) {}

  SymTensor3 node(int i) const {
    const int b = 6 * i;
    return {data[b], data[b + 1], data[b + 2], data[b + 3], data[b + 4], data[b + 5]};
  }
  void set_node(int i, const SymTensor3& s) {
    const int b = 6 * i;
    data[b] = s.xx;
    data[b + 1] = s.yy;
    data[b + 2] = s.zz;
    data[b + 3] = s.xy;
    data[b + 4] = s.xz;
    data[b + 5] = s.yz;
  }
};

struct ScalarField {
  const Mesh* mesh = nullptr;
  Eigen::VectorXd data;

  ScalarField() = default;
  explicit ScalarField(const Mesh& m)
      : mesh(&m), data(Eigen::VectorXd::Zero(m.num_nodes())) {}
};

/// One time level of the evolution.
struct State {
  VectorField v;
  TensorField E;

  State() = default;
  explicit State(const Mesh& m) : v(m), E(m) {}
};

}  // namespace vep
