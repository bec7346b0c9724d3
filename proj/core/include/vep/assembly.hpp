#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "vep/material.hpp"
#include "vep/mesh.hpp"
#include "vep/quadrature.hpp"

namespace vep {

/// Compressed sparse matrix with dimension metadata and a symmetry flag.
struct SparseOperator {
  Eigen::SparseMatrix<double> mat;
  bool symmetric = false;

  /// max-norm asymmetry, for the symmetry invariant check.
  double symmetry_drift() const;
};

/// The assembled spatial operators of the scheme.  Velocity-independent
/// operators are built once; the convecting-field-dependent ones are
/// assembled on demand from a frozen velocity.
struct Operators {
  const Mesh* mesh = nullptr;
  MaterialParams params;
  GaussRule quad;

  SparseOperator mass_v;   // 2n x 2n, \int u.w
  SparseOperator mass_E;   // 6n x 6n, \int A:B
  SparseOperator visc;     // 2n x 2n, \int S(u):D(w)
  SparseOperator stiff_v;  // 2n x 2n, \int grad u : grad w
  SparseOperator k_diff;   // 6n x 6n, gamma \int grad(K[A]) ::: grad(Phi)
  SparseOperator grad_sym; // 6n x 2n, \int D(w):Phi
  SparseOperator div_op;   // n x 2n,  \int (div w) q

  Eigen::VectorXd lumped_node_mass;  // row-sum mass per node

  std::vector<int> free_vdofs;  // unconstrained velocity dofs

  /// Temam-stabilized convection C(vhat): w-row, u-column bilinear
  ///   -(rho/2) \int (div vhat)(u.w) - rho \int vhat . grad(w) . u-pairing
  /// so that u' C(vhat) u = 0 to roundoff for admissible vhat.
  Eigen::SparseMatrix<double> convection(const VectorField& vhat) const;

  /// Weak strain transport T_E(vhat): Phi-row, A-column of the form
  ///   -\int (div vhat) A:Phi - \int vhat.grad(Phi):A,
  /// the integrated-by-parts image of \int vhat.grad(A):Phi.
  Eigen::SparseMatrix<double> strain_transport(const VectorField& vhat) const;

  /// Rotation coupling R_E(W(vhat)): Phi-row, A-column of
  ///   \int (A W - W A):Phi.
  Eigen::SparseMatrix<double> strain_rotation(const VectorField& vhat) const;
};

Operators assemble(const Mesh& mesh, const MaterialParams& params);

struct KornResult {
  double mu = 0.0;              // safety-factored constant (0.99 x raw)
  double raw_eigenvalue = 0.0;  // smallest generalized eigenvalue
  int iterations = 0;
};

/// Largest mu with \int S(v):D(v) >= mu \int |grad v|^2 over the discrete
/// admissible space, via inverse power iteration on the generalized
/// eigenproblem (visc, stiff_v) restricted to free dofs.
KornResult korn_constant(const Mesh& mesh, const MaterialParams& params,
                         double rtol = 1e-8, int maxit = 10000);

/// Extract the square submatrix over the given index set.
Eigen::SparseMatrix<double> restrict_matrix(const Eigen::SparseMatrix<double>& a,
                                            const std::vector<int>& idx);

/// Rectangular restriction: rows from row_idx, columns from col_idx.
Eigen::SparseMatrix<double> restrict_matrix(const Eigen::SparseMatrix<double>& a,
                                            const std::vector<int>& row_idx,
                                            const std::vector<int>& col_idx);

Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& idx);
void scatter(const Eigen::VectorXd& reduced, const std::vector<int>& idx,
             Eigen::VectorXd& full);

}  // namespace vep
