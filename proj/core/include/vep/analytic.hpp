#pragma once

#include <array>
#include <functional>

#include "vep/field.hpp"
#include "vep/quadrature.hpp"

namespace vep {

/// Closed-form velocity profile with analytic first derivatives,
/// grad = [dx vx, dy vx, dx vy, dy vy].
struct AnalyticVelocity {
  std::function<Vec2(double, double)> value;
  std::function<std::array<double, 4>(double, double)> grad;

  bool empty() const { return !value; }
};

/// Closed-form symmetric-tensor profile with analytic first derivatives.
struct AnalyticTensor {
  std::function<SymTensor3(double, double)> value;
  std::function<std::array<SymTensor3, 2>(double, double)> grad;

  bool empty() const { return !value; }
};

VectorField interpolate(const Mesh& mesh, const AnalyticVelocity& f);
TensorField interpolate(const Mesh& mesh, const AnalyticTensor& f);

/// Sup-norm estimates of an analytic pair by dense sampling: mesh nodes, a
/// 4x-refined grid, and the quadrature points of the nodal interpolant, all
/// inflated by the safety factor.  The interpolant's quadrature values are
/// included so the cached norms dominate every value the evaluators see.
struct SampledNorms {
  double psi_inf = 0.0, grad_psi_inf = 0.0, div_psi_inf = 0.0;
  double div_psi_plus_inf = 0.0;  // sup of max(div psi, 0)
  double Psi_inf = 0.0, grad_Psi_inf = 0.0;
};

SampledNorms sample_norms(const Mesh& mesh, const AnalyticVelocity* psi,
                          const AnalyticTensor* Psi, double safety = 1.05);

}  // namespace vep
