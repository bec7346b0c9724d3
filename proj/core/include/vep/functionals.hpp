#pragma once

#include <string>

#include "vep/field.hpp"
#include "vep/material.hpp"
#include "vep/potentials.hpp"
#include "vep/quadrature.hpp"

namespace vep {

/// Cached sup-norm data of a test pair.  The estimates are inflated so that
/// the pointwise Young inequalities evaluated at quadrature points are
/// covered by the cached values; underestimating would admit pairs outside
/// the admissible set.
struct TestPairNorms {
  double psi_inf = 0.0;
  double grad_psi_inf = 0.0;
  double div_psi_inf = 0.0;
  double Psi_inf = 0.0;
  double grad_Psi_inf = 0.0;

  TestPairNorms scaled(double lambda) const {
    return {lambda * psi_inf, lambda * grad_psi_inf, lambda * div_psi_inf,
            lambda * Psi_inf, lambda * grad_Psi_inf};
  }
};

/// Admissible test pair (psi, Psi) as nodal interpolants plus cached norms.
struct TestPair {
  VectorField psi;
  TensorField Psi;
  TestPairNorms norms;
  double p_dev_Psi = 0.0;  // lumped P(dev Psi); +inf marks an infeasible pair
  std::string label;
  bool is_zero = false;
};

/// The five integral groups of the coupling form, retrievable separately.
struct CouplingBreakdown {
  double convection = 0.0;   // (rho/2)(div v)(v.psi) + rho (v (x) v):grad psi
  double stress = 0.0;       // -(Dphi(E) + phi(E) I):grad psi - S(v):D(psi)
  double transport = 0.0;    // (div v) E:Psi + v.grad(Psi):E - (EW - WE):Psi
  double strain_rate = 0.0;  // D(v):Psi
  double diffusion = 0.0;    // -gamma grad(Dphi(E)) ::: grad(Psi)

  double total() const {
    return convection + stress + transport + strain_rate + diffusion;
  }
};

struct ConvexityComponents {
  // g[0..6] are the pointwise-Young pieces, h the Korn piece; they sum with
  // the remainder to the assembled functional.
  double g[7] = {0, 0, 0, 0, 0, 0, 0};
  double h = 0.0;
  double remainder = 0.0;
  double assembled = 0.0;
};

/// The (0,0) pair; always admissible, and the incremental functional at it
/// is the ledger's inequality residual.
TestPair zero_test_pair(const Mesh& mesh);

/// Quadrature-level evaluation of every named functional on discrete fields.
/// All evaluations are read-only and reproducible; the Korn constant must be
/// present in the params for the weights and the convexity components.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const Mesh& mesh, const MaterialParams& params);

  const Mesh& mesh() const { return *mesh_; }
  const MaterialParams& params() const { return params_; }
  const StoredEnergy& stored_energy() const { return phi_; }
  const DissipationPotential& dissipation_potential() const { return pot_; }

  /// Total energy: int rho |v|^2 / 2 + phi(E).
  double energy(const State& s) const;

  /// D_gamma: int S(v):D(v) + gamma |grad Dphi(E)|^2.
  double dissipation(const State& s) const;

  /// D_0: viscous part only.
  double dissipation_visc(const State& s) const;

  double grad_v_norm2(const VectorField& v) const;

  CouplingBreakdown coupling(const State& s, const TestPair& t) const;

  /// int f . psi with both fields nodal.
  double forcing(const VectorField& f_nodal, const VectorField& psi) const;

  /// int g : Phi with both fields nodal (strain-source work).
  double tensor_forcing(const TensorField& g_nodal, const TensorField& phi) const;

  /// Lumped-quadrature P(dev Dphi(E)); +inf when any node leaves the yield
  /// ball.  Lumping makes the value consistent with the node-wise resolvent.
  double p_of_dev_dphi(const TensorField& E) const;

  /// Lumped-quadrature P(dev A) of a plain tensor field.
  double p_of_dev(const TensorField& A) const;

  double ip_velocity(const VectorField& a, const VectorField& b) const;
  double ip_tensor(const TensorField& a, const TensorField& b) const;

  /// The incremental functional.  f_n is the nodal interval-averaged force;
  /// g_n an optional strain source.  Returns +inf when the pair is
  /// infeasible (P(dev Psi) = +inf) or the state leaves the yield domain.
  double f_step(const State& s, const State& prev, const TestPair& t, double tau,
                const VectorField* f_n, const TensorField* g_n) const;

  /// Regularity weight gating test-pair admissibility of the scheme.
  double weight_construct(const TestPairNorms& n) const;

  /// Regularity weight of the energy-variational inequality.
  double weight_limit(const TestPairNorms& n) const;

  /// Optimized variant of weight_limit using only the nonnegative part of
  /// div psi (experiment flag; never the certification default).
  double weight_limit_divplus(const TestPairNorms& n, double div_psi_plus_inf) const;

  double j_functional(const State& s, const TestPair& t) const;

  /// int -S(v):D(psi) - D(v):Psi - gamma grad(Dphi(E)):::grad(Psi), the part
  /// of the coupling that stays linear in the state.
  double linear_terms(const State& s, const TestPair& t) const;

  ConvexityComponents convexity_components(const State& s, const TestPair& t) const;

  /// Tolerance scale: 1 + |a| + |b| + energies of the inputs.
  static double scale(double a, double b, double energy_like) {
    return 1.0 + std::abs(a) + std::abs(b) + std::abs(energy_like);
  }

 private:
  const Mesh* mesh_;
  MaterialParams params_;
  StoredEnergy phi_;
  DissipationPotential pot_;
  GaussRule quad_;
};

}  // namespace vep
