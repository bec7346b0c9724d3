#pragma once

#include <limits>

#include "vep/material.hpp"
#include "vep/tensor.hpp"

namespace vep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Stored elastic energy of the isotropic quadratic family,
///   phi(E) = K/2 |sph E|^2 + G/2 |dev E|^2,
/// together with its derivative, inverse derivative and convex conjugate.
///
/// The interface is what the rest of the code relies on (value, derivative,
/// conjugate, derivative bound); swapping in another convex stored energy
/// only has to provide the same surface.
class StoredEnergy {
 public:
  StoredEnergy(double K, double G) : K_(K), G_(G) {}
  explicit StoredEnergy(const MaterialParams& p) : StoredEnergy(p.K, p.G) {}

  double bulk() const { return K_; }
  double shear() const { return G_; }
  double strong_convexity() const { return K_ < G_ ? K_ : G_; }  // kappa
  double third_derivative_bound() const { return 0.0; }          // M

  double value(const SymTensor3& e) const {
    const auto d = decompose(e);
    return 0.5 * K_ * d.sph.norm2() + 0.5 * G_ * d.dev.norm2();
  }

  SymTensor3 derivative(const SymTensor3& e) const {
    const auto d = decompose(e);
    return K_ * d.sph + G_ * d.dev;
  }

  SymTensor3 derivative_inverse(const SymTensor3& b) const {
    const auto d = decompose(b);
    return (1.0 / K_) * d.sph + (1.0 / G_) * d.dev;
  }

  double conjugate(const SymTensor3& b) const {
    const auto d = decompose(b);
    return 0.5 / K_ * d.sph.norm2() + 0.5 / G_ * d.dev.norm2();
  }

  /// Full stress D phi(E) + phi(E) I.
  SymTensor3 stress(const SymTensor3& e) const {
    SymTensor3 t = derivative(e);
    const double p = value(e);
    t.xx += p;
    t.yy += p;
    t.zz += p;
    return t;
  }

 private:
  double K_, G_;
};

/// Dual dissipation potential with yield:
///   P(A) = nu/2 |A|^2 for |A| <= sigma_yield, +inf otherwise,
/// defined on trace-free symmetric tensors.  nu = 0 with sigma_yield = +inf
/// gives the identically-zero member (no inelastic dissipation).
///
/// +inf propagates as the IEEE infinity; callers treat any infinite value as
/// the out-of-domain sentinel.
class DissipationPotential {
 public:
  DissipationPotential(double nu, double sigma_yield)
      : nu_(nu), sigma_(sigma_yield) {}
  explicit DissipationPotential(const MaterialParams& p)
      : DissipationPotential(p.nu, p.sigma_yield) {}

  double viscosity() const { return nu_; }
  double yield_stress() const { return sigma_; }
  bool is_zero() const { return nu_ == 0.0 && sigma_ == kInf; }

  /// Pointwise density P(A); requires tr A = 0.  feas_tol widens the yield
  /// ball relatively, so quadrature of fields that are feasible up to solver
  /// slack does not collapse to the sentinel.
  double density(const SymTensor3& a, double trace_tol = 1e-12,
                 double feas_tol = 0.0) const;

  /// Convex conjugate P*(X); requires tr X = 0.
  double conjugate(const SymTensor3& x, double trace_tol = 1e-12) const;

  /// argmin over trace-free A of 1/2 |A - X|^2 + lambda P(A); requires
  /// lambda > 0 and tr X = 0.  Closed form: shrink by 1/(1 + lambda nu),
  /// then project onto the yield ball.
  SymTensor3 resolvent(const SymTensor3& x, double lambda,
                       double trace_tol = 1e-12) const;

  /// P(A) + P*(X) - X:A >= 0, zero exactly on subdifferential pairs.
  /// Returns +inf when P(A) is infinite.
  double fenchel_gap(const SymTensor3& a, const SymTensor3& x,
                     double trace_tol = 1e-12) const;

 private:
  void check_tracefree(const SymTensor3& a, double tol, const char* who) const;
  double nu_, sigma_;
};

}  // namespace vep
