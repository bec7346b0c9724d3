#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace vep {

/// All model constants plus the derived analysis constants used by the
/// regularity weights and the convexity probes.
///
/// The plasticity-free variant (Kelvin--Voigt) is encoded by nu = 0 together
/// with sigma_yield = +inf; in every other configuration both must be
/// strictly positive.
struct MaterialParams {
  double rho = 1.0;          // mass density
  double mu1 = 0.1;          // shear viscosity of the Newtonian stress
  double mu2 = 0.1;          // bulk viscosity of the Newtonian stress
  double K = 4.0;            // elastic bulk modulus
  double G = 1.0;            // elastic shear modulus
  double nu = 1.0;           // plastic-regime shear viscosity
  double sigma_yield = 0.1;  // yield stress
  double gamma = 0.0;        // stress-diffusion coefficient

  // Korn constant of the discrete admissible velocity space.  Zero means
  // "not yet computed"; the discretization fills it in, or a scenario
  // overrides it.
  double korn_mu = 0.0;

  double kappa() const { return K < G ? K : G; }  // strong convexity of phi
  double beta() const { return 0.5 * kappa(); }   // quadratic growth constant
  double third_derivative_bound() const { return 0.0; }  // M, quadratic family
  double mu_star() const { return std::min(2.0 * mu1, 3.0 * mu2); }

  bool plasticity_disabled() const {
    return nu == 0.0 && sigma_yield == std::numeric_limits<double>::infinity();
  }

  void validate() const;
};

}  // namespace vep
