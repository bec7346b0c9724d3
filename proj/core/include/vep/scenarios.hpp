#pragma once

#include <functional>

#include "vep/config.hpp"
#include "vep/stepper.hpp"

namespace vep {

/// A runnable scenario plus, when the scenario is manufactured, accessors
/// for the exact solution at a given time.
struct ScenarioBundle {
  Scenario scenario;
  std::function<AnalyticVelocity(double)> exact_velocity;  // empty if none
  std::function<AnalyticTensor(double)> exact_strain;

  bool manufactured() const { return static_cast<bool>(exact_velocity); }
};

/// Shipped scenarios: rest, shear_yield, rotation_objectivity,
/// kelvin_voigt_mms (manufactured Kelvin--Voigt with stress diffusion) and
/// gamma_sweep (shear_yield driven across a gamma list by the study mode).
ScenarioBundle make_scenario(const Config& cfg);

}  // namespace vep
