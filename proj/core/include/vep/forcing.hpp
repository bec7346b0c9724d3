#pragma once

#include <memory>

#include "vep/analytic.hpp"
#include "vep/field.hpp"

namespace vep {

/// Body force f(t, x).  The time-discrete functional uses the exact interval
/// average over each step, closed form for the shipped time profiles and
/// Gauss-Legendre in time otherwise.
class Forcing {
 public:
  virtual ~Forcing() = default;
  virtual Vec2 value(double t, double x, double y) const = 0;
  virtual Vec2 interval_average(double t0, double t1, double x, double y) const;
};

/// Strain-equation source, used by the manufactured-solution scenarios.
class StrainSource {
 public:
  virtual ~StrainSource() = default;
  virtual SymTensor3 value(double t, double x, double y) const = 0;
  virtual SymTensor3 interval_average(double t0, double t1, double x, double y) const;
};

enum class TimeProfile { constant, linear, sine, cosine };

/// f(t,x) = s(t) F(x) with the interval average of s in closed form.
class SeparableForcing final : public Forcing {
 public:
  SeparableForcing(AnalyticVelocity spatial, TimeProfile profile, double omega = 0.0)
      : spatial_(std::move(spatial)), profile_(profile), omega_(omega) {}

  Vec2 value(double t, double x, double y) const override;
  Vec2 interval_average(double t0, double t1, double x, double y) const override;

  static double profile_value(TimeProfile p, double omega, double t);
  static double profile_average(TimeProfile p, double omega, double t0, double t1);

 private:
  AnalyticVelocity spatial_;
  TimeProfile profile_;
  double omega_;
};

/// Nodal interpolant of the interval average over [t0, t1].
VectorField average_forcing(const Mesh& mesh, const Forcing* f, double t0, double t1);
TensorField average_strain_source(const Mesh& mesh, const StrainSource* g,
                                  double t0, double t1);

}  // namespace vep
