#include "vep/forcing.hpp"

#include <cmath>

namespace vep {

namespace {
// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                           0.5384693101056831, 0.9061798459386640};
constexpr double kGw[5] = {0.2369268850561891, 0.4786286704993665,
                           0.5688888888888889, 0.4786286704993665,
                           0.2369268850561891};
}  // namespace

Vec2 Forcing::interval_average(double t0, double t1, double x, double y) const {
  Vec2 acc;
  const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  for (int k = 0; k < 5; ++k) {
    const Vec2 v = value(mid + half * kGx[k], x, y);
    acc.x += 0.5 * kGw[k] * v.x;
    acc.y += 0.5 * kGw[k] * v.y;
  }
  return acc;
}

SymTensor3 StrainSource::interval_average(double t0, double t1, double x,
                                          double y) const {
  SymTensor3 acc;
  const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  for (int k = 0; k < 5; ++k)
    acc += 0.5 * kGw[k] * value(mid + half * kGx[k], x, y);
  return acc;
}

double SeparableForcing::profile_value(TimeProfile p, double omega, double t) {
  switch (p) {
    case TimeProfile::constant: return 1.0;
    case TimeProfile::linear: return t;
    case TimeProfile::sine: return std::sin(omega * t);
    case TimeProfile::cosine: return std::cos(omega * t);
  }
  return 0.0;
}

double SeparableForcing::profile_average(TimeProfile p, double omega, double t0,
                                         double t1) {
  const double dt = t1 - t0;
  switch (p) {
    case TimeProfile::constant: return 1.0;
    case TimeProfile::linear: return 0.5 * (t0 + t1);
    case TimeProfile::sine:
      if (omega == 0.0) return 0.0;
      return (std::cos(omega * t0) - std::cos(omega * t1)) / (omega * dt);
    case TimeProfile::cosine:
      if (omega == 0.0) return 1.0;
      return (std::sin(omega * t1) - std::sin(omega * t0)) / (omega * dt);
  }
  return 0.0;
}

Vec2 SeparableForcing::value(double t, double x, double y) const {
  const double s = profile_value(profile_, omega_, t);
  const Vec2 v = spatial_.value(x, y);
  return {s * v.x, s * v.y};
}

Vec2 SeparableForcing::interval_average(double t0, double t1, double x,
                                        double y) const {
  const double s = profile_average(profile_, omega_, t0, t1);
  const Vec2 v = spatial_.value(x, y);
  return {s * v.x, s * v.y};
}

VectorField average_forcing(const Mesh& mesh, const Forcing* f, double t0,
                            double t1) {
  VectorField out(mesh);
  if (f == nullptr) return out;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Vec2 v = f->interval_average(t0, t1, mesh.node_x(i), mesh.node_y(i));
    out.vx(i) = v.x;
    out.vy(i) = v.y;
  }
  return out;
}

TensorField average_strain_source(const Mesh& mesh, const StrainSource* g,
                                  double t0, double t1) {
  TensorField out(mesh);
  if (g == nullptr) return out;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    out.set_node(i, g->interval_average(t0, t1, mesh.node_x(i), mesh.node_y(i)));
  return out;
}

}  // namespace vep
