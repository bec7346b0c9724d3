#include "vep/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace vep {

void DissipationPotential::check_tracefree(const SymTensor3& a, double tol,
                                           const char* who) const {
  if (std::abs(a.trace()) > tol * (1.0 + a.norm()))
    throw std::invalid_argument(std::string(who) + ": argument is not trace-free");
}

double DissipationPotential::density(const SymTensor3& a, double trace_tol,
                                     double feas_tol) const {
  check_tracefree(a, trace_tol, "P_density");
  if (is_zero()) return 0.0;
  const double r = a.norm();
  if (r > sigma_ * (1.0 + feas_tol)) return kInf;
  return 0.5 * nu_ * r * r;
}

double DissipationPotential::conjugate(const SymTensor3& x, double trace_tol) const {
  check_tracefree(x, trace_tol, "P_conjugate");
  if (is_zero()) return x.norm2() == 0.0 ? 0.0 : kInf;  // indicator of {0}
  const double r = x.norm();
  if (r <= nu_ * sigma_) return 0.5 * r * r / nu_;
  return sigma_ * r - 0.5 * nu_ * sigma_ * sigma_;
}

SymTensor3 DissipationPotential::resolvent(const SymTensor3& x, double lambda,
                                           double trace_tol) const {
  if (!(lambda > 0.0))
    throw std::invalid_argument("resolvent_P: lambda must be positive");
  check_tracefree(x, trace_tol, "resolvent_P");
  if (is_zero()) return x;
  SymTensor3 a = (1.0 / (1.0 + lambda * nu_)) * x;
  const double r = a.norm();
  if (r > sigma_) a *= sigma_ / r;
  return a;
}

double DissipationPotential::fenchel_gap(const SymTensor3& a, const SymTensor3& x,
                                         double trace_tol) const {
  const double pa = density(a, trace_tol);
  if (pa == kInf) return kInf;
  return pa + conjugate(x, trace_tol) - x.dot(a);
}

}  // namespace vep
