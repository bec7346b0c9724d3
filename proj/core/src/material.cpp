#include "vep/material.hpp"

#include <cmath>

namespace vep {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("MaterialParams: " + what);
}
}  // namespace

void MaterialParams::validate() const {
  require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
  require(std::isfinite(mu1) && mu1 >= 0.0, "mu1 must be nonnegative");
  require(std::isfinite(mu2) && mu2 >= 0.0, "mu2 must be nonnegative");
  require(std::isfinite(K) && K > 0.0, "K must be positive");
  require(std::isfinite(G) && G > 0.0, "G must be positive");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be nonnegative");
  if (!plasticity_disabled()) {
    require(std::isfinite(nu) && nu > 0.0, "nu must be positive");
    require(std::isfinite(sigma_yield) && sigma_yield > 0.0,
            "sigma_yield must be positive");
  }
  require(korn_mu >= 0.0, "korn_mu must be nonnegative");
}

}  // namespace vep
