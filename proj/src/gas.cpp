#include "potflow/gas.hpp"

#include "potflow/errors.hpp"

#include <cmath>
#include <string>

namespace potflow {

namespace {

void require_positive_density(double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("vacuum: density must be positive, got " + std::to_string(rho));
  }
}

} // namespace

PolytropicLaw::PolytropicLaw(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw DomainError("polytropic exponent must lie in (1, inf), got " + std::to_string(gamma));
  }
}

double pressure(const PolytropicLaw& law, double rho) {
  require_positive_density(rho);
  return std::pow(rho, law.gamma());
}

double pressure_derivative(const PolytropicLaw& law, double rho) {
  require_positive_density(rho);
  return law.gamma() * std::pow(rho, law.gamma() - 1.0);
}

double pi(const PolytropicLaw& law, double rho) {
  require_positive_density(rho);
  const double g = law.gamma();
  return g / (g - 1.0) * std::pow(rho, g - 1.0);
}

double pi_derivative(const PolytropicLaw& law, double rho) {
  require_positive_density(rho);
  return law.gamma() * std::pow(rho, law.gamma() - 2.0);
}

double sound_speed(const PolytropicLaw& law, double rho) {
  return std::sqrt(pressure_derivative(law, rho));
}

double internal_energy(const PolytropicLaw& law, double rho) {
  require_positive_density(rho);
  return std::pow(rho, law.gamma()) / (law.gamma() - 1.0);
}

double pi_inverse(const PolytropicLaw& law, double b) {
  if (!(b > 0.0)) {
    throw DomainError("pi_inverse: no positive density for b = " + std::to_string(b));
  }
  const double g = law.gamma();
  return std::pow((g - 1.0) * b / g, 1.0 / (g - 1.0));
}

double gas_dynamic_entropy(const PolytropicLaw& law, double rho, double q_heat) {
  require_positive_density(rho);
  if (!(q_heat > 0.0)) {
    throw DomainError("gas_dynamic_entropy: heat per mass must be positive");
  }
  const double g = law.gamma();
  return std::log((g - 1.0) * rho * q_heat) - g * std::log(rho);
}

} // namespace potflow
