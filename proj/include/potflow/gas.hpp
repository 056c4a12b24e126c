#pragma once

namespace potflow {

/// Polytropic pressure law p(rho) = rho^gamma, gamma in (1, inf).
///
/// Antiderivatives are normalized to vanish as rho -> 0, so pi(rho) and
/// internal_energy(rho) carry no additive constants.
class PolytropicLaw {
public:
  explicit PolytropicLaw(double gamma = 1.4);

  double gamma() const noexcept { return gamma_; }

private:
  double gamma_;
};

double pressure(const PolytropicLaw& law, double rho);
/// dp/drho = gamma rho^(gamma-1).
double pressure_derivative(const PolytropicLaw& law, double rho);
/// Enthalpy-like potential with d(pi)/drho = p'(rho)/rho.
double pi(const PolytropicLaw& law, double rho);
double pi_derivative(const PolytropicLaw& law, double rho);
double sound_speed(const PolytropicLaw& law, double rho);
/// Integral of pi: rho^gamma / (gamma - 1).
double internal_energy(const PolytropicLaw& law, double rho);
/// Unique rho > 0 with pi(rho) = b.
double pi_inverse(const PolytropicLaw& law, double b);
/// s = log(p / rho^gamma) with p = (gamma - 1) rho q.
double gas_dynamic_entropy(const PolytropicLaw& law, double rho, double q_heat);

} // namespace potflow
