#include "potflow/systems.hpp"

#include "potflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace potflow {

std::string_view model_name(ModelKind model) {
  switch (model) {
  case ModelKind::FullEuler:
    return "full_euler";
  case ModelKind::IsentropicEuler:
    return "isentropic";
  case ModelKind::PotentialFlow:
    return "potential";
  case ModelKind::Burgers:
    return "burgers";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view name) {
  if (name == "full_euler" || name == "full-euler" || name == "full" || name == "euler") {
    return ModelKind::FullEuler;
  }
  if (name == "isentropic" || name == "isentropic_euler") {
    return ModelKind::IsentropicEuler;
  }
  if (name == "potential" || name == "potential_flow") {
    return ModelKind::PotentialFlow;
  }
  if (name == "burgers") {
    return ModelKind::Burgers;
  }
  throw UsageError("unknown model '" + std::string(name) + "'");
}

int state_size(ModelKind model, int dims) {
  if (dims != 1 && dims != 2) {
    throw UsageError("only 1 or 2 space dimensions are supported");
  }
  switch (model) {
  case ModelKind::FullEuler:
    return 2 + dims;
  case ModelKind::IsentropicEuler:
  case ModelKind::PotentialFlow:
    return 1 + dims;
  case ModelKind::Burgers:
    if (dims != 1) {
      throw UsageError("Burgers is one-dimensional");
    }
    return 1;
  }
  return 0;
}

State State::make(ModelKind model, int dims, const Vector& u) {
  if (u.size() != state_size(model, dims)) {
    throw UsageError("state vector has wrong size for " + std::string(model_name(model)));
  }
  return State{model, dims, u};
}

State State::burgers(double u) {
  Vector v(1);
  v << u;
  return State{ModelKind::Burgers, 1, v};
}

State State::from_primitive(const PolytropicLaw& law, ModelKind model, int dims, double rho,
                            std::array<double, 2> velocity, double pressure) {
  if (model == ModelKind::Burgers) {
    return burgers(rho);
  }
  if (!(rho > 0.0)) {
    throw DomainError("from_primitive: density must be positive");
  }
  Vector u(state_size(model, dims));
  u(0) = rho;
  for (int d = 0; d < dims; ++d) {
    u(1 + d) = model == ModelKind::PotentialFlow ? velocity[d] : rho * velocity[d];
  }
  if (model == ModelKind::FullEuler) {
    const double p = pressure > 0.0 ? pressure : potflow::pressure(law, rho);
    double kinetic = 0.0;
    for (int d = 0; d < dims; ++d) {
      kinetic += 0.5 * rho * velocity[d] * velocity[d];
    }
    u(1 + dims) = p / (law.gamma() - 1.0) + kinetic;
  }
  return State{model, dims, u};
}

double Primitives::speed() const { return std::hypot(velocity[0], velocity[1]); }

Primitives primitives(const PolytropicLaw& law, const State& s) {
  Primitives p;
  if (s.model == ModelKind::Burgers) {
    p.velocity[0] = s.u(0);
    return p;
  }
  const double rho = s.u(0);
  if (!(rho >= kVacuumDensity)) {
    throw DomainError("vacuum state: rho = " + std::to_string(rho));
  }
  p.rho = rho;
  for (int d = 0; d < s.dims; ++d) {
    p.velocity[d] = s.model == ModelKind::PotentialFlow ? s.u(1 + d) : s.u(1 + d) / rho;
  }
  if (s.model == ModelKind::FullEuler) {
    const double kinetic = 0.5 * rho * (p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1]);
    p.q_heat = (s.u(1 + s.dims) - kinetic) / rho;
    if (!(p.q_heat > 0.0)) {
      throw DomainError("full Euler state with non-positive heat");
    }
    p.pressure = (law.gamma() - 1.0) * rho * p.q_heat;
    p.sound_speed = std::sqrt(law.gamma() * p.pressure / rho);
  } else {
    p.pressure = pressure(law, rho);
    p.sound_speed = sound_speed(law, rho);
  }
  if (!std::isfinite(p.velocity[0]) || !std::isfinite(p.velocity[1])) {
    throw DomainError("non-finite velocity");
  }
  return p;
}

namespace {

void check_axis(const State& s, int axis) {
  if (axis < 0 || axis >= s.dims) {
    throw UsageError("axis out of range for state dimension");
  }
}

} // namespace

Vector flux(const PolytropicLaw& law, const State& s, int axis) {
  check_axis(s, axis);
  const int n = static_cast<int>(s.u.size());
  Vector f = Vector::Zero(n);
  if (s.model == ModelKind::Burgers) {
    f(0) = 0.5 * s.u(0) * s.u(0);
    return f;
  }
  const Primitives p = primitives(law, s);
  const double vn = p.velocity[axis];
  switch (s.model) {
  case ModelKind::PotentialFlow: {
    const double speed2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
    f(0) = p.rho * vn;
    f(1 + axis) = 0.5 * speed2 + pi(law, p.rho);
    break;
  }
  case ModelKind::IsentropicEuler:
  case ModelKind::FullEuler:
    f(0) = s.u(0) * vn;
    for (int d = 0; d < s.dims; ++d) {
      f(1 + d) = s.u(1 + d) * vn;
    }
    f(1 + axis) += p.pressure;
    if (s.model == ModelKind::FullEuler) {
      f(1 + s.dims) = (s.u(1 + s.dims) + p.pressure) * vn;
    }
    break;
  case ModelKind::Burgers:
    break;
  }
  return f;
}

Vector normal_flux(const PolytropicLaw& law, const State& s, std::array<double, 2> nu) {
  Vector f = Vector::Zero(s.u.size());
  for (int d = 0; d < s.dims; ++d) {
    if (nu[d] != 0.0) {
      f += nu[d] * flux(law, s, d);
    }
  }
  return f;
}

Matrix jacobian(const PolytropicLaw& law, const State& s, int axis) {
  check_axis(s, axis);
  const int n = static_cast<int>(s.u.size());
  Matrix a = Matrix::Zero(n, n);
  if (s.model == ModelKind::Burgers) {
    a(0, 0) = s.u(0);
    return a;
  }
  const Primitives p = primitives(law, s);
  const double vn = p.velocity[axis];
  const int normal = 1 + axis;
  const int tangential = 1 + (1 - axis); // only meaningful in 2D
  const double g = law.gamma();
  switch (s.model) {
  case ModelKind::PotentialFlow:
    a(0, 0) = vn;
    a(0, normal) = p.rho;
    a(normal, 0) = pi_derivative(law, p.rho);
    for (int d = 0; d < s.dims; ++d) {
      a(normal, 1 + d) = p.velocity[d];
    }
    break;
  case ModelKind::IsentropicEuler: {
    const double c2 = p.sound_speed * p.sound_speed;
    a(0, normal) = 1.0;
    a(normal, 0) = c2 - vn * vn;
    a(normal, normal) = 2.0 * vn;
    if (s.dims == 2) {
      const double vt = p.velocity[1 - axis];
      a(tangential, 0) = -vn * vt;
      a(tangential, normal) = vt;
      a(tangential, tangential) = vn;
    }
    break;
  }
  case ModelKind::FullEuler: {
    const int energy = 1 + s.dims;
    const double kinetic = 0.5 * (p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1]);
    const double enthalpy = (s.u(energy) + p.pressure) / p.rho;
    a(0, normal) = 1.0;
    a(normal, 0) = (g - 1.0) * kinetic - vn * vn;
    a(normal, normal) = (3.0 - g) * vn;
    a(normal, energy) = g - 1.0;
    a(energy, 0) = vn * ((g - 1.0) * kinetic - enthalpy);
    a(energy, normal) = enthalpy - (g - 1.0) * vn * vn;
    a(energy, energy) = g * vn;
    if (s.dims == 2) {
      const double vt = p.velocity[1 - axis];
      a(normal, tangential) = -(g - 1.0) * vt;
      a(tangential, 0) = -vn * vt;
      a(tangential, normal) = vt;
      a(tangential, tangential) = vn;
      a(energy, tangential) = -(g - 1.0) * vn * vt;
    }
    break;
  }
  case ModelKind::Burgers:
    break;
  }
  return a;
}

Vector eigenvalues(const PolytropicLaw& law, const State& s, int axis) {
  check_axis(s, axis);
  if (s.model == ModelKind::Burgers) {
    Vector lam(1);
    lam << s.u(0);
    return lam;
  }
  const Primitives p = primitives(law, s);
  const double vn = p.velocity[axis];
  const double c = p.sound_speed;
  Vector lam(s.u.size());
  int k = 0;
  lam(k++) = vn - c;
  lam(k++) = vn + c;
  switch (s.model) {
  case ModelKind::PotentialFlow:
    if (s.dims == 2) {
      lam(k++) = 0.0;
    }
    break;
  case ModelKind::IsentropicEuler:
    if (s.dims == 2) {
      lam(k++) = vn;
    }
    break;
  case ModelKind::FullEuler:
    for (int d = 0; d < s.dims; ++d) {
      lam(k++) = vn;
    }
    break;
  case ModelKind::Burgers:
    break;
  }
  std::sort(lam.data(), lam.data() + lam.size());
  return lam;
}

double max_wavespeed(const PolytropicLaw& law, const State& s) {
  if (s.model == ModelKind::Burgers) {
    return std::abs(s.u(0));
  }
  const Primitives p = primitives(law, s);
  return p.speed() + p.sound_speed;
}

Vector rh_residual(const PolytropicLaw& law, const JumpData& jump) {
  if (jump.left.model != jump.right.model || jump.left.dims != jump.right.dims) {
    throw UsageError("rh_residual: both sides must share model and dimension");
  }
  const int dims = jump.left.dims;
  double norm2 = 0.0;
  for (int d = 0; d < dims; ++d) {
    norm2 += jump.nu[d] * jump.nu[d];
  }
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw UsageError("rh_residual: normal must be a unit vector");
  }
  const Vector plus = normal_flux(law, jump.right, jump.nu) - jump.sigma * jump.right.u;
  const Vector minus = normal_flux(law, jump.left, jump.nu) - jump.sigma * jump.left.u;
  return plus - minus;
}

} // namespace potflow
