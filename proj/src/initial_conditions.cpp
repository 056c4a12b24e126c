#include "potflow/initial_conditions.hpp"

#include "potflow/errors.hpp"

#include <cmath>
#include <numbers>

namespace potflow {

namespace {

double pick(double value, double fallback) { return std::isnan(value) ? fallback : value; }

} // namespace

std::vector<std::string> initial_condition_names() {
  return {"acoustic", "sine", "riemann", "bump", "curl-free", "swirl"};
}

Field make_initial_condition(const std::string& name, const PolytropicLaw& law, ModelKind model, const Grid& grid,
                             const InitialConditionParams& prm) {
  using std::numbers::pi;
  Field field(grid, model, law);
  const double xc = prm.center * grid.lx;
  const double yc = prm.center * grid.ly;
  const int ny = grid.dims == 2 ? grid.ny : 1;
  const bool burgers = model == ModelKind::Burgers;

  const auto gas = [&](double rho, std::array<double, 2> vel, double p = -1.0) {
    return State::from_primitive(law, model, grid.dims, rho, vel, p);
  };

  if ((name == "curl-free" || name == "swirl") && (model != ModelKind::PotentialFlow || grid.dims != 2)) {
    throw UsageError(name + " initial data needs 2D potential flow");
  }
  if (!(name == "acoustic" || name == "sine" || name == "riemann" || name == "bump" || name == "curl-free" ||
        name == "swirl")) {
    throw UsageError("unknown initial condition '" + name + "'");
  }

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x_center(i);
      const double y = grid.dims == 2 ? grid.y_center(j) : 0.0;
      const double r = grid.dims == 2 ? std::hypot(x - xc, y - yc) : std::abs(x - xc);
      State s;
      if (name == "acoustic") {
        const double bump = pick(prm.amplitude, 1e-2) * std::exp(-(r / prm.width) * (r / prm.width));
        s = burgers ? State::burgers(prm.velocity0[0] + bump) : gas(prm.rho0 + bump, prm.velocity0);
      } else if (name == "sine") {
        // unit amplitude for Burgers; gas models need to stay clear of vacuum
        const double wave = pick(prm.amplitude, burgers ? 1.0 : 0.1) * std::sin(2.0 * pi * x / grid.lx);
        s = burgers ? State::burgers(prm.velocity0[0] + wave) : gas(prm.rho0 + wave, prm.velocity0);
      } else if (name == "riemann") {
        const bool left = x < prm.split * grid.lx;
        if (burgers) {
          s = State::burgers(left ? prm.v_left : prm.v_right);
        } else {
          s = left ? gas(prm.rho_left, {prm.v_left, 0.0}, prm.p_left)
                   : gas(prm.rho_right, {prm.v_right, 0.0}, prm.p_right);
        }
      } else if (name == "bump") {
        double bump = 0.0;
        if (r < prm.width) {
          const double c = std::cos(0.5 * pi * r / prm.width);
          bump = pick(prm.amplitude, 1e-3) * c * c * c * c;
        }
        s = burgers ? State::burgers(prm.velocity0[0] + bump) : gas(prm.rho0 + bump, prm.velocity0);
      } else if (name == "curl-free") {
        const double a = pick(prm.amplitude, 0.1);
        const double kx = 2.0 * pi / grid.lx;
        const double ky = 2.0 * pi / grid.ly;
        s = gas(prm.rho0, {prm.velocity0[0] + a * kx * std::cos(kx * x) * std::sin(ky * y),
                           prm.velocity0[1] + a * ky * std::sin(kx * x) * std::cos(ky * y)});
      } else {
        const double a = pick(prm.amplitude, 0.1);
        s = gas(prm.rho0, {prm.velocity0[0] - a * std::sin(2.0 * pi * y / grid.ly),
                           prm.velocity0[1] + a * std::sin(2.0 * pi * x / grid.lx)});
      }
      field.set(field.index(i, j), s);
    }
  }
  return field;
}

} // namespace potflow
