#pragma once

#include "potflow/solver.hpp"

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace potflow {

/// Parameters of the built-in initial conditions. Lengths are absolute;
/// `center` and `split` are fractions of the domain length.
struct InitialConditionParams {
  double rho0 = 1.0;
  std::array<double, 2> velocity0{0.0, 0.0};
  /// NaN selects the per-condition default (acoustic 1e-2, sine 1 or 0.1, bump 1e-3, curl-free 0.1).
  double amplitude = std::numeric_limits<double>::quiet_NaN();
  double width = 0.05;
  double center = 0.5;
  // Riemann data; pressure is used by full Euler only.
  double split = 0.5;
  double rho_left = 1.0, v_left = 0.0, p_left = 1.0;
  double rho_right = 0.125, v_right = 0.0, p_right = 0.1;
};

/// Built-in initial conditions, sampled at cell centers:
///   acoustic   rho = rho0 + A exp(-(r/width)^2), velocity = velocity0
///   sine       rho (or u for Burgers) = base + A sin(2 pi x / lx), A = 1 for
///              Burgers and 0.1 for the gas models
///   riemann    left state for x < split lx, right state otherwise
///   bump       rho = rho0 + A cos^4(pi r / (2 width)) for r < width, else rho0
///   curl-free  2D potential flow, v = grad(A sin(2 pi x/lx) sin(2 pi y/ly))
///   swirl      2D potential flow, v = A (-sin(2 pi y/ly), sin(2 pi x/lx))
/// where r is the distance to the domain point at fraction `center`. Full
/// Euler pressure defaults to rho^gamma.
Field make_initial_condition(const std::string& name, const PolytropicLaw& law, ModelKind model, const Grid& grid,
                             const InitialConditionParams& params = {});

std::vector<std::string> initial_condition_names();

} // namespace potflow
