#pragma once

#include "potflow/gas.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <string_view>

namespace potflow {

enum class ModelKind { FullEuler, IsentropicEuler, PotentialFlow, Burgers };

std::string_view model_name(ModelKind model);
/// Accepts the names produced by model_name() plus the short forms
/// "full", "euler", "isentropic", "potential".
ModelKind parse_model(std::string_view name);

/// Number of conserved components: 2+n full Euler, 1+n isentropic and
/// potential flow, 1 for Burgers.
int state_size(ModelKind model, int dims);

// Small fixed-capacity vectors and matrices; no state ever exceeds 4 components.
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

/// Densities below this are treated as vacuum.
inline constexpr double kVacuumDensity = 1e-10;

/// Conserved variables of one model:
///   FullEuler       (rho, rho v^1..rho v^n, E)
///   IsentropicEuler (rho, rho v^1..rho v^n)
///   PotentialFlow   (rho, v^1..v^n)
///   Burgers         (u)
struct State {
  ModelKind model = ModelKind::Burgers;
  int dims = 1;
  Vector u;

  static State make(ModelKind model, int dims, const Vector& u);
  static State burgers(double u);
  /// Build from density and velocity. For FullEuler the pressure defaults to
  /// the isentropic value rho^gamma.
  static State from_primitive(const PolytropicLaw& law, ModelKind model, int dims, double rho,
                              std::array<double, 2> velocity = {0.0, 0.0},
                              double pressure = -1.0);
};

/// Derived quantities of a gas state. Throws DomainError on vacuum or
/// non-positive heat.
struct Primitives {
  double rho = 0.0;
  std::array<double, 2> velocity{0.0, 0.0};
  double pressure = 0.0;
  double sound_speed = 0.0;
  double q_heat = 0.0; // full Euler only
  double speed() const;
};

Primitives primitives(const PolytropicLaw& law, const State& state);

struct JumpData {
  State left;  // minus side
  State right; // plus side
  double sigma = 0.0;
  std::array<double, 2> nu{1.0, 0.0}; // points from left to right
};

Vector flux(const PolytropicLaw& law, const State& state, int axis);
/// f(U) . nu
Vector normal_flux(const PolytropicLaw& law, const State& state, std::array<double, 2> nu);
/// d f^axis / dU in conserved variables.
Matrix jacobian(const PolytropicLaw& law, const State& state, int axis);
/// Characteristic speeds along `axis`, ascending, multiplicities expanded.
Vector eigenvalues(const PolytropicLaw& law, const State& state, int axis);
/// Largest characteristic speed over all unit directions: |v| + c for gas
/// models, |u| for Burgers.
double max_wavespeed(const PolytropicLaw& law, const State& state);
/// (f(U+).nu - sigma U+) - (f(U-).nu - sigma U-)
Vector rh_residual(const PolytropicLaw& law, const JumpData& jump);

} // namespace potflow
