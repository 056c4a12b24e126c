#pragma once

#include "potflow/systems.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace potflow {

/// Stationary normal shock (sigma = 0, normal +x) with flow from left to right.
struct ShockPoint {
  ModelKind model = ModelKind::PotentialFlow;
  double gamma = 1.4;
  State upstream;
  State downstream;
  double mach_up = 0.0;
  double mach_down = 0.0;
  /// Energy production sigma [E] - [(E+p) v]; zero for full Euler up to roundoff.
  double production = 0.0;
  /// Production of -rho s (full Euler only, otherwise 0).
  double physical_production = 0.0;
  /// max_k |RH residual_k| / max(1, |flux_k|)
  double rh_residual = 0.0;
};

/// Largest density ratio searched by the shock solver.
inline constexpr double kMaxDensityRatio = 1e12;

/// Compressive (rho+ > rho-) solution of the model's jump conditions for
/// upstream Mach number mach_up > 1, found by bisection on the density ratio.
ShockPoint solve_stationary_shock(ModelKind model, const PolytropicLaw& law, double mach_up, double rho_up = 1.0);

struct ShockRow {
  double mach_up = 0.0;
  ShockPoint point;
  bool ok = true;
  std::string error;
};

/// `samples` equally spaced upstream Mach numbers in [lo, hi].
std::vector<ShockRow> shock_curve(ModelKind model, const PolytropicLaw& law, double lo, double hi, int samples);

/// |M+^A(1+eps) - M+^B(1+eps)|
double weak_shock_gap(ModelKind a, ModelKind b, const PolytropicLaw& law, double eps);

/// CSV with header model,gamma,mach_up,mach_down,rho_down,production, values
/// in shortest round-trip form. Failed rows carry nan values.
void write_shock_csv(std::ostream& out, const std::vector<ShockRow>& rows, bool header = true);

} // namespace potflow
