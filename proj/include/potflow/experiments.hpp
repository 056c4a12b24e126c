#pragma once

#include "potflow/errors.hpp"
#include "potflow/solver.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace potflow {

/// The experiment is ill-posed as configured (domain too small, run past
/// gradient blow-up).
class ExperimentError : public UsageError {
public:
  using UsageError::UsageError;
};

/// Cell-volume weighted sum of relative_entropy(field, ref) over cells.
double relative_entropy_norm(const Field& field, const Field& ref);

/// Sum over cells of |U - Ubar|^2 times cell volume.
double l2_distance_squared(const Field& field, const Field& ref);

// ---------------------------------------------------------------------------
// Support growth of a compact perturbation.

struct ConeConfig {
  double threshold = 1e-6;
  double end_time = 0.25;
  int output_count = 25;
  double cfl = 0.45;
  Integrator integrator = Integrator::SspRk2;
};

struct ConeReport {
  std::vector<double> times;
  /// Largest distance to C of a cell with sup-norm |U - Ubar| > threshold.
  std::vector<double> support_radius;
  /// Least-squares slope of support_radius against time, line through the origin.
  double fitted_speed = 0.0;
  /// sup over the run of the largest characteristic speed in either field.
  double wavespeed_bound = 0.0;
  double spacing = 0.0;
  double threshold = 0.0;
  /// Cells where the two initial fields differ.
  long support_cells = 0;
};

/// Evolves `background` and `perturbed` with the same scheme, eps = 0 and a
/// shared time step. C is the set of cells where the initial fields differ.
/// Throws ExperimentError when C is empty or the whole grid, or when the
/// perturbed region reaches the far side of the periodic domain.
ConeReport run_cone_test(const Field& background, const Field& perturbed, const ConeConfig& config = {});

/// fitted_speed within [lo, hi] times wavespeed_bound, and the radius stays
/// below fitted_speed t + 3 spacing.
bool cone_within(const ConeReport& report, double lo, double hi);

// ---------------------------------------------------------------------------
// Vanishing-viscosity sweep.

struct ConvergenceConfig {
  std::vector<double> eps_values{0.04, 0.02, 0.01, 0.005};
  double end_time = 0.5;
  /// Reference resolution factor per axis.
  int refine = 4;
  int output_count = 10;
  double cfl = 0.45;
  Integrator integrator = Integrator::SspRk2;
  double blowup_factor = 10.0;
  /// A norm counts as above the grid floor when it exceeds floor_factor * floor.
  double floor_factor = 2.0;
  double ratio_lo = 0.3;
  double ratio_hi = 0.8;
  double gronwall_slack = 1e-8;
  double entropy_slack = 1e-10;
};

struct GronwallAudit {
  double rate = 0.0; // C / tau
  double tau = 0.0;
  double c = 0.0;
  bool holds = true;
  /// Largest (lhs - rhs) over output intervals; <= slack when holds.
  double worst_excess = -std::numeric_limits<double>::infinity();
};

struct ViscousRun {
  double eps = 0.0;
  std::vector<double> times;
  /// Relative-entropy norm against the reference at each output time.
  std::vector<double> norms;
  /// eps |sum Ubar_x . H(Ubar) U_x| vol at each output time.
  std::vector<double> boundary_terms;
  GronwallAudit gronwall;
  /// Largest per-step relative increase of the total convex entropy.
  double worst_entropy_increase = -std::numeric_limits<double>::infinity();
  bool entropy_ok = true;
  long steps = 0;
};

struct ConvergenceReport {
  std::vector<double> eps_values;
  std::vector<double> relent_norms;
  std::vector<double> ratios;
  /// Norm of the eps = 0 run at the working resolution against the reference.
  double grid_floor = 0.0;
  /// Number of leading entries above the grid floor.
  int above_floor = 0;
  double fitted_order = 0.0;
  double max_gradient_initial = 0.0;
  double max_gradient_final = 0.0;
  bool decreasing = false;
  bool ratios_ok = false;
  bool gronwall_ok = false;
  bool entropy_ok = false;
  std::vector<ViscousRun> runs;

  bool pass() const { return decreasing && ratios_ok && gronwall_ok && entropy_ok; }
};

/// Builds the initial field on a given grid.
using FieldFactory = std::function<Field(const Grid&)>;

/// Runs each eps in the sweep (concurrently) on `grid` and compares against
/// the eps = 0 run on the grid refined `refine` times per axis, averaged back.
/// Throws ExperimentError if eps_values is not strictly decreasing and
/// positive, or if the reference gradient exceeds blowup_factor times its
/// initial value.
ConvergenceReport run_viscous_convergence(const FieldFactory& initial, const Grid& grid,
                                          const ConvergenceConfig& config = {});

/// Cell averages of `fine` over blocks matching `coarse_grid`.
Field restrict_field(const Field& fine, const Grid& coarse_grid);

/// Steepening indicator: max over cells of |d v / dx| and |d c / dx| by
/// centered differences, v the first velocity component and c the sound
/// speed. Burgers uses u alone. Tracking c catches acoustic data that starts
/// with uniform velocity.
double max_wave_gradient(const Field& field);

} // namespace potflow
