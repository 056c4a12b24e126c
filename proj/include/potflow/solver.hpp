#pragma once

#include "potflow/systems.hpp"

#include <functional>
#include <span>
#include <vector>

namespace potflow {

/// Uniform periodic grid: a 1D interval with wrapped ends or a 2D torus.
struct Grid {
  int dims = 1;
  int nx = 1;
  int ny = 1;
  double lx = 1.0;
  double ly = 1.0;

  static Grid line(int cells, double length);
  static Grid torus(int nx, int ny, double lx, double ly);

  double dx() const { return lx / nx; }
  double dy() const { return dims == 2 ? ly / ny : 1.0; }
  double cell_volume() const { return dims == 2 ? dx() * dy() : dx(); }
  double min_spacing() const;
  long cells() const { return static_cast<long>(nx) * (dims == 2 ? ny : 1); }
  double x_center(int i) const { return (i + 0.5) * dx(); }
  double y_center(int j) const { return (j + 0.5) * dy(); }
  bool operator==(const Grid&) const = default;
};

/// Cell-averaged conserved variables, stored row-major as [j][i][component].
class Field {
public:
  Field(Grid grid, ModelKind model, PolytropicLaw law, double time = 0.0);

  const Grid& grid() const { return grid_; }
  ModelKind model() const { return model_; }
  const PolytropicLaw& law() const { return law_; }
  int components() const { return components_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  long index(int i, int j = 0) const { return static_cast<long>(j) * grid_.nx + i; }
  State state(long cell) const;
  void set(long cell, const State& s);
  std::span<double> values(long cell);
  std::span<const double> values(long cell) const;
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Sum over cells of each conserved component times the cell volume.
  Vector totals() const;

private:
  Grid grid_;
  ModelKind model_;
  PolytropicLaw law_;
  int components_;
  double time_;
  std::vector<double> data_;
};

enum class Integrator { ForwardEuler, SspRk2 };
enum class Perturbation { None, Laplacian };

struct RunConfig {
  double cfl = 0.45;
  double end_time = 1.0;
  /// Coefficient of the uniform viscosity eps * Laplacian(U).
  double eps = 0.0;
  Perturbation perturbation = Perturbation::Laplacian;
  Integrator integrator = Integrator::SspRk2;
  /// Times at which simulate() records snapshots (end_time is always recorded).
  std::vector<double> output_times;
  long max_steps = 10'000'000;

  void validate() const;
};

/// Rusanov flux 1/2 (f(L) + f(R)) - 1/2 alpha (R - L) with
/// alpha = max(max_wavespeed(L), max_wavespeed(R)).
Vector numerical_flux(const PolytropicLaw& law, const State& left, const State& right, int axis);

/// Largest max_wavespeed over all cells.
double max_wavespeed(const Field& field);
/// CFL step cfl * h / alpha, further limited to 0.25 h^2 / eps when eps > 0.
double stable_dt(const Field& field, const RunConfig& config);
/// Same, for a common step shared by several fields.
double stable_dt(std::span<const Field* const> fields, const RunConfig& config);

/// Conservative update by dt with periodic wrap. Throws SimulationError on a
/// vacuum or non-finite cell.
Field advance(const Field& field, const RunConfig& config, double dt);
/// advance() by stable_dt(), clipped so the step does not pass end_time.
Field step(const Field& field, const RunConfig& config);

using StepObserver = std::function<void(const Field& before, const Field& after, double dt)>;

/// Snapshots at each output time (steps are shortened to land on them
/// exactly), ending with the field at end_time.
std::vector<Field> simulate(const Field& initial, const RunConfig& config, const StepObserver& observer = {});

/// Centered-difference curl w_x - v_y per cell of a 2D potential-flow field.
std::vector<double> discrete_curl(const Field& field);

/// Sum over cells of the model's convex entropy (energy for potential,
/// isentropic and Burgers; -rho s for full Euler) times cell volume.
double total_entropy(const Field& field);
/// Sum over cells of energy() times cell volume.
double total_energy(const Field& field);

} // namespace potflow
