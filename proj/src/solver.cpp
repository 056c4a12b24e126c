#include "potflow/solver.hpp"

#include "potflow/entropy.hpp"
#include "potflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace potflow {

Grid Grid::line(int cells, double length) {
  if (cells < 3 || !(length > 0.0)) {
    throw UsageError("grid needs at least 3 cells and a positive length");
  }
  return Grid{1, cells, 1, length, 1.0};
}

Grid Grid::torus(int nx, int ny, double lx, double ly) {
  if (nx < 3 || ny < 3 || !(lx > 0.0) || !(ly > 0.0)) {
    throw UsageError("torus needs at least 3 cells per axis and positive lengths");
  }
  return Grid{2, nx, ny, lx, ly};
}

double Grid::min_spacing() const { return dims == 2 ? std::min(dx(), dy()) : dx(); }

Field::Field(Grid grid, ModelKind model, PolytropicLaw law, double time)
    : grid_(grid), model_(model), law_(law), components_(state_size(model, grid.dims)), time_(time),
      data_(static_cast<std::size_t>(grid.cells() * components_), 0.0) {}

State Field::state(long cell) const {
  Vector u(components_);
  const double* p = data_.data() + cell * components_;
  for (int k = 0; k < components_; ++k) {
    u(k) = p[k];
  }
  return State{model_, grid_.dims, u};
}

void Field::set(long cell, const State& s) {
  if (s.model != model_ || s.u.size() != components_) {
    throw UsageError("Field::set: state does not match the field's model");
  }
  double* p = data_.data() + cell * components_;
  for (int k = 0; k < components_; ++k) {
    p[k] = s.u(k);
  }
}

std::span<double> Field::values(long cell) {
  return {data_.data() + cell * components_, static_cast<std::size_t>(components_)};
}

std::span<const double> Field::values(long cell) const {
  return {data_.data() + cell * components_, static_cast<std::size_t>(components_)};
}

Vector Field::totals() const {
  Vector sum = Vector::Zero(components_);
  for (long c = 0; c < grid_.cells(); ++c) {
    for (int k = 0; k < components_; ++k) {
      sum(k) += data_[c * components_ + k];
    }
  }
  return sum * grid_.cell_volume();
}

void RunConfig::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) {
    throw UsageError("cfl must lie in (0, 1)");
  }
  if (!(end_time > 0.0)) {
    throw UsageError("end_time must be positive");
  }
  if (!(eps >= 0.0)) {
    throw UsageError("viscosity eps must be non-negative");
  }
  for (double t : output_times) {
    if (!(t >= 0.0) || t > end_time) {
      throw UsageError("output times must lie in [0, end_time]");
    }
  }
}

Vector numerical_flux(const PolytropicLaw& law, const State& left, const State& right, int axis) {
  if (left.model != right.model || left.dims != right.dims) {
    throw UsageError("numerical_flux: states must share model and dimension");
  }
  const double alpha = std::max(max_wavespeed(law, left), max_wavespeed(law, right));
  return 0.5 * (flux(law, left, axis) + flux(law, right, axis)) - 0.5 * alpha * (right.u - left.u);
}

double max_wavespeed(const Field& field) {
  double alpha = 0.0;
  for (long c = 0; c < field.grid().cells(); ++c) {
    alpha = std::max(alpha, max_wavespeed(field.law(), field.state(c)));
  }
  return alpha;
}

double stable_dt(std::span<const Field* const> fields, const RunConfig& config) {
  double dt = std::numeric_limits<double>::infinity();
  for (const Field* f : fields) {
    const double h = f->grid().min_spacing();
    const double alpha = max_wavespeed(*f);
    if (alpha > 0.0) {
      dt = std::min(dt, config.cfl * h / alpha);
    }
    if (config.eps > 0.0 && config.perturbation == Perturbation::Laplacian) {
      dt = std::min(dt, 0.25 * h * h / config.eps);
    }
  }
  return dt;
}

double stable_dt(const Field& field, const RunConfig& config) {
  const Field* one[] = {&field};
  return stable_dt(std::span<const Field* const>(one), config);
}

namespace {

// Per-cell flux and wavespeed, evaluated once per stage.
struct CellData {
  std::vector<double> flux_x;
  std::vector<double> flux_y;
  std::vector<double> alpha;
};

[[noreturn]] void fail_cell(const Field& field, long cell, const std::string& why) {
  throw SimulationError("cell " + std::to_string(cell) + " at t = " + std::to_string(field.time()) + ": " + why,
                        cell, field.time());
}

CellData evaluate_cells(const Field& field) {
  const Grid& g = field.grid();
  const int nc = field.components();
  const long cells = g.cells();
  CellData cd;
  cd.flux_x.resize(cells * nc);
  if (g.dims == 2) {
    cd.flux_y.resize(cells * nc);
  }
  cd.alpha.resize(cells);
  for (long c = 0; c < cells; ++c) {
    const State s = field.state(c);
    if (!s.u.allFinite()) {
      fail_cell(field, c, "non-finite state");
    }
    try {
      cd.alpha[c] = max_wavespeed(field.law(), s);
      const Vector fx = flux(field.law(), s, 0);
      for (int k = 0; k < nc; ++k) {
        cd.flux_x[c * nc + k] = fx(k);
      }
      if (g.dims == 2) {
        const Vector fy = flux(field.law(), s, 1);
        for (int k = 0; k < nc; ++k) {
          cd.flux_y[c * nc + k] = fy(k);
        }
      }
    } catch (const DomainError& e) {
      fail_cell(field, c, e.what());
    }
  }
  return cd;
}

// dU/dt for the semi-discrete scheme.
std::vector<double> rate(const Field& field, const RunConfig& config) {
  const Grid& g = field.grid();
  const int nc = field.components();
  const CellData cd = evaluate_cells(field);
  const std::vector<double>& u = field.data();
  std::vector<double> dudt(u.size(), 0.0);

  // Potential flow in 2D uses one dissipation speed for all faces so the
  // velocity update is a discrete gradient plus a constant-coefficient
  // Laplacian, which commutes with the centered curl.
  const bool global_alpha = field.model() == ModelKind::PotentialFlow && g.dims == 2;
  const double alpha_max = global_alpha ? *std::max_element(cd.alpha.begin(), cd.alpha.end()) : 0.0;

  const auto add_faces = [&](const std::vector<double>& f, int axis) {
    const int n_along = axis == 0 ? g.nx : g.ny;
    const int n_across = axis == 0 ? (g.dims == 2 ? g.ny : 1) : g.nx;
    const double inv_h = 1.0 / (axis == 0 ? g.dx() : g.dy());
    const double visc = config.perturbation == Perturbation::Laplacian ? config.eps * inv_h * inv_h : 0.0;
    for (int a = 0; a < n_across; ++a) {
      for (int i = 0; i < n_along; ++i) {
        const int ip = (i + 1) % n_along;
        const long left = axis == 0 ? field.index(i, a) : field.index(a, i);
        const long right = axis == 0 ? field.index(ip, a) : field.index(a, ip);
        const double alpha = global_alpha ? alpha_max : std::max(cd.alpha[left], cd.alpha[right]);
        for (int k = 0; k < nc; ++k) {
          const double jump = u[right * nc + k] - u[left * nc + k];
          const double face = 0.5 * (f[left * nc + k] + f[right * nc + k]) - 0.5 * alpha * jump;
          const double net = face * inv_h - visc * jump;
          dudt[left * nc + k] -= net;
          dudt[right * nc + k] += net;
        }
      }
    }
  };
  add_faces(cd.flux_x, 0);
  if (g.dims == 2) {
    add_faces(cd.flux_y, 1);
  }
  return dudt;
}

void check_field(const Field& field) {
  const int nc = field.components();
  const auto& u = field.data();
  for (long c = 0; c < field.grid().cells(); ++c) {
    for (int k = 0; k < nc; ++k) {
      if (!std::isfinite(u[c * nc + k])) {
        fail_cell(field, c, "non-finite value");
      }
    }
    if (field.model() != ModelKind::Burgers && !(u[c * nc] >= kVacuumDensity)) {
      fail_cell(field, c, "vacuum (rho = " + std::to_string(u[c * nc]) + ")");
    }
  }
}

Field euler_stage(const Field& field, const RunConfig& config, double dt) {
  const std::vector<double> dudt = rate(field, config);
  Field next = field;
  auto& u = next.data();
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] += dt * dudt[k];
  }
  next.set_time(field.time() + dt);
  check_field(next);
  return next;
}

} // namespace

Field advance(const Field& field, const RunConfig& config, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw UsageError("advance: dt must be positive and finite");
  }
  Field first = euler_stage(field, config, dt);
  if (config.integrator == Integrator::ForwardEuler) {
    return first;
  }
  const Field second = euler_stage(first, config, dt);
  auto& u = first.data();
  const auto& u0 = field.data();
  const auto& u2 = second.data();
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = 0.5 * (u0[k] + u2[k]);
  }
  first.set_time(field.time() + dt);
  return first;
}

Field step(const Field& field, const RunConfig& config) {
  double dt = stable_dt(field, config);
  const double remaining = config.end_time - field.time();
  if (!(remaining > 0.0)) {
    throw UsageError("step: field is already at end_time");
  }
  dt = std::min(dt, remaining);
  Field next = advance(field, config, dt);
  if (dt == remaining) {
    next.set_time(config.end_time);
  }
  return next;
}

std::vector<Field> simulate(const Field& initial, const RunConfig& config, const StepObserver& observer) {
  config.validate();
  std::vector<double> stops = config.output_times;
  stops.push_back(config.end_time);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  std::vector<Field> out;
  Field current = initial;
  check_field(current);
  long steps = 0;
  for (double stop : stops) {
    while (current.time() < stop) {
      if (++steps > config.max_steps) {
        throw NumericError("simulate: exceeded max_steps");
      }
      const double remaining = stop - current.time();
      double dt = std::min(stable_dt(current, config), remaining);
      // avoid a sliver step right before an output time
      if (dt < remaining && remaining - dt < 1e-3 * dt) {
        dt = remaining;
      }
      Field next = advance(current, config, dt);
      if (dt == remaining) {
        next.set_time(stop);
      }
      if (observer) {
        observer(current, next, dt);
      }
      current = std::move(next);
    }
    out.push_back(current);
  }
  return out;
}

std::vector<double> discrete_curl(const Field& field) {
  const Grid& g = field.grid();
  if (field.model() != ModelKind::PotentialFlow || g.dims != 2) {
    throw UsageError("discrete_curl needs a 2D potential-flow field");
  }
  const auto& u = field.data();
  const int nc = field.components();
  std::vector<double> curl(static_cast<std::size_t>(g.cells()));
  for (int j = 0; j < g.ny; ++j) {
    const int jp = (j + 1) % g.ny;
    const int jm = (j + g.ny - 1) % g.ny;
    for (int i = 0; i < g.nx; ++i) {
      const int ip = (i + 1) % g.nx;
      const int im = (i + g.nx - 1) % g.nx;
      const double w_x = (u[field.index(ip, j) * nc + 2] - u[field.index(im, j) * nc + 2]) / (2.0 * g.dx());
      const double v_y = (u[field.index(i, jp) * nc + 1] - u[field.index(i, jm) * nc + 1]) / (2.0 * g.dy());
      curl[field.index(i, j)] = w_x - v_y;
    }
  }
  return curl;
}

double total_entropy(const Field& field) {
  const EntropyPair pair = convex_entropy_pair(field.law(), field.model());
  double sum = 0.0;
  for (long c = 0; c < field.grid().cells(); ++c) {
    sum += pair.eta(field.state(c));
  }
  return sum * field.grid().cell_volume();
}

double total_energy(const Field& field) {
  double sum = 0.0;
  for (long c = 0; c < field.grid().cells(); ++c) {
    sum += energy(field.law(), field.state(c));
  }
  return sum * field.grid().cell_volume();
}

} // namespace potflow
