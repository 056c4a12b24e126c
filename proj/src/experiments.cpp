#include "potflow/experiments.hpp"

#include "potflow/entropy.hpp"
#include "potflow/errors.hpp"
#include "potflow/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace potflow {

namespace {

void require_same(const Field& a, const Field& b, const char* who) {
  if (!(a.grid() == b.grid()) || a.model() != b.model()) {
    throw UsageError(std::string(who) + ": fields differ in grid or model");
  }
}

double periodic_gap(double a, double b, double length) {
  const double d = std::fmod(std::abs(a - b), length);
  return std::min(d, length - d);
}

// Sup-norm of the conserved difference in one cell.
double cell_difference(const Field& a, const Field& b, long cell) {
  const auto x = a.values(cell);
  const auto y = b.values(cell);
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    worst = std::max(worst, std::abs(x[k] - y[k]));
  }
  return worst;
}

// Centered difference of every conserved component along an axis.
Vector centered_gradient(const Field& f, int i, int j, int axis) {
  const Grid& g = f.grid();
  long lo = 0;
  long hi = 0;
  double h = 0.0;
  if (axis == 0) {
    lo = f.index((i + g.nx - 1) % g.nx, j);
    hi = f.index((i + 1) % g.nx, j);
    h = g.dx();
  } else {
    lo = f.index(i, (j + g.ny - 1) % g.ny);
    hi = f.index(i, (j + 1) % g.ny);
    h = g.dy();
  }
  return (f.state(hi).u - f.state(lo).u) / (2.0 * h);
}

int rows(const Grid& g) { return g.dims == 2 ? g.ny : 1; }

double max_field_gradient(const Field& f) {
  double worst = 0.0;
  for (int j = 0; j < rows(f.grid()); ++j) {
    for (int i = 0; i < f.grid().nx; ++i) {
      for (int axis = 0; axis < f.grid().dims; ++axis) {
        worst = std::max(worst, centered_gradient(f, i, j, axis).norm());
      }
    }
  }
  return worst;
}

// eps |sum_cells sum_axes Ubar_x . H(Ubar) U_x| vol, the term left over by
// the viscous part of the relative entropy balance.
double viscous_boundary_term(const Field& field, const Field& ref, const EntropyPair& pair, double eps) {
  if (eps == 0.0) {
    return 0.0;
  }
  const Grid& g = field.grid();
  double sum = 0.0;
  for (int j = 0; j < rows(g); ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Matrix h = pair.hessian(ref.state(ref.index(i, j)));
      for (int axis = 0; axis < g.dims; ++axis) {
        sum += centered_gradient(ref, i, j, axis).dot(h * centered_gradient(field, i, j, axis));
      }
    }
  }
  return eps * std::abs(sum) * g.cell_volume();
}

void widen(StateBox& box, const Field& f) {
  const int nc = f.components();
  for (long c = 0; c < f.grid().cells(); ++c) {
    const auto v = f.values(c);
    for (int k = 0; k < nc; ++k) {
      box.lower(k) = std::min(box.lower(k), v[k]);
      box.upper(k) = std::max(box.upper(k), v[k]);
    }
  }
}

} // namespace

double relative_entropy_norm(const Field& field, const Field& ref) {
  require_same(field, ref, "relative_entropy_norm");
  double sum = 0.0;
  for (long c = 0; c < field.grid().cells(); ++c) {
    const RelativeEntropy e = relative_entropy(field.law(), field.state(c), ref.state(c));
    if (e.convexity_warning) {
      throw DomainError("relative_entropy_norm: reference cell " + std::to_string(c) + " is not subsonic");
    }
    sum += e.value;
  }
  return sum * field.grid().cell_volume();
}

double l2_distance_squared(const Field& field, const Field& ref) {
  require_same(field, ref, "l2_distance_squared");
  double sum = 0.0;
  const auto& a = field.data();
  const auto& b = ref.data();
  for (std::size_t k = 0; k < a.size(); ++k) {
    sum += (a[k] - b[k]) * (a[k] - b[k]);
  }
  return sum * field.grid().cell_volume();
}

// ---------------------------------------------------------------------------

ConeReport run_cone_test(const Field& background, const Field& perturbed, const ConeConfig& config) {
  require_same(background, perturbed, "run_cone_test");
  if (!(config.threshold > 0.0) || !(config.end_time > 0.0) || config.output_count < 1) {
    throw UsageError("run_cone_test: threshold, end_time and output_count must be positive");
  }
  const Grid& g = background.grid();
  const long cells = g.cells();

  std::vector<long> support;
  for (long c = 0; c < cells; ++c) {
    if (cell_difference(background, perturbed, c) > 0.0) {
      support.push_back(c);
    }
  }

  ConeReport report;
  report.spacing = g.min_spacing();
  report.threshold = config.threshold;
  report.support_cells = static_cast<long>(support.size());
  if (support.size() == static_cast<std::size_t>(cells)) {
    throw ExperimentError("run_cone_test: perturbation covers the whole domain");
  }

  // Distance of every cell center to the nearest center in C.
  std::vector<double> dist(static_cast<std::size_t>(cells), std::numeric_limits<double>::infinity());
  const auto center = [&](long c) {
    const int i = static_cast<int>(c % g.nx);
    const int j = static_cast<int>(c / g.nx);
    return std::array<double, 2>{g.x_center(i), g.dims == 2 ? g.y_center(j) : 0.0};
  };
  parallel_for(static_cast<std::size_t>(cells), [&](std::size_t c) {
    const auto p = center(static_cast<long>(c));
    double best = std::numeric_limits<double>::infinity();
    for (long s : support) {
      const auto q = center(s);
      const double dx = periodic_gap(p[0], q[0], g.lx);
      const double dy = g.dims == 2 ? periodic_gap(p[1], q[1], g.ly) : 0.0;
      best = std::min(best, std::hypot(dx, dy));
    }
    dist[c] = best;
  });
  const double far = support.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());

  RunConfig run;
  run.cfl = config.cfl;
  run.integrator = config.integrator;
  run.eps = 0.0;
  run.perturbation = Perturbation::None;
  run.end_time = config.end_time;

  Field a = background;
  Field b = perturbed;
  report.wavespeed_bound = std::max(max_wavespeed(a), max_wavespeed(b));
  const double wrap_margin = 2.0 * report.spacing;

  for (int k = 1; k <= config.output_count; ++k) {
    const double stop = config.end_time * k / config.output_count;
    while (a.time() < stop) {
      const Field* both[] = {&a, &b};
      const double remaining = stop - a.time();
      double dt = std::min(stable_dt(std::span<const Field* const>(both), run), remaining);
      if (dt < remaining && remaining - dt < 1e-3 * dt) {
        dt = remaining;
      }
      a = advance(a, run, dt);
      b = advance(b, run, dt);
      if (dt == remaining) {
        a.set_time(stop);
        b.set_time(stop);
      }
      report.wavespeed_bound = std::max({report.wavespeed_bound, max_wavespeed(a), max_wavespeed(b)});
    }
    double radius = 0.0;
    for (long c = 0; c < cells; ++c) {
      if (cell_difference(a, b, c) > config.threshold) {
        radius = std::max(radius, dist[c]);
      }
    }
    if (!support.empty() && radius >= far - wrap_margin) {
      throw ExperimentError("run_cone_test: perturbation wrapped around the periodic domain by t = " +
                            std::to_string(stop) + "; use a larger domain or an earlier end_time");
    }
    report.times.push_back(stop);
    report.support_radius.push_back(radius);
  }

  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    num += report.times[k] * report.support_radius[k];
    den += report.times[k] * report.times[k];
  }
  report.fitted_speed = num / den;
  return report;
}

bool cone_within(const ConeReport& report, double lo, double hi) {
  const double ratio = report.fitted_speed / report.wavespeed_bound;
  if (!(ratio >= lo && ratio <= hi)) {
    return false;
  }
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    if (report.support_radius[k] > report.fitted_speed * report.times[k] + 3.0 * report.spacing) {
      return false;
    }
    if (k > 0 && report.support_radius[k] < report.support_radius[k - 1]) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Field restrict_field(const Field& fine, const Grid& coarse_grid) {
  const Grid& fg = fine.grid();
  if (fg.dims != coarse_grid.dims || fg.nx % coarse_grid.nx != 0 ||
      (fg.dims == 2 && fg.ny % coarse_grid.ny != 0) || fg.lx != coarse_grid.lx ||
      (fg.dims == 2 && fg.ly != coarse_grid.ly)) {
    throw UsageError("restrict_field: fine grid does not refine the coarse grid");
  }
  const int rx = fg.nx / coarse_grid.nx;
  const int ry = fg.dims == 2 ? fg.ny / coarse_grid.ny : 1;
  Field out(coarse_grid, fine.model(), fine.law(), fine.time());
  const int nc = fine.components();
  const double scale = 1.0 / (rx * ry);
  for (int j = 0; j < rows(coarse_grid); ++j) {
    for (int i = 0; i < coarse_grid.nx; ++i) {
      auto dst = out.values(out.index(i, j));
      std::fill(dst.begin(), dst.end(), 0.0);
      for (int b = 0; b < ry; ++b) {
        for (int a = 0; a < rx; ++a) {
          const auto src = fine.values(fine.index(i * rx + a, j * ry + b));
          for (int k = 0; k < nc; ++k) {
            dst[k] += src[k];
          }
        }
      }
      for (int k = 0; k < nc; ++k) {
        dst[k] *= scale;
      }
    }
  }
  return out;
}

double max_wave_gradient(const Field& field) {
  const Grid& g = field.grid();
  const bool burgers = field.model() == ModelKind::Burgers;
  const auto wave = [&](int i, int j) -> std::array<double, 2> {
    const State s = field.state(field.index(i, j));
    if (burgers) {
      return {s.u(0), 0.0};
    }
    const Primitives p = primitives(field.law(), s);
    return {p.velocity[0], p.sound_speed};
  };
  double worst = 0.0;
  for (int j = 0; j < rows(g); ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const auto hi = wave((i + 1) % g.nx, j);
      const auto lo = wave((i + g.nx - 1) % g.nx, j);
      for (int k = 0; k < 2; ++k) {
        worst = std::max(worst, std::abs(hi[k] - lo[k]) / (2.0 * g.dx()));
      }
    }
  }
  return worst;
}

ConvergenceReport run_viscous_convergence(const FieldFactory& initial, const Grid& grid,
                                          const ConvergenceConfig& config) {
  const auto& eps = config.eps_values;
  if (eps.empty()) {
    throw ExperimentError("run_viscous_convergence: empty eps list");
  }
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] >= 0.0) || (k > 0 && !(eps[k] < eps[k - 1]))) {
      throw ExperimentError("run_viscous_convergence: eps values must be nonnegative and strictly decreasing");
    }
  }
  if (config.refine < 1 || config.output_count < 1 || !(config.end_time > 0.0)) {
    throw UsageError("run_viscous_convergence: refine, output_count and end_time must be positive");
  }

  std::vector<double> outputs;
  for (int k = 1; k < config.output_count; ++k) {
    outputs.push_back(config.end_time * k / config.output_count);
  }

  RunConfig base;
  base.cfl = config.cfl;
  base.integrator = config.integrator;
  base.end_time = config.end_time;
  base.output_times = outputs;
  base.perturbation = Perturbation::Laplacian;

  // Reference: inviscid run on the refined grid, averaged back.
  Grid fine_grid = grid;
  fine_grid.nx *= config.refine;
  if (grid.dims == 2) {
    fine_grid.ny *= config.refine;
  }
  const Field fine0 = initial(fine_grid);
  const Field coarse0 = initial(grid);
  if (!(coarse0.grid() == grid) || !(fine0.grid() == fine_grid)) {
    throw UsageError("run_viscous_convergence: factory returned a field on the wrong grid");
  }

  ConvergenceReport report;
  report.eps_values = eps;
  report.max_gradient_initial = max_wave_gradient(fine0);

  RunConfig ref_cfg = base;
  ref_cfg.eps = 0.0;
  const std::vector<Field> fine_traj = simulate(fine0, ref_cfg);
  std::vector<Field> reference{coarse0};
  for (const Field& f : fine_traj) {
    const double grad = max_wave_gradient(f);
    report.max_gradient_final = std::max(report.max_gradient_final, grad);
    if (grad > config.blowup_factor * std::max(report.max_gradient_initial, 1e-300)) {
      throw ExperimentError("run_viscous_convergence: gradient blew up by t = " + std::to_string(f.time()) +
                            "; end_time is past shock formation");
    }
    reference.push_back(restrict_field(f, grid));
  }

  const PolytropicLaw& law = coarse0.law();
  const EntropyPair pair = convex_entropy_pair(law, coarse0.model());

  // Each sweep member plus the inviscid working-resolution run for the floor.
  std::vector<double> all_eps = eps;
  all_eps.push_back(0.0);
  std::vector<ViscousRun> runs(all_eps.size());
  std::vector<std::vector<Field>> trajectories(all_eps.size());
  parallel_for(all_eps.size(), [&](std::size_t r) {
    RunConfig cfg = base;
    cfg.eps = all_eps[r];
    ViscousRun& run = runs[r];
    run.eps = all_eps[r];
    const auto observer = [&](const Field& before, const Field& after, double) {
      ++run.steps;
      const double e0 = total_entropy(before);
      const double e1 = total_entropy(after);
      const double increase = (e1 - e0) / std::max(std::abs(e0), 1e-300);
      run.worst_entropy_increase = std::max(run.worst_entropy_increase, increase);
    };
    std::vector<Field> traj{coarse0};
    for (Field& f : simulate(coarse0, cfg, observer)) {
      traj.push_back(std::move(f));
    }
    run.entropy_ok = run.worst_entropy_increase <= config.entropy_slack;
    trajectories[r] = std::move(traj);
  });

  // Gronwall constants over every state the audit will see.
  const int nc = coarse0.components();
  StateBox box{Vector::Constant(nc, std::numeric_limits<double>::infinity()),
               Vector::Constant(nc, -std::numeric_limits<double>::infinity())};
  double ref_gradient = 0.0;
  for (const Field& f : reference) {
    widen(box, f);
    ref_gradient = std::max(ref_gradient, max_field_gradient(f));
  }
  for (const auto& traj : trajectories) {
    for (const Field& f : traj) {
      widen(box, f);
    }
  }
  const QuadraticConstants qc = scan_quadratic_constants(law, coarse0.model(), grid.dims, box, ref_gradient);

  for (std::size_t r = 0; r < runs.size(); ++r) {
    ViscousRun& run = runs[r];
    const auto& traj = trajectories[r];
    for (std::size_t k = 0; k < traj.size(); ++k) {
      run.times.push_back(traj[k].time());
      run.norms.push_back(relative_entropy_norm(traj[k], reference[k]));
      run.boundary_terms.push_back(viscous_boundary_term(traj[k], reference[k], pair, run.eps));
    }
    GronwallAudit& audit = run.gronwall;
    audit.tau = qc.tau;
    audit.c = qc.c;
    audit.rate = qc.c / qc.tau;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      const double dt = run.times[k + 1] - run.times[k];
      const double lhs = run.norms[k + 1] - run.norms[k];
      const double rhs = dt * (audit.rate * std::max(run.norms[k], run.norms[k + 1]) +
                               std::max(run.boundary_terms[k], run.boundary_terms[k + 1]));
      audit.worst_excess = std::max(audit.worst_excess, lhs - rhs);
    }
    audit.holds = audit.worst_excess <= config.gronwall_slack;
  }

  report.grid_floor = runs.back().norms.back();
  for (std::size_t r = 0; r < eps.size(); ++r) {
    report.relent_norms.push_back(runs[r].norms.back());
  }

  const double floor = config.floor_factor * report.grid_floor;
  while (report.above_floor < static_cast<int>(eps.size()) && eps[report.above_floor] > 0.0 &&
         report.relent_norms[report.above_floor] > floor) {
    ++report.above_floor;
  }

  report.decreasing = true;
  for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
    const double ratio = report.relent_norms[k + 1] / report.relent_norms[k];
    report.ratios.push_back(ratio);
    if (static_cast<int>(k + 1) < report.above_floor && !(ratio < 1.0)) {
      report.decreasing = false;
    }
  }
  report.ratios_ok = report.above_floor >= 2;
  for (int k = 0; k + 1 < report.above_floor; ++k) {
    report.ratios_ok = report.ratios_ok && report.ratios[k] >= config.ratio_lo && report.ratios[k] <= config.ratio_hi;
  }

  if (report.above_floor >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int n = report.above_floor;
    for (int k = 0; k < n; ++k) {
      const double x = std::log(eps[k]);
      const double y = std::log(report.relent_norms[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  report.gronwall_ok = true;
  report.entropy_ok = true;
  for (std::size_t r = 0; r < eps.size(); ++r) {
    report.gronwall_ok = report.gronwall_ok && runs[r].gronwall.holds;
    report.entropy_ok = report.entropy_ok && runs[r].entropy_ok;
  }
  runs.pop_back();
  report.runs = std::move(runs);
  return report;
}

} // namespace potflow
