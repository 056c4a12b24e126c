#include "potflow/shocks.hpp"

#include "potflow/format.hpp"

#include "potflow/entropy.hpp"
#include "potflow/errors.hpp"
#include "potflow/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

namespace potflow {

namespace {

struct Upstream {
  double rho;
  double v;
  double p;
  double c;
};

// Downstream state for a given density ratio with mass flux matched exactly.
State downstream_state(ModelKind model, const PolytropicLaw& law, const Upstream& up, double ratio) {
  const double rho = ratio * up.rho;
  const double v = up.v / ratio;
  if (model == ModelKind::FullEuler) {
    const double m = up.rho * up.v;
    const double p = up.p + m * (up.v - v);
    return State::from_primitive(law, model, 1, rho, {v, 0.0}, p);
  }
  return State::from_primitive(law, model, 1, rho, {v, 0.0});
}

// Residual of the one jump condition not already enforced, scaled by its upstream value.
double jump_residual(ModelKind model, const PolytropicLaw& law, const Upstream& up, double ratio) {
  const double rho = ratio * up.rho;
  const double v = up.v / ratio;
  const double m = up.rho * up.v;
  switch (model) {
  case ModelKind::PotentialFlow: {
    const double b_up = 0.5 * up.v * up.v + pi(law, up.rho);
    return (0.5 * v * v + pi(law, rho) - b_up) / b_up;
  }
  case ModelKind::IsentropicEuler: {
    const double flux_up = m * up.v + up.p;
    return (m * v + pressure(law, rho) - flux_up) / flux_up;
  }
  case ModelKind::FullEuler: {
    const double g = law.gamma();
    const double p = up.p + m * (up.v - v);
    const double h_up = g / (g - 1.0) * up.p / up.rho + 0.5 * up.v * up.v;
    return (g / (g - 1.0) * p / rho + 0.5 * v * v - h_up) / h_up;
  }
  case ModelKind::Burgers:
    break;
  }
  throw UsageError("stationary shocks are defined for the gas models only");
}

// Bisection in log(ratio) down to adjacent doubles.
double bisect_ratio(const std::function<double(double)>& f, double lo, double hi) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || (f_lo > 0.0) == (f_hi > 0.0)) {
    throw NumericError("shock solver: no bracketing root for density ratio in (1, " + std::to_string(hi) + "]");
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi) || hi - lo <= 1e-15 * lo) {
      break;
    }
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      return mid;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

} // namespace

ShockPoint solve_stationary_shock(ModelKind model, const PolytropicLaw& law, double mach_up, double rho_up) {
  if (model == ModelKind::Burgers) {
    throw UsageError("stationary shocks are defined for the gas models only");
  }
  if (!(mach_up > 1.0) || !std::isfinite(mach_up)) {
    throw DomainError("upstream Mach number must exceed 1, got " + std::to_string(mach_up));
  }
  if (!(rho_up > 0.0)) {
    throw DomainError("upstream density must be positive");
  }
  Upstream up;
  up.rho = rho_up;
  up.p = pressure(law, rho_up);
  up.c = sound_speed(law, rho_up);
  up.v = mach_up * up.c;

  const double ratio = bisect_ratio([&](double r) { return jump_residual(model, law, up, r); }, 1.0 + 1e-8,
                                    kMaxDensityRatio);

  ShockPoint pt;
  pt.model = model;
  pt.gamma = law.gamma();
  pt.upstream = State::from_primitive(law, model, 1, up.rho, {up.v, 0.0}, up.p);
  pt.downstream = downstream_state(model, law, up, ratio);
  pt.mach_up = mach_up;
  const Primitives down = primitives(law, pt.downstream);
  pt.mach_down = std::abs(down.velocity[0]) / down.sound_speed;

  const JumpData jump{pt.upstream, pt.downstream, 0.0, {1.0, 0.0}};
  pt.production = entropy_production(law, jump, energy_pair(law, model)).value;
  if (model == ModelKind::FullEuler) {
    pt.physical_production = entropy_production(law, jump, physical_entropy_pair(law)).value;
  }
  const Vector residual = rh_residual(law, jump);
  const Vector scale = normal_flux(law, pt.upstream, jump.nu).cwiseAbs().cwiseMax(1.0);
  pt.rh_residual = residual.cwiseAbs().cwiseQuotient(scale).maxCoeff();
  return pt;
}

std::vector<ShockRow> shock_curve(ModelKind model, const PolytropicLaw& law, double lo, double hi, int samples) {
  if (!(lo > 1.0) || !(hi > lo || (samples == 1 && hi == lo))) {
    throw DomainError("shock_curve: need 1 < lo < hi");
  }
  if (samples < 1) {
    throw UsageError("shock_curve: samples must be positive");
  }
  std::vector<ShockRow> rows(samples);
  parallel_for(rows.size(), [&](std::size_t i) {
    ShockRow& row = rows[i];
    row.mach_up = samples == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    try {
      row.point = solve_stationary_shock(model, law, row.mach_up);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      row.point.model = model;
      row.point.gamma = law.gamma();
      row.point.mach_up = row.mach_up;
    }
  });
  return rows;
}

double weak_shock_gap(ModelKind a, ModelKind b, const PolytropicLaw& law, double eps) {
  if (!(eps > 0.0)) {
    throw DomainError("weak_shock_gap: eps must be positive");
  }
  if (a == b) {
    return 0.0;
  }
  return std::abs(solve_stationary_shock(a, law, 1.0 + eps).mach_down -
                  solve_stationary_shock(b, law, 1.0 + eps).mach_down);
}

void write_shock_csv(std::ostream& out, const std::vector<ShockRow>& rows, bool header) {
  if (header) {
    out << "model,gamma,mach_up,mach_down,rho_down,production\n";
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : rows) {
    const double mach_down = row.ok ? row.point.mach_down : nan;
    const double rho_down = row.ok ? row.point.downstream.u(0) : nan;
    const double production = row.ok ? row.point.production : nan;
    out << model_name(row.point.model) << ',' << format_double(row.point.gamma) << ','
        << format_double(row.mach_up) << ',' << format_double(mach_down) << ',' << format_double(rho_down) << ','
        << format_double(production) << '\n';
  }
}

} // namespace potflow
