#include "potflow/entropy.hpp"

#include "potflow/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace potflow {

double energy(const PolytropicLaw& law, const State& s) {
  if (s.model == ModelKind::Burgers) {
    return 0.5 * s.u(0) * s.u(0);
  }
  const Primitives p = primitives(law, s);
  if (s.model == ModelKind::FullEuler) {
    return s.u(1 + s.dims);
  }
  const double speed2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
  return internal_energy(law, p.rho) + 0.5 * p.rho * speed2;
}

double energy_flux(const PolytropicLaw& law, const State& s, int axis) {
  if (axis < 0 || axis >= s.dims) {
    throw UsageError("energy_flux: axis out of range");
  }
  if (s.model == ModelKind::Burgers) {
    return s.u(0) * s.u(0) * s.u(0) / 3.0;
  }
  const Primitives p = primitives(law, s);
  if (s.model == ModelKind::PotentialFlow) {
    const double speed2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
    const double bernoulli = 0.5 * speed2 + pi(law, p.rho);
    return p.rho * bernoulli * p.velocity[axis];
  }
  return (energy(law, s) + p.pressure) * p.velocity[axis];
}

namespace {

Vector energy_gradient(const PolytropicLaw& law, const State& s) {
  Vector g = Vector::Zero(s.u.size());
  if (s.model == ModelKind::Burgers) {
    g(0) = s.u(0);
    return g;
  }
  if (s.model == ModelKind::FullEuler) {
    g(1 + s.dims) = 1.0;
    return g;
  }
  const Primitives p = primitives(law, s);
  const double speed2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
  if (s.model == ModelKind::PotentialFlow) {
    g(0) = pi(law, p.rho) + 0.5 * speed2;
    for (int d = 0; d < s.dims; ++d) {
      g(1 + d) = p.rho * p.velocity[d];
    }
  } else {
    g(0) = pi(law, p.rho) - 0.5 * speed2;
    for (int d = 0; d < s.dims; ++d) {
      g(1 + d) = p.velocity[d];
    }
  }
  return g;
}

Matrix energy_hessian(const PolytropicLaw& law, const State& s) {
  const int n = static_cast<int>(s.u.size());
  Matrix h = Matrix::Zero(n, n);
  if (s.model == ModelKind::Burgers) {
    h(0, 0) = 1.0;
    return h;
  }
  if (s.model == ModelKind::FullEuler) {
    return h;
  }
  const Primitives p = primitives(law, s);
  const double pi_rho = pi_derivative(law, p.rho);
  if (s.model == ModelKind::PotentialFlow) {
    h(0, 0) = pi_rho;
    for (int d = 0; d < s.dims; ++d) {
      h(0, 1 + d) = h(1 + d, 0) = p.velocity[d];
      h(1 + d, 1 + d) = p.rho;
    }
  } else {
    const double speed2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
    h(0, 0) = pi_rho + speed2 / p.rho;
    for (int d = 0; d < s.dims; ++d) {
      h(0, 1 + d) = h(1 + d, 0) = -p.velocity[d] / p.rho;
      h(1 + d, 1 + d) = 1.0 / p.rho;
    }
  }
  return h;
}

double physical_entropy(const PolytropicLaw& law, const State& s) {
  const Primitives p = primitives(law, s);
  return -p.rho * gas_dynamic_entropy(law, p.rho, p.q_heat);
}

Vector physical_entropy_gradient(const PolytropicLaw& law, const State& s) {
  const Primitives p = primitives(law, s);
  const double g = law.gamma();
  const double entropy = gas_dynamic_entropy(law, p.rho, p.q_heat);
  const double speed2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
  const double dp_drho = (g - 1.0) * 0.5 * speed2;
  Vector grad(s.u.size());
  grad(0) = -entropy + g - p.rho * dp_drho / p.pressure;
  for (int d = 0; d < s.dims; ++d) {
    grad(1 + d) = p.rho * (g - 1.0) * p.velocity[d] / p.pressure;
  }
  grad(1 + s.dims) = -p.rho * (g - 1.0) / p.pressure;
  return grad;
}

Matrix physical_entropy_hessian(const PolytropicLaw& law, const State& s) {
  const int n = static_cast<int>(s.u.size());
  Matrix h(n, n);
  for (int k = 0; k < n; ++k) {
    const double step = 1e-6 * std::max(1.0, std::abs(s.u(k)));
    State plus = s;
    State minus = s;
    plus.u(k) += step;
    minus.u(k) -= step;
    h.col(k) = (physical_entropy_gradient(law, plus) - physical_entropy_gradient(law, minus)) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

} // namespace

EntropyPair energy_pair(const PolytropicLaw& law, ModelKind model) {
  EntropyPair pair;
  pair.model = model;
  pair.name = model == ModelKind::Burgers ? "u^2/2" : "energy";
  pair.eta = [law](const State& s) { return energy(law, s); };
  pair.flux = [law](const State& s, int axis) { return energy_flux(law, s, axis); };
  pair.gradient = [law](const State& s) { return energy_gradient(law, s); };
  pair.hessian = [law](const State& s) { return energy_hessian(law, s); };
  return pair;
}

EntropyPair physical_entropy_pair(const PolytropicLaw& law) {
  EntropyPair pair;
  pair.model = ModelKind::FullEuler;
  pair.name = "-rho s";
  pair.eta = [law](const State& s) { return physical_entropy(law, s); };
  pair.flux = [law](const State& s, int axis) {
    return physical_entropy(law, s) * primitives(law, s).velocity[axis];
  };
  pair.gradient = [law](const State& s) { return physical_entropy_gradient(law, s); };
  pair.hessian = [law](const State& s) { return physical_entropy_hessian(law, s); };
  return pair;
}

EntropyPair convex_entropy_pair(const PolytropicLaw& law, ModelKind model) {
  return model == ModelKind::FullEuler ? physical_entropy_pair(law) : energy_pair(law, model);
}

// ---------------------------------------------------------------------------

Point3 candidate_gradient(const EntropyCandidate& c, const Point3& x) {
  if (c.gradient) {
    return c.gradient(x);
  }
  Point3 g;
  for (int k = 0; k < 3; ++k) {
    const double h = kGradientStep * std::max(1.0, std::abs(x(k)));
    Point3 xp = x;
    Point3 xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (c.value(xp) - c.value(xm)) / (2.0 * h);
  }
  return g;
}

Hessian3 candidate_hessian(const EntropyCandidate& c, const Point3& x) {
  if (c.hessian) {
    return c.hessian(x);
  }
  Point3 h;
  for (int k = 0; k < 3; ++k) {
    h(k) = kHessianStep * std::max(1.0, std::abs(x(k)));
  }
  const double f0 = c.value(x);
  Hessian3 hess;
  for (int a = 0; a < 3; ++a) {
    Point3 xp = x;
    Point3 xm = x;
    xp(a) += h(a);
    xm(a) -= h(a);
    hess(a, a) = (c.value(xp) - 2.0 * f0 + c.value(xm)) / (h(a) * h(a));
    for (int b = a + 1; b < 3; ++b) {
      Point3 pp = x, pm = x, mp = x, mm = x;
      pp(a) += h(a), pp(b) += h(b);
      pm(a) += h(a), pm(b) -= h(b);
      mp(a) -= h(a), mp(b) += h(b);
      mm(a) -= h(a), mm(b) -= h(b);
      hess(a, b) = hess(b, a) =
          (c.value(pp) - c.value(pm) - c.value(mp) + c.value(mm)) / (4.0 * h(a) * h(b));
    }
  }
  return hess;
}

EntropyCandidate energy_candidate(const PolytropicLaw& law) {
  EntropyCandidate c;
  c.name = "energy";
  c.value = [law](const Point3& x) {
    return internal_energy(law, x(0)) + 0.5 * x(0) * (x(1) * x(1) + x(2) * x(2));
  };
  c.gradient = [law](const Point3& x) {
    return Point3(pi(law, x(0)) + 0.5 * (x(1) * x(1) + x(2) * x(2)), x(0) * x(1), x(0) * x(2));
  };
  c.hessian = [law](const Point3& x) {
    Hessian3 h;
    h << pi_derivative(law, x(0)), x(1), x(2), //
        x(1), x(0), 0.0,                       //
        x(2), 0.0, x(0);
    return h;
  };
  return c;
}

namespace {

std::array<double, 5> span_basis(const PolytropicLaw& law, ModelKind model, const Point3& x) {
  const double rho = x(0);
  const double e = internal_energy(law, rho) + 0.5 * rho * (x(1) * x(1) + x(2) * x(2));
  if (model == ModelKind::PotentialFlow) {
    return {1.0, rho, x(1), x(2), e};
  }
  return {1.0, rho, rho * x(1), rho * x(2), e};
}

} // namespace

EntropyCandidate span_candidate(const PolytropicLaw& law, ModelKind model, const std::array<double, 5>& coeff) {
  if (model != ModelKind::PotentialFlow && model != ModelKind::IsentropicEuler) {
    throw UsageError("entropy span is defined for potential flow and isentropic Euler");
  }
  std::ostringstream name;
  name << "span(" << coeff[0] << "," << coeff[1] << "," << coeff[2] << "," << coeff[3] << "," << coeff[4] << ")";
  return value_candidate(name.str(), [law, model, coeff](const Point3& x) {
    const auto basis = span_basis(law, model, x);
    double sum = 0.0;
    for (int k = 0; k < 5; ++k) {
      sum += coeff[k] * basis[k];
    }
    return sum;
  });
}

EntropyCandidate one_d_entropy_candidate(const PolytropicLaw& law) {
  return value_candidate("one-d", [law](const Point3& x) { return one_d_entropy(law, x(0), x(1)); });
}

EntropyCandidate value_candidate(std::string name, std::function<double(const Point3&)> value) {
  EntropyCandidate c;
  c.name = std::move(name);
  c.value = std::move(value);
  return c;
}

EntropyCandidate named_candidate(const PolytropicLaw& law, const std::string& name) {
  if (name == "energy") {
    return energy_candidate(law);
  }
  if (name == "momentum") {
    return value_candidate(name, [](const Point3& x) { return x(0) * x(1); });
  }
  if (name == "velocity") {
    return value_candidate(name, [](const Point3& x) { return x(1); });
  }
  if (name == "kinetic") {
    return value_candidate(name, [](const Point3& x) { return 0.5 * x(0) * (x(1) * x(1) + x(2) * x(2)); });
  }
  if (name == "rho-v2") {
    return value_candidate(name, [](const Point3& x) { return x(0) * x(1) * x(1); });
  }
  if (name == "one-d") {
    return one_d_entropy_candidate(law);
  }
  if (name == "sin-v") {
    return value_candidate(name, [](const Point3& x) { return std::sin(x(1)); });
  }
  throw UsageError("unknown entropy candidate '" + name + "'");
}

Eigen::VectorXd compatibility_residual(const PolytropicLaw& law, ModelKind model, int dims,
                              const EntropyCandidate& candidate, const Point3& x) {
  if (model != ModelKind::PotentialFlow && model != ModelKind::IsentropicEuler) {
    throw UsageError("compatibility relations are implemented for potential flow and isentropic Euler");
  }
  if (dims != 1 && dims != 2) {
    throw UsageError("compatibility_residual: dims must be 1 or 2");
  }
  const double rho = x(0);
  if (!(rho > 0.0)) {
    throw DomainError("compatibility_residual: density must be positive");
  }
  const double v = x(1);
  const double w = dims == 2 ? x(2) : 0.0;
  const Point3 point(rho, v, w);
  const Point3 g = candidate_gradient(candidate, point);
  const Hessian3 h = candidate_hessian(candidate, point);
  if (!g.allFinite() || !h.allFinite()) {
    throw NumericError("compatibility_residual: non-finite derivatives of " + candidate.name);
  }
  const double pp = pi_derivative(law, rho);
  const double h_rr = h(0, 0), h_rv = h(0, 1), h_rw = h(0, 2);
  const double h_vv = h(1, 1), h_vw = h(1, 2), h_ww = h(2, 2);

  if (dims == 1) {
    Eigen::VectorXd r(1);
    r << pp * h_vv - rho * h_rr;
    return r;
  }
  Eigen::VectorXd r(6);
  r(0) = pp * h_vv - rho * h_rr;
  r(1) = pp * h_ww - rho * h_rr;
  if (model == ModelKind::PotentialFlow) {
    r(2) = v * h_rw + pp * h_vw - w * h_rv;
    r(3) = w * h_rv + pp * h_vw - v * h_rw;
    r(4) = rho * h_rw + v * h_vw - w * h_vv;
    r(5) = v * h_ww - rho * h_rv - w * h_vw;
  } else {
    r(2) = pp * h_vw;
    r(3) = pp * h_vw;
    r(4) = rho * h_rw - g(2);
    r(5) = g(1) - rho * h_rv;
  }
  return r;
}

Eigen::VectorXd compatibility_residual(const PolytropicLaw& law, ModelKind model, const EntropyCandidate& candidate,
                              const State& state) {
  if (state.model != model) {
    throw UsageError("compatibility_residual: state belongs to a different model");
  }
  const Primitives p = primitives(law, state);
  return compatibility_residual(law, model, state.dims, candidate,
                                Point3(p.rho, p.velocity[0], p.velocity[1]));
}

Classification classify_entropy(const PolytropicLaw& law, ModelKind model, const EntropyCandidate& candidate,
                                const ClassificationOptions& opt) {
  if (model != ModelKind::PotentialFlow && model != ModelKind::IsentropicEuler) {
    throw UsageError("classify_entropy: model must be potential flow or isentropic Euler");
  }
  const int n = opt.samples_per_axis;
  if (n < 2) {
    throw UsageError("classify_entropy: need at least two samples per axis");
  }
  const auto lerp = [n](double lo, double hi, int k) { return lo + (hi - lo) * k / (n - 1); };

  const int rows = n * n * n;
  Eigen::MatrixXd basis(rows, 5);
  Eigen::VectorXd values(rows);
  double compat = 0.0;
  int row = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k, ++row) {
        const Point3 x(lerp(opt.rho_lo, opt.rho_hi, i), lerp(opt.vel_lo, opt.vel_hi, j),
                       lerp(opt.vel_lo, opt.vel_hi, k));
        const auto b = span_basis(law, model, x);
        for (int c = 0; c < 5; ++c) {
          basis(row, c) = b[c];
        }
        values(row) = candidate.value(x);
        compat = std::max(compat, compatibility_residual(law, model, 2, candidate, x).cwiseAbs().maxCoeff());
      }
    }
  }
  if (!values.allFinite()) {
    throw NumericError("classify_entropy: candidate produced non-finite values");
  }

  const Eigen::VectorXd coeff = basis.colPivHouseholderQr().solve(values);
  const double fit = (basis * coeff - values).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());

  Classification result;
  for (int c = 0; c < 5; ++c) {
    result.coefficients[c] = coeff(c);
  }
  result.fit_residual = fit;
  result.compatibility_residual = compat;
  result.compatibility_tolerance = candidate.analytic() ? opt.analytic_tolerance : opt.difference_tolerance;
  const bool fit_ok = fit <= opt.fit_tolerance * scale;
  const bool compat_ok = compat <= result.compatibility_tolerance * scale;
  if (fit_ok != compat_ok) {
    std::ostringstream msg;
    msg << "classify_entropy: fit residual " << fit << " and compatibility residual " << compat
        << " disagree for candidate " << candidate.name;
    throw InconsistencyError(msg.str(), fit, compat);
  }
  result.accepted = fit_ok;
  return result;
}

// ---------------------------------------------------------------------------

HessianReport entropy_hessian(const PolytropicLaw& law, const State& s) {
  const EntropyPair pair = convex_entropy_pair(law, s.model);
  HessianReport report;
  report.hessian = pair.hessian(s);
  const int n = static_cast<int>(report.hessian.rows());
  report.determinant = report.hessian.determinant();
  bool pd = true;
  for (int k = 1; k <= n; ++k) {
    const double minor = k == n ? report.determinant : report.hessian.topLeftCorner(k, k).determinant();
    pd = pd && minor > 1e-12;
  }
  if (s.model == ModelKind::PotentialFlow) {
    const Primitives p = primitives(law, s);
    report.sonic = std::abs(p.speed() - p.sound_speed) <= 1e-12;
    if (report.sonic) {
      pd = false;
    }
  }
  report.positive_definite = pd;
  return report;
}

double one_d_entropy_g(const PolytropicLaw& law, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("one_d_entropy: density must be positive");
  }
  const double g = law.gamma();
  if (g == 2.0) {
    return 2.0 * (rho * std::log(rho) - rho);
  }
  return g * std::pow(rho, g - 1.0) / ((g - 1.0) * (g - 2.0));
}

double one_d_entropy(const PolytropicLaw& law, double rho, double v) {
  return 0.5 * v * v + one_d_entropy_g(law, rho);
}

// ---------------------------------------------------------------------------

namespace {

void require_same_model(const State& a, const State& b) {
  if (a.model != b.model || a.dims != b.dims) {
    throw UsageError("relative entropy: states must share model and dimension");
  }
}

bool outside_convexity(const PolytropicLaw& law, const State& ref) {
  if (ref.model != ModelKind::PotentialFlow) {
    return false;
  }
  const Primitives p = primitives(law, ref);
  return p.speed() >= p.sound_speed;
}

} // namespace

RelativeEntropy relative_entropy(const PolytropicLaw& law, const State& state, const State& ref) {
  require_same_model(state, ref);
  const EntropyPair pair = convex_entropy_pair(law, state.model);
  RelativeEntropy r;
  r.value = pair.eta(state) - pair.eta(ref) - pair.gradient(ref).dot(state.u - ref.u);
  r.convexity_warning = outside_convexity(law, ref);
  return r;
}

RelativeFluxRemainder relative_flux_and_remainder(const PolytropicLaw& law, const State& state, const State& ref,
                                                  const std::array<Vector, 2>& grad_ref) {
  require_same_model(state, ref);
  const EntropyPair pair = convex_entropy_pair(law, state.model);
  const Vector eta_u = pair.gradient(ref);
  const Matrix eta_uu = pair.hessian(ref);
  const Vector delta = state.u - ref.u;

  RelativeFluxRemainder out;
  out.psi = Vector::Zero(state.dims);
  for (int i = 0; i < state.dims; ++i) {
    const Vector f = flux(law, state, i);
    const Vector f_ref = flux(law, ref, i);
    out.psi(i) = pair.flux(state, i) - pair.flux(ref, i) - eta_u.dot(f - f_ref);
    if (grad_ref[i].size() == 0) {
      continue;
    }
    if (!grad_ref[i].allFinite() || grad_ref[i].size() != state.u.size()) {
      throw UsageError("relative_flux_and_remainder: reference gradient has wrong size or is not finite");
    }
    const Vector second_order = f - f_ref - jacobian(law, ref, i) * delta;
    out.remainder += (eta_uu * grad_ref[i]).dot(second_order);
  }
  out.convexity_warning = outside_convexity(law, ref);
  return out;
}

QuadraticConstants scan_quadratic_constants(const PolytropicLaw& law, ModelKind model, int dims,
                                            const StateBox& box, double max_ref_gradient, int samples) {
  const int n = state_size(model, dims);
  if (box.lower.size() != n || box.upper.size() != n) {
    throw UsageError("scan_quadratic_constants: box has wrong dimension");
  }
  std::mt19937_64 rng(20130917);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto sample = [&] {
    Vector u(n);
    for (int k = 0; k < n; ++k) {
      u(k) = box.lower(k) + (box.upper(k) - box.lower(k)) * unit(rng);
    }
    return State::make(model, dims, u);
  };
  const EntropyPair pair = convex_entropy_pair(law, model);

  QuadraticConstants out;
  double least_eigenvalue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const State a = sample();
    const State b = sample();
    const Eigen::MatrixXd h = pair.hessian(a);
    least_eigenvalue = std::min(least_eigenvalue, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues()(0));

    const double dist2 = (a.u - b.u).squaredNorm();
    if (dist2 < 1e-20) {
      continue;
    }
    std::array<Vector, 2> grad{Vector::Zero(n), Vector::Zero(n)};
    for (int d = 0; d < dims; ++d) {
      for (int k = 0; k < n; ++k) {
        grad[d](k) = normal(rng);
      }
      grad[d] *= max_ref_gradient / std::max(grad[d].norm(), 1e-300);
    }
    const RelativeEntropy e = relative_entropy(law, a, b);
    const RelativeFluxRemainder pr = relative_flux_and_remainder(law, a, b, grad);
    const double worst = std::max({e.value, pr.psi.cwiseAbs().maxCoeff(), std::abs(pr.remainder)});
    out.c = std::max(out.c, worst / dist2);
  }
  out.tau = 0.5 * least_eigenvalue;
  return out;
}

// ---------------------------------------------------------------------------

EntropyProduction entropy_production(const PolytropicLaw& law, const JumpData& jump, const EntropyPair& pair,
                                     double rh_tolerance) {
  if (jump.left.model != pair.model) {
    throw UsageError("entropy_production: pair belongs to a different model");
  }
  const Vector residual = rh_residual(law, jump);
  const Vector f_left = normal_flux(law, jump.left, jump.nu);
  const Vector f_right = normal_flux(law, jump.right, jump.nu);
  const double scale = std::max({1.0, f_left.cwiseAbs().maxCoeff(), f_right.cwiseAbs().maxCoeff(),
                                 std::abs(jump.sigma) * jump.left.u.cwiseAbs().maxCoeff(),
                                 std::abs(jump.sigma) * jump.right.u.cwiseAbs().maxCoeff()});

  const auto normal_entropy_flux = [&](const State& s) {
    double q = 0.0;
    for (int d = 0; d < s.dims; ++d) {
      if (jump.nu[d] != 0.0) {
        q += jump.nu[d] * pair.flux(s, d);
      }
    }
    return q;
  };

  EntropyProduction out;
  out.value = jump.sigma * (pair.eta(jump.right) - pair.eta(jump.left)) -
              (normal_entropy_flux(jump.right) - normal_entropy_flux(jump.left));
  out.rh_residual = residual.cwiseAbs().maxCoeff();
  out.rh_violated = out.rh_residual > rh_tolerance * scale;
  return out;
}

} // namespace potflow
