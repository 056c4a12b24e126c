#pragma once

#include "potflow/systems.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string>

namespace potflow {

/// Energy E = internal_energy(rho) + rho |v|^2 / 2 for potential flow and
/// isentropic Euler, the conserved E for full Euler, u^2/2 for Burgers.
double energy(const PolytropicLaw& law, const State& state);
/// (E + p) v^axis; equals rho B v^axis for potential flow. u^3/3 for Burgers.
double energy_flux(const PolytropicLaw& law, const State& state, int axis);

/// An entropy-flux pair on the conserved variables of one model.
struct EntropyPair {
  ModelKind model = ModelKind::Burgers;
  std::string name;
  std::function<double(const State&)> eta;
  std::function<double(const State&, int axis)> flux;
  std::function<Vector(const State&)> gradient;
  std::function<Matrix(const State&)> hessian;
};

EntropyPair energy_pair(const PolytropicLaw& law, ModelKind model);
/// eta = -rho s, q = -rho s v for full Euler.
EntropyPair physical_entropy_pair(const PolytropicLaw& law);
/// Strictly convex pair used by relative-entropy tools: the energy for
/// potential flow, isentropic Euler and Burgers; -rho s for full Euler.
EntropyPair convex_entropy_pair(const PolytropicLaw& law, ModelKind model);

// ---------------------------------------------------------------------------
// Entropy classification in primitive variables (rho, v, w).

using Point3 = Eigen::Vector3d;
using Hessian3 = Eigen::Matrix3d;

/// Scalar candidate eta(rho, v, w). Analytic derivatives are optional; when
/// absent they are taken by centered differences.
struct EntropyCandidate {
  std::string name;
  std::function<double(const Point3&)> value;
  std::function<Point3(const Point3&)> gradient;
  std::function<Hessian3(const Point3&)> hessian;

  bool analytic() const { return static_cast<bool>(gradient) && static_cast<bool>(hessian); }
};

/// Relative step for first differences of candidates.
inline constexpr double kGradientStep = 1e-5;
/// Relative step for second differences (balances truncation against roundoff).
inline constexpr double kHessianStep = 1e-4;

Point3 candidate_gradient(const EntropyCandidate& candidate, const Point3& x);
Hessian3 candidate_hessian(const EntropyCandidate& candidate, const Point3& x);

/// Energy in primitive variables (same expression for both models), with
/// analytic derivatives.
EntropyCandidate energy_candidate(const PolytropicLaw& law);
/// C0 + Cr rho + Cv m_v + Cw m_w + CE E where (m_v, m_w) = (v, w) for
/// potential flow and (rho v, rho w) for isentropic Euler. Value only.
EntropyCandidate span_candidate(const PolytropicLaw& law, ModelKind model,
                                const std::array<double, 5>& coefficients);
/// v^2/2 + g(rho) with g'' = gamma rho^(gamma-3). Value only.
EntropyCandidate one_d_entropy_candidate(const PolytropicLaw& law);
/// Builds a value-only candidate from a closed-form expression.
EntropyCandidate value_candidate(std::string name, std::function<double(const Point3&)> value);
/// Named built-ins: energy, momentum (rho v), velocity (v), kinetic
/// (rho |v|^2/2), rho-v2 (rho v^2), one-d, sin-v.
EntropyCandidate named_candidate(const PolytropicLaw& law, const std::string& name);

/// Cross-derivative compatibility residuals of a candidate for `model` at the
/// primitive point of `state`. 2D order:
///   [pi' eta_vv - rho eta_rr, pi' eta_ww - rho eta_rr, x:(rho,w), y:(rho,v), x:(v,w), y:(v,w)]
/// 1D returns only the first entry.
Eigen::VectorXd compatibility_residual(const PolytropicLaw& law, ModelKind model, const EntropyCandidate& candidate,
                              const State& state);
/// Same, for an explicit primitive point (rho, v, w) and dimension.
Eigen::VectorXd compatibility_residual(const PolytropicLaw& law, ModelKind model, int dims,
                              const EntropyCandidate& candidate, const Point3& point);

struct ClassificationOptions {
  double rho_lo = 0.5;
  double rho_hi = 2.0;
  double vel_lo = -1.0;
  double vel_hi = 1.0;
  int samples_per_axis = 11;
  double fit_tolerance = 1e-8;
  double analytic_tolerance = 1e-8;
  double difference_tolerance = 1e-5;
};

struct Classification {
  bool accepted = false;
  /// (C0, C_rho, C_v, C_w, C_E)
  std::array<double, 5> coefficients{};
  double fit_residual = 0.0;
  double compatibility_residual = 0.0;
  double compatibility_tolerance = 0.0;
};

/// Fits the candidate to the 2D entropy space of the model and checks the
/// compatibility relations on the same grid. Throws InconsistencyError when
/// the two checks disagree.
Classification classify_entropy(const PolytropicLaw& law, ModelKind model, const EntropyCandidate& candidate,
                                const ClassificationOptions& options = {});

// ---------------------------------------------------------------------------
// Convexity.

struct HessianReport {
  Matrix hessian;
  double determinant = 0.0;
  bool positive_definite = false;
  /// |v| within 1e-12 of c (potential flow only).
  bool sonic = false;
};

/// Hessian of the model's convex entropy in conserved variables, with
/// definiteness from leading principal minors (> 1e-12).
HessianReport entropy_hessian(const PolytropicLaw& law, const State& state);

/// v^2/2 + g(rho) with g = gamma rho^(gamma-1)/((gamma-1)(gamma-2)), or
/// 2 (rho log rho - rho) when gamma = 2.
double one_d_entropy(const PolytropicLaw& law, double rho, double v);
double one_d_entropy_g(const PolytropicLaw& law, double rho);

// ---------------------------------------------------------------------------
// Relative entropy.

struct RelativeEntropy {
  double value = 0.0;
  /// Reference state outside the convexity region (supersonic potential flow).
  bool convexity_warning = false;
};

/// eta(U) - eta(Ubar) - eta_U(Ubar) (U - Ubar) for the model's convex entropy.
RelativeEntropy relative_entropy(const PolytropicLaw& law, const State& state, const State& ref);

struct RelativeFluxRemainder {
  Vector psi; // one entry per space direction
  double remainder = 0.0;
  bool convexity_warning = false;
};

/// Psi^i = q^i(U) - q^i(Ubar) - eta_U(Ubar)(f^i(U) - f^i(Ubar)) and
/// R = sum_i (eta_UU(Ubar) d_i Ubar) . (f^i(U) - f^i(Ubar) - A^i(Ubar)(U - Ubar)).
/// `grad_ref[i]` is the spatial derivative of Ubar along axis i.
RelativeFluxRemainder relative_flux_and_remainder(const PolytropicLaw& law, const State& state, const State& ref,
                                                  const std::array<Vector, 2>& grad_ref);

/// Box of conserved states used to scan quadratic-bound constants.
struct StateBox {
  Vector lower;
  Vector upper;
};

struct QuadraticConstants {
  /// E(U, Ubar) >= tau |U - Ubar|^2 (tau is half the least Hessian eigenvalue).
  double tau = 0.0;
  /// E, |Psi|, |R| <= C |U - Ubar|^2 for reference gradients up to the given size.
  double c = 0.0;
};

/// Deterministic sampling scan of tau and C over a convex box.
QuadraticConstants scan_quadratic_constants(const PolytropicLaw& law, ModelKind model, int dims, const StateBox& box,
                                            double max_ref_gradient, int samples = 4000);

// ---------------------------------------------------------------------------
// Shocks.

struct EntropyProduction {
  double value = 0.0;
  bool rh_violated = false;
  double rh_residual = 0.0;
};

/// P = sigma [eta] - [q . nu]; admissible iff P >= 0.
EntropyProduction entropy_production(const PolytropicLaw& law, const JumpData& jump, const EntropyPair& pair,
                                     double rh_tolerance = 1e-8);

} // namespace potflow
