#include <doctest.h>

#include "oracles/oracles.hpp"
#include "potflow/errors.hpp"
#include "potflow/systems.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

using namespace potflow;

namespace {

State random_state(std::mt19937_64& rng, ModelKind model, int dims, const PolytropicLaw& law, double max_mach = 0.9) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = 0.4 + 1.6 * u(rng);
  const double c = std::sqrt(law.gamma() * std::pow(rho, law.gamma() - 1));
  const double speed = max_mach * c * u(rng);
  const double angle = 6.283185307179586 * u(rng);
  const std::array<double, 2> vel{speed * std::cos(angle), dims == 2 ? speed * std::sin(angle) : 0.0};
  const double p = model == ModelKind::FullEuler ? (0.5 + u(rng)) * std::pow(rho, law.gamma()) : -1.0;
  return State::from_primitive(law, model, dims, rho, vel, p);
}

Eigen::VectorXd to_x(const State& s) { return Eigen::VectorXd(s.u); }

} // namespace

TEST_SUITE("systems") {
  TEST_CASE("names and sizes") {
    CHECK(parse_model("potential") == ModelKind::PotentialFlow);
    CHECK(parse_model("isentropic") == ModelKind::IsentropicEuler);
    CHECK(parse_model("full_euler") == ModelKind::FullEuler);
    CHECK(parse_model("burgers") == ModelKind::Burgers);
    CHECK(model_name(ModelKind::FullEuler) == "full_euler");
    CHECK_THROWS_AS(parse_model("navier-stokes"), UsageError);
    CHECK(state_size(ModelKind::PotentialFlow, 2) == 3);
    CHECK(state_size(ModelKind::IsentropicEuler, 1) == 2);
    CHECK(state_size(ModelKind::FullEuler, 2) == 4);
    CHECK(state_size(ModelKind::Burgers, 1) == 1);
  }

  TEST_CASE("potential flow flux written out") {
    const PolytropicLaw law(1.4);
    const double rho = 1.3, v = 0.2, w = -0.4;
    const State s = State::from_primitive(law, ModelKind::PotentialFlow, 2, rho, {v, w});
    const double B = 0.5 * (v * v + w * w) + 1.4 / 0.4 * std::pow(rho, 0.4);
    const Vector fx = flux(law, s, 0);
    const Vector fy = flux(law, s, 1);
    CHECK(fx(0) == doctest::Approx(rho * v));
    CHECK(fx(1) == doctest::Approx(B));
    CHECK(fx(2) == 0.0);
    CHECK(fy(0) == doctest::Approx(rho * w));
    CHECK(fy(1) == 0.0);
    CHECK(fy(2) == doctest::Approx(B));
  }

  TEST_CASE("full Euler flux written out") {
    const PolytropicLaw law(1.4);
    const double rho = 0.8, v = 0.3, p = 0.9;
    const State s = State::from_primitive(law, ModelKind::FullEuler, 1, rho, {v, 0.0}, p);
    const double E = p / 0.4 + 0.5 * rho * v * v;
    CHECK(s.u(2) == doctest::Approx(E));
    const Vector f = flux(law, s, 0);
    CHECK(f(0) == doctest::Approx(rho * v));
    CHECK(f(1) == doctest::Approx(rho * v * v + p));
    CHECK(f(2) == doctest::Approx((E + p) * v));
    const Primitives q = primitives(law, s);
    CHECK(q.pressure == doctest::Approx(p));
    CHECK(q.sound_speed == doctest::Approx(std::sqrt(1.4 * p / rho)));
  }

  TEST_CASE("Jacobian matches finite differences of the flux") {
    std::mt19937_64 rng(7);
    const PolytropicLaw law(1.4);
    for (ModelKind m : {ModelKind::PotentialFlow, ModelKind::IsentropicEuler, ModelKind::FullEuler}) {
      for (int dims : {1, 2}) {
        for (int trial = 0; trial < 20; ++trial) {
          const State s = random_state(rng, m, dims, law);
          for (int axis = 0; axis < dims; ++axis) {
            const oracle::VecFn f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
              return Eigen::VectorXd(flux(law, State::make(m, dims, Vector(x)), axis));
            };
            const Eigen::MatrixXd fd = oracle::jacobian(f, to_x(s));
            const Eigen::MatrixXd an = jacobian(law, s, axis);
            CHECK((fd - an).cwiseAbs().maxCoeff() < 1e-7);
          }
        }
      }
    }
  }

  TEST_CASE("eigenvalues are the spectrum of the Jacobian") {
    std::mt19937_64 rng(11);
    const PolytropicLaw law(1.4);
    for (ModelKind m : {ModelKind::PotentialFlow, ModelKind::IsentropicEuler, ModelKind::FullEuler}) {
      for (int dims : {1, 2}) {
        for (int trial = 0; trial < 20; ++trial) {
          const State s = random_state(rng, m, dims, law, 2.0);
          for (int axis = 0; axis < dims; ++axis) {
            const Eigen::MatrixXd J = jacobian(law, s, axis);
            Eigen::VectorXd ev = Eigen::EigenSolver<Eigen::MatrixXd>(J).eigenvalues().real();
            std::sort(ev.data(), ev.data() + ev.size());
            const Vector mine = eigenvalues(law, s, axis);
            REQUIRE(mine.size() == ev.size());
            CHECK((Eigen::VectorXd(mine) - ev).cwiseAbs().maxCoeff() < 1e-8);
          }
        }
      }
    }
  }

  TEST_CASE("potential flow speeds v - c, 0, v + c") {
    const PolytropicLaw law(1.4);
    const State s2 = State::from_primitive(law, ModelKind::PotentialFlow, 2, 1.0, {0.5, 0.1});
    const double c = std::sqrt(1.4);
    const Vector e2 = eigenvalues(law, s2, 0);
    CHECK(e2(0) == doctest::Approx(0.5 - c));
    CHECK(e2(1) == doctest::Approx(0.0));
    CHECK(e2(2) == doctest::Approx(0.5 + c));
    const State s1 = State::from_primitive(law, ModelKind::PotentialFlow, 1, 1.0, {0.5, 0.0});
    CHECK(eigenvalues(law, s1, 0).size() == 2);
    CHECK(max_wavespeed(law, s2) == doctest::Approx(std::hypot(0.5, 0.1) + c));
    CHECK(max_wavespeed(law, State::burgers(-3.0)) == 3.0);
  }

  TEST_CASE("Rankine-Hugoniot residual symmetries") {
    std::mt19937_64 rng(3);
    const PolytropicLaw law(1.4);
    for (ModelKind m : {ModelKind::PotentialFlow, ModelKind::IsentropicEuler, ModelKind::FullEuler}) {
      const JumpData j{random_state(rng, m, 2, law), random_state(rng, m, 2, law), 0.37, {0.6, 0.8}};
      const Vector r = rh_residual(law, j);
      const JumpData swapped{j.right, j.left, j.sigma, j.nu};
      CHECK((rh_residual(law, swapped) + r).cwiseAbs().maxCoeff() < 1e-14);
      const JumpData flipped{j.right, j.left, -j.sigma, {-j.nu[0], -j.nu[1]}};
      CHECK((rh_residual(law, flipped) - r).cwiseAbs().maxCoeff() < 1e-14);
      const JumpData same{j.left, j.left, 0.37, j.nu};
      CHECK(rh_residual(law, same).cwiseAbs().maxCoeff() == 0.0);
    }
    // Burgers shock 1 -> 0 moves at 1/2
    const JumpData b{State::burgers(1.0), State::burgers(0.0), 0.5, {1.0, 0.0}};
    CHECK(std::abs(rh_residual(law, b)(0)) < 1e-15);
  }

  TEST_CASE("domain errors") {
    const PolytropicLaw law(1.4);
    CHECK_THROWS_AS(State::from_primitive(law, ModelKind::PotentialFlow, 1, 0.0), DomainError);
    CHECK_THROWS_AS(State::from_primitive(law, ModelKind::PotentialFlow, 3, 1.0), UsageError);
    Vector u(3);
    u << 1.0, 0.0, -1.0; // negative internal energy
    CHECK_THROWS_AS(primitives(law, State::make(ModelKind::FullEuler, 1, u)), DomainError);
    const JumpData mixed{State::burgers(1.0), State::from_primitive(law, ModelKind::PotentialFlow, 1, 1.0), 0.0,
                         {1.0, 0.0}};
    CHECK_THROWS_AS(rh_residual(law, mixed), UsageError);
  }
}
