#include "potflow/cli.hpp"
#include "potflow/entropy.hpp"
#include "potflow/experiments.hpp"
#include "potflow/initial_conditions.hpp"
#include "potflow/shocks.hpp"
#include "potflow/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace potflow;

namespace {

py::array_t<double> to_array(const Field& f) {
  const Grid& g = f.grid();
  const int nc = f.components();
  std::vector<py::ssize_t> shape;
  if (g.dims == 2) {
    shape = {g.ny, g.nx, nc};
  } else {
    shape = {g.nx, nc};
  }
  return py::array_t<double>(shape, f.data().data());
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

Grid make_grid(int dims, int n, int ny, double lx, double ly) {
  return dims == 2 ? Grid::torus(n, ny > 0 ? ny : n, lx, ly) : Grid::line(n, lx);
}

py::dict shock_dict(const ShockPoint& p) {
  py::dict d;
  d["mach_up"] = p.mach_up;
  d["mach_down"] = p.mach_down;
  d["rho_down"] = p.downstream.u(0);
  d["production"] = p.production;
  d["physical_production"] = p.physical_production;
  d["rh_residual"] = p.rh_residual;
  return d;
}

} // namespace

PYBIND11_MODULE(potflow, m) {
  m.doc() = "Shock curves, entropy checks and finite-volume runs for potential flow and Euler models";

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "potflow");
        std::vector<const char*> argv;
        for (const auto& a : args) {
          argv.push_back(a.c_str());
        }
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a potflow subcommand in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "stationary_shock",
      [](const std::string& model, double mach, double gamma) {
        return shock_dict(solve_stationary_shock(parse_model(model), PolytropicLaw(gamma), mach));
      },
      py::arg("model"), py::arg("mach"), py::arg("gamma") = 1.4);

  m.def(
      "shock_curve",
      [](const std::string& model, double lo, double hi, int samples, double gamma) {
        const auto rows = shock_curve(parse_model(model), PolytropicLaw(gamma), lo, hi, samples);
        std::vector<double> up, down;
        for (const ShockRow& r : rows) {
          up.push_back(r.mach_up);
          down.push_back(r.ok ? r.point.mach_down : std::numeric_limits<double>::quiet_NaN());
        }
        return py::make_tuple(to_array(up), to_array(down));
      },
      py::arg("model"), py::arg("lo") = 1.01, py::arg("hi") = 5.0, py::arg("samples") = 200, py::arg("gamma") = 1.4,
      "Returns (mach_up, mach_down) arrays; failed samples are NaN.");

  m.def(
      "classify_entropy",
      [](const std::string& model, std::optional<std::string> candidate, std::optional<std::array<double, 5>> coeffs,
         double gamma) {
        const PolytropicLaw law(gamma);
        const ModelKind kind = parse_model(model);
        if (candidate.has_value() == coeffs.has_value()) {
          throw UsageError("give exactly one of candidate or coeffs");
        }
        const EntropyCandidate c = candidate ? named_candidate(law, *candidate) : span_candidate(law, kind, *coeffs);
        const Classification r = classify_entropy(law, kind, c);
        py::dict d;
        d["accepted"] = r.accepted;
        d["coefficients"] = r.coefficients;
        d["fit_residual"] = r.fit_residual;
        d["compatibility_residual"] = r.compatibility_residual;
        return d;
      },
      py::arg("model"), py::arg("candidate") = py::none(), py::arg("coeffs") = py::none(), py::arg("gamma") = 1.4);

  m.def(
      "entropy_hessian",
      [](const std::string& model, double rho, std::vector<double> velocity, double gamma, double pressure) {
        const PolytropicLaw law(gamma);
        const int dims = static_cast<int>(velocity.size());
        if (dims < 1 || dims > 2) {
          throw UsageError("velocity needs 1 or 2 components");
        }
        const State s = State::from_primitive(law, parse_model(model), dims, rho,
                                              {velocity[0], dims == 2 ? velocity[1] : 0.0}, pressure);
        const HessianReport h = entropy_hessian(law, s);
        py::dict d;
        d["determinant"] = h.determinant;
        d["positive_definite"] = h.positive_definite;
        d["sonic"] = h.sonic;
        d["hessian"] = Eigen::MatrixXd(h.hessian);
        return d;
      },
      py::arg("model"), py::arg("rho"), py::arg("velocity"), py::arg("gamma") = 1.4, py::arg("pressure") = -1.0);

  m.def(
      "simulate",
      [](const std::string& model, const std::string& ic, int n, int dims, int ny, double lx, double ly, double tend,
         double eps, double cfl, std::vector<double> outputs, double amplitude, double width, double rho0,
         double gamma) {
        const PolytropicLaw law(gamma);
        InitialConditionParams p;
        p.amplitude = amplitude;
        p.width = width;
        p.rho0 = rho0;
        const Field f0 = make_initial_condition(ic, law, parse_model(model), make_grid(dims, n, ny, lx, ly), p);
        RunConfig cfg;
        cfg.end_time = tend;
        cfg.eps = eps;
        cfg.cfl = cfl;
        cfg.output_times = std::move(outputs);
        std::vector<Field> snaps;
        {
          py::gil_scoped_release release;
          snaps = simulate(f0, cfg);
        }
        py::list out;
        out.append(py::make_tuple(0.0, to_array(f0)));
        for (const Field& s : snaps) {
          out.append(py::make_tuple(s.time(), to_array(s)));
        }
        return out;
      },
      py::arg("model"), py::arg("ic") = "acoustic", py::arg("n") = 256, py::arg("dims") = 1, py::arg("ny") = 0,
      py::arg("lx") = 1.0, py::arg("ly") = 1.0, py::arg("tend") = 0.2, py::arg("eps") = 0.0, py::arg("cfl") = 0.45,
      py::arg("outputs") = std::vector<double>{}, py::arg("amplitude") = std::numeric_limits<double>::quiet_NaN(),
      py::arg("width") = 0.05, py::arg("rho0") = 1.0, py::arg("gamma") = 1.4,
      "Returns [(t, conserved array)], starting with the initial data. Arrays are (nx, k) or (ny, nx, k).");

  m.def(
      "cone_test",
      [](int n, double amplitude, double threshold, double tend, int outputs, double v0, double gamma) {
        const PolytropicLaw law(gamma);
        const Grid g = Grid::line(n, 1.0);
        InitialConditionParams p;
        p.velocity0 = {v0, 0.0};
        p.amplitude = 0.0;
        const Field background = make_initial_condition("bump", law, ModelKind::PotentialFlow, g, p);
        p.amplitude = amplitude;
        const Field perturbed = make_initial_condition("bump", law, ModelKind::PotentialFlow, g, p);
        ConeConfig cfg;
        cfg.threshold = threshold;
        cfg.end_time = tend;
        cfg.output_count = outputs;
        ConeReport r;
        {
          py::gil_scoped_release release;
          r = run_cone_test(background, perturbed, cfg);
        }
        py::dict d;
        d["times"] = to_array(r.times);
        d["support_radius"] = to_array(r.support_radius);
        d["fitted_speed"] = r.fitted_speed;
        d["wavespeed_bound"] = r.wavespeed_bound;
        d["spacing"] = r.spacing;
        return d;
      },
      py::arg("n") = 1024, py::arg("amplitude") = 1e-3, py::arg("threshold") = 1e-6, py::arg("tend") = 0.3,
      py::arg("outputs") = 25, py::arg("v0") = 0.0, py::arg("gamma") = 1.4);

  m.def(
      "viscous_sweep",
      [](int n, std::vector<double> eps, double tend, int refine, int outputs, double gamma) {
        const PolytropicLaw law(gamma);
        const auto factory = [&](const Grid& g) { return make_initial_condition("sine", law, ModelKind::Burgers, g); };
        ConvergenceConfig cfg;
        cfg.eps_values = std::move(eps);
        cfg.end_time = tend;
        cfg.refine = refine;
        cfg.output_count = outputs;
        ConvergenceReport r;
        {
          py::gil_scoped_release release;
          r = run_viscous_convergence(factory, Grid::line(n, 2.0 * std::numbers::pi), cfg);
        }
        py::dict d;
        d["eps"] = to_array(r.eps_values);
        d["norms"] = to_array(r.relent_norms);
        d["ratios"] = to_array(r.ratios);
        d["grid_floor"] = r.grid_floor;
        d["fitted_order"] = r.fitted_order;
        d["decreasing"] = r.decreasing;
        d["gronwall_ok"] = r.gronwall_ok;
        d["entropy_ok"] = r.entropy_ok;
        return d;
      },
      py::arg("n") = 1024, py::arg("eps") = std::vector<double>{0.04, 0.02, 0.01, 0.005}, py::arg("tend") = 0.5,
      py::arg("refine") = 4, py::arg("outputs") = 10, py::arg("gamma") = 1.4,
      "Burgers sine data on [0, 2 pi].");
}
