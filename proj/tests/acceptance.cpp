// Acceptance checks, one line per criterion.
//
//   acceptance [--only 1,4,...] [--expect-fail 9,...]
//
// Exit status is 0 when the set of failing criteria equals the expected set
// (empty by default), so an unexpected pass is reported as well.

#include "oracles/oracles.hpp"
#include "potflow/cli.hpp"
#include "potflow/entropy.hpp"
#include "potflow/experiments.hpp"
#include "potflow/initial_conditions.hpp"
#include "potflow/shocks.hpp"
#include "potflow/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace potflow;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "potflow");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(4) << x;
  return s.str();
}

// 1 -------------------------------------------------------------------------
Outcome shock_curves() {
  const CliResult r = cli({"shock-curve", "--model", "all", "--gamma", "1.4", "--mach", "1.01:5:200"});
  if (r.code != 0) {
    return {false, "shock-curve exit " + std::to_string(r.code) + ": " + r.err};
  }
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string model, cell;
    std::getline(row, model, ',');
    std::vector<double> v;
    while (std::getline(row, cell, ',')) {
      v.push_back(std::stod(cell));
    }
    curves[model].emplace_back(v.at(1), v.at(2));
  }
  bool ok = curves.size() == 3;
  std::vector<double> first, last;
  for (const auto& [name, c] : curves) {
    ok = ok && c.size() == 200;
    for (std::size_t k = 1; k < c.size(); ++k) {
      ok = ok && c[k].second < c[k - 1].second && c[k].first > c[k - 1].first;
    }
    ok = ok && c.front().first == 1.01 && c.back().first == 5.0;
    first.push_back(c.front().second);
    last.push_back(c.back().second);
  }
  double spread_weak = 0.0, gap_strong = 1e300;
  for (std::size_t a = 0; a < first.size(); ++a) {
    for (std::size_t b = a + 1; b < first.size(); ++b) {
      spread_weak = std::max(spread_weak, std::abs(first[a] - first[b]));
      gap_strong = std::min(gap_strong, std::abs(last[a] - last[b]));
    }
  }
  ok = ok && spread_weak < 1e-3 && gap_strong > 1e-2;
  return {ok, "3 decreasing curves; spread at 1.01 " + fmt(spread_weak) + ", min gap at 5 " + fmt(gap_strong)};
}

// 2 -------------------------------------------------------------------------
Outcome strong_shock() {
  const PolytropicLaw law(1.4);
  const double full = solve_stationary_shock(ModelKind::FullEuler, law, 100.0).mach_down;
  const double oracle_full = oracle::normal_shock_mach(100.0, 1.4);
  const double limit = std::sqrt(1.0 / 7.0);
  bool ok = std::abs(full - limit) < 0.01 * limit && std::abs(full - oracle_full) < 1e-9;
  std::string detail = "full " + fmt(full);
  for (ModelKind m : {ModelKind::PotentialFlow, ModelKind::IsentropicEuler}) {
    const double at100 = solve_stationary_shock(m, law, 100.0).mach_down;
    const double at99 = solve_stationary_shock(m, law, 99.0).mach_down;
    const double at100_oracle = oracle::barotropic_shock_mach(m == ModelKind::PotentialFlow, 1.4, 100.0);
    ok = ok && at100 < 0.2 && at100 < at99 && std::abs(at100 - at100_oracle) < 1e-8;
    detail += ", " + std::string(model_name(m)) + " " + fmt(at100);
  }
  return {ok, detail};
}

// 3 -------------------------------------------------------------------------
Outcome classification() {
  bool ok = true;
  double worst_recovery = 0.0, weakest_reject = 1e300;
  const auto check = [&](std::vector<std::string> args) -> json {
    const CliResult r = cli(std::move(args));
    if (r.code != 0) {
      ok = false;
      return json::object({{"pass", false}, {"compatibility_residual", 0.0}});
    }
    return json::parse(r.out);
  };
  for (const std::string model : {"potential", "isentropic"}) {
    ok = ok && check({"entropy-check", "--model", model, "--candidate", "energy"})["pass"] == true;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 10; ++t) {
      std::array<double, 5> k{};
      std::string coeffs;
      for (int i = 0; i < 5; ++i) {
        k[i] = u(rng);
        std::ostringstream s;
        s << std::setprecision(17) << k[i];
        coeffs += (i ? "," : "") + s.str();
      }
      const json j = check({"entropy-check", "--model", model, "--coeffs", coeffs});
      ok = ok && j["pass"] == true;
      for (int i = 0; i < 5 && j.contains("coefficients"); ++i) {
        worst_recovery = std::max(worst_recovery, std::abs(j["coefficients"][i].get<double>() - k[i]));
      }
    }
  }
  const std::vector<std::pair<std::string, std::string>> rejects{
      {"potential", "momentum"}, {"potential", "one-d"},  {"isentropic", "one-d"},
      {"potential", "sin-v"},    {"isentropic", "sin-v"},
  };
  for (const auto& [model, name] : rejects) {
    const json j = check({"entropy-check", "--model", model, "--candidate", name});
    ok = ok && j["pass"] == false;
    weakest_reject = std::min(weakest_reject, j["compatibility_residual"].get<double>());
  }
  ok = ok && worst_recovery < 1e-6 && weakest_reject > 1e-3;
  return {ok, "coefficient error " + fmt(worst_recovery) + ", smallest rejected residual " + fmt(weakest_reject)};
}

// 4 -------------------------------------------------------------------------
Outcome convexity() {
  const PolytropicLaw law(1.4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  bool ok = true;
  for (int t = 0; t < 1000; ++t) {
    const double rho = 0.1 + 3.0 * u(rng), mach = 2.0 * u(rng), ang = 2.0 * M_PI * u(rng);
    const double c = sound_speed(law, rho);
    const State s = State::from_primitive(law, ModelKind::PotentialFlow, 2, rho,
                                          {mach * c * std::cos(ang), mach * c * std::sin(ang)});
    const Primitives p = primitives(law, s);
    const double q2 = p.velocity[0] * p.velocity[0] + p.velocity[1] * p.velocity[1];
    const double closed = rho * (c * c - q2);
    const HessianReport h = entropy_hessian(law, s);
    worst = std::max(worst, std::abs(h.determinant - closed) / std::abs(closed));
    ok = ok && h.positive_definite == (std::sqrt(q2) < c - 1e-12);
    const State si = State::from_primitive(law, ModelKind::IsentropicEuler, 2, rho,
                                           {mach * c * std::cos(ang), mach * c * std::sin(ang)});
    ok = ok && entropy_hessian(law, si).positive_definite;
  }
  // straddle the sonic line
  for (double rho : {0.3, 1.0, 3.0}) {
    const double c = sound_speed(law, rho);
    for (double d : {-1e-6, -1e-9, 1e-9, 1e-6}) {
      for (int dims : {1, 2}) {
        const double q = c * (1.0 + d);
        const std::array<double, 2> vel = dims == 1 ? std::array<double, 2>{q, 0.0}
                                                    : std::array<double, 2>{q * 0.6, q * 0.8};
        const HessianReport h = entropy_hessian(law, State::from_primitive(law, ModelKind::PotentialFlow, dims, rho, vel));
        ok = ok && h.positive_definite == (d < 0.0);
      }
    }
  }
  ok = ok && worst < 1e-10;
  return {ok, "worst relative determinant error " + fmt(worst) + " on 1000 states"};
}

// 5 -------------------------------------------------------------------------
Outcome admissibility() {
  const PolytropicLaw law(1.4);
  const EntropyPair pair = energy_pair(law, ModelKind::Burgers);
  bool ok = true;
  double worst = 0.0;
  for (double s0 : {0.1, 0.25, 0.5, 1.0, 2.0}) {
    const JumpData expansion{State::burgers(-2 * s0), State::burgers(2 * s0), 0.0, {1.0, 0.0}};
    const EntropyProduction q = entropy_production(law, expansion, pair);
    const double exact = -16.0 * s0 * s0 * s0 / 3.0;
    worst = std::max(worst, std::abs(q.value - exact));
    ok = ok && q.value < 0.0 && !q.rh_violated;
  }
  const JumpData shock{State::burgers(1.0), State::burgers(0.0), 0.5, {1.0, 0.0}};
  const EntropyProduction p = entropy_production(law, shock, pair);
  worst = std::max(worst, std::abs(p.value - 1.0 / 12.0));
  ok = ok && p.value > 0.0 && !p.rh_violated;
  double min_iso = 1e300, max_full = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double m = 1.0 + 4.0 * k / 400.0;
    min_iso = std::min(min_iso, solve_stationary_shock(ModelKind::IsentropicEuler, law, m).production);
    max_full = std::max(max_full, std::abs(solve_stationary_shock(ModelKind::FullEuler, law, m).production));
  }
  ok = ok && worst < 1e-12 && min_iso > 0.0 && max_full < 1e-10;
  return {ok, "Burgers production error " + fmt(worst) + ", min isentropic P " + fmt(min_iso) +
                  ", max full-Euler |P| " + fmt(max_full)};
}

// 6 -------------------------------------------------------------------------
Outcome conservation() {
  const PolytropicLaw law(1.4);
  double worst_mass = 0.0, worst_energy = -1.0;
  struct Case {
    ModelKind model;
    int dims;
    std::string ic;
  };
  const std::vector<Case> cases{
      {ModelKind::PotentialFlow, 1, "acoustic"},  {ModelKind::PotentialFlow, 2, "curl-free"},
      {ModelKind::IsentropicEuler, 1, "acoustic"}, {ModelKind::IsentropicEuler, 2, "acoustic"},
      {ModelKind::FullEuler, 1, "riemann"},        {ModelKind::FullEuler, 2, "acoustic"},
      {ModelKind::Burgers, 1, "sine"},
  };
  for (const Case& c : cases) {
    const Grid g = c.dims == 1 ? Grid::line(200, 1.0) : Grid::torus(32, 32, 1.0, 1.0);
    InitialConditionParams prm;
    prm.velocity0 = {0.3, -0.2};
    prm.amplitude = c.ic == "acoustic" ? 0.2 : std::numeric_limits<double>::quiet_NaN();
    Field f = make_initial_condition(c.ic, law, c.model, g, prm);
    const Vector t0 = f.totals();
    RunConfig cfg;
    for (int k = 0; k < 1000; ++k) {
      const Field next = advance(f, cfg, stable_dt(f, cfg));
      const Vector t = next.totals();
      for (int i = 0; i < t.size(); ++i) {
        worst_mass = std::max(worst_mass, std::abs(t(i) - t0(i)) / std::max(1.0, std::abs(t0(i))));
      }
      const double e0 = total_energy(f);
      worst_energy = std::max(worst_energy, (total_energy(next) - e0) / std::abs(e0));
      f = next;
    }
  }
  const bool ok = worst_mass < 1e-12 && worst_energy <= 1e-10;
  return {ok, "7 runs x 1000 steps; drift " + fmt(worst_mass) + ", largest energy step change " + fmt(worst_energy)};
}

// 7 -------------------------------------------------------------------------
Outcome curl() {
  const PolytropicLaw law(1.4);
  const Grid g = Grid::torus(128, 128, 1.0, 1.0);
  Field f = make_initial_condition("curl-free", law, ModelKind::PotentialFlow, g, {});
  const auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
      m = std::max(m, std::abs(x));
    }
    return m;
  };
  const double initial = max_abs(discrete_curl(f));
  double worst = 0.0;
  RunConfig cfg;
  for (int k = 0; k < 1000; ++k) {
    f = advance(f, cfg, stable_dt(f, cfg));
    worst = std::max(worst, max_abs(discrete_curl(f)));
  }
  return {worst <= initial + 1e-12, "initial curl " + fmt(initial) + ", max over 1000 steps " + fmt(worst)};
}

// 8 -------------------------------------------------------------------------
Outcome cone() {
  const CliResult r = cli({"cone-test", "--n", "1024", "--dims", "1", "--ic", "bump", "--threshold", "1e-6"});
  if (r.code != 0) {
    return {false, "cone-test exit " + std::to_string(r.code) + ": " + r.err};
  }
  const json j = json::parse(r.out);
  const double ratio = j["speed_ratio"].get<double>();
  const bool ok = ratio >= 0.5 && ratio <= 1.2 && j["pass"] == true;
  return {ok, "fitted speed " + fmt(j["fitted_speed"].get<double>()) + " = " + fmt(ratio) + " x sup(|v|+c)"};
}

// 9 -------------------------------------------------------------------------
Outcome viscous() {
  const CliResult r = cli({"viscous-sweep", "--model", "burgers", "--ic", "sine", "--n", "1024", "--eps",
                           "0.04,0.02,0.01,0.005", "--tend", "0.5"});
  if (r.code != 0) {
    return {false, "viscous-sweep exit " + std::to_string(r.code) + ": " + r.err};
  }
  const json j = json::parse(r.out);
  const auto& checks = j["checks"];
  std::string ratios;
  for (const auto& x : j["ratios"]) {
    ratios += (ratios.empty() ? "" : " ") + fmt(x.get<double>());
  }
  const bool ok = checks["decreasing"] == true && checks["ratios_in_window"] == true && checks["gronwall"] == true &&
                  checks["entropy"] == true;
  std::string detail = "ratios " + ratios + ", order " + fmt(j["fitted_order"].get<double>());
  detail += checks["decreasing"] == true ? ", decreasing" : ", NOT decreasing";
  detail += checks["gronwall"] == true ? ", Gronwall holds" : ", Gronwall violated";
  return {ok, detail};
}

// 10 ------------------------------------------------------------------------
Outcome captured_shock() {
  // Stationary M = 2 shock at x = 1 on a length-2 periodic line; the seam
  // problem at x = 0 stays outside [0.8, 1.2] until t = 0.1.
  const PolytropicLaw law(1.4);
  const ShockPoint sp = solve_stationary_shock(ModelKind::FullEuler, law, 2.0);
  const Primitives a = primitives(law, sp.upstream), b = primitives(law, sp.downstream);
  const oracle::ExactRiemann exact({a.rho, a.velocity[0], a.pressure}, {b.rho, b.velocity[0], b.pressure}, 1.4);

  const int n = 512;
  const Grid g = Grid::line(n, 2.0);
  const double h = g.dx();
  Field f(g, ModelKind::FullEuler, law);
  for (int i = 0; i < n; ++i) {
    f.set(i, g.x_center(i) < 1.0 ? sp.upstream : sp.downstream);
  }
  RunConfig cfg;
  cfg.end_time = 0.1;
  const Field out = simulate(f, cfg).back();

  // L1 distance to the exact solution, in units of h |[U]|_1. A captured
  // shock smeared over a few cells sits near 3.
  const double jump = (sp.downstream.u - sp.upstream.u).cwiseAbs().sum();
  double err = 0.0;
  Vector left = Vector::Zero(3), right = Vector::Zero(3);
  int nl = 0, nr = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g.x_center(i);
    if (x < 0.8 || x > 1.2) {
      continue;
    }
    const oracle::Prim e = exact.sample((x - 1.0) / cfg.end_time);
    const State se = State::from_primitive(law, ModelKind::FullEuler, 1, e.rho, {e.u, 0.0}, e.p);
    err += (out.state(i).u - se.u).cwiseAbs().sum() * h;
    // side states: averages over the window halves away from the profile,
    // which also averages out the start-up entropy wave
    if (x < 0.95) {
      left += out.state(i).u;
      ++nl;
    } else if (x > 1.05) {
      right += out.state(i).u;
      ++nr;
    }
  }
  const double l1 = err / (jump * h);
  JumpData across;
  across.left = State::make(ModelKind::FullEuler, 1, left / nl);
  across.right = State::make(ModelKind::FullEuler, 1, right / nr);
  across.sigma = 0.0;
  const Vector scale = normal_flux(law, sp.upstream, {1.0, 0.0}).cwiseAbs().cwiseMax(1.0);
  const double rh = rh_residual(law, across).cwiseAbs().cwiseQuotient(scale).maxCoeff();
  const bool ok = std::abs(exact.star_pressure() - b.pressure) < 1e-8 * b.pressure && l1 <= 5.0 && rh <= 5.0 * h;
  return {ok, "L1 error " + fmt(l1) + " h |[U]|, side-state RH residual " + fmt(rh / h) + " h"};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      out.insert(std::stoi(item));
    }
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app("Acceptance criteria 1-10");
  std::string only, expect;
  app.add_option("--only", only, "Comma-separated criteria to run");
  app.add_option("--expect-fail", expect, "Criteria known to fail; exit 0 only if exactly these fail");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    std::string name;
    double budget; // seconds, 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "shock Mach curves", 5.0, shock_curves},
      {2, "strong-shock limits", 0.0, strong_shock},
      {3, "entropy classification", 2.0, classification},
      {4, "convexity boundary", 0.0, convexity},
      {5, "shock admissibility", 0.0, admissibility},
      {6, "conservation and energy", 0.0, conservation},
      {7, "curl preservation", 60.0, curl},
      {8, "cone of influence", 30.0, cone},
      {9, "viscous limit", 60.0, viscous},
      {10, "captured shock", 0.0, captured_shock},
  };
  const std::set<int> selected = parse_list(only);
  const std::set<int> expected = parse_list(expect);
  std::set<int> failed;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.count(c.id)) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0.0 && secs > c.budget) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget) + " s budget";
    }
    if (!o.pass) {
      failed.insert(c.id);
    }
    std::cout << "criterion " << std::setw(2) << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << " ("
              << std::fixed << std::setprecision(2) << secs << " s): " << std::defaultfloat << o.detail
              << (expected.count(c.id) ? " [expected failure]" : "") << "\n";
  }
  std::set<int> expected_run;
  for (int id : expected) {
    if (selected.empty() || selected.count(id)) {
      expected_run.insert(id);
    }
  }
  if (failed != expected_run) {
    std::cout << "unexpected outcome: failures differ from --expect-fail\n";
    return 1;
  }
  return 0;
}
