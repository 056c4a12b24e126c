#include "potflow/cli.hpp"

#include "potflow/entropy.hpp"
#include "potflow/errors.hpp"
#include "potflow/experiments.hpp"
#include "potflow/field_io.hpp"
#include "potflow/format.hpp"
#include "potflow/initial_conditions.hpp"
#include "potflow/shocks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <type_traits>

namespace potflow {

namespace {

using json = nlohmann::ordered_json;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

Range parse_range(const std::string& text, const std::string& flag) {
  Range r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.n, &tail) != 3 || r.n < 1 || !(r.lo <= r.hi) ||
      (r.n == 1 && r.lo != r.hi)) {
    throw UsageError(flag + " expects lo:hi:count with lo <= hi and count >= 1, got '" + text + "'");
  }
  return r;
}

double range_value(const Range& r, int k) { return r.n == 1 ? r.lo : r.lo + (r.hi - r.lo) * k / (r.n - 1); }

std::string fmt(double x) { return format_double(x); }

// A value written to a path, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

json typed(const std::string& s) {
  if (s == "true" || s == "false") {
    return s == "true";
  }
  char* end = nullptr;
  const long long i = std::strtoll(s.c_str(), &end, 10);
  if (!s.empty() && end == s.c_str() + s.size()) {
    return i;
  }
  const double d = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(d)) {
    return d;
  }
  return s;
}

std::vector<std::string> split_default(std::string s) {
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> parts;
  if (s.empty() || s == "{}") {
    return parts;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    parts.push_back(item);
  }
  return parts;
}

bool is_meta(const std::string& name) { return name == "help" || name == "config" || name == "dump-config"; }

// Resolved option values of one subcommand, in declaration order.
json resolved_config(const CLI::App* sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (is_meta(name)) {
      continue;
    }
    if (opt->get_type_size() == 0) {
      j[name] = opt->count() > 0 || opt->get_default_str() == "true";
      continue;
    }
    std::vector<std::string> values = opt->count() > 0 ? opt->results() : split_default(opt->get_default_str());
    if (opt->get_items_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : values) {
        arr.push_back(typed(v));
      }
      j[name] = arr;
    } else {
      j[name] = typed(values.empty() ? std::string() : values.front());
    }
  }
  return j;
}

std::string config_string(const json& v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  return v.dump();
}

// Fills options not given on the command line from a JSON object, either flat
// or nested under the subcommand name.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot read config file '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw UsageError("config file '" + path + "' must hold a JSON object");
  }
  if (j.contains(sub->get_name()) && j[sub->get_name()].is_object()) {
    j = j[sub->get_name()];
  }
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("config file: unknown option '" + key + "' for " + sub->get_name());
    }
    if (opt->count() > 0 || is_meta(key)) {
      continue; // command line wins
    }
    if (opt->get_type_size() == 0) {
      if (!value.is_boolean()) {
        throw UsageError("config file: '" + key + "' must be true or false");
      }
      if (value.get<bool>()) {
        opt->add_result(std::string("true"));
      }
    } else if (value.is_array()) {
      for (const auto& item : value) {
        opt->add_result(config_string(item));
      }
    } else {
      opt->add_result(config_string(value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config file: bad value for '" + key + "': " + e.what());
    }
  }
}

// add_option with a round-trip default string, so --dump-config reproduces
// the exact values.
template <class T>
CLI::Option* add(CLI::App* sub, const std::string& name, T& var, const std::string& desc) {
  CLI::Option* opt = sub->add_option(name, var, desc);
  if constexpr (std::is_same_v<T, double>) {
    opt->default_str(format_double(var));
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    std::string text = "[";
    for (std::size_t k = 0; k < var.size(); ++k) {
      text += (k ? "," : "") + format_double(var[k]);
    }
    opt->default_str(text + "]");
  }
  return opt;
}

// ---------------------------------------------------------------------------
// Shared option groups.

struct Common {
  double gamma = 1.4;
  std::string config;
  bool dump = false;
};

void add_common(CLI::App* sub, Common& c) {
  add(sub, "--gamma", c.gamma, "Adiabatic exponent, > 1");
  add(sub, "--config", c.config, "JSON file with option values (flags take precedence)");
  sub->add_flag("--dump-config", c.dump, "Print the resolved configuration as JSON and exit");
}

struct Setup {
  std::string model = "potential";
  int dims = 1;
  int n = 256;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;
  std::string ic = "acoustic";
  double rho0 = 1.0;
  double v0 = 0.0;
  double w0 = 0.0;
  std::string amplitude = "auto";
  double width = 0.05;
  double center = 0.5;
  double split = 0.5;
  double rho_left = 1.0, v_left = 0.0, p_left = 1.0;
  double rho_right = 0.125, v_right = 0.0, p_right = 0.1;
  double cfl = 0.45;
  std::string integrator = "ssp-rk2";
};

void add_setup(CLI::App* sub, Setup& s, bool riemann) {
  add(sub, "--model", s.model, "potential | isentropic | full_euler | burgers");
  add(sub, "--dims", s.dims, "Space dimensions (1 or 2)");
  add(sub, "--n", s.n, "Cells along x");
  add(sub, "--ny", s.ny, "Cells along y (0: same as --n)");
  add(sub, "--lx", s.lx, "Domain length along x");
  add(sub, "--ly", s.ly, "Domain length along y");
  add(sub, "--ic", s.ic, "acoustic | sine | riemann | bump | curl-free | swirl");
  add(sub, "--rho0", s.rho0, "Background density");
  add(sub, "--v0", s.v0, "Background x velocity (u for Burgers)");
  add(sub, "--w0", s.w0, "Background y velocity");
  add(sub, "--amplitude", s.amplitude, "Perturbation amplitude (auto: per-condition default)");
  add(sub, "--width", s.width, "Pulse or bump radius");
  add(sub, "--center", s.center, "Pulse center as a fraction of the domain");
  if (riemann) {
    add(sub, "--split", s.split, "Riemann interface as a fraction of lx");
    add(sub, "--rho-left", s.rho_left, "Riemann left density");
    add(sub, "--v-left", s.v_left, "Riemann left velocity");
    add(sub, "--p-left", s.p_left, "Riemann left pressure (full Euler)");
    add(sub, "--rho-right", s.rho_right, "Riemann right density");
    add(sub, "--v-right", s.v_right, "Riemann right velocity");
    add(sub, "--p-right", s.p_right, "Riemann right pressure (full Euler)");
  }
  add(sub, "--cfl", s.cfl, "CFL number");
  add(sub, "--integrator", s.integrator, "ssp-rk2 | euler");
}

Grid make_grid(const Setup& s) {
  if (s.dims != 1 && s.dims != 2) {
    throw UsageError("--dims must be 1 or 2");
  }
  if (s.n < 3 || (s.dims == 2 && s.ny != 0 && s.ny < 3)) {
    throw UsageError("grids need at least 3 cells per axis");
  }
  if (!(s.lx > 0.0) || !(s.ly > 0.0)) {
    throw UsageError("domain lengths must be positive");
  }
  return s.dims == 1 ? Grid::line(s.n, s.lx) : Grid::torus(s.n, s.ny == 0 ? s.n : s.ny, s.lx, s.ly);
}

InitialConditionParams make_params(const Setup& s) {
  InitialConditionParams p;
  p.rho0 = s.rho0;
  p.velocity0 = {s.v0, s.w0};
  if (s.amplitude != "auto") {
    char* end = nullptr;
    p.amplitude = std::strtod(s.amplitude.c_str(), &end);
    if (end != s.amplitude.c_str() + s.amplitude.size() || !std::isfinite(p.amplitude)) {
      throw UsageError("--amplitude must be a number or 'auto'");
    }
  }
  if (!(s.width > 0.0)) {
    throw UsageError("--width must be positive");
  }
  p.width = s.width;
  p.center = s.center;
  p.split = s.split;
  p.rho_left = s.rho_left;
  p.v_left = s.v_left;
  p.p_left = s.p_left;
  p.rho_right = s.rho_right;
  p.v_right = s.v_right;
  p.p_right = s.p_right;
  return p;
}

Integrator make_integrator(const std::string& name) {
  if (name == "ssp-rk2" || name == "rk2") {
    return Integrator::SspRk2;
  }
  if (name == "euler" || name == "forward-euler") {
    return Integrator::ForwardEuler;
  }
  throw UsageError("unknown integrator '" + name + "' (ssp-rk2 | euler)");
}

void check_cfl(double cfl) {
  if (!(cfl > 0.0 && cfl < 1.0)) {
    throw UsageError("--cfl must lie in (0, 1)");
  }
}

json report_head(const std::string& experiment, const std::string& model, double gamma, const CLI::App* sub) {
  json j;
  j["experiment"] = experiment;
  j["model"] = model;
  j["gamma"] = gamma;
  json params = resolved_config(sub);
  for (const char* k : {"model", "gamma", "json", "out", "plot", "out-prefix", "log"}) {
    params.erase(k);
  }
  j["params"] = params;
  return j;
}

// ---------------------------------------------------------------------------
// shock-curve

struct ShockOpts {
  Common common;
  std::string model = "all";
  std::string mach = "1.01:5:200";
  std::string out;
  std::string plot;
};

int run_shock_curve(const ShockOpts& o, std::ostream& out, std::ostream& err) {
  const PolytropicLaw law(o.common.gamma);
  const Range r = parse_range(o.mach, "--mach");
  if (!(r.lo > 1.0)) {
    throw UsageError("--mach values must exceed 1");
  }
  std::vector<ModelKind> models;
  if (o.model == "all") {
    models = {ModelKind::PotentialFlow, ModelKind::IsentropicEuler, ModelKind::FullEuler};
  } else {
    models = {parse_model(o.model)};
    if (models.front() == ModelKind::Burgers) {
      throw UsageError("shock-curve needs a gas model");
    }
  }
  std::ostringstream csv;
  json failures = json::array();
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto rows = shock_curve(models[m], law, r.lo, r.hi, r.n);
    write_shock_csv(csv, rows, m == 0);
    for (const auto& row : rows) {
      if (!row.ok) {
        failures.push_back({{"model", model_name(models[m])}, {"mach_up", row.mach_up}, {"error", row.error}});
      }
    }
  }
  emit(o.out, csv.str(), out);
  if (!o.plot.empty()) {
    const std::string data = o.out.empty() || o.out == "-" ? "shock_curve.csv" : o.out;
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key top right\n"
       << "set xlabel 'upstream Mach number'\n"
       << "set ylabel 'downstream Mach number'\n"
       << "set title 'stationary shocks, gamma = " << o.common.gamma << "'\n"
       << "plot ";
    for (std::size_t m = 0; m < models.size(); ++m) {
      const std::string name(model_name(models[m]));
      gp << (m ? ", \\\n     " : "") << "'" << data << "' using 3:(strcol(1) eq '" << name
         << "' ? $4 : NaN) with lines title '" << name << "'";
    }
    gp << "\n";
    write_file_atomic(o.plot, gp.str());
  }
  if (!failures.empty()) {
    err << json{{"status", "numeric-failure"}, {"failures", failures}}.dump() << "\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// entropy-check

struct EntropyOpts {
  Common common;
  std::string model = "potential";
  std::string candidate = "energy";
  std::vector<double> coeffs;
  int samples = 11;
  std::string json_out;
};

int run_entropy_check(const EntropyOpts& o, std::ostream& out) {
  const PolytropicLaw law(o.common.gamma);
  const ModelKind model = parse_model(o.model);
  if (model != ModelKind::PotentialFlow && model != ModelKind::IsentropicEuler) {
    throw UsageError("entropy-check supports the potential and isentropic models");
  }
  if (o.samples < 3) {
    throw UsageError("--samples must be at least 3");
  }
  EntropyCandidate candidate;
  if (!o.coeffs.empty()) {
    if (o.coeffs.size() != 5) {
      throw UsageError("--coeffs takes five numbers: c0,c_rho,c_v,c_w,c_E");
    }
    candidate = span_candidate(law, model, {o.coeffs[0], o.coeffs[1], o.coeffs[2], o.coeffs[3], o.coeffs[4]});
  } else {
    candidate = named_candidate(law, o.candidate);
  }
  ClassificationOptions opts;
  opts.samples_per_axis = o.samples;
  const Classification c = classify_entropy(law, model, candidate, opts);

  json j;
  j["experiment"] = "entropy-check";
  j["model"] = std::string(model_name(model));
  j["gamma"] = o.common.gamma;
  j["candidate"] = candidate.name;
  j["coefficients"] = c.coefficients;
  j["fit_residual"] = c.fit_residual;
  j["compatibility_residual"] = c.compatibility_residual;
  j["compatibility_tolerance"] = c.compatibility_tolerance;
  j["pass"] = c.accepted;
  emit(o.json_out, j.dump(2) + "\n", out);
  return 0;
}

// ---------------------------------------------------------------------------
// hessian-scan

struct HessianOpts {
  Common common;
  std::string model = "potential";
  int dims = 2;
  std::string rho = "0.5:2:16";
  std::string mach = "0:1.5:31";
  double angle = 0.0;
  std::string out;
  std::string plot;
};

int run_hessian_scan(const HessianOpts& o, std::ostream& out) {
  const PolytropicLaw law(o.common.gamma);
  const ModelKind model = parse_model(o.model);
  if (model != ModelKind::PotentialFlow && model != ModelKind::IsentropicEuler) {
    throw UsageError("hessian-scan supports the potential and isentropic models");
  }
  if (o.dims != 1 && o.dims != 2) {
    throw UsageError("--dims must be 1 or 2");
  }
  const Range rr = parse_range(o.rho, "--rho");
  const Range mr = parse_range(o.mach, "--mach");
  if (!(rr.lo > 0.0) || !(mr.lo >= 0.0)) {
    throw UsageError("--rho must be positive and --mach nonnegative");
  }
  const double theta = o.dims == 2 ? o.angle * std::numbers::pi / 180.0 : 0.0;

  std::ostringstream csv;
  csv << "rho,mach,v,w,determinant,closed_form,positive_definite,sonic\n";
  for (int a = 0; a < rr.n; ++a) {
    const double rho = range_value(rr, a);
    const double c = sound_speed(law, rho);
    for (int b = 0; b < mr.n; ++b) {
      const double mach = range_value(mr, b);
      const double v = mach * c * std::cos(theta);
      const double w = mach * c * std::sin(theta);
      const State s = State::from_primitive(law, model, o.dims, rho, {v, o.dims == 2 ? w : 0.0});
      const HessianReport h = entropy_hessian(law, s);
      double closed = 0.0;
      if (model == ModelKind::PotentialFlow) {
        const double q2 = v * v + (o.dims == 2 ? w * w : 0.0);
        closed = o.dims == 2 ? rho * (c * c - q2) : c * c - q2;
      } else {
        closed = pi_derivative(law, rho) / (o.dims == 2 ? rho * rho : rho);
      }
      csv << fmt(rho) << ',' << fmt(mach) << ',' << fmt(v) << ',' << fmt(o.dims == 2 ? w : 0.0) << ','
          << fmt(h.determinant) << ',' << fmt(closed) << ',' << (h.positive_definite ? 1 : 0) << ','
          << (h.sonic ? 1 : 0) << '\n';
    }
  }
  emit(o.out, csv.str(), out);
  if (!o.plot.empty()) {
    const std::string data = o.out.empty() || o.out == "-" ? "hessian_scan.csv" : o.out;
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set xlabel 'Mach number'\n"
       << "set ylabel 'Hessian determinant'\n"
       << "set key off\n"
       << "plot '" << data << "' every ::1 using 2:5 with points pt 7 ps 0.4, 0 with lines lt 0\n";
    write_file_atomic(o.plot, gp.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  Common common;
  Setup setup;
  double tend = 0.2;
  double eps = 0.0;
  std::vector<double> outputs;
  std::string format = "csv";
  std::string prefix = "snapshot";
  std::string log;
};

int run_simulate(const SimulateOpts& o, const CLI::App* sub, std::ostream& out) {
  const PolytropicLaw law(o.common.gamma);
  const ModelKind model = parse_model(o.setup.model);
  const Grid grid = make_grid(o.setup);
  check_cfl(o.setup.cfl);
  if (o.format != "csv" && o.format != "binary") {
    throw UsageError("--format must be csv or binary");
  }
  RunConfig cfg;
  cfg.cfl = o.setup.cfl;
  cfg.end_time = o.tend;
  cfg.eps = o.eps;
  cfg.integrator = make_integrator(o.setup.integrator);
  cfg.output_times = o.outputs;
  cfg.validate();
  const Field initial = make_initial_condition(o.setup.ic, law, model, grid, make_params(o.setup));

  std::ostringstream log;
  log << "step,time";
  for (int k = 0; k < initial.components(); ++k) {
    log << ",total_" << k;
  }
  log << ",energy\n";
  long steps = 0;
  const auto write_log = [&](const Field& f) {
    log << steps << ',' << fmt(f.time());
    const Vector t = f.totals();
    for (int k = 0; k < t.size(); ++k) {
      log << ',' << fmt(t(k));
    }
    log << ',' << fmt(total_energy(f)) << '\n';
  };
  write_log(initial);
  const auto observer = [&](const Field&, const Field& after, double) {
    ++steps;
    write_log(after);
  };
  const std::vector<Field> snaps = simulate(initial, cfg, observer);

  json report = report_head("simulate", std::string(model_name(model)), o.common.gamma, sub);
  json series = json::array();
  json files = json::array();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "_%03zu", k);
    const std::string path = o.prefix + name + (o.format == "csv" ? ".csv" : ".bin");
    std::ostringstream buf;
    if (o.format == "csv") {
      write_field_csv(buf, snaps[k]);
    } else {
      write_field_binary(buf, snaps[k]);
    }
    write_file_atomic(path, buf.str());
    files.push_back(path);
    series.push_back({{"t", snaps[k].time()}, {"value", total_energy(snaps[k])}});
  }
  const std::string log_path = o.log.empty() ? o.prefix + "_conservation.csv" : o.log;
  write_file_atomic(log_path, log.str());
  report["series"] = series;
  report["steps"] = steps;
  report["files"] = files;
  report["log"] = log_path;
  out << report.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cone-test

struct ConeOpts {
  Common common;
  Setup setup;
  double threshold = 1e-6;
  double tend = 0.3;
  int outputs = 25;
  double lo = 0.5;
  double hi = 1.2;
  std::string json_out;
  std::string plot;
};

int run_cone(const ConeOpts& o, const CLI::App* sub, std::ostream& out) {
  const PolytropicLaw law(o.common.gamma);
  const ModelKind model = parse_model(o.setup.model);
  const Grid grid = make_grid(o.setup);
  check_cfl(o.setup.cfl);
  InitialConditionParams p = make_params(o.setup);
  InitialConditionParams flat = p;
  flat.amplitude = 0.0;
  const Field background = make_initial_condition(o.setup.ic, law, model, grid, flat);
  const Field perturbed = make_initial_condition(o.setup.ic, law, model, grid, p);
  ConeConfig cc;
  cc.threshold = o.threshold;
  cc.end_time = o.tend;
  cc.output_count = o.outputs;
  cc.cfl = o.setup.cfl;
  cc.integrator = make_integrator(o.setup.integrator);
  const ConeReport r = run_cone_test(background, perturbed, cc);

  json report = report_head("cone-test", std::string(model_name(model)), o.common.gamma, sub);
  json series = json::array();
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    series.push_back({{"t", r.times[k]}, {"value", r.support_radius[k]}});
  }
  report["series"] = series;
  report["fitted_speed"] = r.fitted_speed;
  report["wavespeed_bound"] = r.wavespeed_bound;
  report["speed_ratio"] = r.fitted_speed / r.wavespeed_bound;
  report["spacing"] = r.spacing;
  report["pass"] = cone_within(r, o.lo, o.hi);
  emit(o.json_out, report.dump(2) + "\n", out);
  if (!o.plot.empty()) {
    const std::string data = o.json_out.empty() || o.json_out == "-" ? "cone.json" : o.json_out;
    std::ostringstream gp;
    gp << "# support radius against time; extract series from " << data << " first, e.g.\n"
       << "#   jq -r '.series[] | \"\\(.t) \\(.value)\"' " << data << " > cone.dat\n"
       << "set xlabel 't'\n"
       << "set ylabel 'support radius'\n"
       << "plot 'cone.dat' using 1:2 with linespoints title 'measured', " << fmt(r.fitted_speed)
       << "*x title 'fit', " << fmt(r.wavespeed_bound) << "*x title 'max(|v|+c) t'\n";
    write_file_atomic(o.plot, gp.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// viscous-sweep

struct SweepOpts {
  Common common;
  Setup setup;
  std::vector<double> eps{0.04, 0.02, 0.01, 0.005};
  double tend = 0.5;
  int refine = 4;
  int outputs = 10;
  std::string json_out;
  std::string plot;
};

int run_sweep(const SweepOpts& o, const CLI::App* sub, std::ostream& out) {
  const PolytropicLaw law(o.common.gamma);
  const ModelKind model = parse_model(o.setup.model);
  const Grid grid = make_grid(o.setup);
  check_cfl(o.setup.cfl);
  const InitialConditionParams p = make_params(o.setup);
  ConvergenceConfig cc;
  cc.eps_values = o.eps;
  cc.end_time = o.tend;
  cc.refine = o.refine;
  cc.output_count = o.outputs;
  cc.cfl = o.setup.cfl;
  cc.integrator = make_integrator(o.setup.integrator);
  const auto factory = [&](const Grid& g) { return make_initial_condition(o.setup.ic, law, model, g, p); };
  const ConvergenceReport r = run_viscous_convergence(factory, grid, cc);

  json report = report_head("viscous-sweep", std::string(model_name(model)), o.common.gamma, sub);
  json series = json::array();
  for (std::size_t k = 0; k < r.eps_values.size(); ++k) {
    series.push_back({{"eps", r.eps_values[k]}, {"value", r.relent_norms[k]}});
  }
  report["series"] = series;
  report["fitted_order"] = r.fitted_order;
  report["ratios"] = r.ratios;
  report["grid_floor"] = r.grid_floor;
  report["above_floor"] = r.above_floor;
  json audits = json::array();
  for (const auto& run : r.runs) {
    audits.push_back({{"eps", run.eps},
                      {"steps", run.steps},
                      {"gronwall_rate", run.gronwall.rate},
                      {"gronwall_worst_excess", run.gronwall.worst_excess},
                      {"gronwall_holds", run.gronwall.holds},
                      {"worst_entropy_increase", run.worst_entropy_increase},
                      {"entropy_ok", run.entropy_ok}});
  }
  report["audits"] = audits;
  report["checks"] = {{"decreasing", r.decreasing},
                      {"ratios_in_window", r.ratios_ok},
                      {"gronwall", r.gronwall_ok},
                      {"entropy", r.entropy_ok}};
  report["pass"] = r.pass();
  emit(o.json_out, report.dump(2) + "\n", out);
  if (!o.plot.empty()) {
    std::ostringstream gp;
    gp << "set logscale xy\n"
       << "set xlabel 'eps'\n"
       << "set ylabel 'relative entropy at end time'\n"
       << "$data << EOD\n";
    for (std::size_t k = 0; k < r.eps_values.size(); ++k) {
      gp << fmt(r.eps_values[k]) << ' ' << fmt(r.relent_norms[k]) << '\n';
    }
    gp << "EOD\n"
       << "plot $data using 1:2 with linespoints title 'measured', " << fmt(r.grid_floor)
       << " with lines title 'grid floor'\n";
    write_file_atomic(o.plot, gp.str());
  }
  return 0;
}

void add_json_out(CLI::App* sub, std::string& target) {
  add(sub, "--json", target, "Write the JSON report here (default: stdout)");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conservation-law laboratory for potential flow, isentropic and full Euler", "potflow"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", "potflow 1.0.0");

  ShockOpts shock;
  auto* s_shock = app.add_subcommand("shock-curve", "Downstream against upstream Mach number of stationary shocks");
  add_common(s_shock, shock.common);
  add(s_shock, "--model", shock.model, "potential | isentropic | full_euler | all");
  add(s_shock, "--mach", shock.mach, "Upstream Mach numbers lo:hi:count");
  add(s_shock, "--out", shock.out, "CSV output path (default: stdout)");
  add(s_shock, "--plot", shock.plot, "Also write a gnuplot script here");

  EntropyOpts ent;
  auto* s_ent = app.add_subcommand("entropy-check", "Classify a candidate entropy by fit and compatibility");
  add_common(s_ent, ent.common);
  add(s_ent, "--model", ent.model, "potential | isentropic");
  auto* cand = add(s_ent, "--candidate", ent.candidate,
                                 "energy | momentum | velocity | kinetic | rho-v2 | one-d | sin-v");
  auto* coeffs = add(s_ent, "--coeffs", ent.coeffs, "Affine-plus-energy coefficients c0,c_rho,c_v,c_w,c_E")
                     ->delimiter(',')
                     ->expected(5);
  cand->excludes(coeffs);
  add(s_ent, "--samples", ent.samples, "Grid points per axis");
  add_json_out(s_ent, ent.json_out);

  HessianOpts hes;
  auto* s_hes = app.add_subcommand("hessian-scan", "Entropy Hessian determinant and definiteness over a state grid");
  add_common(s_hes, hes.common);
  add(s_hes, "--model", hes.model, "potential | isentropic");
  add(s_hes, "--dims", hes.dims, "1 or 2");
  add(s_hes, "--rho", hes.rho, "Densities lo:hi:count");
  add(s_hes, "--mach", hes.mach, "Mach numbers lo:hi:count");
  add(s_hes, "--angle", hes.angle, "Flow direction in degrees (2D)");
  add(s_hes, "--out", hes.out, "CSV output path (default: stdout)");
  add(s_hes, "--plot", hes.plot, "Also write a gnuplot script here");

  SimulateOpts sim;
  auto* s_sim = app.add_subcommand("simulate", "Run the finite-volume solver and write snapshots");
  add_common(s_sim, sim.common);
  add_setup(s_sim, sim.setup, true);
  add(s_sim, "--tend", sim.tend, "End time");
  add(s_sim, "--eps", sim.eps, "Viscosity coefficient");
  add(s_sim, "--outputs", sim.outputs, "Extra snapshot times, comma separated")->delimiter(',');
  add(s_sim, "--format", sim.format, "csv | binary");
  add(s_sim, "--out-prefix", sim.prefix, "Snapshot path prefix");
  add(s_sim, "--log", sim.log, "Conservation log path (default: <prefix>_conservation.csv)");

  ConeOpts cone;
  cone.setup.n = 1024;
  cone.setup.ic = "bump";
  cone.setup.amplitude = "1e-3";
  auto* s_cone = app.add_subcommand("cone-test", "Support growth of a compact perturbation against max(|v|+c)");
  add_common(s_cone, cone.common);
  add_setup(s_cone, cone.setup, false);
  add(s_cone, "--threshold", cone.threshold, "Support threshold on sup |U - Ubar|");
  add(s_cone, "--tend", cone.tend, "End time");
  add(s_cone, "--outputs", cone.outputs, "Number of measurement times");
  add(s_cone, "--lo", cone.lo, "Lower bound on fitted speed / wavespeed bound");
  add(s_cone, "--hi", cone.hi, "Upper bound on fitted speed / wavespeed bound");
  add_json_out(s_cone, cone.json_out);
  add(s_cone, "--plot", cone.plot, "Also write a gnuplot script here");

  SweepOpts sweep;
  sweep.setup.model = "burgers";
  sweep.setup.n = 1024;
  sweep.setup.lx = 2.0 * std::numbers::pi;
  sweep.setup.ic = "sine";
  auto* s_sweep = app.add_subcommand("viscous-sweep", "Relative entropy of viscous runs against a refined inviscid run");
  add_common(s_sweep, sweep.common);
  add_setup(s_sweep, sweep.setup, false);
  add(s_sweep, "--eps", sweep.eps, "Decreasing viscosities, comma separated")->delimiter(',');
  add(s_sweep, "--tend", sweep.tend, "End time (before shock formation)");
  add(s_sweep, "--refine", sweep.refine, "Reference refinement factor");
  add(s_sweep, "--outputs", sweep.outputs, "Audit times per run");
  add_json_out(s_sweep, sweep.json_out);
  add(s_sweep, "--plot", sweep.plot, "Also write a gnuplot script here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const Common* common = nullptr;
  if (name == "shock-curve") common = &shock.common;
  else if (name == "entropy-check") common = &ent.common;
  else if (name == "hessian-scan") common = &hes.common;
  else if (name == "simulate") common = &sim.common;
  else if (name == "cone-test") common = &cone.common;
  else common = &sweep.common;

  try {
    if (!common->config.empty()) {
      apply_config(sub, common->config);
    }
    if (common->dump) {
      json j;
      j[name] = resolved_config(sub);
      out << j.dump(2) << "\n";
      return 0;
    }
    if (name == "shock-curve") return run_shock_curve(shock, out, err);
    if (name == "entropy-check") return run_entropy_check(ent, out);
    if (name == "hessian-scan") return run_hessian_scan(hes, out);
    if (name == "simulate") return run_simulate(sim, sub, out);
    if (name == "cone-test") return run_cone(cone, sub, out);
    return run_sweep(sweep, sub, out);
  } catch (const SimulationError& e) {
    err << json{{"status", "numeric-failure"}, {"error", e.what()}, {"cell", e.cell()}, {"time", e.time()}}.dump()
        << "\n";
    return 2;
  } catch (const InconsistencyError& e) {
    err << json{{"status", "numeric-failure"}, {"error", e.what()}, {"first", e.first()}, {"second", e.second()}}
               .dump()
        << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << json{{"status", "numeric-failure"}, {"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace potflow
