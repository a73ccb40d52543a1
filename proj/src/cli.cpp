#include "torushopf/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "torushopf/lattice.hpp"
#include "torushopf/modes.hpp"
#include "torushopf/orbits.hpp"
#include "torushopf/serde.hpp"
#include "torushopf/stability.hpp"
#include "torushopf/symmetry.hpp"

namespace torushopf {

namespace {

struct CommonOpts {
  std::string variant = "vdp";
  int n = 3;
  double delta = 0.0;
  double zeta = 0.0;
  double epsilon = 0.0;
  double nu = 1.0;
  double a = 0.0;
  double b = 1.0;
  std::string output;  // empty = stdout
  std::string format;
};

void add_param_options(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--variant", c.variant,
                  "Model variant: vdp (bidirectional, coupled through y) or "
                  "vdpl (unidirectional, coupled through x)")
      ->check(CLI::IsMember({"vdp", "vdpl"}))
      ->capture_default_str();
  cmd->add_option("-N,--size", c.n, "Lattice size per axis (odd, >= 3)")
      ->capture_default_str();
  cmd->add_option("--delta", c.delta, "Coupling strength along axis 1")
      ->capture_default_str();
  cmd->add_option("--zeta", c.zeta, "Coupling strength along axis 2")
      ->capture_default_str();
  cmd->add_option("--epsilon", c.epsilon, "Coupling strength along axis 3")
      ->capture_default_str();
  cmd->add_option("--nu", c.nu, "Relaxation parameter nu (> 0)")
      ->capture_default_str();
  cmd->add_option("-a,--a", c.a, "Bifurcation parameter a")
      ->capture_default_str();
  cmd->add_option("-b,--b", c.b, "Frequency parameter b (> 0)")
      ->capture_default_str();
}

// The option structs are shared by every subcommand (only one parses per
// run), so per-command format defaults are applied at dispatch time.
void add_output_options(CLI::App* cmd, CommonOpts& c, std::string& config_file,
                        const std::string& default_format) {
  cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_str(default_format);
  cmd->add_option("--config", config_file,
                  "Flat key=value file with option names as keys; "
                  "command-line flags take precedence");
}

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Expands `--config file` into option tokens placed before the explicit
// command-line flags, so repeated-option resolution (take-last) gives the
// flags precedence. Keys are validated against the subcommand's options.
std::vector<std::string> expand_config_args(
    const CLI::App& app, const std::vector<std::string>& args) {
  if (args.empty() || args.front().empty() || args.front()[0] == '-')
    return args;
  const CLI::App* sub = app.get_subcommand_no_throw(args.front());
  if (!sub) return args;
  std::string path;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::string> out{args.front()};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trimmed(line);
    if (s.empty() || s[0] == '#') continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key=value: '" + s + "'");
    const std::string key = trimmed(s.substr(0, eq));
    std::string value = trimmed(s.substr(eq + 1));
    if (value.size() >= 2 &&
        ((value.front() == '"' && value.back() == '"') ||
         (value.front() == '\'' && value.back() == '\'')))
      value = value.substr(1, value.size() - 2);
    std::string flag = "--" + key;
    const CLI::Option* op = sub->get_option_no_throw(flag);
    if (!op && key.size() == 1) {
      flag = "-" + key;
      op = sub->get_option_no_throw(flag);
    }
    if (!op)
      throw ConfigError("unknown config key '" + key + "' for " +
                        args.front());
    out.push_back(flag);
    out.push_back(value);
  }
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

LatticeParams to_params(const CommonOpts& c) {
  LatticeParams p;
  p.variant = variant_from_name(c.variant);
  p.n = c.n;
  p.delta = c.delta;
  p.zeta = c.zeta;
  p.epsilon = c.epsilon;
  p.nu = c.nu;
  p.a = c.a;
  p.b = c.b;
  p.validate();
  return p;
}

ModeIndex parse_mode(const std::string& text, int n) {
  std::string clean;
  for (char ch : text)
    if (ch != '(' && ch != ')' && ch != ' ') clean.push_back(ch);
  std::istringstream is(clean);
  int v[3];
  char comma;
  for (int i = 0; i < 3; ++i) {
    if (i > 0 && (!(is >> comma) || comma != ','))
      throw ConfigError("mode must be three comma-separated integers, got '" +
                        text + "'");
    if (!(is >> v[i]))
      throw ConfigError("mode must be three comma-separated integers, got '" +
                        text + "'");
  }
  char trailing;
  if (is >> trailing)
    throw ConfigError("trailing characters in mode '" + text + "'");
  // The catalog lists one representative per conjugate pair t ~ -t.
  return canonical_mode({v[0], v[1], v[2]}, n);
}

void write_report(const CommonOpts& c, std::ostream& out,
                  const std::function<void(std::ostream&)>& emit) {
  if (c.output.empty()) {
    emit(out);
    return;
  }
  std::ofstream file(c.output);
  if (!file)
    throw ConfigError("cannot open output file '" + c.output + "'");
  emit(file);
}

void emit_json(const CommonOpts& c, std::ostream& out, const Json& doc) {
  write_report(c, out, [&](std::ostream& os) { os << doc.dump(2) << "\n"; });
}

void require_json(const CommonOpts& c, const std::string& command) {
  if (c.format != "json")
    throw ConfigError(command + " reports are json only");
}

const BifurcationRecord& catalog_record(
    const std::vector<BifurcationRecord>& records, const ModeIndex& t) {
  for (const auto& r : records)
    if (r.mode == t) return r;
  throw ConfigError("mode " + t.str() +
                    " has no bifurcation catalog entry for these parameters");
}

TwistedSubgroup pick_class(const BifurcationRecord& rec,
                           const std::string& requested, int n) {
  if (!requested.empty()) return parse_subgroup(requested, n);
  return rec.classes.front().subgroup;
}

Json floquet_json(const FloquetResult& fl) {
  Json mult = Json::array();
  for (const auto& m : fl.multipliers)
    mult.push_back(Json{{"re", m.real()},
                        {"im", m.imag()},
                        {"modulus", std::abs(m)}});
  return Json{{"multipliers", mult},
              {"trivial_defect", fl.trivial_defect},
              {"verdict", to_json(fl.verdict)}};
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo))
    throw ConfigError("nu grid needs 0 < nu-min < nu-max");
  if (count < 2) throw ConfigError("nu grid needs at least 2 points");
  std::vector<double> grid(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (count - 1.0));
  return grid;
}

void cmd_spectrum(const CommonOpts& c, std::ostream& out) {
  const LatticeParams p = to_params(c);
  write_report(c, out, [&](std::ostream& os) {
    if (c.format == "csv")
      csv_spectrum(os, p, c.a);
    else
      os << json_spectrum(p, c.a).dump(2) << "\n";
  });
}

void cmd_catalog(const CommonOpts& c, std::ostream& out) {
  const LatticeParams p = to_params(c);
  const auto records = bifurcation_catalog(p);
  write_report(c, out, [&](std::ostream& os) {
    if (c.format == "csv")
      csv_catalog(os, records);
    else
      os << json_catalog(records).dump(2) << "\n";
  });
}

void cmd_stability(const CommonOpts& c, std::ostream& out) {
  require_json(c, "stability");
  const LatticeParams p = to_params(c);
  Json doc{{"params", to_json(p)},
           {"equilibrium", to_json(equilibrium_stability(p, c.a))}};
  if (p.variant == Variant::VdplUnidirectionalX) {
    const ThresholdResult th = vdpl_threshold(p);
    doc["threshold"] = Json{{"a_star", th.a_star},
                            {"leading_mode", to_json(th.leading_mode)}};
  } else {
    doc["instability_scan"] = to_json(vdp_instability_criterion(p));
  }
  emit_json(c, out, doc);
}

struct SeedOpts {
  std::string mode = "0,0,0";
  std::string symmetry;
  double amplitude = 0.0;  // 0 = square-root law from the onset
};

void add_seed_options(CLI::App* cmd, SeedOpts& s) {
  cmd->add_option("--seed-mode", s.mode,
                  "Mode t1,t2,t3 whose fixed-point subspace seeds the run")
      ->capture_default_str();
  cmd->add_option("--seed-symmetry", s.symmetry,
                  "Symmetry class name (default: first class of the mode)");
  cmd->add_option("--amplitude", s.amplitude,
                  "Override the seed norm (default: onset scaling)");
}

BranchSeed build_seed(const LatticeParams& p, const SeedOpts& s,
                      ModeIndex* mode_out = nullptr,
                      TwistedSubgroup* class_out = nullptr) {
  const ModeIndex t = parse_mode(s.mode, p.n);
  const auto records = bifurcation_catalog(p);
  const BifurcationRecord& rec = catalog_record(records, t);
  const TwistedSubgroup h = pick_class(rec, s.symmetry, p.n);
  BranchSeed seed = seed_from_class(p, t, h, rec.critical_a);
  if (s.amplitude > 0.0)
    seed.state *= s.amplitude / seed.state.norm();
  if (mode_out) *mode_out = t;
  if (class_out) *class_out = h;
  return seed;
}

struct SimulateOpts {
  double t_final = 100.0;
  int samples = 200;
  std::string initial_file;
  double atol = IntegratorOptions{}.atol;
  double rtol = IntegratorOptions{}.rtol;
};

Eigen::VectorXd initial_from_file(const LatticeParams& p,
                                  const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read initial state file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("initial state file '" + path + "': " + e.what());
  }
  const int m = p.sites();
  Eigen::VectorXd v(2 * m);
  if (doc.is_array()) {
    if (static_cast<int>(doc.size()) != 2 * m)
      throw ConfigError("initial state needs " + std::to_string(2 * m) +
                        " values (x block then y block)");
    for (int i = 0; i < 2 * m; ++i) v[i] = doc[i].get<double>();
    return v;
  }
  if (doc.is_object() && doc.contains("x") && doc.contains("y")) {
    const auto& x = doc["x"];
    const auto& y = doc["y"];
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != m)
      throw ConfigError("initial state x and y arrays need " +
                        std::to_string(m) + " values each");
    for (int i = 0; i < m; ++i) v[i] = x[i].get<double>();
    for (int i = 0; i < m; ++i) v[m + i] = y[i].get<double>();
    return v;
  }
  throw ConfigError(
      "initial state file must hold a flat array or an {x, y} object");
}

void cmd_simulate(const CommonOpts& c, const SeedOpts& s,
                  const SimulateOpts& sim, std::ostream& out) {
  const LatticeParams p = to_params(c);
  Eigen::VectorXd x0 = sim.initial_file.empty()
                           ? build_seed(p, s).state
                           : initial_from_file(p, sim.initial_file);
  IntegratorOptions iopt;
  iopt.atol = sim.atol;
  iopt.rtol = sim.rtol;
  const Trajectory tr =
      integrate_trajectory(p, x0, sim.t_final, sim.samples, iopt);
  write_report(c, out, [&](std::ostream& os) {
    if (c.format == "csv")
      csv_trajectory(os, p, tr);
    else
      os << json_trajectory(p, tr).dump(2) << "\n";
  });
}

struct OrbitOpts {
  double period_guess = 0.0;  // 0 = limit period of the seeded mode
  int samples = 256;
  double tolerance = 1e-10;
  int max_iterations = 30;
};

void add_orbit_options(CLI::App* cmd, OrbitOpts& o) {
  cmd->add_option("--period-guess", o.period_guess,
                  "Initial period guess (default: the mode's limit period)");
  cmd->add_option("--samples", o.samples, "Stored samples per period")
      ->capture_default_str();
  cmd->add_option("--tolerance", o.tolerance, "Newton tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iterations", o.max_iterations, "Newton iteration cap")
      ->capture_default_str();
}

ShootOptions shoot_options(const OrbitOpts& o) {
  ShootOptions opt;
  opt.samples = o.samples;
  opt.tolerance = o.tolerance;
  opt.max_iterations = o.max_iterations;
  return opt;
}

void cmd_orbit(const CommonOpts& c, const SeedOpts& s, const OrbitOpts& o,
               std::ostream& out) {
  require_json(c, "orbit");
  const LatticeParams p = to_params(c);
  ModeIndex t;
  TwistedSubgroup h;
  const BranchSeed seed = build_seed(p, s, &t, &h);
  const double t_guess =
      o.period_guess > 0.0 ? o.period_guess : seed.period_guess;
  const ShootResult res =
      find_orbit_shooting(p, seed.state, t_guess, shoot_options(o));
  if (res.status != ShootStatus::Converged) {
    std::ostringstream os;
    os << "shooting " << shoot_status_name(res.status) << " after "
       << res.iterations << " iterations (residual " << res.residual << ")";
    throw ConvergenceError(os.str());
  }
  const FloquetResult fl = floquet_analysis(res.orbit);
  const SymmetryReport rep = verify_orbit_symmetry(res.orbit, h);
  Json doc{{"status", shoot_status_name(res.status)},
           {"iterations", res.iterations},
           {"seed_mode", to_json(t)},
           {"symmetry", h.name()},
           {"amplitude", res.orbit.amplitude()},
           {"floquet", floquet_json(fl)},
           {"symmetry_report", to_json(rep)},
           {"orbit", to_json(res.orbit)}};
  emit_json(c, out, doc);
}

struct TraceOpts {
  std::string mode;
  double a_from = std::numeric_limits<double>::quiet_NaN();
  double a_to = std::numeric_limits<double>::quiet_NaN();
  int steps = 8;
};

void cmd_trace(const CommonOpts& c, const SeedOpts& s, const OrbitOpts& o,
               const TraceOpts& tro, std::ostream& out) {
  const LatticeParams p = to_params(c);
  const ModeIndex t = parse_mode(tro.mode, p.n);
  const auto records = bifurcation_catalog(p);
  const BifurcationRecord& rec = catalog_record(records, t);
  const TwistedSubgroup h = pick_class(rec, s.symmetry, p.n);
  const double a_from =
      std::isnan(tro.a_from) ? rec.critical_a : tro.a_from;
  const double a_to = std::isnan(tro.a_to) ? a_from + 0.2 : tro.a_to;
  const BranchTrace trace =
      trace_branch(p, rec, h, {a_from, a_to}, tro.steps, shoot_options(o));
  write_report(c, out, [&](std::ostream& os) {
    if (c.format == "csv")
      csv_branch(os, trace);
    else
      os << json_branch(trace).dump(2) << "\n";
  });
}

void cmd_verify(const CommonOpts& c, const std::string& orbit_file,
                const std::string& symmetry, double tolerance,
                std::ostream& out) {
  require_json(c, "verify");
  std::ifstream in(orbit_file);
  if (!in) throw ConfigError("cannot read orbit file '" + orbit_file + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("orbit file '" + orbit_file + "': " + e.what());
  }
  // Accept both a bare orbit object and a full `orbit` command report.
  const PeriodicOrbit orbit =
      orbit_from_json(doc.is_object() && doc.contains("orbit")
                          ? doc["orbit"]
                          : doc);
  const TwistedSubgroup h = parse_subgroup(symmetry, orbit.params.n);
  const SymmetryReport rep = verify_orbit_symmetry(orbit, h, tolerance);
  emit_json(c, out,
            Json{{"symmetry", h.name()},
                 {"period", orbit.period},
                 {"report", to_json(rep)}});
}

struct ExistenceOpts {
  double period = 0.0;
  std::string mode;
  std::string symmetry;
  double nu_min = 0.05;
  double nu_max = 5.0;
  int nu_count = 30;
  int jobs = 0;
};

void cmd_existence(const CommonOpts& c, const OrbitOpts& o,
                   const ExistenceOpts& ex, std::ostream& out) {
  require_json(c, "existence");
  const LatticeParams p = to_params(c);
  if (!(ex.period > 0.0)) throw ConfigError("period must be positive");
  const auto entries = admissible_period_catalog(p, ex.period);
  if (ex.mode.empty()) {
    if (entries.empty())
      throw PreconditionError("no admissible modes for period " +
                              format_double(ex.period));
    Json list = Json::array();
    for (const auto& e : entries) list.push_back(to_json(e));
    emit_json(c, out, Json{{"period", ex.period}, {"admissible", list}});
    return;
  }
  const ModeIndex t = parse_mode(ex.mode, p.n);
  const AdmissibleEntry* entry = nullptr;
  for (const auto& e : entries)
    if (e.mode == t) entry = &e;
  if (!entry)
    throw PreconditionError("mode " + t.str() +
                            " is not admissible for period " +
                            format_double(ex.period));
  const TwistedSubgroup h = ex.symmetry.empty()
                                ? entry->classes.front().subgroup
                                : parse_subgroup(ex.symmetry, p.n);
  ShootOptions opt = shoot_options(o);
  opt.jobs = ex.jobs;
  const auto grid = log_grid(ex.nu_min, ex.nu_max, ex.nu_count);
  const ExistenceResult res = existence_search(p, ex.period, t, h, grid, opt);
  emit_json(c, out, to_json(res));
}

Json error_json(const std::string& type, const std::string& message) {
  return Json{{"error", Json{{"type", type}, {"message", message}}}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Hopf bifurcations of van der Pol type oscillators coupled on a "
      "periodic N x N x N lattice: mode spectra, bifurcation catalogs, "
      "equilibrium and orbit stability, periodic orbit continuation."};
  app.require_subcommand(1);
  // Config expansion feeds file values as repeated options ahead of the
  // explicit flags; take-last then gives the flags precedence.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CommonOpts c;
  std::string config_file;
  SeedOpts seed;
  SimulateOpts sim;
  OrbitOpts orb;
  TraceOpts tro;
  ExistenceOpts ex;
  std::string verify_orbit_file, verify_symmetry;
  double verify_tolerance = 1e-4;

  auto* spectrum = app.add_subcommand(
      "spectrum", "Per-mode coupling scalars and eigenvalue pairs");
  add_param_options(spectrum, c);
  add_output_options(spectrum, c, config_file, "csv");
  spectrum->callback([&] {
    if (c.format.empty()) c.format = "csv";
    cmd_spectrum(c, out); });

  auto* catalog = app.add_subcommand(
      "catalog", "Bifurcation points with symmetry classes and branch counts");
  add_param_options(catalog, c);
  add_output_options(catalog, c, config_file, "csv");
  catalog->callback([&] {
    if (c.format.empty()) c.format = "csv";
    cmd_catalog(c, out); });

  auto* stability = app.add_subcommand(
      "stability",
      "Equilibrium spectrum verdict, stability threshold, instability scan");
  add_param_options(stability, c);
  add_output_options(stability, c, config_file, "json");
  stability->callback([&] {
    if (c.format.empty()) c.format = "json";
    cmd_stability(c, out); });

  auto* simulate =
      app.add_subcommand("simulate", "Integrate the lattice and dump states");
  add_param_options(simulate, c);
  add_output_options(simulate, c, config_file, "csv");
  add_seed_options(simulate, seed);
  simulate->add_option("--t-final", sim.t_final, "Integration time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--samples", sim.samples, "Stored states after t=0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--initial", sim.initial_file,
                       "JSON file with the initial state (overrides seeding)");
  simulate->add_option("--atol", sim.atol, "Absolute tolerance")
      ->capture_default_str();
  simulate->add_option("--rtol", sim.rtol, "Relative tolerance")
      ->capture_default_str();
  simulate->callback([&] {
    if (c.format.empty()) c.format = "csv";
    cmd_simulate(c, seed, sim, out); });

  auto* orbit = app.add_subcommand(
      "orbit", "Refine a periodic orbit by shooting; report Floquet "
               "multipliers and the symmetry check");
  add_param_options(orbit, c);
  add_output_options(orbit, c, config_file, "json");
  add_seed_options(orbit, seed);
  add_orbit_options(orbit, orb);
  orbit->callback([&] {
    if (c.format.empty()) c.format = "json";
    cmd_orbit(c, seed, orb, out); });

  auto* trace = app.add_subcommand(
      "trace", "Continue a branch in a from its onset, verifying symmetry");
  add_param_options(trace, c);
  add_output_options(trace, c, config_file, "csv");
  add_orbit_options(trace, orb);
  trace->add_option("--mode", tro.mode, "Branch mode t1,t2,t3")->required();
  trace->add_option("--symmetry", seed.symmetry,
                    "Symmetry class (default: first class of the mode)");
  trace->add_option("--a-from", tro.a_from,
                    "Continuation start (default: the onset)");
  trace->add_option("--a-to", tro.a_to,
                    "Continuation end (default: onset + 0.2)");
  trace->add_option("--steps", tro.steps, "Continuation points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  trace->callback([&] {
    if (c.format.empty()) c.format = "csv";
    cmd_trace(c, seed, orb, tro, out); });

  auto* verify = app.add_subcommand(
      "verify", "Check a stored orbit against a twisted symmetry class");
  add_output_options(verify, c, config_file, "json");
  verify->add_option("--orbit", verify_orbit_file, "Orbit JSON file")
      ->required();
  verify->add_option("--symmetry", verify_symmetry,
                     "Class name, e.g. \"(Z3 x Z3 x Z3)^(1,1,1)\"")
      ->required();
  verify->add_option("--tolerance", verify_tolerance,
                     "Defect tolerance relative to the orbit amplitude")
      ->capture_default_str();
  verify->callback([&] {
    if (c.format.empty()) c.format = "json";
    cmd_verify(c, verify_orbit_file, verify_symmetry, verify_tolerance, out);
  });

  auto* existence = app.add_subcommand(
      "existence", "Admissible modes for a prescribed period; sweep nu for "
                   "an orbit of that exact period");
  add_param_options(existence, c);
  add_output_options(existence, c, config_file, "json");
  add_orbit_options(existence, orb);
  existence->add_option("-p,--period", ex.period, "Prescribed period")
      ->required();
  existence->add_option("--mode", ex.mode,
                        "Mode to search (omit to list admissible modes)");
  existence->add_option("--symmetry", ex.symmetry,
                        "Symmetry class (default: first class of the mode)");
  existence->add_option("--nu-min", ex.nu_min, "Sweep lower bound")
      ->capture_default_str();
  existence->add_option("--nu-max", ex.nu_max, "Sweep upper bound")
      ->capture_default_str();
  existence->add_option("--nu-count", ex.nu_count, "Sweep points (log-spaced)")
      ->capture_default_str();
  existence->add_option("--jobs", ex.jobs,
                        "Worker threads for the sweep (0 = all cores)")
      ->capture_default_str();
  existence->callback([&] {
    if (c.format.empty()) c.format = "json";
    cmd_existence(c, orb, ex, out); });

  try {
    const std::vector<std::string> expanded = expand_config_args(app, args);
    std::vector<const char*> argv;
    argv.reserve(expanded.size() + 1);
    argv.push_back("torus-hopf");
    for (const auto& a : expanded) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("config", e.what()).dump(2) << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << error_json("config", e.what()).dump(2) << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << error_json("convergence", e.what()).dump(2) << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << error_json("precondition", e.what()).dump(2) << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()).dump(2) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace torushopf
