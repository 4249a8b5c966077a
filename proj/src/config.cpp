#include "cda/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cda/error.hpp"

namespace cda {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) throw ValidationError("expected a real number, got '" + s + "'", errc::kConfigSyntax);
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ValidationError("expected an integer, got '" + s + "'", errc::kConfigSyntax);
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw ValidationError("expected a nonnegative integer, got '" + s + "'", errc::kConfigSyntax);
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ValidationError("expected true or false, got '" + s + "'", errc::kConfigSyntax);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  if (out.empty()) throw ValidationError("expected a comma-separated list", errc::kConfigSyntax);
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what, errc::kConstraint);
}

int to_count(const std::string& s, int lo, const std::string& key) {
  const long long v = to_int(s);
  require(v >= lo && v <= 1 << 20, key + " must be an integer >= " + std::to_string(lo));
  return static_cast<int>(v);
}

struct Key {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::map<std::string, Key>& table() {
  static const std::map<std::string, Key> t = [] {
    std::map<std::string, Key> m;
    auto real = [&m](const std::string& name, double RunConfig::*field, std::function<void(double)> check) {
      m[name] = {[field](const RunConfig& c) { return fmt(c.*field); },
                 [field, check](RunConfig& c, const std::string& v) {
                   const double x = to_double(v);
                   if (check) check(x);
                   c.*field = x;
                 }};
    };
    auto positive = [](const std::string& name) {
      return [name](double x) { require(x > 0.0, name + " must be > 0"); };
    };
    auto nonneg = [](const std::string& name) {
      return [name](double x) { require(x >= 0.0, name + " must be >= 0"); };
    };

    m["experiment"] = {[](const RunConfig& c) { return c.experiment; },
                       [](RunConfig& c, const std::string& v) {
                         static const std::vector<std::string> ok{"simulate", "twin", "sweep", "check-eos",
                                                                  "check-interpolant"};
                         require(std::find(ok.begin(), ok.end(), v) != ok.end(),
                                 "experiment must be one of simulate, twin, sweep, check-eos, check-interpolant");
                         c.experiment = v;
                       }};
    m["seed"] = {[](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); }};
    m["output_dir"] = {[](const RunConfig& c) { return c.output_dir; },
                       [](RunConfig& c, const std::string& v) {
                         require(!v.empty(), "output_dir must not be empty");
                         c.output_dir = v;
                       }};
    m["gas_model"] = {[](const RunConfig& c) { return c.gas_model; },
                      [](RunConfig& c, const std::string& v) {
                        require(v == "ideal" || v == "degenerate", "gas_model must be ideal or degenerate");
                        c.gas_model = v;
                      }};

    real("gas.radiation_a", &RunConfig::radiation_a, nonneg("gas.radiation_a"));
    real("gas.kappa_deg", &RunConfig::kappa_deg, positive("gas.kappa_deg"));
    real("gas.z_c", &RunConfig::z_c, positive("gas.z_c"));
    real("gas.mu0", &RunConfig::mu0, positive("gas.mu0"));
    real("gas.eta0", &RunConfig::eta0, nonneg("gas.eta0"));
    real("gas.kappa0", &RunConfig::kappa0, positive("gas.kappa0"));
    real("gas.beta_cond", &RunConfig::beta_cond, [](double x) { require(x > 6.0, "gas.beta_cond must be > 6"); });
    real("gas.c_bound", &RunConfig::c_bound, positive("gas.c_bound"));

    m["grid.nx"] = {[](const RunConfig& c) { return std::to_string(c.grid.nx); },
                    [](RunConfig& c, const std::string& v) { c.grid.nx = to_count(v, 4, "grid.nx"); }};
    m["grid.ny"] = {[](const RunConfig& c) { return std::to_string(c.grid.ny); },
                    [](RunConfig& c, const std::string& v) { c.grid.ny = to_count(v, 4, "grid.ny"); }};
    m["grid.nz"] = {[](const RunConfig& c) { return std::to_string(c.grid.nz); },
                    [](RunConfig& c, const std::string& v) {
                      c.grid.nz = to_count(v, 1, "grid.nz");
                      require(c.grid.nz == 1 || c.grid.nz >= 4, "grid.nz must be 1 or >= 4");
                    }};
    m["grid.lx"] = {[](const RunConfig& c) { return fmt(c.grid.lx); },
                    [](RunConfig& c, const std::string& v) {
                      c.grid.lx = to_double(v);
                      require(c.grid.lx > 0.0, "grid.lx must be > 0");
                    }};
    m["grid.ly"] = {[](const RunConfig& c) { return fmt(c.grid.ly); },
                    [](RunConfig& c, const std::string& v) {
                      c.grid.ly = to_double(v);
                      require(c.grid.ly > 0.0, "grid.ly must be > 0");
                    }};
    m["grid.horizontal_bc"] = {[](const RunConfig& c) { return to_string(c.grid.horizontal_bc); },
                               [](RunConfig& c, const std::string& v) {
                                 require(v == "walls" || v == "periodic", "grid.horizontal_bc must be walls or periodic");
                                 c.grid.horizontal_bc = horizontal_bc_from_string(v);
                               }};

    real("reference.rho", &RunConfig::rho_bar, positive("reference.rho"));
    real("reference.theta", &RunConfig::theta_bar, positive("reference.theta"));
    real("boundary.dT_vertical", &RunConfig::dT_vertical, nullptr);
    real("boundary.dT_radial", &RunConfig::dT_radial, nullptr);
    real("potential.centrifugal", &RunConfig::centrifugal, nonneg("potential.centrifugal"));

    real("time.dt", &RunConfig::dt, positive("time.dt"));
    real("time.t_minus", &RunConfig::t_minus, [](double x) { require(x < 0.0, "time.t_minus must be < 0"); });
    real("time.t_zero", &RunConfig::t_zero, [](double x) { require(x == 0.0, "time.t_zero must be 0"); });
    real("time.t_sync", &RunConfig::t_sync, positive("time.t_sync"));
    real("time.t_plus", &RunConfig::t_plus, positive("time.t_plus"));
    m["time.output_every"] = {[](const RunConfig& c) { return std::to_string(c.output_every); },
                              [](RunConfig& c, const std::string& v) { c.output_every = to_count(v, 1, "time.output_every"); }};
    m["output.snapshot_every"] = {
        [](const RunConfig& c) { return std::to_string(c.snapshot_every); },
        [](RunConfig& c, const std::string& v) { c.snapshot_every = to_count(v, 0, "output.snapshot_every"); }};

    real("nudging.lambda", &RunConfig::lambda, [](double x) { require(x >= 0.0, "nudging.lambda must satisfy lambda >= 0"); });
    m["interpolant.kind"] = {[](const RunConfig& c) { return to_string(c.interpolant_kind); },
                             [](RunConfig& c, const std::string& v) { c.interpolant_kind = interpolant_kind_from_string(v); }};
    real("interpolant.delta", &RunConfig::delta, positive("interpolant.delta"));
    real("interpolant.delta_temperature", &RunConfig::delta_temperature, positive("interpolant.delta_temperature"));
    m["interpolant.vertical"] = {[](const RunConfig& c) { return c.vertical.to_string(); },
                                 [](RunConfig& c, const std::string& v) { c.vertical = VerticalLayout::parse(v); }};

    real("initial.u_amplitude", &RunConfig::u_amplitude, nonneg("initial.u_amplitude"));
    real("initial.T_amplitude", &RunConfig::T_amplitude, nonneg("initial.T_amplitude"));
    real("initial.d_sync", &RunConfig::d_sync, nonneg("initial.d_sync"));
    m["initial.sync"] = {[](const RunConfig& c) { return c.sync_init == SyncInit::Observed ? "observed" : "perturbed"; },
                         [](RunConfig& c, const std::string& v) {
                           require(v == "observed" || v == "perturbed", "initial.sync must be perturbed or observed");
                           c.sync_init = v == "observed" ? SyncInit::Observed : SyncInit::Perturbed;
                         }};

    m["sweep.lambdas"] = {[](const RunConfig& c) {
                            std::string s;
                            for (double x : c.sweep_lambdas) s += (s.empty() ? "" : ",") + fmt(x);
                            return s;
                          },
                          [](RunConfig& c, const std::string& v) {
                            std::vector<double> xs;
                            for (const auto& item : split_list(v)) {
                              xs.push_back(to_double(item));
                              require(xs.back() >= 0.0, "sweep.lambdas entries must be >= 0");
                            }
                            c.sweep_lambdas = xs;
                          }};
    m["sweep.deltas"] = {[](const RunConfig& c) {
                           std::string s;
                           for (double x : c.sweep_deltas) s += (s.empty() ? "" : ",") + fmt(x);
                           return s;
                         },
                         [](RunConfig& c, const std::string& v) {
                           std::vector<double> xs;
                           for (const auto& item : split_list(v)) {
                             xs.push_back(to_double(item));
                             require(xs.back() > 0.0, "sweep.deltas entries must be > 0");
                           }
                           c.sweep_deltas = xs;
                         }};
    m["sweep.seeds"] = {[](const RunConfig& c) {
                          std::string s;
                          for (auto x : c.sweep_seeds) s += (s.empty() ? "" : ",") + std::to_string(x);
                          return s;
                        },
                        [](RunConfig& c, const std::string& v) {
                          std::vector<std::uint64_t> xs;
                          for (const auto& item : split_list(v)) xs.push_back(to_u64(item));
                          c.sweep_seeds = xs;
                        }};
    m["sweep.workers"] = {[](const RunConfig& c) { return std::to_string(c.sweep_workers); },
                          [](RunConfig& c, const std::string& v) { c.sweep_workers = to_count(v, 1, "sweep.workers"); }};

    real("solver.tolerance", &RunConfig::solver_tolerance,
         [](double x) { require(x > 0.0 && x < 1.0, "solver.tolerance must lie in (0,1)"); });
    m["solver.max_iter"] = {[](const RunConfig& c) { return std::to_string(c.solver_max_iter); },
                            [](RunConfig& c, const std::string& v) { c.solver_max_iter = to_count(v, 1, "solver.max_iter"); }};

    real("experiment.beta", &RunConfig::beta,
         [](double x) { require(x > 0.0 && x < 1.0, "experiment.beta must lie in (0,1)"); });
    m["experiment.energy_diagnostics"] = {
        [](const RunConfig& c) { return c.energy_diagnostics ? "true" : "false"; },
        [](RunConfig& c, const std::string& v) { c.energy_diagnostics = to_bool(v); }};

    real("check.z_max", &RunConfig::check_z_max, positive("check.z_max"));
    m["check.samples"] = {[](const RunConfig& c) { return std::to_string(c.check_samples); },
                          [](RunConfig& c, const std::string& v) { c.check_samples = to_count(v, 2, "check.samples"); }};
    return m;
  }();
  return t;
}

std::string at_line(int line, const std::string& what) { return "line " + std::to_string(line) + ": " + what; }

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : table()) keys.push_back(k);
  return keys;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::string, int> seen;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(at_line(line, "expected 'key = value'"), errc::kConfigSyntax);
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto it = table().find(key);
    if (it == table().end()) throw ValidationError(at_line(line, "unknown key '" + key + "'"), errc::kUnknownKey);
    if (seen.count(key)) {
      throw ValidationError(at_line(line, "duplicate key '" + key + "' (first set on line " +
                                              std::to_string(seen[key]) + ")"),
                            errc::kConfigSyntax);
    }
    if (value.empty()) throw ValidationError(at_line(line, "missing value for '" + key + "'"), errc::kConfigSyntax);
    seen[key] = line;
    try {
      it->second.set(c, value);
    } catch (const ValidationError& e) {
      throw ValidationError(at_line(line, key + ": " + e.what()), e.code());
    }
  }
  if (!seen.count("interpolant.delta_temperature")) c.delta_temperature = c.delta;

  auto line_of = [&](std::initializer_list<const char*> keys) {
    int l = 0;
    for (const char* k : keys)
      if (seen.count(k)) l = std::max(l, seen[k]);
    return l;
  };
  auto cross = [&](bool ok, std::initializer_list<const char*> keys, const std::string& what) {
    if (!ok) throw ValidationError(at_line(line_of(keys), what), errc::kConstraint);
  };
  cross(c.t_minus < c.t_zero && c.t_zero < c.t_sync && c.t_sync < c.t_plus,
        {"time.t_minus", "time.t_zero", "time.t_sync", "time.t_plus"}, "time ordering must satisfy t_minus < t_zero = 0 < t_sync < t_plus");
  cross(c.lambda * c.dt <= 2.0, {"nudging.lambda", "time.dt"}, "nudging.lambda * time.dt must not exceed 2");
  cross(c.vertical.blocks <= c.grid.nz, {"interpolant.vertical", "grid.nz"}, "interpolant.vertical has more blocks than grid.nz");
  cross(c.interpolant_kind != InterpolantKind::SpectralCutoff || c.grid.horizontal_bc == HorizontalBC::Periodic,
        {"interpolant.kind", "grid.horizontal_bc"}, "spectral_cutoff requires grid.horizontal_bc = periodic");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("configuration file not found: " + path, errc::kFileNotFound);
  std::ostringstream ss;
  ss << is.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what(), e.code());
  }
}

std::string serialize(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : table()) out += k + " = " + v.get(config) + "\n";
  return out;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

thermo::GasModel gas_model_from(const RunConfig& c) {
  thermo::TransportLaws tl;
  tl.mu0 = c.mu0;
  tl.eta0 = c.eta0;
  tl.kappa0 = c.kappa0;
  tl.beta_cond = c.beta_cond;
  if (c.gas_model == "degenerate") {
    return thermo::GasModel(thermo::StructuralFunction::degenerate(c.kappa_deg, c.z_c), c.radiation_a, tl, c.c_bound);
  }
  return thermo::GasModel(thermo::StructuralFunction::ideal(), c.radiation_a, tl, c.c_bound);
}

ProblemSetup setup_from(const RunConfig& c) {
  SolverOptions opts;
  opts.tolerance = c.solver_tolerance;
  opts.max_iterations = c.solver_max_iter;
  return ProblemSetup::make(c.grid, gas_model_from(c), {c.rho_bar, c.theta_bar}, c.centrifugal,
                            {c.dT_vertical, c.dT_radial}, opts);
}

TwinExperimentConfig twin_config_from(const RunConfig& c) {
  TwinExperimentConfig t;
  t.setup = setup_from(c);
  t.nudging.lambda = c.lambda;
  t.nudging.window_end = c.t_sync;
  t.nudging.velocity = Interpolant(c.interpolant_kind, c.grid.horizontal(), c.delta);
  t.nudging.temperature = Interpolant(c.interpolant_kind, c.grid, c.delta_temperature, c.vertical);
  t.t_minus = c.t_minus;
  t.t_zero = c.t_zero;
  t.t_plus = c.t_plus;
  t.dt = c.dt;
  t.output_every = c.output_every;
  t.snapshot_every = c.snapshot_every;
  if (c.snapshot_every > 0) t.snapshot_dir = std::filesystem::path(c.output_dir) / "snapshots";
  t.u_amplitude = c.u_amplitude;
  t.T_amplitude = c.T_amplitude;
  t.d_sync = c.d_sync;
  t.sync_init = c.sync_init;
  t.seed = c.seed;
  t.beta_fit = c.beta;
  t.energy_diagnostics = c.energy_diagnostics;
  t.validate();
  return t;
}

}  // namespace cda
