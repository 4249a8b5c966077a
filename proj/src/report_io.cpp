#include "cda/report_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "cda/error.hpp"

namespace cda {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string(), errc::kIo);
  return os;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

constexpr const char* kHeader = "t,err_u_L2,err_T_L2,err_R_L2,err_u_L1,err_T_L1,err_R_L1,nudging_active";

// Scalar report fields carried in the manifest.
std::vector<std::pair<std::string, double TrackingReport::*>> scalar_fields() {
  return {{"decay_rate", &TrackingReport::decay_rate},
          {"decay_window_end", &TrackingReport::decay_window_end},
          {"floor", &TrackingReport::floor},
          {"growth_rate", &TrackingReport::growth_rate},
          {"jensen_worst_defect", &TrackingReport::jensen_worst_defect},
          {"boussinesq_worst_residual", &TrackingReport::boussinesq_worst_residual},
          {"boussinesq_worst_mean", &TrackingReport::boussinesq_worst_mean},
          {"divergence_worst", &TrackingReport::divergence_worst},
          {"energy_residual_u_max", &TrackingReport::energy_residual_u_max},
          {"energy_residual_T_max", &TrackingReport::energy_residual_T_max},
          {"energy_residual_u_mean", &TrackingReport::energy_residual_u_mean},
          {"energy_residual_T_mean", &TrackingReport::energy_residual_T_mean}};
}

std::string manifest_text(const RunConfig& config, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream os;
  os << "# cda run manifest\n";
  os << "# version = " << kVersion << "\n";
  os << "# timestamp = " << timestamp() << "\n";
  os << "# config_hash = " << config_hash(config) << "\n";
  try {
    const auto d = thermo::derived_coefficients(gas_model_from(config), {config.rho_bar, config.theta_bar});
    const auto tc = thermo::transport_coefficients(gas_model_from(config), config.theta_bar);
    os << "# derived.p_rho = " << fmt(d.p_rho) << "\n";
    os << "# derived.p_theta = " << fmt(d.p_theta) << "\n";
    os << "# derived.c_v = " << fmt(d.c_v) << "\n";
    os << "# derived.c_p = " << fmt(d.c_p) << "\n";
    os << "# derived.alpha = " << fmt(d.alpha) << "\n";
    os << "# derived.s_rho = " << fmt(d.s_rho) << "\n";
    os << "# derived.s_theta = " << fmt(d.s_theta) << "\n";
    os << "# derived.mu_bar = " << fmt(tc.mu) << "\n";
    os << "# derived.kappa_bar = " << fmt(tc.kappa) << "\n";
  } catch (const ValidationError& e) {
    os << "# derived.error = " << e.what() << "\n";
  }
  for (const auto& [k, v] : extra) os << "# " << k << " = " << v << "\n";
  os << serialize(config);
  return os.str();
}

}  // namespace

void write_timeseries(const TrackingReport& r, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << kHeader << "\n";
  for (std::size_t i = 0; i < r.rows(); ++i) {
    os << fmt(r.times[i]) << ',' << fmt(r.err_u[i]) << ',' << fmt(r.err_T[i]) << ',' << fmt(r.err_R[i]) << ','
       << fmt(r.err_u_L1[i]) << ',' << fmt(r.err_T_L1[i]) << ',' << fmt(r.err_R_L1[i]) << ',' << r.nudging_active[i]
       << "\n";
  }
  if (!os) throw ValidationError("write failed: " + path.string(), errc::kIo);
}

void read_timeseries(const std::filesystem::path& path, TrackingReport& r) {
  std::ifstream is(path);
  if (!is) throw ValidationError("time series not found: " + path.string(), errc::kFileNotFound);
  std::string line;
  std::getline(is, line);
  if (line != kHeader) throw ValidationError("unexpected time series header in " + path.string(), errc::kIo);
  r.times.clear();
  r.err_u.clear();
  r.err_T.clear();
  r.err_R.clear();
  r.err_u_L1.clear();
  r.err_T_L1.clear();
  r.err_R_L1.clear();
  r.nudging_active.clear();
  int n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw ValidationError(path.string() + ": line " + std::to_string(n) + ": expected 8 columns", errc::kIo);
    }
    try {
      r.times.push_back(std::stod(cells[0]));
      r.err_u.push_back(std::stod(cells[1]));
      r.err_T.push_back(std::stod(cells[2]));
      r.err_R.push_back(std::stod(cells[3]));
      r.err_u_L1.push_back(std::stod(cells[4]));
      r.err_T_L1.push_back(std::stod(cells[5]));
      r.err_R_L1.push_back(std::stod(cells[6]));
      r.nudging_active.push_back(std::stoi(cells[7]));
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ": line " + std::to_string(n) + ": malformed number", errc::kIo);
    }
  }
}

Manifest write_manifest(const RunConfig& config, const std::filesystem::path& dir,
                        const std::vector<std::pair<std::string, std::string>>& extra) {
  Manifest m;
  m.path = dir / "manifest.cfg";
  m.text = manifest_text(config, extra);
  auto os = open_out(m.path);
  os << m.text;
  if (!os) throw ValidationError("write failed: " + m.path.string(), errc::kIo);
  return m;
}

Manifest write_report(const TrackingReport& r, const RunConfig& config, const std::filesystem::path& dir) {
  write_timeseries(r, dir / "timeseries.csv");
  std::vector<std::pair<std::string, std::string>> extra;
  extra.emplace_back("report.rows", std::to_string(r.rows()));
  for (const auto& [name, field] : scalar_fields()) extra.emplace_back("report." + name, fmt(r.*field));
  extra.emplace_back("report.jensen_passed", r.jensen_passed ? "true" : "false");
  // The combined functional is not part of the table; keep it for exact read-back.
  std::string comb;
  for (double v : r.combined) comb += (comb.empty() ? "" : ",") + fmt(v);
  extra.emplace_back("report.combined", comb);
  return write_manifest(config, dir, extra);
}

TrackingReport read_report(const std::filesystem::path& dir) {
  const auto mpath = dir / "manifest.cfg";
  std::ifstream is(mpath);
  if (!is) throw ValidationError("manifest not found: " + mpath.string(), errc::kFileNotFound);
  std::ostringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const RunConfig config = parse_config(text);

  std::map<std::string, std::string> meta;
  std::istringstream ls(text);
  std::string line;
  while (std::getline(ls, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    meta[line.substr(2, eq - 2)] = line.substr(eq + 3);
  }

  TrackingReport r;
  read_timeseries(dir / "timeseries.csv", r);
  r.lambda = config.lambda;
  r.t_sync = config.t_sync;
  r.t_plus = config.t_plus;
  r.beta_fit = config.beta;
  for (const auto& [name, field] : scalar_fields()) {
    const auto it = meta.find("report." + name);
    if (it != meta.end()) r.*field = std::stod(it->second);
  }
  if (auto it = meta.find("report.jensen_passed"); it != meta.end()) r.jensen_passed = it->second == "true";
  if (auto it = meta.find("report.combined"); it != meta.end() && !it->second.empty()) {
    std::istringstream cs(it->second);
    std::string cell;
    while (std::getline(cs, cell, ',')) r.combined.push_back(std::stod(cell));
  }
  if (r.combined.size() != r.rows()) {
    // Rebuild the functional from the L² columns when it was not stored (mean term omitted).
    r.combined.clear();
    for (std::size_t i = 0; i < r.rows(); ++i) r.combined.push_back(r.err_u[i] * r.err_u[i] + r.err_T[i] * r.err_T[i]);
  }
  return r;
}

void write_sweep_table(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "lambda,delta,seed,err_u_L2,err_T_L2,err_R_L2,decay_rate,growth_rate\n";
  for (const auto& r : rows) {
    os << fmt(r.lambda) << ',' << fmt(r.delta) << ',' << r.seed << ',' << fmt(r.err_u) << ',' << fmt(r.err_T) << ','
       << fmt(r.err_R) << ',' << fmt(r.decay_rate) << ',' << fmt(r.growth_rate) << "\n";
  }
}

void write_observed_series(const std::vector<std::array<double, 4>>& rows, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "t,u_L2,T_L2,R_L2\n";
  for (const auto& r : rows) os << fmt(r[0]) << ',' << fmt(r[1]) << ',' << fmt(r[2]) << ',' << fmt(r[3]) << "\n";
}

}  // namespace cda
