#pragma once
/**
 * Run artifacts. A run directory holds
 *   timeseries.csv  t,err_u_L2,err_T_L2,err_R_L2,err_u_L1,err_T_L1,err_R_L1,nudging_active
 *   manifest.cfg    canonical configuration preceded by '#' lines with the
 *                   version, timestamp, config hash, derived coefficients and
 *                   fitted rates; parse_config() accepts it unchanged.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "cda/config.hpp"
#include "cda/experiments.hpp"

namespace cda {

inline constexpr const char* kVersion = "1.0.0";

struct Manifest {
  std::filesystem::path path;
  std::string text;
};

void write_timeseries(const TrackingReport& report, const std::filesystem::path& path);
/// Fills the series columns of `report` (combined is left empty).
void read_timeseries(const std::filesystem::path& path, TrackingReport& report);

/// Writes timeseries.csv and manifest.cfg into dir (created if needed).
Manifest write_report(const TrackingReport& report, const RunConfig& config, const std::filesystem::path& dir);
/// Reads a directory written by write_report back into a report.
TrackingReport read_report(const std::filesystem::path& dir);
/// Manifest header + canonical config for non-twin runs.
Manifest write_manifest(const RunConfig& config, const std::filesystem::path& dir,
                        const std::vector<std::pair<std::string, std::string>>& extra);

void write_sweep_table(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
void write_observed_series(const std::vector<std::array<double, 4>>& rows, const std::filesystem::path& path);

}  // namespace cda
