#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "oqr/config.hpp"
#include "oqr/scan.hpp"

namespace oqr {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Writes `<stem>.csv` or `<stem>.json` under dir; returns the path written.
/// Doubles are printed with %.15g, so identical inputs give identical bytes.
/// Throws std::runtime_error with the path on I/O failure.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  const std::string& stem, OutputFormat format);

std::string format_number(double v);

/// Resolved config echo plus version; callers add timings and summaries.
nlohmann::json base_metadata(const ScanConfig& cfg, const std::string& command);

void write_metadata(const nlohmann::json& meta, const std::filesystem::path& dir);

Table scan_matrix_table(const ScanResult& r);
Table scan_points_table(const ScanResult& r);
Table scan_phase_table(const ScanResult& r);
Table trace_table(const SimulationResult& r);
Table density_table(const SimulationResult& r);
Table member_phase_table(const SimulationResult& r);
Table population_table(const std::vector<PopulationRow>& rows, const std::string& x_column);
Table spectrum_table(const SpectrumResult& r);
/// Interaction-picture coefficients at each snapshot: t_ps, re_c_J.., im_c_J...
Table trajectory_table(const Trajectory& tr);

/// Data files, metadata.json and (optionally) plot scripts for each command.
/// Return the list of files written.
std::vector<std::filesystem::path> write_outputs(const ScanResult& r, const ScanConfig& cfg);
std::vector<std::filesystem::path> write_outputs(const SimulationResult& r, const ScanConfig& cfg);
std::vector<std::filesystem::path> write_outputs(const MagnusOrdersResult& r, const ScanConfig& cfg);
std::vector<std::filesystem::path> write_outputs(const SpectrumResult& r, const ScanConfig& cfg);
/// Density-only output of a simulation.
std::vector<std::filesystem::path> write_density_outputs(const SimulationResult& r,
                                                         const ScanConfig& cfg);

}  // namespace oqr
