#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oqr/config.hpp"
#include "oqr/observables.hpp"

namespace oqr {

struct ScanPoint {
  double e0 = 0.0;
  double freq_thz = 0.0;
  double delta1_thz = 0.0;
  std::optional<OqrReport> report;
  /// Final populations/phases at T (single-state mode only).
  std::optional<PhaseReport> phases;
  PropagationStats stats;
  /// Empty on success; otherwise the diagnostic of the failed point.
  std::string error;

  bool ok() const { return error.empty(); }
};

struct ScanResult {
  std::vector<double> e0_axis;
  std::vector<double> delta1_axis;
  std::vector<double> freq_axis;
  /// Row-major: points[i * delta1_axis.size() + k] is (e0_axis[i], delta1_axis[k]).
  std::vector<ScanPoint> points;
  double wall_seconds = 0.0;
  std::string version = OQR_VERSION;

  const ScanPoint& at(std::size_t i_e0, std::size_t k_delta) const {
    return points[i_e0 * delta1_axis.size() + k_delta];
  }
  std::size_t failures() const;
};

/// A_OQR over the (E0, delta_1) grid under the configured model. Points are
/// statically partitioned over cfg.threads workers and written to fixed
/// slots, so the result does not depend on the worker count. A failing point
/// records its error and leaves the rest of the grid intact.
ScanResult run_scan(const ScanConfig& cfg);

/// One grid point (also used by run_scan).
ScanPoint evaluate_point(const ScanConfig& cfg, double e0, double freq_thz);

struct SimulationResult {
  double pulse_end = 0.0;
  double revival = 0.0;
  OrientationTrace trace;            // over [0, T + revivals * tau]
  std::vector<double> density_times;
  std::vector<double> theta;
  std::vector<std::vector<double>> density;  // [time][theta]
  OqrReport report;
  std::vector<std::pair<RotLabel, PhaseReport>> final_phases;  // per member at T
  std::optional<ThermalEnsemble> ensemble;
  double wall_seconds = 0.0;
};

/// Thermal (or single-state) trace, density heat map and OQR report at the
/// configured pulse. Exact model only.
SimulationResult run_simulate(const ScanConfig& cfg);

struct PopulationRow {
  double x = 0.0;  // E0 (V/m) or t (ps)
  std::string order_tag;
  std::array<double, 3> populations{};
};

struct MagnusOrdersResult {
  std::vector<PopulationRow> final_vs_e0;
  std::vector<PopulationRow> time_resolved;
  double e0_time = 0.0;
  double wall_seconds = 0.0;
};

/// Single-order ({1}, {2}, {3}) and truncated ({1,2,3}) Magnus populations:
/// final populations over the E0 grid and time-resolved populations at
/// cfg.magnus_time_e0. Throws ConfigError for initial states outside the block.
MagnusOrdersResult run_magnus_orders(const ScanConfig& cfg);

struct SpectrumResult {
  std::vector<double> freq_thz;
  std::vector<double> magnitude;  // |A| in V/m * ps
};

SpectrumResult run_spectrum(const ScanConfig& cfg);

std::string order_tag(const std::set<int>& orders);

}  // namespace oqr
