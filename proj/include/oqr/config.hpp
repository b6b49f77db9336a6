#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oqr/magnus.hpp"
#include "oqr/pulse.hpp"
#include "oqr/rotor.hpp"

namespace oqr {

/// Evenly spaced axis; a single point sits at `min`.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

enum class InitialMode { Single, Thermal };
enum class Model { Exact, Magnus };
enum class OutputFormat { Csv, Json };

/// Fully resolved experiment description. Every field has a default; the
/// config file and CLI overrides replace them key by key.
struct ScanConfig {
  MoleculeSpec molecule = molecule_preset("HCN");

  double e0_v_per_m = 7.0e6;
  /// Empty means resonant (omega_c = omega_0 = 2B).
  std::optional<double> freq_thz;
  double phi_c = PulseParams::kZeroAreaPhase;

  InitialMode initial_mode = InitialMode::Thermal;
  RotLabel initial{0, 0};
  double temperature_k = 2.0;
  EnsembleWeighting weighting = EnsembleWeighting::Sublevel;
  double cutoff = kDefaultBoltzmannCutoff;

  /// 0 = auto_truncate.
  int j_max = kDefaultJMax;
  double tol = 1e-10;

  Grid e0_grid{1.0e5, 8.0e6, 40};
  /// Central ordinary frequencies f_c in THz; delta_1 = f_c - f_0.
  Grid freq_grid{0.072, 0.108, 40};
  bool full_resolution = false;
  Model model = Model::Exact;
  std::set<int> orders{1};

  MagnusOptions magnus;
  double magnus_time_e0 = 8.0e6;
  int magnus_time_samples = 201;

  int trace_samples = 2048;
  int density_times = 256;
  int theta_points = 181;
  int revivals = 2;

  Grid spectrum_grid{0.0, 0.5, 501};

  std::string output_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  bool plot_scripts = false;
  int threads = 1;

  /// Resonant ordinary frequency 2B / (2 pi) in THz.
  double resonant_freq_thz() const;
  PulseParams pulse() const;
  PulseParams pulse_at(double e0, double freq_thz) const;
  /// Axes after applying full_resolution.
  Grid effective_e0_grid() const;
  Grid effective_freq_grid() const;
};

/// Reads an INI document (sections become key prefixes, e.g. [pulse]
/// E0_V_per_m -> pulse.E0_V_per_m), then applies "key=value" overrides.
/// Throws ConfigError for unknown keys, malformed values or invalid ranges.
ScanConfig load_config(const std::optional<std::string>& path,
                       const std::vector<std::string>& overrides = {});

/// Same from in-memory text (for tests).
ScanConfig parse_config(const std::string& ini_text,
                        const std::vector<std::string>& overrides = {});

/// Every accepted key with its resolved value, sorted by key.
std::vector<std::pair<std::string, std::string>> resolved_entries(const ScanConfig& cfg);

std::vector<std::string> known_config_keys();

}  // namespace oqr
