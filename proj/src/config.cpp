#include "oqr/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "oqr/errors.hpp"
#include "oqr/units.hpp"

namespace oqr {

namespace {

constexpr int kFullResolution = 161;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

std::set<int> to_orders(const std::string& key, const std::string& value) {
  std::set<int> orders;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const int n = to_int(key, item);
    if (n < 1 || n > 3) throw ConfigError(key + ": Magnus orders must lie in {1, 2, 3}");
    orders.insert(n);
  }
  if (orders.empty()) throw ConfigError(key + ": at least one Magnus order required");
  return orders;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Raw key/value collection shared by file and override inputs.
using RawEntries = std::map<std::string, std::string>;

void collect(const boost::property_tree::ptree& tree, const std::string& prefix, RawEntries& out) {
  for (const auto& [name, child] : tree) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (child.empty()) {
      out[key] = trim(child.data());
    } else {
      collect(child, key, out);
    }
  }
}

struct KeyHandler {
  std::function<void(ScanConfig&, const std::string&, const std::string&)> apply;
};

// Deferred values that depend on the resolved molecule.
struct Pending {
  std::optional<std::string> preset;
  std::optional<std::string> name;
  std::optional<double> b_cm;
  std::optional<double> mu_debye;
  std::optional<double> delta_min;
  std::optional<double> delta_max;
};

const std::map<std::string, KeyHandler>& handlers() {
  using C = ScanConfig;
  using S = const std::string&;
  static const std::map<std::string, KeyHandler> table = {
      {"pulse.E0_V_per_m", {[](C& c, S k, S v) { c.e0_v_per_m = to_double(k, v); }}},
      {"pulse.freq_THz",
       {[](C& c, S k, S v) {
          if (v == "resonant") {
            c.freq_thz.reset();
          } else {
            c.freq_thz = to_double(k, v);
          }
        }}},
      {"pulse.phi_c_rad", {[](C& c, S k, S v) { c.phi_c = to_double(k, v); }}},
      {"initial.mode",
       {[](C& c, S k, S v) {
          if (v == "single") {
            c.initial_mode = InitialMode::Single;
          } else if (v == "thermal") {
            c.initial_mode = InitialMode::Thermal;
          } else {
            throw ConfigError(k + ": expected 'single' or 'thermal'");
          }
        }}},
      {"initial.J", {[](C& c, S k, S v) { c.initial.j = to_int(k, v); }}},
      {"initial.M", {[](C& c, S k, S v) { c.initial.m = to_int(k, v); }}},
      {"initial.temperature_K", {[](C& c, S k, S v) { c.temperature_k = to_double(k, v); }}},
      {"initial.weighting",
       {[](C& c, S k, S v) {
          if (v == "sublevel") {
            c.weighting = EnsembleWeighting::Sublevel;
          } else if (v == "level") {
            c.weighting = EnsembleWeighting::Level;
          } else {
            throw ConfigError(k + ": expected 'sublevel' or 'level'");
          }
        }}},
      {"initial.cutoff", {[](C& c, S k, S v) { c.cutoff = to_double(k, v); }}},
      {"basis.J_max",
       {[](C& c, S k, S v) { c.j_max = v == "auto" ? 0 : to_int(k, v); }}},
      {"solver.tol", {[](C& c, S k, S v) { c.tol = to_double(k, v); }}},
      {"scan.E0_min_V_per_m", {[](C& c, S k, S v) { c.e0_grid.min = to_double(k, v); }}},
      {"scan.E0_max_V_per_m", {[](C& c, S k, S v) { c.e0_grid.max = to_double(k, v); }}},
      {"scan.E0_count", {[](C& c, S k, S v) { c.e0_grid.count = to_int(k, v); }}},
      {"scan.freq_min_THz", {[](C& c, S k, S v) { c.freq_grid.min = to_double(k, v); }}},
      {"scan.freq_max_THz", {[](C& c, S k, S v) { c.freq_grid.max = to_double(k, v); }}},
      {"scan.freq_count", {[](C& c, S k, S v) { c.freq_grid.count = to_int(k, v); }}},
      {"scan.delta1_count", {[](C& c, S k, S v) { c.freq_grid.count = to_int(k, v); }}},
      {"scan.full_resolution", {[](C& c, S k, S v) { c.full_resolution = to_bool(k, v); }}},
      {"scan.model",
       {[](C& c, S k, S v) {
          if (v == "exact") {
            c.model = Model::Exact;
          } else if (v == "magnus") {
            c.model = Model::Magnus;
          } else {
            throw ConfigError(k + ": expected 'exact' or 'magnus'");
          }
        }}},
      {"scan.orders", {[](C& c, S k, S v) { c.orders = to_orders(k, v); }}},
      {"magnus.standard_third_order",
       {[](C& c, S k, S v) { c.magnus.standard_third_order = to_bool(k, v); }}},
      {"magnus.tol", {[](C& c, S k, S v) { c.magnus.tol = to_double(k, v); }}},
      {"magnus.E0_time_V_per_m", {[](C& c, S k, S v) { c.magnus_time_e0 = to_double(k, v); }}},
      {"magnus.time_samples", {[](C& c, S k, S v) { c.magnus_time_samples = to_int(k, v); }}},
      {"simulate.trace_samples", {[](C& c, S k, S v) { c.trace_samples = to_int(k, v); }}},
      {"simulate.density_times", {[](C& c, S k, S v) { c.density_times = to_int(k, v); }}},
      {"simulate.theta_points", {[](C& c, S k, S v) { c.theta_points = to_int(k, v); }}},
      {"simulate.revivals", {[](C& c, S k, S v) { c.revivals = to_int(k, v); }}},
      {"spectrum.freq_min_THz", {[](C& c, S k, S v) { c.spectrum_grid.min = to_double(k, v); }}},
      {"spectrum.freq_max_THz", {[](C& c, S k, S v) { c.spectrum_grid.max = to_double(k, v); }}},
      {"spectrum.count", {[](C& c, S k, S v) { c.spectrum_grid.count = to_int(k, v); }}},
      {"output.dir", {[](C& c, S, S v) { c.output_dir = v; }}},
      {"output.format",
       {[](C& c, S k, S v) {
          if (v == "csv") {
            c.format = OutputFormat::Csv;
          } else if (v == "json") {
            c.format = OutputFormat::Json;
          } else {
            throw ConfigError(k + ": expected 'csv' or 'json'");
          }
        }}},
      {"output.plot_scripts", {[](C& c, S k, S v) { c.plot_scripts = to_bool(k, v); }}},
      {"run.threads", {[](C& c, S k, S v) { c.threads = to_int(k, v); }}},
  };
  return table;
}

const std::set<std::string>& deferred_keys() {
  static const std::set<std::string> keys = {
      "molecule.preset",          "molecule.name",          "molecule.B_cm_inv",
      "molecule.mu_debye",        "scan.delta1_min_THz",    "scan.delta1_max_THz"};
  return keys;
}

void validate(const ScanConfig& c) {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.e0_v_per_m >= 0.0, "pulse.E0_V_per_m must be >= 0");
  require(!c.freq_thz || *c.freq_thz > 0.0, "pulse.freq_THz must be > 0");
  require(c.temperature_k > 0.0, "initial.temperature_K must be > 0");
  require(c.cutoff > 0.0 && c.cutoff < 1.0, "initial.cutoff must lie in (0, 1)");
  require(c.initial.j >= 0 && std::abs(c.initial.m) <= c.initial.j,
          "initial state needs J >= 0 and |M| <= J");
  require(c.j_max == 0 || c.j_max >= std::max(std::abs(c.initial.m) + 2, c.initial.j + 2),
          "basis.J_max must be 'auto' or >= max(|M| + 2, J + 2)");
  require(c.tol > 0.0 && c.tol < 1e-2, "solver.tol must lie in (0, 1e-2)");
  require(c.e0_grid.count >= 1, "scan.E0_count must be >= 1");
  require(c.freq_grid.count >= 1, "scan.delta1_count / scan.freq_count must be >= 1");
  require(c.e0_grid.min >= 0.0 && c.e0_grid.max >= c.e0_grid.min,
          "scan E0 range needs 0 <= min <= max");
  require(c.freq_grid.min > 0.0 && c.freq_grid.max >= c.freq_grid.min,
          "scan frequency range needs 0 < min <= max");
  require(c.magnus.tol > 0.0, "magnus.tol must be > 0");
  require(c.magnus_time_e0 >= 0.0, "magnus.E0_time_V_per_m must be >= 0");
  require(c.magnus_time_samples >= 2, "magnus.time_samples must be >= 2");
  require(c.trace_samples >= 16, "simulate.trace_samples must be >= 16");
  require(c.density_times >= 1, "simulate.density_times must be >= 1");
  require(c.theta_points >= 2, "simulate.theta_points must be >= 2");
  require(c.revivals >= 1, "simulate.revivals must be >= 1");
  require(c.spectrum_grid.count >= 1 && c.spectrum_grid.min >= 0.0 &&
              c.spectrum_grid.max >= c.spectrum_grid.min,
          "spectrum grid needs count >= 1 and 0 <= min <= max");
  require(c.threads >= 1, "run.threads must be >= 1");
  if (c.model == Model::Magnus) {
    require(c.initial_mode == InitialMode::Single,
            "the Magnus model needs initial.mode = single");
    require(std::abs(c.initial.m) <= 1 && c.initial.j <= 2,
            "the Magnus model supports J0 <= 2 and |M| <= 1");
  }
}

ScanConfig build(const RawEntries& raw) {
  ScanConfig cfg;
  Pending pending;
  for (const auto& [key, value] : raw) {
    if (deferred_keys().count(key)) {
      if (key == "molecule.preset") pending.preset = value;
      if (key == "molecule.name") pending.name = value;
      if (key == "molecule.B_cm_inv") pending.b_cm = to_double(key, value);
      if (key == "molecule.mu_debye") pending.mu_debye = to_double(key, value);
      if (key == "scan.delta1_min_THz") pending.delta_min = to_double(key, value);
      if (key == "scan.delta1_max_THz") pending.delta_max = to_double(key, value);
      continue;
    }
    const auto it = handlers().find(key);
    if (it == handlers().end()) throw ConfigError("unknown config key: " + key);
    it->second.apply(cfg, key, value);
  }

  try {
    if (pending.b_cm || pending.mu_debye) {
      if (pending.preset) {
        throw ConfigError("molecule.preset cannot be combined with explicit B/mu");
      }
      if (!pending.b_cm || !pending.mu_debye) {
        throw ConfigError("custom molecules need both molecule.B_cm_inv and molecule.mu_debye");
      }
      cfg.molecule = MoleculeSpec::from_spectroscopic(pending.name.value_or("custom"),
                                                      *pending.b_cm, *pending.mu_debye);
    } else if (pending.preset) {
      cfg.molecule = molecule_preset(*pending.preset);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const double f0 = cfg.resonant_freq_thz();
  if (pending.delta_min) cfg.freq_grid.min = f0 + *pending.delta_min;
  if (pending.delta_max) cfg.freq_grid.max = f0 + *pending.delta_max;
  validate(cfg);
  return cfg;
}

void apply_overrides(RawEntries& raw, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override must look like key=value: '" + item + "'");
    }
    raw[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
}

RawEntries parse_ini(std::istream& in, const std::string& origin) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RawEntries raw;
  collect(tree, "", raw);
  return raw;
}

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    v[i] = count == 1 ? min : min + (max - min) * static_cast<double>(i) / (count - 1);
  }
  return v;
}

double ScanConfig::resonant_freq_thz() const {
  return units::internal_to_thz(rot_energy(1, molecule) - rot_energy(0, molecule));
}

PulseParams ScanConfig::pulse() const {
  return PulseParams::from_thz(e0_v_per_m, freq_thz.value_or(resonant_freq_thz()), phi_c);
}

PulseParams ScanConfig::pulse_at(double e0, double freq) const {
  return PulseParams::from_thz(e0, freq, phi_c);
}

Grid ScanConfig::effective_e0_grid() const {
  Grid g = e0_grid;
  if (full_resolution && g.count > 1) g.count = kFullResolution;
  return g;
}

Grid ScanConfig::effective_freq_grid() const {
  Grid g = freq_grid;
  if (full_resolution && g.count > 1) g.count = kFullResolution;
  return g;
}

ScanConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  std::istringstream in(ini_text);
  RawEntries raw = parse_ini(in, "<config>");
  apply_overrides(raw, overrides);
  return build(raw);
}

ScanConfig load_config(const std::optional<std::string>& path,
                       const std::vector<std::string>& overrides) {
  RawEntries raw;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file " + *path);
    raw = parse_ini(in, *path);
  }
  apply_overrides(raw, overrides);
  return build(raw);
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : handlers()) keys.push_back(k);
  for (const auto& k : deferred_keys()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const ScanConfig& c) {
  const auto d = [](double v) { return format_double(v); };
  const auto i = [](int v) { return std::to_string(v); };
  const auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  std::string orders;
  for (int n : c.orders) orders += (orders.empty() ? "" : ",") + std::to_string(n);
  const double f0 = c.resonant_freq_thz();
  std::vector<std::pair<std::string, std::string>> e = {
      {"molecule.name", c.molecule.name()},
      {"molecule.B_cm_inv", d(c.molecule.b_cm_inv())},
      {"molecule.mu_debye", d(c.molecule.mu_debye())},
      {"pulse.E0_V_per_m", d(c.e0_v_per_m)},
      {"pulse.freq_THz", c.freq_thz ? d(*c.freq_thz) : "resonant"},
      {"pulse.resolved_freq_THz", d(c.freq_thz.value_or(f0))},
      {"pulse.phi_c_rad", d(c.phi_c)},
      {"initial.mode", c.initial_mode == InitialMode::Single ? "single" : "thermal"},
      {"initial.J", i(c.initial.j)},
      {"initial.M", i(c.initial.m)},
      {"initial.temperature_K", d(c.temperature_k)},
      {"initial.weighting", c.weighting == EnsembleWeighting::Sublevel ? "sublevel" : "level"},
      {"initial.cutoff", d(c.cutoff)},
      {"basis.J_max", c.j_max == 0 ? "auto" : i(c.j_max)},
      {"solver.tol", d(c.tol)},
      {"scan.E0_min_V_per_m", d(c.e0_grid.min)},
      {"scan.E0_max_V_per_m", d(c.e0_grid.max)},
      {"scan.E0_count", i(c.effective_e0_grid().count)},
      {"scan.freq_min_THz", d(c.freq_grid.min)},
      {"scan.freq_max_THz", d(c.freq_grid.max)},
      {"scan.delta1_min_THz", d(c.freq_grid.min - f0)},
      {"scan.delta1_max_THz", d(c.freq_grid.max - f0)},
      {"scan.delta1_count", i(c.effective_freq_grid().count)},
      {"scan.full_resolution", b(c.full_resolution)},
      {"scan.model", c.model == Model::Exact ? "exact" : "magnus"},
      {"scan.orders", orders},
      {"magnus.standard_third_order", b(c.magnus.standard_third_order)},
      {"magnus.tol", d(c.magnus.tol)},
      {"magnus.E0_time_V_per_m", d(c.magnus_time_e0)},
      {"magnus.time_samples", i(c.magnus_time_samples)},
      {"simulate.trace_samples", i(c.trace_samples)},
      {"simulate.density_times", i(c.density_times)},
      {"simulate.theta_points", i(c.theta_points)},
      {"simulate.revivals", i(c.revivals)},
      {"spectrum.freq_min_THz", d(c.spectrum_grid.min)},
      {"spectrum.freq_max_THz", d(c.spectrum_grid.max)},
      {"spectrum.count", i(c.spectrum_grid.count)},
      {"output.dir", c.output_dir},
      {"output.format", c.format == OutputFormat::Csv ? "csv" : "json"},
      {"output.plot_scripts", b(c.plot_scripts)},
      {"run.threads", i(c.threads)},
  };
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace oqr
