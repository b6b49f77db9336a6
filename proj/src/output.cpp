#include "oqr/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oqr {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
  }
  if (const auto* l = std::get_if<long>(&c)) return *l;
  return std::get<std::string>(c);
}

std::ofstream open_for_write(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
  finish(out, path);
}

std::string plot_script(const std::string& csv_name, const std::string& kind) {
  std::string s = "import pandas as pd\nimport matplotlib.pyplot as plt\n\n";
  s += "df = pd.read_csv(\"" + csv_name + "\")\n";
  if (kind == "line") {
    s += "ax = df.plot(x=df.columns[0], y=df.columns[1], legend=False)\n";
    s += "ax.set_ylabel(df.columns[1])\n";
  } else if (kind == "matrix") {
    s += "data = df.set_index(df.columns[0])\n";
    s += "plt.pcolormesh(data.columns.astype(float), data.index, data.values, shading=\"auto\")\n";
    s += "plt.xlabel(\"delta1 (THz)\")\nplt.ylabel(\"E0 (V/m)\")\nplt.colorbar(label=\"A_OQR\")\n";
  } else if (kind == "density") {
    s += "grid = df.pivot(index=\"theta_rad\", columns=\"t_ps\", values=\"density\")\n";
    s += "plt.pcolormesh(grid.columns, grid.index, grid.values, shading=\"auto\")\n";
    s += "plt.xlabel(\"t (ps)\")\nplt.ylabel(\"theta (rad)\")\n";
  } else if (kind == "populations") {
    s += "for tag, part in df.groupby(\"order_tag\"):\n";
    s += "    for col in [\"pop_J0\", \"pop_J1\", \"pop_J2\"]:\n";
    s += "        plt.plot(part[df.columns[0]], part[col], label=f\"{tag} {col}\")\n";
    s += "plt.legend()\n";
  }
  s += "plt.savefig(\"" + csv_name.substr(0, csv_name.rfind('.')) + ".png\", dpi=150)\n";
  return s;
}

struct Emitter {
  const ScanConfig& cfg;
  std::vector<fs::path> written;

  void table(const Table& t, const std::string& stem, const std::string& plot_kind) {
    const fs::path path = write_table(t, cfg.output_dir, stem, cfg.format);
    written.push_back(path);
    if (cfg.plot_scripts && cfg.format == OutputFormat::Csv && !plot_kind.empty()) {
      const fs::path script = fs::path(cfg.output_dir) / ("plot_" + stem + ".py");
      write_text(script, plot_script(path.filename().string(), plot_kind));
      written.push_back(script);
    }
  }
  void metadata(const nlohmann::json& meta) {
    write_metadata(meta, cfg.output_dir);
    written.push_back(fs::path(cfg.output_dir) / "metadata.json");
  }
};

nlohmann::json report_json(const OqrReport& r) {
  return {{"cos_max", r.cos_max}, {"cos_min", r.cos_min}, {"A_OQR", r.amplitude},
          {"t_max_ps", r.t_max},  {"t_min_ps", r.t_min}, {"max_abs_cos", r.max_abs()}};
}

}  // namespace

fs::path write_table(const Table& table, const fs::path& dir, const std::string& stem,
                     OutputFormat format) {
  if (format == OutputFormat::Csv) {
    const fs::path path = dir / (stem + ".csv");
    auto out = open_for_write(path);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << cell_text(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
      out << '\n';
    }
    finish(out, path);
    return path;
  }
  const fs::path path = dir / (stem + ".json");
  nlohmann::json doc;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    doc["rows"].push_back(std::move(r));
  }
  write_text(path, doc.dump(1) + "\n");
  return path;
}

nlohmann::json base_metadata(const ScanConfig& cfg, const std::string& command) {
  nlohmann::json meta;
  meta["command"] = command;
  meta["version"] = OQR_VERSION;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : resolved_entries(cfg)) config[k] = v;
  meta["config"] = config;
  return meta;
}

void write_metadata(const nlohmann::json& meta, const fs::path& dir) {
  write_text(dir / "metadata.json", meta.dump(2) + "\n");
}

Table scan_matrix_table(const ScanResult& r) {
  Table t;
  t.columns.push_back("E0_V_per_m\\delta1_THz");
  for (double d : r.delta1_axis) t.columns.push_back(format_number(d));
  for (std::size_t i = 0; i < r.e0_axis.size(); ++i) {
    std::vector<Cell> row{r.e0_axis[i]};
    for (std::size_t k = 0; k < r.delta1_axis.size(); ++k) {
      const auto& p = r.at(i, k);
      row.emplace_back(p.ok() ? p.report->amplitude : std::nan(""));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table scan_points_table(const ScanResult& r) {
  Table t;
  t.columns = {"E0_V_per_m", "delta1_THz", "freq_THz",  "A_OQR",       "cos_max",
               "cos_min",    "t_max_ps",   "t_min_ps",  "max_abs_cos", "steps",
               "norm_drift", "error"};
  for (const auto& p : r.points) {
    const double nan = std::nan("");
    const OqrReport rep = p.report.value_or(OqrReport{nan, nan, nan, nan, nan});
    t.rows.push_back({p.e0, p.delta1_thz, p.freq_thz, rep.amplitude, rep.cos_max, rep.cos_min,
                      rep.t_max, rep.t_min, p.ok() ? rep.max_abs() : nan, p.stats.accepted_steps,
                      p.stats.max_norm_drift, p.error});
  }
  return t;
}

Table scan_phase_table(const ScanResult& r) {
  std::size_t levels = 0;
  int j_min = 0;
  for (const auto& p : r.points) {
    if (p.phases && p.phases->j.size() > levels) {
      levels = p.phases->j.size();
      j_min = p.phases->j.front();
    }
  }
  Table t;
  t.columns = {"E0_V_per_m", "delta1_THz"};
  for (std::size_t k = 0; k < levels; ++k) t.columns.push_back("pop_J" + std::to_string(j_min + k));
  for (std::size_t k = 0; k + 1 < levels; ++k) t.columns.push_back("phi_J" + std::to_string(j_min + k));
  for (const auto& p : r.points) {
    std::vector<Cell> row{p.e0, p.delta1_thz};
    for (std::size_t k = 0; k < levels; ++k) {
      row.emplace_back(p.phases && k < p.phases->populations.size() ? p.phases->populations[k]
                                                                    : (p.ok() ? 0.0 : std::nan("")));
    }
    for (std::size_t k = 0; k + 1 < levels; ++k) {
      row.emplace_back(p.phases && k < p.phases->phases.size() ? p.phases->phases[k]
                                                               : (p.ok() ? 0.0 : std::nan("")));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table trace_table(const SimulationResult& r) {
  Table t;
  t.columns = {"t_ps", "cos_theta"};
  for (std::size_t k = 0; k < r.trace.times.size(); ++k) {
    t.rows.push_back({r.trace.times[k], r.trace.values[k]});
  }
  return t;
}

Table density_table(const SimulationResult& r) {
  Table t;
  t.columns = {"t_ps", "theta_rad", "density"};
  for (std::size_t i = 0; i < r.density_times.size(); ++i) {
    for (std::size_t k = 0; k < r.theta.size(); ++k) {
      t.rows.push_back({r.density_times[i], r.theta[k], r.density[i][k]});
    }
  }
  return t;
}

Table member_phase_table(const SimulationResult& r) {
  std::size_t levels = 0;
  for (const auto& [label, rep] : r.final_phases) levels = std::max(levels, rep.j.size());
  Table t;
  t.columns = {"J0", "M", "weight", "J_min"};
  for (std::size_t k = 0; k < levels; ++k) t.columns.push_back("pop_" + std::to_string(k));
  for (std::size_t k = 0; k + 1 < levels; ++k) t.columns.push_back("phi_" + std::to_string(k));
  for (std::size_t i = 0; i < r.final_phases.size(); ++i) {
    const auto& [label, rep] = r.final_phases[i];
    std::vector<Cell> row{static_cast<long>(label.j), static_cast<long>(label.m),
                          r.ensemble ? r.ensemble->members[i].weight : 1.0,
                          static_cast<long>(rep.j.front())};
    for (std::size_t k = 0; k < levels; ++k) row.emplace_back(k < rep.populations.size() ? rep.populations[k] : 0.0);
    for (std::size_t k = 0; k + 1 < levels; ++k) row.emplace_back(k < rep.phases.size() ? rep.phases[k] : 0.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table population_table(const std::vector<PopulationRow>& rows, const std::string& x_column) {
  Table t;
  t.columns = {x_column, "order_tag", "pop_J0", "pop_J1", "pop_J2"};
  for (const auto& r : rows) {
    t.rows.push_back({r.x, r.order_tag, r.populations[0], r.populations[1], r.populations[2]});
  }
  return t;
}

Table spectrum_table(const SpectrumResult& r) {
  Table t;
  t.columns = {"omega_THz", "abs_A"};
  for (std::size_t k = 0; k < r.freq_thz.size(); ++k) t.rows.push_back({r.freq_thz[k], r.magnitude[k]});
  return t;
}

Table trajectory_table(const Trajectory& tr) {
  const BasisSpec& basis = tr.final_state().basis;
  Table t;
  t.columns = {"t_ps"};
  for (int k = 0; k < basis.size(); ++k) t.columns.push_back("re_c_J" + std::to_string(basis.j_at(k)));
  for (int k = 0; k < basis.size(); ++k) t.columns.push_back("im_c_J" + std::to_string(basis.j_at(k)));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<Cell> row{tr.times[i]};
    const auto& c = tr.snapshots[i].coefficients;
    for (int k = 0; k < basis.size(); ++k) row.emplace_back(c[k].real());
    for (int k = 0; k < basis.size(); ++k) row.emplace_back(c[k].imag());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<fs::path> write_outputs(const ScanResult& r, const ScanConfig& cfg) {
  Emitter e{cfg, {}};
  e.table(scan_matrix_table(r), "a_oqr", "matrix");
  e.table(scan_points_table(r), "points", "");
  if (cfg.initial_mode == InitialMode::Single) e.table(scan_phase_table(r), "phases", "");
  nlohmann::json meta = base_metadata(cfg, "scan");
  meta["timings"] = {{"wall_seconds", r.wall_seconds}};
  long steps = 0;
  double drift = 0.0;
  for (const auto& p : r.points) {
    steps += p.stats.accepted_steps;
    drift = std::max(drift, p.stats.max_norm_drift);
  }
  meta["solver"] = {{"accepted_steps", steps}, {"max_norm_drift", drift}};
  meta["grid"] = {{"E0_count", r.e0_axis.size()}, {"delta1_count", r.delta1_axis.size()},
                  {"failures", r.failures()}};
  e.metadata(meta);
  return e.written;
}

std::vector<fs::path> write_outputs(const SimulationResult& r, const ScanConfig& cfg) {
  Emitter e{cfg, {}};
  e.table(trace_table(r), "trace", "line");
  e.table(density_table(r), "density", "density");
  e.table(member_phase_table(r), "phases", "");
  if (cfg.initial_mode == InitialMode::Single && r.ensemble) {
    e.table(trajectory_table(r.ensemble->members.front().trajectory), "trajectory", "");
  }
  nlohmann::json meta = base_metadata(cfg, "simulate");
  meta["timings"] = {{"wall_seconds", r.wall_seconds}};
  meta["report"] = report_json(r.report);
  meta["pulse_end_ps"] = r.pulse_end;
  meta["revival_time_ps"] = r.revival;
  if (r.ensemble) {
    meta["ensemble"] = {{"members", r.ensemble->members.size()},
                        {"total_weight", r.ensemble->total_weight()}};
  }
  e.metadata(meta);
  return e.written;
}

std::vector<fs::path> write_outputs(const MagnusOrdersResult& r, const ScanConfig& cfg) {
  Emitter e{cfg, {}};
  e.table(population_table(r.final_vs_e0, "E0_V_per_m"), "magnus_final_vs_E0", "populations");
  e.table(population_table(r.time_resolved, "t_ps"), "magnus_orders", "populations");
  nlohmann::json meta = base_metadata(cfg, "magnus-orders");
  meta["timings"] = {{"wall_seconds", r.wall_seconds}};
  meta["E0_time_V_per_m"] = r.e0_time;
  e.metadata(meta);
  return e.written;
}

std::vector<fs::path> write_outputs(const SpectrumResult& r, const ScanConfig& cfg) {
  Emitter e{cfg, {}};
  e.table(spectrum_table(r), "spectrum", "line");
  e.metadata(base_metadata(cfg, "spectrum"));
  return e.written;
}

std::vector<fs::path> write_density_outputs(const SimulationResult& r, const ScanConfig& cfg) {
  Emitter e{cfg, {}};
  e.table(density_table(r), "density", "density");
  nlohmann::json meta = base_metadata(cfg, "density");
  meta["timings"] = {{"wall_seconds", r.wall_seconds}};
  e.metadata(meta);
  return e.written;
}

}  // namespace oqr
