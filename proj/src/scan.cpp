#include "oqr/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "oqr/errors.hpp"
#include "oqr/parallel.hpp"
#include "oqr/units.hpp"

namespace oqr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

BasisSpec basis_for(const ScanConfig& cfg, const RotLabel& label, const PulseParams& p) {
  if (cfg.j_max == 0) return auto_truncate(label, p, cfg.molecule, cfg.tol);
  return BasisSpec(label.m, std::max(cfg.j_max, label.j + 2));
}

}  // namespace

std::size_t ScanResult::failures() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.ok() ? 0 : 1;
  return n;
}

std::string order_tag(const std::set<int>& orders) {
  std::string tag;
  for (int n : orders) tag += (tag.empty() ? "" : "+") + std::to_string(n);
  return tag;
}

ScanPoint evaluate_point(const ScanConfig& cfg, double e0, double freq_thz) {
  ScanPoint point;
  point.e0 = e0;
  point.freq_thz = freq_thz;
  point.delta1_thz = freq_thz - cfg.resonant_freq_thz();
  try {
    const PulseParams p = cfg.pulse_at(e0, freq_thz);
    if (cfg.model == Model::Magnus) {
      const WavepacketCoeffs w = magnus_final_state(cfg.initial.j, cfg.initial.m, cfg.orders, p,
                                                    cfg.molecule, cfg.magnus);
      point.report = oqr_amplitude(w, cfg.molecule);
      point.phases = populations_and_phases(w, p.duration(), cfg.molecule);
    } else if (cfg.initial_mode == InitialMode::Single) {
      PropagateOptions options;
      options.tol = cfg.tol;
      const Trajectory tr =
          propagate(cfg.initial, p, cfg.molecule, basis_for(cfg, cfg.initial, p), options);
      point.report = oqr_amplitude(tr.final_state(), cfg.molecule);
      point.phases = populations_and_phases(tr.final_state(), p.duration(), cfg.molecule);
      point.stats = tr.stats;
    } else {
      EnsembleSettings settings;
      settings.weighting = cfg.weighting;
      settings.cutoff = cfg.cutoff;
      settings.j_max = cfg.j_max;
      settings.tol = cfg.tol;
      const ThermalEnsemble e = build_thermal_ensemble(cfg.temperature_k, p, cfg.molecule, settings);
      point.report = oqr_amplitude(e);
      for (const auto& m : e.members) {
        point.stats.accepted_steps += m.trajectory.stats.accepted_steps;
        point.stats.rejected_steps += m.trajectory.stats.rejected_steps;
        point.stats.rhs_evaluations += m.trajectory.stats.rhs_evaluations;
        point.stats.max_norm_drift =
            std::max(point.stats.max_norm_drift, m.trajectory.stats.max_norm_drift);
      }
    }
  } catch (const std::exception& ex) {
    point.report.reset();
    point.phases.reset();
    point.error = ex.what();
  }
  return point;
}

ScanResult run_scan(const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ScanResult result;
  result.e0_axis = cfg.effective_e0_grid().values();
  result.freq_axis = cfg.effective_freq_grid().values();
  const double f0 = cfg.resonant_freq_thz();
  for (double f : result.freq_axis) result.delta1_axis.push_back(f - f0);

  const std::size_t columns = result.freq_axis.size();
  result.points.resize(result.e0_axis.size() * columns);
  parallel_for(result.points.size(), cfg.threads, [&](std::size_t idx) {
    result.points[idx] =
        evaluate_point(cfg, result.e0_axis[idx / columns], result.freq_axis[idx % columns]);
  });
  result.wall_seconds = seconds_since(start);
  return result;
}

SimulationResult run_simulate(const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.model != Model::Exact) throw ConfigError("simulate runs the exact model only");
  const PulseParams p = cfg.pulse();
  const double period = p.duration();
  const double tau = revival_time(cfg.molecule);
  const double t_end = period + cfg.revivals * tau;

  SimulationResult r;
  r.pulse_end = period;
  r.revival = tau;

  std::vector<double> times(cfg.trace_samples);
  for (int k = 0; k < cfg.trace_samples; ++k) {
    times[k] = t_end * static_cast<double>(k) / (cfg.trace_samples - 1);
  }
  r.density_times.resize(cfg.density_times);
  for (int k = 0; k < cfg.density_times; ++k) {
    r.density_times[k] =
        cfg.density_times == 1 ? period : t_end * static_cast<double>(k) / (cfg.density_times - 1);
  }
  std::vector<double> samples;
  for (double t : times) {
    if (t < period) samples.push_back(t);
  }
  for (double t : r.density_times) {
    if (t < period) samples.push_back(t);
  }

  if (cfg.initial_mode == InitialMode::Thermal) {
    EnsembleSettings settings;
    settings.weighting = cfg.weighting;
    settings.cutoff = cfg.cutoff;
    settings.j_max = cfg.j_max;
    settings.tol = cfg.tol;
    settings.sample_times = samples;
    settings.threads = cfg.threads;
    r.ensemble = build_thermal_ensemble(cfg.temperature_k, p, cfg.molecule, settings);
  } else {
    PropagateOptions options;
    options.tol = cfg.tol;
    options.sample_times = samples;
    r.ensemble = single_state_ensemble(
        propagate(cfg.initial, p, cfg.molecule, basis_for(cfg, cfg.initial, p), options),
        cfg.initial);
  }

  r.trace = thermal_trace(*r.ensemble, times);
  r.theta.resize(cfg.theta_points);
  for (int k = 0; k < cfg.theta_points; ++k) {
    r.theta[k] = std::numbers::pi * static_cast<double>(k) / (cfg.theta_points - 1);
  }
  for (double t : r.density_times) r.density.push_back(thermal_angular_density(*r.ensemble, t, r.theta));
  r.report = oqr_amplitude(*r.ensemble);
  for (const auto& m : r.ensemble->members) {
    r.final_phases.emplace_back(m.initial,
                                populations_and_phases(m.trajectory.final_state(), period, cfg.molecule));
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

MagnusOrdersResult run_magnus_orders(const ScanConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const int j0 = cfg.initial.j;
  const int m = cfg.initial.m;
  if (std::abs(m) > 1 || j0 > 2 || j0 < std::abs(m)) {
    throw ConfigError("magnus-orders needs an initial state inside the three-state block");
  }
  const std::vector<std::set<int>> variants = {{1}, {2}, {3}, {1, 2, 3}};
  const double freq = cfg.freq_thz.value_or(cfg.resonant_freq_thz());

  MagnusOrdersResult r;
  r.e0_time = cfg.magnus_time_e0;
  const auto e0_axis = cfg.effective_e0_grid().values();
  std::vector<std::array<MagnusKernel, 3>> finals(e0_axis.size());
  parallel_for(e0_axis.size(), cfg.threads, [&](std::size_t i) {
    const PulseParams p = cfg.pulse_at(e0_axis[i], freq);
    finals[i] = magnus_kernels(p, cfg.molecule, m, p.duration(), cfg.magnus);
  });
  for (std::size_t i = 0; i < e0_axis.size(); ++i) {
    for (const auto& orders : variants) {
      const Vector3c psi = truncated_propagator(orders, finals[i]).col(j0);
      r.final_vs_e0.push_back({e0_axis[i], order_tag(orders),
                               {std::norm(psi[0]), std::norm(psi[1]), std::norm(psi[2])}});
    }
  }

  const PulseParams p = cfg.pulse_at(cfg.magnus_time_e0, freq);
  std::vector<double> times(cfg.magnus_time_samples);
  for (int k = 0; k < cfg.magnus_time_samples; ++k) {
    times[k] = p.duration() * static_cast<double>(k) / (cfg.magnus_time_samples - 1);
  }
  const auto series = magnus_kernel_series(p, cfg.molecule, m, times, cfg.magnus);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (const auto& orders : variants) {
      const Vector3c psi = truncated_propagator(orders, series[k]).col(j0);
      r.time_resolved.push_back({times[k], order_tag(orders),
                                 {std::norm(psi[0]), std::norm(psi[1]), std::norm(psi[2])}});
    }
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

SpectrumResult run_spectrum(const ScanConfig& cfg) {
  const PulseParams p = cfg.pulse();
  SpectrumResult r;
  r.freq_thz = cfg.spectrum_grid.values();
  for (double f : r.freq_thz) r.magnitude.push_back(std::abs(spectrum(p, units::thz_to_internal(f))));
  return r;
}

}  // namespace oqr
