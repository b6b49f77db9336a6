#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "oqr/propagator.hpp"
#include "oqr/rotor.hpp"

namespace oqr {

/// <cos theta>(t) from the pairwise cosine sum
/// sum_J 2 |c_{J+1}| |c_J| <J+1|cos|J> cos(omega_J t - phi_J).
double orientation_at(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol);

/// <psi(t)| cos theta |psi(t)> from Schroedinger amplitudes and the
/// tridiagonal cos(theta) matrix.
double orientation_quadratic(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol);

/// Field-free orientation as sum_J Re(z_J exp(-i omega_J t)). Members of a
/// thermal ensemble share the frequencies omega_J = 2 B (J+1), so the weighted
/// sum collapses into one series.
class OrientationSeries {
 public:
  OrientationSeries() = default;
  static OrientationSeries from_state(const WavepacketCoeffs& w, const MoleculeSpec& mol,
                                      double weight = 1.0);
  void add(const OrientationSeries& other);
  double operator()(double t) const;

 private:
  std::vector<double> omega_;
  std::vector<std::complex<double>> z_;
};

struct ThermalMember {
  RotLabel initial;
  double weight = 0.0;
  Trajectory trajectory;
};

struct ThermalEnsemble {
  std::vector<ThermalMember> members;  // sorted by (J0, M)
  double temperature_k = 0.0;
  EnsembleWeighting weighting = EnsembleWeighting::Sublevel;
  PulseParams pulse;
  MoleculeSpec molecule;

  double pulse_end() const { return pulse.duration(); }
  double total_weight() const;
};

struct EnsembleSettings {
  EnsembleWeighting weighting = EnsembleWeighting::Sublevel;
  double cutoff = kDefaultBoltzmannCutoff;
  /// 0 selects auto_truncate per member.
  int j_max = kDefaultJMax;
  double tol = 1e-10;
  std::vector<double> sample_times;
  int threads = 1;
};

/// Boltzmann-weighted members, each propagated through the pulse.
ThermalEnsemble build_thermal_ensemble(double temperature_k, const PulseParams& p,
                                       const MoleculeSpec& mol, const EnsembleSettings& settings);

/// Single pure initial state treated as a one-member ensemble of weight 1.
ThermalEnsemble single_state_ensemble(Trajectory trajectory, const RotLabel& initial);

struct OrientationTrace {
  std::vector<double> times;
  std::vector<double> values;
};

/// Weighted sum of orientation_at over members. Times inside the pulse must
/// be snapshot times of every member trajectory.
OrientationTrace thermal_trace(const ThermalEnsemble& e, std::span<const double> times);

/// Post-pulse orientation of the ensemble as a single series.
OrientationSeries post_pulse_series(const ThermalEnsemble& e);

/// Fully normalized associated Legendre functions Pbar_l^m(x), l = |m|..l_max,
/// with int_{-1}^{1} Pbar^2 dx = 1 (no Condon-Shortley phase).
std::vector<double> normalized_legendre(int l_max, int m, double x);

/// Azimuth-integrated density 2 pi |psi(theta, phi, t)|^2, normalized so that
/// int_0^pi rho sin(theta) d theta = 1.
std::vector<double> angular_density(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol,
                                    std::span<const double> theta_grid);

/// Weighted member densities at time t (snapshot rules as thermal_trace).
std::vector<double> thermal_angular_density(const ThermalEnsemble& e, double t,
                                            std::span<const double> theta_grid);

struct OqrReport {
  double cos_max = 0.0;
  double cos_min = 0.0;
  double amplitude = 0.0;
  double t_max = 0.0;
  double t_min = 0.0;
  double max_abs() const { return std::max(std::abs(cos_max), std::abs(cos_min)); }
};

inline constexpr int kOqrSamples = 4096;

/// Extrema of f over [t_start, t_start + period]: dense sampling followed by
/// golden-section refinement around the best samples.
OqrReport find_oqr(const std::function<double(double)>& f, double t_start, double period,
                   int samples = kOqrSamples);

/// Extrema of the thermal trace over [T, T + tau].
OqrReport oqr_amplitude(const ThermalEnsemble& e);
/// Same for one post-pulse state (evaluated from t_ref).
OqrReport oqr_amplitude(const WavepacketCoeffs& w, const MoleculeSpec& mol);

struct PhaseReport {
  double t = 0.0;
  std::vector<int> j;
  std::vector<double> populations;
  /// phases[k] = arg a_{J+1} - arg a_J wrapped to [0, 2 pi), Schroedinger
  /// picture at t; 0 when either amplitude vanishes.
  std::vector<double> phases;
};

PhaseReport populations_and_phases(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol);

/// Wraps an angle into [0, 2 pi).
double wrap_phase(double angle);

}  // namespace oqr
