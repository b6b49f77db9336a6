#include "oqr/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "oqr/parallel.hpp"

namespace oqr {

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

double orientation_at(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol) {
  const auto& c = w.coefficients;
  const int m = w.basis.m();
  double sum = 0.0;
  for (int i = 0; i + 1 < w.basis.size(); ++i) {
    const int j = w.basis.j_at(i);
    const double mag = std::abs(c[i + 1]) * std::abs(c[i]);
    if (mag == 0.0) continue;
    const double omega_j = rot_energy(j + 1, mol) - rot_energy(j, mol);
    const double phi_j = std::arg(c[i + 1]) - std::arg(c[i]);
    sum += 2.0 * mag * cos_theta_element(j, m) * std::cos(omega_j * t - phi_j);
  }
  return sum;
}

double orientation_quadratic(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol) {
  const ComplexVector a = w.schroedinger_amplitudes(t, mol);
  const int n = w.basis.size();
  Eigen::MatrixXd cos_matrix = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double v = cos_theta_element(w.basis.j_at(i), w.basis.m());
    cos_matrix(i, i + 1) = v;
    cos_matrix(i + 1, i) = v;
  }
  return (a.adjoint() * cos_matrix.cast<std::complex<double>>() * a)(0, 0).real();
}

OrientationSeries OrientationSeries::from_state(const WavepacketCoeffs& w, const MoleculeSpec& mol,
                                                double weight) {
  OrientationSeries s;
  const auto& c = w.coefficients;
  // Index the series by J so members with different |M| line up.
  const int top = w.basis.j_max();
  s.omega_.resize(top);
  s.z_.assign(top, {0.0, 0.0});
  for (int j = 0; j < top; ++j) s.omega_[j] = rot_energy(j + 1, mol) - rot_energy(j, mol);
  for (int i = 0; i + 1 < w.basis.size(); ++i) {
    const int j = w.basis.j_at(i);
    s.z_[j] = weight * 2.0 * cos_theta_element(j, w.basis.m()) * std::conj(c[i]) * c[i + 1];
  }
  return s;
}

void OrientationSeries::add(const OrientationSeries& other) {
  if (other.z_.size() > z_.size()) {
    z_.resize(other.z_.size(), {0.0, 0.0});
    omega_ = other.omega_;
  }
  for (std::size_t k = 0; k < other.z_.size(); ++k) z_[k] += other.z_[k];
}

double OrientationSeries::operator()(double t) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < z_.size(); ++k) {
    sum += (z_[k] * std::polar(1.0, -omega_[k] * t)).real();
  }
  return sum;
}

double ThermalEnsemble::total_weight() const {
  double sum = 0.0;
  for (const auto& m : members) sum += m.weight;
  return sum;
}

ThermalEnsemble build_thermal_ensemble(double temperature_k, const PulseParams& p,
                                       const MoleculeSpec& mol, const EnsembleSettings& settings) {
  const auto table = boltzmann_weights(temperature_k, mol, settings.cutoff, settings.weighting);
  std::vector<std::optional<Trajectory>> slots(table.size());
  PropagateOptions options;
  options.tol = settings.tol;
  options.sample_times = settings.sample_times;
  parallel_for(table.size(), settings.threads, [&](std::size_t i) {
    const RotLabel& label = table[i].label;
    const BasisSpec basis =
        settings.j_max > 0
            ? BasisSpec(label.m, std::max(settings.j_max, label.j + 2))
            : auto_truncate(label, p, mol, settings.tol);
    slots[i] = propagate(label, p, mol, basis, options);
  });
  ThermalEnsemble e{{}, temperature_k, settings.weighting, p, mol};
  e.members.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    e.members.push_back({table[i].label, table[i].weight, std::move(*slots[i])});
  }
  return e;
}

ThermalEnsemble single_state_ensemble(Trajectory trajectory, const RotLabel& initial) {
  const PulseParams pulse = trajectory.pulse;
  const MoleculeSpec mol = trajectory.molecule;
  ThermalEnsemble e{{}, 0.0, EnsembleWeighting::Sublevel, pulse, mol};
  e.members.push_back({initial, 1.0, std::move(trajectory)});
  return e;
}

OrientationTrace thermal_trace(const ThermalEnsemble& e, std::span<const double> times) {
  OrientationTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.values.assign(times.size(), 0.0);
  for (const auto& member : e.members) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const WavepacketCoeffs w = member.trajectory.at(times[k]);
      trace.values[k] += member.weight * orientation_at(w, times[k], e.molecule);
    }
  }
  return trace;
}

OrientationSeries post_pulse_series(const ThermalEnsemble& e) {
  OrientationSeries series;
  for (const auto& member : e.members) {
    series.add(OrientationSeries::from_state(member.trajectory.final_state(), e.molecule,
                                             member.weight));
  }
  return series;
}

std::vector<double> normalized_legendre(int l_max, int m, double x) {
  const int am = std::abs(m);
  if (l_max < am) return {};
  std::vector<double> out(l_max - am + 1);
  // Pbar_m^m = sqrt((2m+1)/2 * (2m-1)!!/(2m)!!) (1 - x^2)^{m/2}
  double pmm = std::sqrt(0.5);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  for (int k = 1; k <= am; ++k) pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  out[0] = pmm;
  if (l_max == am) return out;
  double prev = pmm;
  double cur = std::sqrt(2.0 * am + 3.0) * x * pmm;
  out[1] = cur;
  for (int l = am + 2; l <= l_max; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - am * am));
    const double b = std::sqrt(((l - 1.0) * (l - 1.0) - am * am) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
    out[l - am] = cur;
  }
  return out;
}

std::vector<double> angular_density(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol,
                                    std::span<const double> theta_grid) {
  const ComplexVector a = w.schroedinger_amplitudes(t, mol);
  std::vector<double> rho(theta_grid.size());
  for (std::size_t k = 0; k < theta_grid.size(); ++k) {
    const double theta = theta_grid[k];
    if (theta < 0.0 || theta > std::numbers::pi) {
      throw std::invalid_argument("theta grid must lie in [0, pi]");
    }
    const auto p = normalized_legendre(w.basis.j_max(), w.basis.m(), std::cos(theta));
    std::complex<double> psi{0.0, 0.0};
    for (int i = 0; i < w.basis.size(); ++i) psi += a[i] * p[i];
    rho[k] = std::norm(psi);
  }
  return rho;
}

std::vector<double> thermal_angular_density(const ThermalEnsemble& e, double t,
                                            std::span<const double> theta_grid) {
  std::vector<double> rho(theta_grid.size(), 0.0);
  for (const auto& member : e.members) {
    const auto part = angular_density(member.trajectory.at(t), t, e.molecule, theta_grid);
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] += member.weight * part[k];
  }
  return rho;
}

namespace {

// Golden-section search for the maximum of g on [a, b].
std::pair<double, double> golden_max(const std::function<double(double)>& g, double a, double b,
                                     double resolution) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  while (b - a > resolution) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    }
  }
  return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

OqrReport find_oqr(const std::function<double(double)>& f, double t_start, double period,
                   int samples) {
  samples = std::max(samples, 16);
  const double h = period / samples;
  std::vector<double> values(samples + 1);
  for (int k = 0; k <= samples; ++k) values[k] = f(t_start + k * h);
  const auto imax = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  const auto imin = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());

  const double resolution = 1e-7 * period;
  const auto refine = [&](int i, double sign) {
    const double lo = t_start + std::max(0, i - 1) * h;
    const double hi = t_start + std::min(samples, i + 1) * h;
    auto [t, v] = golden_max([&](double s) { return sign * f(s); }, lo, hi, resolution);
    v *= sign;
    if (sign * v < sign * values[i]) return std::pair{t_start + i * h, values[i]};
    return std::pair{t, v};
  };
  const auto [t_max, v_max] = refine(imax, 1.0);
  const auto [t_min, v_min] = refine(imin, -1.0);
  return OqrReport{v_max, v_min, v_max - v_min, t_max, t_min};
}

OqrReport oqr_amplitude(const ThermalEnsemble& e) {
  const OrientationSeries series = post_pulse_series(e);
  return find_oqr(series, e.pulse_end(), revival_time(e.molecule));
}

OqrReport oqr_amplitude(const WavepacketCoeffs& w, const MoleculeSpec& mol) {
  const OrientationSeries series = OrientationSeries::from_state(w, mol);
  return find_oqr(series, w.t_ref, revival_time(mol));
}

PhaseReport populations_and_phases(const WavepacketCoeffs& w, double t, const MoleculeSpec& mol) {
  PhaseReport r;
  r.t = t;
  const ComplexVector a = w.schroedinger_amplitudes(t, mol);
  for (int i = 0; i < w.basis.size(); ++i) {
    r.j.push_back(w.basis.j_at(i));
    r.populations.push_back(std::norm(a[i]));
  }
  for (int i = 0; i + 1 < w.basis.size(); ++i) {
    if (a[i] == 0.0 || a[i + 1] == 0.0) {
      r.phases.push_back(0.0);
    } else {
      r.phases.push_back(wrap_phase(std::arg(a[i + 1]) - std::arg(a[i])));
    }
  }
  return r;
}

}  // namespace oqr
