#include "oqr/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oqr/quadrature.hpp"
#include "oqr/units.hpp"

namespace oqr {

PulseParams::PulseParams(double e0, double omega_c, double phi_c)
    : e0_(e0), omega_c_(omega_c), phi_c_(phi_c), duration_(units::kTwoPi / omega_c) {}

PulseParams PulseParams::from_angular(double e0_v_per_m, double omega_c, double phi_c) {
  if (!(e0_v_per_m >= 0.0) || !std::isfinite(e0_v_per_m)) {
    throw std::invalid_argument("pulse E0 must be non-negative");
  }
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
    throw std::invalid_argument("pulse central frequency must be positive");
  }
  if (!std::isfinite(phi_c)) throw std::invalid_argument("pulse phase must be finite");
  return PulseParams(e0_v_per_m, omega_c, phi_c);
}

PulseParams PulseParams::from_thz(double e0_v_per_m, double freq_thz, double phi_c) {
  return from_angular(e0_v_per_m, units::thz_to_internal(freq_thz), phi_c);
}

double PulseParams::freq_thz() const { return units::internal_to_thz(omega_c_); }

double field_at(double t, const PulseParams& p) {
  const double period = p.duration();
  if (t < 0.0 || t > period) return 0.0;
  const double s = std::sin(units::kPi * t / period);
  return p.e0() * s * s * std::cos(p.omega_c() * t + p.phi_c());
}

double pulse_area(const PulseParams& p) {
  return integrate_oscillatory([&](double t) { return field_at(t, p); }, 0.0, p.duration(),
                               p.omega_c() + units::kTwoPi / p.duration());
}

std::complex<double> partial_transform(const PulseParams& p, double omega, double t) {
  if (t < 0.0 || t > p.duration() * (1.0 + 1e-12)) {
    throw std::invalid_argument("partial_transform: t outside [0, T]");
  }
  t = std::min(t, p.duration());
  if (t == 0.0) return {0.0, 0.0};
  // Fastest component: carrier + envelope + transform frequency.
  const double fastest = p.omega_c() + units::kTwoPi / p.duration() + std::abs(omega);
  return integrate_oscillatory(
      [&](double s) { return field_at(s, p) * std::polar(1.0, omega * s); }, 0.0, t, fastest);
}

std::complex<double> spectrum(const PulseParams& p, double omega) {
  if (omega < 0.0) throw std::invalid_argument("spectrum requires omega >= 0");
  return partial_transform(p, omega, p.duration());
}

}  // namespace oqr
