#pragma once

#include <complex>

namespace oqr {

/// Single-cycle pulse E(t) = E0 sin^2(pi t / T) cos(omega_c t + phi_c) on
/// [0, T] with T = 2 pi / omega_c, and zero elsewhere.
class PulseParams {
 public:
  static constexpr double kZeroAreaPhase = 1.5707963267948966;  // pi/2

  /// E0 in V/m (>= 0), central ordinary frequency in THz (> 0), phase in rad.
  /// Throws std::invalid_argument on violations.
  static PulseParams from_thz(double e0_v_per_m, double freq_thz, double phi_c = kZeroAreaPhase);
  /// Same, with the central angular frequency in rad/ps.
  static PulseParams from_angular(double e0_v_per_m, double omega_c, double phi_c = kZeroAreaPhase);

  double e0() const { return e0_; }
  double omega_c() const { return omega_c_; }
  double phi_c() const { return phi_c_; }
  double duration() const { return duration_; }  // ps
  double freq_thz() const;

 private:
  PulseParams(double e0, double omega_c, double phi_c);
  double e0_;
  double omega_c_;
  double phi_c_;
  double duration_;
};

double field_at(double t, const PulseParams& p);

/// Integral of E(t) over [0, T] in V/m * ps.
double pulse_area(const PulseParams& p);

/// A(omega) = int_0^T E(t) exp(i omega t) dt, omega in rad/ps (>= 0).
std::complex<double> spectrum(const PulseParams& p, double omega);

/// Partial transform int_0^t E(t') exp(i omega t') dt' for t in [0, T].
std::complex<double> partial_transform(const PulseParams& p, double omega, double t);

}  // namespace oqr
