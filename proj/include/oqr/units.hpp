#pragma once

// Internal units: hbar = 1, time in ps, energies and angular frequencies in
// rad/ps, fields in V/m. Dipole moments are stored as the coupling they
// produce per V/m, i.e. rad/ps per (V/m).

#include <numbers>

namespace oqr::units {

// CODATA 2018 exact or recommended values.
inline constexpr double kSpeedOfLight = 299792458.0;         // m/s
inline constexpr double kHbar = 1.054571817e-34;             // J s
inline constexpr double kBoltzmann = 1.380649e-23;           // J/K
inline constexpr double kDebye = 1.0e-21 / kSpeedOfLight;    // C m
inline constexpr double kAtomicField = 5.14220674763e11;     // V/m

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kPerSecondToPerPs = 1.0e-12;

// cm^-1 (wavenumber) -> rad/ps: omega = 2 pi c nu~.
inline constexpr double kCmInvToInternal = kTwoPi * kSpeedOfLight * 100.0 * kPerSecondToPerPs;

constexpr double cm_inv_to_internal(double wavenumber) { return wavenumber * kCmInvToInternal; }
constexpr double internal_to_cm_inv(double omega) { return omega / kCmInvToInternal; }

// Ordinary frequency in THz -> angular frequency in rad/ps.
constexpr double thz_to_internal(double f_thz) { return kTwoPi * f_thz; }
constexpr double internal_to_thz(double omega) { return omega / kTwoPi; }

// Angular THz (rad/ps) is the internal frequency unit.
constexpr double angular_thz_to_internal(double w) { return w; }
constexpr double internal_to_angular_thz(double w) { return w; }

constexpr double ps_to_internal(double t_ps) { return t_ps; }
constexpr double internal_to_ps(double t) { return t; }

constexpr double v_per_m_to_internal(double field) { return field; }
constexpr double internal_to_v_per_m(double field) { return field; }
constexpr double atomic_field_to_v_per_m(double f_au) { return f_au * kAtomicField; }
constexpr double v_per_m_to_atomic_field(double field) { return field / kAtomicField; }

// Debye -> coupling strength (rad/ps per V/m).
inline constexpr double kDebyeToInternal = kDebye / kHbar * kPerSecondToPerPs;
constexpr double debye_to_internal(double mu_debye) { return mu_debye * kDebyeToInternal; }
constexpr double internal_to_debye(double mu) { return mu / kDebyeToInternal; }

// k_B in internal energy per kelvin.
inline constexpr double kBoltzmannInternal = kBoltzmann / kHbar * kPerSecondToPerPs;

}  // namespace oqr::units
