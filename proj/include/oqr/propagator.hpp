#pragma once

#include <vector>

#include "oqr/ode.hpp"
#include "oqr/pulse.hpp"
#include "oqr/rotor.hpp"

namespace oqr {

/// Fixed-M block of rotor states J = |M| .. J_max.
class BasisSpec {
 public:
  /// Throws std::invalid_argument unless j_max >= |m| + 2.
  BasisSpec(int m, int j_max);

  int m() const { return m_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int size() const { return j_max_ - j_min_ + 1; }
  bool contains(int j) const { return j >= j_min_ && j <= j_max_; }
  int index(int j) const { return j - j_min_; }
  int j_at(int index) const { return j_min_ + index; }

  bool operator==(const BasisSpec&) const = default;

 private:
  int m_;
  int j_min_;
  int j_max_;
};

inline constexpr int kDefaultJMax = 10;

/// Interaction-picture coefficients c_J valid at t_ref (ps). The
/// Schroedinger-picture amplitude at time t is c_J exp(-i E_J t).
struct WavepacketCoeffs {
  ComplexVector coefficients;
  double t_ref = 0.0;
  BasisSpec basis{0, 2};

  static WavepacketCoeffs eigenstate(const RotLabel& label, const BasisSpec& basis);

  std::complex<double> operator[](int j) const { return coefficients[basis.index(j)]; }
  double norm() const { return coefficients.norm(); }
  ComplexVector schroedinger_amplitudes(double t, const MoleculeSpec& mol) const;
};

struct PropagationStats {
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
  /// max | ||c(t)|| - ||c(0)|| | over accepted steps.
  double max_norm_drift = 0.0;
};

/// Snapshots of one propagation. times[0] = 0 and times.back() = T.
struct Trajectory {
  std::vector<double> times;
  std::vector<WavepacketCoeffs> snapshots;
  PulseParams pulse;
  MoleculeSpec molecule;
  PropagationStats stats;

  const WavepacketCoeffs& final_state() const { return snapshots.back(); }
  double pulse_end() const { return pulse.duration(); }
  /// Exact snapshot at a sample time, or the free-evolved final state for
  /// t >= T. Throws std::out_of_range for other times inside the pulse.
  WavepacketCoeffs at(double t) const;
};

struct PropagateOptions {
  double tol = 1e-10;
  /// Extra snapshot times inside (0, T); sorted and deduplicated internally.
  std::vector<double> sample_times;
  bool check_truncation = true;
  double leak_threshold = 1e-8;
};

/// Tridiagonal interaction-picture Hamiltonian of the basis at time t.
Eigen::MatrixXcd interaction_hamiltonian(double t, const PulseParams& p, const MoleculeSpec& mol,
                                         const BasisSpec& basis);

/// Solves i dc/dt = H_I(t) c over [0, T] from an eigenstate.
/// Throws std::invalid_argument for labels outside the basis, NonConvergence,
/// and TruncationLeak when the top two levels end up populated.
Trajectory propagate(const RotLabel& initial, const PulseParams& p, const MoleculeSpec& mol,
                     const BasisSpec& basis, const PropagateOptions& options = {});

/// Same from an arbitrary initial coefficient vector (taken at t = 0).
Trajectory propagate_state(const WavepacketCoeffs& initial, const PulseParams& p,
                           const MoleculeSpec& mol, const PropagateOptions& options = {});

/// Field-free evolution. Interaction-picture coefficients do not change;
/// only t_ref advances.
WavepacketCoeffs free_evolve(const WavepacketCoeffs& w, double dt);

/// Smallest J_max whose propagation passes the leak check and whose final
/// populations move by less than 1e-8 when J_max grows by two.
BasisSpec auto_truncate(const RotLabel& initial, const PulseParams& p, const MoleculeSpec& mol,
                        double tol = 1e-10);

}  // namespace oqr
