#include "oqr/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "oqr/errors.hpp"

namespace oqr {

BasisSpec::BasisSpec(int m, int j_max) : m_(m), j_min_(std::abs(m)), j_max_(j_max) {
  if (j_max < std::abs(m) + 2) {
    throw std::invalid_argument("basis needs J_max >= |M| + 2 (got J_max = " +
                                std::to_string(j_max) + ", M = " + std::to_string(m) + ")");
  }
}

WavepacketCoeffs WavepacketCoeffs::eigenstate(const RotLabel& label, const BasisSpec& basis) {
  if (label.m != basis.m() || !basis.contains(label.j)) {
    throw std::invalid_argument("initial state |" + std::to_string(label.j) + "," +
                                std::to_string(label.m) + "> outside the basis");
  }
  WavepacketCoeffs w;
  w.basis = basis;
  w.coefficients = ComplexVector::Zero(basis.size());
  w.coefficients[basis.index(label.j)] = 1.0;
  return w;
}

ComplexVector WavepacketCoeffs::schroedinger_amplitudes(double t, const MoleculeSpec& mol) const {
  ComplexVector a(coefficients.size());
  for (int i = 0; i < basis.size(); ++i) {
    a[i] = coefficients[i] * std::polar(1.0, -rot_energy(basis.j_at(i), mol) * t);
  }
  return a;
}

WavepacketCoeffs Trajectory::at(double t) const {
  const double period = pulse_end();
  if (t >= period) return free_evolve(final_state(), t - final_state().t_ref);
  const double eps = 1e-12 * period;
  const auto it = std::lower_bound(times.begin(), times.end(), t - eps);
  if (it == times.end() || std::abs(*it - t) > eps) {
    throw std::out_of_range("no trajectory snapshot at t = " + std::to_string(t) + " ps");
  }
  return snapshots[static_cast<std::size_t>(it - times.begin())];
}

namespace {

struct Couplings {
  std::vector<double> dipole;  // mu * <J+1 M|cos|J M>
  std::vector<double> omega;   // E_{J+1} - E_J
};

Couplings block_couplings(const MoleculeSpec& mol, const BasisSpec& basis) {
  Couplings c;
  for (int j = basis.j_min(); j < basis.j_max(); ++j) {
    c.dipole.push_back(mol.mu() * cos_theta_element(j, basis.m()));
    c.omega.push_back(rot_energy(j + 1, mol) - rot_energy(j, mol));
  }
  return c;
}

}  // namespace

Eigen::MatrixXcd interaction_hamiltonian(double t, const PulseParams& p, const MoleculeSpec& mol,
                                         const BasisSpec& basis) {
  const Couplings c = block_couplings(mol, basis);
  const double field = field_at(t, p);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  for (std::size_t k = 0; k < c.dipole.size(); ++k) {
    const auto upper = -c.dipole[k] * field * std::polar(1.0, -c.omega[k] * t);
    h(k, k + 1) = upper;
    h(k + 1, k) = std::conj(upper);
  }
  return h;
}

Trajectory propagate_state(const WavepacketCoeffs& initial, const PulseParams& p,
                           const MoleculeSpec& mol, const PropagateOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  const BasisSpec& basis = initial.basis;
  const Couplings c = block_couplings(mol, basis);
  const std::size_t links = c.dipole.size();
  const double period = p.duration();

  const OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dy) {
    // dc/dt = -i H_I c, H_I tridiagonal with zero diagonal.
    const double field = field_at(t, p);
    dy.setZero();
    for (std::size_t k = 0; k < links; ++k) {
      const std::complex<double> upper = -c.dipole[k] * field * std::polar(1.0, -c.omega[k] * t);
      dy[k] += upper * y[k + 1];
      dy[k + 1] += std::conj(upper) * y[k];
    }
    dy *= std::complex<double>(0.0, -1.0);
  };

  std::vector<double> stops;
  for (double s : options.sample_times) {
    if (s > 0.0 && s < period) stops.push_back(s);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(period);

  Trajectory traj{{}, {}, p, mol, {}};
  WavepacketCoeffs current = initial;
  current.t_ref = 0.0;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(current);

  const double norm0 = current.norm();
  double drift = 0.0;
  const StepObserver monitor = [&](double, const ComplexVector& y) {
    drift = std::max(drift, std::abs(y.norm() - norm0));
  };

  DormandPrince45 stepper(OdeOptions{options.tol, options.tol});
  double step = 0.0;
  double t = 0.0;
  ComplexVector y = current.coefficients;
  for (double stop : stops) {
    stepper.integrate(rhs, t, stop, y, step, monitor);
    t = stop;
    current.coefficients = y;
    current.t_ref = t;
    traj.times.push_back(t);
    traj.snapshots.push_back(current);
  }

  traj.stats.accepted_steps = stepper.stats().accepted;
  traj.stats.rejected_steps = stepper.stats().rejected;
  traj.stats.rhs_evaluations = stepper.stats().rhs_evaluations;
  traj.stats.max_norm_drift = drift;

  if (options.check_truncation) {
    const auto& fin = traj.final_state().coefficients;
    const int n = basis.size();
    const double leaked = std::norm(fin[n - 1]) + std::norm(fin[n - 2]);
    if (leaked > options.leak_threshold) {
      throw TruncationLeak("population " + std::to_string(leaked) +
                               " in the top two levels; increase J_max beyond " +
                               std::to_string(basis.j_max()),
                           leaked);
    }
  }
  return traj;
}

Trajectory propagate(const RotLabel& initial, const PulseParams& p, const MoleculeSpec& mol,
                     const BasisSpec& basis, const PropagateOptions& options) {
  return propagate_state(WavepacketCoeffs::eigenstate(initial, basis), p, mol, options);
}

WavepacketCoeffs free_evolve(const WavepacketCoeffs& w, double dt) {
  WavepacketCoeffs out = w;
  out.t_ref += dt;
  return out;
}

BasisSpec auto_truncate(const RotLabel& initial, const PulseParams& p, const MoleculeSpec& mol,
                        double tol) {
  constexpr int kCeiling = 200;
  PropagateOptions options;
  options.tol = tol;
  const int m = initial.m;
  const auto populations = [](const Trajectory& tr) {
    return tr.final_state().coefficients.cwiseAbs2().eval();
  };
  for (int j_max = std::max(std::abs(m) + 2, initial.j + 2); j_max <= kCeiling; ++j_max) {
    const BasisSpec basis(m, j_max);
    Trajectory small{{}, {}, p, mol, {}};
    try {
      small = propagate(initial, p, mol, basis, options);
    } catch (const TruncationLeak&) {
      continue;
    }
    const Trajectory large = propagate(initial, p, mol, BasisSpec(m, j_max + 2),
                                       PropagateOptions{tol, {}, false, 1e-8});
    const Eigen::VectorXd ps = populations(small);
    const Eigen::VectorXd pl = populations(large);
    double change = (pl.tail(2)).sum();
    for (Eigen::Index i = 0; i < ps.size(); ++i) change = std::max(change, std::abs(ps[i] - pl[i]));
    if (change < 1e-8) return basis;
  }
  throw NonConvergence("auto_truncate: no J_max up to " + std::to_string(kCeiling) + " converged");
}

}  // namespace oqr
