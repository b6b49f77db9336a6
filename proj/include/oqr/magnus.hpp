#pragma once

// Three-state Magnus model. The block is |0 0>, |1 M>, |2 M> with M in
// {-1, 0, 1}; for |M| = 1 the J = 0 slot is uncoupled and the model reduces
// to the two-state system |1 M>, |2 M>.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <set>
#include <span>
#include <vector>

#include "oqr/propagator.hpp"
#include "oqr/pulse.hpp"
#include "oqr/rotor.hpp"

namespace oqr {

using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

struct ThreeStateBlock {
  int m = 0;
  double dipole10 = 0.0;  // mu <1M|cos|0 0>, zero for |M| = 1
  double dipole21 = 0.0;  // mu <2M|cos|1M>
  double omega0 = 0.0;    // E_1 - E_0
  double omega1 = 0.0;    // E_2 - E_1

  /// Throws std::invalid_argument for |M| > 1.
  static ThreeStateBlock make(const MoleculeSpec& mol, int m);
  Matrix3c interaction_hamiltonian(double t, const PulseParams& p) const;
};

struct BetaPair {
  std::complex<double> beta0;
  std::complex<double> beta1;
  double beta = 0.0;
  double t = 0.0;

  static BetaPair make(std::complex<double> beta0, std::complex<double> beta1, double t);
};

/// beta0(t) = mu10 int_0^t E e^{i w0 t'}, beta1(t) = mu21 int_0^t E e^{i w1 t'}.
/// Throws std::invalid_argument for t outside [0, T].
BetaPair beta_integrals(const PulseParams& p, const MoleculeSpec& mol, int m, double t);

/// A(t) = -int_0^t H_I, so that S1 = i A.
Matrix3c first_order_generator(const BetaPair& b);

struct FirstOrderDecomposition {
  /// lambda_0 = 0, lambda_+ = beta, lambda_- = -beta.
  std::array<double, 3> eigenvalues{};
  std::array<Vector3c, 3> eigenvectors;
};

/// Closed-form eigenpairs of A(t). For beta = 0 the standard basis is returned.
FirstOrderDecomposition decompose_first_order(const BetaPair& b);

/// sum_p exp(i lambda_p) |lambda_p><lambda_p|; the identity when beta = 0.
Matrix3c first_order_unitary(const BetaPair& b);

/// Closed-form first-order states for (J0, M) in {(0,0), (1,0), (1,+-1)}.
/// Throws std::invalid_argument otherwise, or if b carries a nonzero beta0
/// for an |M| = 1 block.
Vector3c first_order_state(int j0, int m, const BetaPair& b);

struct MagnusKernel {
  int order = 1;
  int m = 0;
  Matrix3c matrix = Matrix3c::Zero();
  double t = 0.0;
};

struct MagnusOptions {
  double tol = 1e-11;
  /// Adds the second nested commutator of the textbook third-order term.
  bool standard_third_order = false;
};

/// S1, S2, S3 at time t. S1 = -i P, S2 = -(1/2) R, S3 = (i/6) W where
/// P' = H_I, R' = [H_I, P], W' = [H_I, R], all starting from zero.
/// Throws NonConvergence from the ODE layer.
std::array<MagnusKernel, 3> magnus_kernels(const PulseParams& p, const MoleculeSpec& mol, int m,
                                           double t, const MagnusOptions& options = {});

/// Kernels at each of the (ascending) times, from a single integration.
std::vector<std::array<MagnusKernel, 3>> magnus_kernel_series(const PulseParams& p,
                                                              const MoleculeSpec& mol, int m,
                                                              std::span<const double> times,
                                                              const MagnusOptions& options = {});

MagnusKernel magnus_kernel(int order, const PulseParams& p, const MoleculeSpec& mol, int m,
                           double t, const MagnusOptions& options = {});

/// Omega_1..3 from the Magnus recursion
/// Omega_2' = 1/2 [A, Omega_1], Omega_3' = -1/2 [Omega_2, A] + 1/12 [Omega_1, [Omega_1, A]],
/// A = -i H_I. Omega_3 is the textbook third-order term.
std::array<Matrix3c, 3> magnus_recursion_terms(const PulseParams& p, const MoleculeSpec& mol,
                                               int m, double t, double tol = 1e-11);

/// exp(S) for anti-Hermitian S via the Hermitian eigenproblem of i S.
Matrix3c exp_anti_hermitian(const Matrix3c& s);

/// exp(S^(n)). Throws std::invalid_argument if the kernel order differs.
Matrix3c single_order_propagator(int order, const MagnusKernel& kernel);

/// exp(sum over orders of S^(n)). All kernels must share t and M.
Matrix3c truncated_propagator(const std::set<int>& orders, std::span<const MagnusKernel> kernels);

/// Block index of |J M> (J in {0, 1, 2}).
int block_index(int j);

/// Embeds a block state into a free-rotor basis so that the observables
/// module can evaluate it. Uses J_max = 2 for M = 0 and J_max = 3 for |M| = 1.
WavepacketCoeffs embed_block_state(const Vector3c& state, int m, double t_ref);

/// State after the pulse under a truncated Magnus propagator, from |J0 M>.
/// Accepts J0 in {0, 1, 2}, |M| <= 1, J0 >= |M|.
WavepacketCoeffs magnus_final_state(int j0, int m, const std::set<int>& orders,
                                    const PulseParams& p, const MoleculeSpec& mol,
                                    const MagnusOptions& options = {});

}  // namespace oqr
