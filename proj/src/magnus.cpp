#include "oqr/magnus.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "oqr/ode.hpp"

namespace oqr {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Matrix3c commutator(const Matrix3c& a, const Matrix3c& b) { return a * b - b * a; }

// sin(x)/x and (1 - cos x)/x^2 without cancellation near zero.
double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }
double one_minus_cos_over_sq(double x) {
  const double h = sinc(0.5 * x);
  return 0.5 * h * h;
}

void check_time(const PulseParams& p, double t) {
  if (t < 0.0 || t > p.duration() * (1.0 + 1e-12)) {
    throw std::invalid_argument("Magnus evaluation time " + std::to_string(t) +
                                " ps outside [0, T]");
  }
}

}  // namespace

ThreeStateBlock ThreeStateBlock::make(const MoleculeSpec& mol, int m) {
  if (std::abs(m) > 1) {
    throw std::invalid_argument("three-state block requires |M| <= 1");
  }
  ThreeStateBlock block;
  block.m = m;
  block.dipole10 = m == 0 ? mol.mu() * cos_theta_element(0, 0) : 0.0;
  block.dipole21 = mol.mu() * cos_theta_element(1, m);
  block.omega0 = rot_energy(1, mol) - rot_energy(0, mol);
  block.omega1 = rot_energy(2, mol) - rot_energy(1, mol);
  return block;
}

Matrix3c ThreeStateBlock::interaction_hamiltonian(double t, const PulseParams& p) const {
  const double field = field_at(t, p);
  Matrix3c h = Matrix3c::Zero();
  h(0, 1) = -dipole10 * field * std::polar(1.0, -omega0 * t);
  h(1, 0) = std::conj(h(0, 1));
  h(1, 2) = -dipole21 * field * std::polar(1.0, -omega1 * t);
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

BetaPair BetaPair::make(std::complex<double> beta0, std::complex<double> beta1, double t) {
  return BetaPair{beta0, beta1, std::hypot(std::abs(beta0), std::abs(beta1)), t};
}

BetaPair beta_integrals(const PulseParams& p, const MoleculeSpec& mol, int m, double t) {
  check_time(p, t);
  const ThreeStateBlock block = ThreeStateBlock::make(mol, m);
  const std::complex<double> b0 =
      block.dipole10 == 0.0 ? std::complex<double>{} : block.dipole10 * partial_transform(p, block.omega0, t);
  const std::complex<double> b1 = block.dipole21 * partial_transform(p, block.omega1, t);
  return BetaPair::make(b0, b1, t);
}

Matrix3c first_order_generator(const BetaPair& b) {
  Matrix3c a = Matrix3c::Zero();
  a(0, 1) = std::conj(b.beta0);
  a(1, 0) = b.beta0;
  a(1, 2) = std::conj(b.beta1);
  a(2, 1) = b.beta1;
  return a;
}

FirstOrderDecomposition decompose_first_order(const BetaPair& b) {
  FirstOrderDecomposition d;
  if (b.beta == 0.0) {
    d.eigenvalues = {0.0, 0.0, 0.0};
    d.eigenvectors = {Vector3c::UnitX(), Vector3c::UnitY(), Vector3c::UnitZ()};
    return d;
  }
  const double beta = b.beta;
  const double root2 = std::sqrt(2.0);
  d.eigenvalues = {0.0, beta, -beta};
  d.eigenvectors[0] = Vector3c(-std::conj(b.beta1), 0.0, b.beta0) / beta;
  d.eigenvectors[1] = Vector3c(std::conj(b.beta0), beta, b.beta1) / (root2 * beta);
  d.eigenvectors[2] = Vector3c(std::conj(b.beta0), -beta, b.beta1) / (root2 * beta);
  return d;
}

Matrix3c first_order_unitary(const BetaPair& b) {
  if (b.beta == 0.0) return Matrix3c::Identity();
  const FirstOrderDecomposition d = decompose_first_order(b);
  Matrix3c u = Matrix3c::Zero();
  for (int k = 0; k < 3; ++k) {
    u += std::polar(1.0, d.eigenvalues[k]) * d.eigenvectors[k] * d.eigenvectors[k].adjoint();
  }
  return u;
}

Vector3c first_order_state(int j0, int m, const BetaPair& b) {
  const std::complex<double> b0 = b.beta0;
  const std::complex<double> b1 = b.beta1;
  if (j0 == 0 && m == 0) {
    const double beta = b.beta;
    const double c = one_minus_cos_over_sq(beta);  // (1 - cos beta)/beta^2
    return Vector3c(1.0 - std::norm(b0) * c, kI * b0 * sinc(beta), -b0 * b1 * c);
  }
  if (j0 == 1 && m == 0) {
    const double beta = b.beta;
    return Vector3c(kI * std::conj(b0) * sinc(beta), std::cos(beta), kI * b1 * sinc(beta));
  }
  if (j0 == 1 && std::abs(m) == 1) {
    if (b0 != 0.0) throw std::invalid_argument("|M| = 1 block has no beta0 coupling");
    const double beta = std::abs(b1);
    const std::complex<double> phase = beta == 0.0 ? 1.0 : b1 / beta;
    return Vector3c(0.0, std::cos(beta), kI * phase * std::sin(beta));
  }
  throw std::invalid_argument("closed-form first-order state only for |00>, |10>, |1+-1>");
}

namespace {

// Augmented kernel ODE. Layout: P, R, W and, for the recursion route,
// Omega_2 and Omega_3 (each 3x3 column-major).
class KernelSystem {
 public:
  KernelSystem(ThreeStateBlock block, const PulseParams& p, bool with_recursion)
      : block_(block), pulse_(p), blocks_(with_recursion ? 5 : 3) {}

  int size() const { return 9 * blocks_; }

  void operator()(double t, const ComplexVector& y, ComplexVector& dy) const {
    const Matrix3c h = block_.interaction_hamiltonian(t, pulse_);
    const auto block = [&](int k) { return Eigen::Map<const Matrix3c>(y.data() + 9 * k); };
    const auto out = [&](int k) { return Eigen::Map<Matrix3c>(dy.data() + 9 * k); };
    const Matrix3c p = block(0);
    const Matrix3c r = block(1);
    out(0) = h;
    out(1) = commutator(h, p);
    out(2) = commutator(h, r);
    if (blocks_ == 5) {
      const Matrix3c a = -kI * h;
      const Matrix3c omega1 = -kI * p;
      const Matrix3c omega2 = block(3);
      out(3) = 0.5 * commutator(a, omega1);
      out(4) = -0.5 * commutator(omega2, a) + (1.0 / 12.0) * commutator(omega1, commutator(omega1, a));
    }
  }

 private:
  ThreeStateBlock block_;
  PulseParams pulse_;
  int blocks_;
};

Matrix3c block_of(const ComplexVector& y, int k) {
  return Eigen::Map<const Matrix3c>(y.data() + 9 * k);
}

std::array<MagnusKernel, 3> kernels_from_state(const ComplexVector& y, int m, double t,
                                               bool standard) {
  std::array<MagnusKernel, 3> k;
  k[0] = {1, m, -kI * block_of(y, 0), t};
  k[1] = {2, m, -0.5 * block_of(y, 1), t};
  k[2] = {3, m, standard ? block_of(y, 4) : Matrix3c(kI / 6.0 * block_of(y, 2)), t};
  return k;
}

std::vector<ComplexVector> integrate_kernels(const PulseParams& p, const MoleculeSpec& mol, int m,
                                             std::span<const double> times, double tol,
                                             bool with_recursion) {
  const ThreeStateBlock block = ThreeStateBlock::make(mol, m);
  const KernelSystem system(block, p, with_recursion);
  const OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dy) { system(t, y, dy); };
  DormandPrince45 stepper(OdeOptions{tol, tol});
  ComplexVector y = ComplexVector::Zero(system.size());
  double step = 0.0;
  double t = 0.0;
  std::vector<ComplexVector> out;
  out.reserve(times.size());
  for (double target : times) {
    check_time(p, target);
    if (target < t) throw std::invalid_argument("Magnus kernel times must be ascending");
    target = std::min(target, p.duration());
    stepper.integrate(rhs, t, target, y, step);
    t = std::max(t, target);
    out.push_back(y);
  }
  return out;
}

}  // namespace

std::vector<std::array<MagnusKernel, 3>> magnus_kernel_series(const PulseParams& p,
                                                              const MoleculeSpec& mol, int m,
                                                              std::span<const double> times,
                                                              const MagnusOptions& options) {
  const auto states =
      integrate_kernels(p, mol, m, times, options.tol, options.standard_third_order);
  std::vector<std::array<MagnusKernel, 3>> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.push_back(kernels_from_state(states[i], m, times[i], options.standard_third_order));
  }
  return out;
}

std::array<MagnusKernel, 3> magnus_kernels(const PulseParams& p, const MoleculeSpec& mol, int m,
                                           double t, const MagnusOptions& options) {
  const double times[] = {t};
  return magnus_kernel_series(p, mol, m, times, options).front();
}

MagnusKernel magnus_kernel(int order, const PulseParams& p, const MoleculeSpec& mol, int m,
                           double t, const MagnusOptions& options) {
  if (order < 1 || order > 3) throw std::invalid_argument("Magnus order must be 1, 2 or 3");
  return magnus_kernels(p, mol, m, t, options)[order - 1];
}

std::array<Matrix3c, 3> magnus_recursion_terms(const PulseParams& p, const MoleculeSpec& mol,
                                               int m, double t, double tol) {
  const double times[] = {t};
  const ComplexVector y = integrate_kernels(p, mol, m, times, tol, true).front();
  return {-kI * block_of(y, 0), block_of(y, 3), block_of(y, 4)};
}

Matrix3c exp_anti_hermitian(const Matrix3c& s) {
  Matrix3c h = kI * s;
  h = 0.5 * (h + h.adjoint()).eval();
  const Eigen::SelfAdjointEigenSolver<Matrix3c> solver(h);
  const Eigen::Vector3d lambda = solver.eigenvalues();
  Vector3c phases;
  for (int k = 0; k < 3; ++k) phases[k] = std::polar(1.0, -lambda[k]);
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix3c single_order_propagator(int order, const MagnusKernel& kernel) {
  if (kernel.order != order) {
    throw std::invalid_argument("kernel order " + std::to_string(kernel.order) +
                                " does not match requested order " + std::to_string(order));
  }
  return exp_anti_hermitian(kernel.matrix);
}

Matrix3c truncated_propagator(const std::set<int>& orders, std::span<const MagnusKernel> kernels) {
  if (orders.empty()) return Matrix3c::Identity();
  if (kernels.empty()) throw std::invalid_argument("no Magnus kernels supplied");
  const double t = kernels.front().t;
  const int m = kernels.front().m;
  Matrix3c sum = Matrix3c::Zero();
  for (int n : orders) {
    if (n < 1 || n > 3) throw std::invalid_argument("Magnus orders must lie in {1, 2, 3}");
    bool found = false;
    for (const auto& k : kernels) {
      if (k.t != t || k.m != m) throw std::invalid_argument("kernels must share t and M");
      if (k.order == n && !found) {
        sum += k.matrix;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("missing kernel of order " + std::to_string(n));
  }
  return exp_anti_hermitian(sum);
}

int block_index(int j) {
  if (j < 0 || j > 2) throw std::invalid_argument("three-state block holds J = 0, 1, 2");
  return j;
}

WavepacketCoeffs embed_block_state(const Vector3c& state, int m, double t_ref) {
  if (std::abs(m) > 1) throw std::invalid_argument("three-state block requires |M| <= 1");
  WavepacketCoeffs w;
  w.basis = BasisSpec(m, std::abs(m) + 2);
  w.coefficients = ComplexVector::Zero(w.basis.size());
  for (int j = std::abs(m); j <= 2; ++j) w.coefficients[w.basis.index(j)] = state[j];
  w.t_ref = t_ref;
  return w;
}

WavepacketCoeffs magnus_final_state(int j0, int m, const std::set<int>& orders,
                                    const PulseParams& p, const MoleculeSpec& mol,
                                    const MagnusOptions& options) {
  if (std::abs(m) > 1 || j0 < std::abs(m) || j0 > 2) {
    throw std::invalid_argument("Magnus model supports |J0 M> with J0 <= 2, |M| <= min(J0, 1)");
  }
  const auto kernels = magnus_kernels(p, mol, m, p.duration(), options);
  const Matrix3c u = truncated_propagator(orders, kernels);
  return embed_block_state(u.col(block_index(j0)), m, p.duration());
}

}  // namespace oqr
