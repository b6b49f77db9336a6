#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "oqr/magnus.hpp"

using namespace oqr;
using cd = std::complex<double>;

namespace {

BetaPair random_beta(std::mt19937& rng, bool decoupled_zero) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const cd b0 = decoupled_zero ? cd(0.0) : cd(u(rng), u(rng));
  return BetaPair::make(b0, cd(u(rng), u(rng)), 1.0);
}

Matrix3c expm(const Matrix3c& s) { return s.exp(); }

}  // namespace

TEST_SUITE("magnus") {

TEST_CASE("block setup") {
  const auto mol = molecule_preset("HCN");
  const auto b0 = ThreeStateBlock::make(mol, 0);
  CHECK(b0.dipole10 == doctest::Approx(mol.mu() * cos_theta_element(0, 0)));
  CHECK(b0.omega0 == doctest::Approx(2 * mol.b()));
  CHECK(b0.omega1 == doctest::Approx(4 * mol.b()));
  CHECK(ThreeStateBlock::make(mol, 1).dipole10 == 0.0);
  CHECK_THROWS_AS(ThreeStateBlock::make(mol, 2), std::invalid_argument);
  CHECK(block_index(2) == 2);
}

TEST_CASE("first-order unitary equals the matrix exponential") {
  std::mt19937 rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto b = random_beta(rng, k % 3 == 0);
    const Matrix3c s1 = cd(0, 1) * first_order_generator(b);
    CHECK((first_order_unitary(b) - expm(s1)).norm() < 1e-12);
  }
  const auto zero = BetaPair::make(0.0, 0.0, 0.0);
  CHECK((first_order_unitary(zero) - Matrix3c::Identity()).norm() == 0.0);
}

TEST_CASE("eigenvectors diagonalize the generator") {
  std::mt19937 rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto b = random_beta(rng, false);
    const Matrix3c a = first_order_generator(b);
    CHECK((a - a.adjoint()).norm() < 1e-14);
    const auto d = decompose_first_order(b);
    Matrix3c v;
    for (int p = 0; p < 3; ++p) {
      v.col(p) = d.eigenvectors[p];
      CHECK((a * d.eigenvectors[p] - d.eigenvalues[p] * d.eigenvectors[p]).norm() < 1e-12);
    }
    CHECK((v.adjoint() * v - Matrix3c::Identity()).norm() < 1e-12);
    CHECK(d.eigenvalues[1] == doctest::Approx(b.beta));
    CHECK(d.eigenvalues[2] == doctest::Approx(-b.beta));
  }
}

TEST_CASE("closed-form first-order states") {
  std::mt19937 rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto b = random_beta(rng, false);
    const Matrix3c u = expm(cd(0, 1) * first_order_generator(b));
    CHECK((first_order_state(0, 0, b) - u.col(0)).norm() < 1e-10);
    CHECK((first_order_state(1, 0, b) - u.col(1)).norm() < 1e-10);
    const auto b1 = random_beta(rng, true);
    const Matrix3c u1 = expm(cd(0, 1) * first_order_generator(b1));
    CHECK((first_order_state(1, 1, b1) - u1.col(1)).norm() < 1e-10);
    CHECK((first_order_state(1, -1, b1) - u1.col(1)).norm() < 1e-10);
  }
  const auto b = BetaPair::make(cd(0.3, 0.1), cd(0.2, 0.0), 1.0);
  CHECK_THROWS_AS(first_order_state(2, 0, b), std::invalid_argument);
  CHECK_THROWS_AS(first_order_state(1, 1, b), std::invalid_argument);
}

TEST_CASE("beta integrals follow the pulse transform") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(6e6, 0.09);
  const auto blk = ThreeStateBlock::make(mol, 0);
  const auto b = beta_integrals(p, mol, 0, 0.7 * p.duration());
  CHECK(std::abs(b.beta0 - blk.dipole10 * partial_transform(p, blk.omega0, 0.7 * p.duration())) < 1e-12);
  CHECK(std::abs(b.beta1 - blk.dipole21 * partial_transform(p, blk.omega1, 0.7 * p.duration())) < 1e-12);
  CHECK(b.beta == doctest::Approx(std::hypot(std::abs(b.beta0), std::abs(b.beta1))));
  CHECK_THROWS_AS(beta_integrals(p, mol, 0, 1.1 * p.duration()), std::invalid_argument);
}

TEST_CASE("resonant beta1 phase at the end of the pulse") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_angular(6e6, 2 * mol.b());
  const auto b = beta_integrals(p, mol, 1, p.duration());
  CHECK(std::abs(b.beta0) == 0.0);
  CHECK(std::abs(b.beta1 / std::abs(b.beta1) - cd(0, 1)) < 1e-10);
}

TEST_CASE("kernels are anti-Hermitian and S1 matches the closed form") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(8e6, 0.0874);
  for (int m : {0, 1}) {
    const auto k = magnus_kernels(p, mol, m, p.duration());
    for (const auto& s : k) {
      CHECK((s.matrix + s.matrix.adjoint()).norm() < 1e-12 * (1.0 + s.matrix.norm()));
      CHECK(s.m == m);
    }
    const auto b = beta_integrals(p, mol, m, p.duration());
    CHECK((k[0].matrix - cd(0, 1) * first_order_generator(b)).norm() < 1e-8);
  }
}

TEST_CASE("second- and third-order kernels against the Magnus recursion") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(8e6, 0.0874);
  const auto omega = magnus_recursion_terms(p, mol, 0, p.duration());
  const auto stated = magnus_kernels(p, mol, 0, p.duration());
  MagnusOptions textbook;
  textbook.standard_third_order = true;
  const auto full = magnus_kernels(p, mol, 0, p.duration(), textbook);
  CHECK((stated[0].matrix - omega[0]).norm() < 1e-8);
  CHECK((stated[1].matrix - omega[1]).norm() < 1e-8);
  CHECK((full[2].matrix - omega[2]).norm() < 1e-8 * (1.0 + omega[2].norm()));
  CHECK((stated[2].matrix - omega[2]).norm() > 1e-4);
}

TEST_CASE("kernel series matches single-time kernels") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(5e6, 0.0874);
  const std::vector<double> times = {0.0, 2.0, 5.5, p.duration()};
  const auto series = magnus_kernel_series(p, mol, 0, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto single = magnus_kernels(p, mol, 0, times[i]);
    for (int n = 0; n < 3; ++n) CHECK((series[i][n].matrix - single[n].matrix).norm() < 1e-8);
  }
  CHECK(magnus_kernel(2, p, mol, 0, 2.0).order == 2);
}

TEST_CASE("anti-Hermitian exponential") {
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Matrix3c h;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) h(r, c) = cd(g(rng), g(rng));
    const Matrix3c s = h - h.adjoint();
    const Matrix3c u = exp_anti_hermitian(s);
    CHECK((u - expm(s)).norm() < 1e-12);
    CHECK((u.adjoint() * u - Matrix3c::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("second order alone never reaches |10>") {
  const auto mol = molecule_preset("HCN");
  for (double e0 : {1e6, 8e6, 2e7}) {
    const auto p = PulseParams::from_thz(e0, 0.0874);
    const auto k = magnus_kernels(p, mol, 0, p.duration());
    const Vector3c psi = single_order_propagator(2, k[1]).col(0);
    CHECK(std::norm(psi[1]) <= 1e-12);
  }
}

TEST_CASE("order and time mismatches are rejected") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(5e6, 0.0874);
  const auto a = magnus_kernels(p, mol, 0, 3.0);
  const auto b = magnus_kernels(p, mol, 0, 4.0);
  CHECK_THROWS_AS(single_order_propagator(1, a[1]), std::invalid_argument);
  const std::array<MagnusKernel, 2> mixed = {a[0], b[1]};
  CHECK_THROWS_AS(truncated_propagator({1, 2}, mixed), std::invalid_argument);
  CHECK_THROWS_AS(magnus_final_state(3, 0, {1}, p, mol), std::invalid_argument);
}

TEST_CASE("weak-field truncated model follows the exact propagation") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(1e5, 0.0874);
  const auto w = magnus_final_state(0, 0, {1, 2, 3}, p, mol);
  const auto exact = propagate({0, 0}, p, mol, BasisSpec(0, 6));
  for (int j = 0; j <= 2; ++j) CHECK(std::abs(w[j] - exact.final_state()[j]) < 1e-6);
  CHECK(w.t_ref == doctest::Approx(p.duration()));
}

TEST_CASE("weak-field exact populations follow the first-order closed form") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_angular(1e5, 2 * mol.b());
  const auto b = beta_integrals(p, mol, 0, p.duration());
  const Vector3c closed = first_order_state(0, 0, b);
  const auto exact = propagate({0, 0}, p, mol, BasisSpec(0, 6));
  for (int j = 0; j <= 2; ++j) CHECK(std::norm(exact.final_state()[j]) == doctest::Approx(std::norm(closed[j])).epsilon(1e-4).scale(1e-4));
}

}
