#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oqr/errors.hpp"
#include "oqr/propagator.hpp"
#include "oqr/rotor.hpp"

using namespace oqr;
using cd = std::complex<double>;

namespace {

// Fixed-step RK4 on the Schroedinger-picture equation, as a reference.
Eigen::VectorXcd rk4_schroedinger(const RotLabel& start, const PulseParams& p, const MoleculeSpec& mol,
                                  const BasisSpec& basis, int steps) {
  const int n = basis.size();
  Eigen::MatrixXd cosm = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd energy(n);
  for (int k = 0; k < n; ++k) {
    energy[k] = rot_energy(basis.j_at(k), mol);
    if (k + 1 < n) cosm(k, k + 1) = cosm(k + 1, k) = cos_theta_element(basis.j_at(k), basis.m());
  }
  auto rhs = [&](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    const Eigen::VectorXcd hy = energy.cwiseProduct(y) - mol.mu() * field_at(t, p) * (cosm * y);
    return cd(0, -1) * hy;
  };
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  y[basis.index(start.j)] = 1.0;
  const double h = p.duration() / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + h / 2, y + h / 2 * k1);
    const auto k3 = rhs(t + h / 2, y + h / 2 * k2);
    const auto k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("basis bookkeeping") {
  const BasisSpec b(-1, 5);
  CHECK(b.j_min() == 1);
  CHECK(b.size() == 5);
  CHECK(b.index(3) == 2);
  CHECK(b.j_at(2) == 3);
  CHECK(b.contains(1));
  CHECK_FALSE(b.contains(0));
  CHECK_THROWS_AS(BasisSpec(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(BasisSpec(2, 3), std::invalid_argument);
}

TEST_CASE("interaction Hamiltonian is Hermitian and tridiagonal") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(5e6, 0.0874);
  const BasisSpec basis(0, 6);
  const auto h = interaction_hamiltonian(3.1, p, mol, basis);
  CHECK((h - h.adjoint()).norm() < 1e-15 * h.norm());
  for (int r = 0; r < basis.size(); ++r) {
    for (int c = 0; c < basis.size(); ++c) {
      if (std::abs(r - c) != 1) CHECK(h(r, c) == cd(0.0));
    }
  }
  const double e = field_at(3.1, p);
  CHECK(std::abs(h(0, 1)) == doctest::Approx(mol.mu() * std::abs(e) * cos_theta_element(0, 0)));
}

TEST_CASE("no field, no change") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(0.0, 0.0874);
  const auto tr = propagate({1, 0}, p, mol, BasisSpec(0, 5));
  const auto& c = tr.final_state();
  CHECK(std::abs(c[1] - 1.0) < 1e-15);
  CHECK(c.norm() == doctest::Approx(1.0));
}

TEST_CASE("agrees with a fixed-step Schroedinger reference") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(3e6, 0.0874);
  const BasisSpec basis(0, 6);
  PropagateOptions opt;
  opt.tol = 1e-11;
  opt.check_truncation = false;
  for (int j0 : {0, 1, 2}) {
    const auto tr = propagate({j0, 0}, p, mol, basis, opt);
    const auto psi = tr.final_state().schroedinger_amplitudes(p.duration(), mol);
    const auto ref = rk4_schroedinger({j0, 0}, p, mol, basis, 40000);
    CHECK((psi - ref).norm() < 1e-8);
  }
}

TEST_CASE("weak field reproduces first-order perturbation theory") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(1e4, 0.0874);
  const auto tr = propagate({0, 0}, p, mol, BasisSpec(0, 4));
  const double w0 = rot_energy(1, mol) - rot_energy(0, mol);
  const cd c1 = cd(0, 1) * mol.mu() * cos_theta_element(0, 0) * spectrum(p, w0);
  CHECK(std::abs(tr.final_state()[1] - c1) < 1e-4 * std::abs(c1));
}

TEST_CASE("unitarity") {
  const auto mol = molecule_preset("HCN");
  for (double tol : {1e-10, 1e-11}) {
    PropagateOptions opt;
    opt.tol = tol;
    for (double e0 : {1e6, 7e6, 3e7}) {
      const auto p = PulseParams::from_thz(e0, 0.0874);
      const auto tr = propagate({0, 0}, p, mol, BasisSpec(0, 16), opt);
      CHECK(tr.stats.max_norm_drift <= 10 * tol);
      CHECK(std::abs(tr.final_state().norm() - 1.0) <= 10 * tol);
    }
  }
}

TEST_CASE("time reversal returns to the initial state") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(7e6, 0.0874);
  const BasisSpec basis(0, 12);
  PropagateOptions opt;
  opt.tol = 1e-12;
  const auto forward = propagate({0, 0}, p, mol, basis, opt);
  WavepacketCoeffs back;
  back.basis = basis;
  back.coefficients = forward.final_state().schroedinger_amplitudes(p.duration(), mol).conjugate();
  // E(T - t) = -E(t) for the zero-area phase
  const auto reversed = PulseParams::from_angular(p.e0(), p.omega_c(), 3 * std::numbers::pi / 2);
  CHECK(field_at(2.0, reversed) == doctest::Approx(field_at(p.duration() - 2.0, p)));
  const auto tr = propagate_state(back, reversed, mol, opt);
  const auto psi = tr.final_state().schroedinger_amplitudes(p.duration(), mol);
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(basis.size());
  expected[0] = 1.0;
  CHECK((psi - expected).norm() < 1e-8);
}

TEST_CASE("sample times and free evolution") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(5e6, 0.0874);
  PropagateOptions opt;
  opt.sample_times = {4.0, 1.0, 4.0};
  const auto tr = propagate({0, 0}, p, mol, BasisSpec(0, 8), opt);
  REQUIRE(tr.times.size() == 4);
  CHECK(tr.times[1] == 1.0);
  CHECK(tr.at(4.0).t_ref == 4.0);
  CHECK_THROWS_AS(tr.at(2.0), std::out_of_range);
  const auto later = tr.at(p.duration() + 3.0);
  CHECK(later.t_ref == doctest::Approx(p.duration() + 3.0));
  CHECK((later.coefficients - tr.final_state().coefficients).norm() == 0.0);
  CHECK(free_evolve(tr.final_state(), 2.0).t_ref == doctest::Approx(p.duration() + 2.0));
}

TEST_CASE("truncation leak is detected") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(3e7, 0.1);
  CHECK_THROWS_AS(propagate({0, 0}, p, mol, BasisSpec(0, 3)), TruncationLeak);
  CHECK_THROWS_AS(propagate({5, 0}, p, mol, BasisSpec(0, 3)), std::invalid_argument);
}

TEST_CASE("auto truncation converges") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(1.2e7, 0.1);
  const BasisSpec basis = auto_truncate({0, 0}, p, mol);
  CHECK(basis.j_max() >= 4);
  const auto small = propagate({0, 0}, p, mol, basis);
  const auto big = propagate({0, 0}, p, mol, BasisSpec(0, basis.j_max() + 6));
  for (int j = 0; j <= basis.j_max(); ++j) {
    CHECK(std::norm(small.final_state()[j]) == doctest::Approx(std::norm(big.final_state()[j])).epsilon(1e-6).scale(1.0));
  }
}

}
