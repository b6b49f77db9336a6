#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <random>

#include "oqr/observables.hpp"

using namespace oqr;
using cd = std::complex<double>;

namespace {

WavepacketCoeffs random_state(std::mt19937& rng, int m, int j_max, double t_ref) {
  std::normal_distribution<double> g;
  WavepacketCoeffs w;
  w.basis = BasisSpec(m, j_max);
  w.t_ref = t_ref;
  w.coefficients.resize(w.basis.size());
  for (int k = 0; k < w.basis.size(); ++k) w.coefficients[k] = cd(g(rng), g(rng));
  w.coefficients.normalize();
  return w;
}

double theta_integral(const std::function<double(double)>& f) {
  return boost::math::quadrature::gauss<double, 60>::integrate(f, 0.0, std::numbers::pi);
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("cosine sum equals the quadratic form on random states") {
  const auto mol = molecule_preset("HCN");
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> t(0.0, 40.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto w = random_state(rng, k % 5 - 2, 2 + std::abs(k % 5 - 2) + k % 7, 0.0);
    const double at = t(rng);
    worst = std::max(worst, std::abs(orientation_at(w, at, mol) - orientation_quadratic(w, at, mol)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("eigenstates carry no orientation") {
  const auto mol = molecule_preset("HCN");
  for (int j = 0; j <= 4; ++j) {
    for (int m = -std::min(j, 1); m <= std::min(j, 1); ++m) {
      const auto w = WavepacketCoeffs::eigenstate({j, m}, BasisSpec(m, 6));
      CHECK(orientation_at(w, 3.3, mol) == 0.0);
      CHECK(orientation_quadratic(w, 7.1, mol) == 0.0);
    }
  }
}

TEST_CASE("post-pulse series is periodic in the revival time") {
  const auto mol = molecule_preset("HCN");
  std::mt19937 rng(1);
  const double tau = revival_time(mol);
  for (int k = 0; k < 20; ++k) {
    const auto w = random_state(rng, 0, 8, 10.0);
    const auto s = OrientationSeries::from_state(w, mol);
    for (double t : {10.0, 13.7, 25.2}) {
      CHECK(std::abs(s(t + tau) - s(t)) <= 1e-12);
      CHECK(s(t) == doctest::Approx(orientation_at(w, t, mol)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("normalized Legendre functions against Boost") {
  for (int m = 0; m <= 3; ++m) {
    for (double x : {-0.9, -0.2, 0.0, 0.45, 0.99}) {
      const auto p = normalized_legendre(9, m, x);
      for (int l = m; l <= 9; ++l) {
        const double norm = std::sqrt((2.0 * l + 1.0) / 2.0 * boost::math::factorial<double>(l - m) /
                                      boost::math::factorial<double>(l + m));
        const double ref = (m % 2 ? -1.0 : 1.0) * norm * boost::math::legendre_p(l, m, x);
        CHECK(p[l - m] == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
      }
    }
  }
  CHECK(normalized_legendre(4, -2, 0.3) == normalized_legendre(4, 2, 0.3));
}

TEST_CASE("angular density is normalized and reproduces the orientation") {
  const auto mol = molecule_preset("HCN");
  std::mt19937 rng(9);
  for (int m : {0, 1}) {
    const auto w = random_state(rng, m, 7, 0.0);
    const double t = 4.2;
    auto rho = [&](double th) {
      const std::array<double, 1> g = {th};
      return angular_density(w, t, mol, g)[0];
    };
    CHECK(theta_integral([&](double th) { return rho(th) * std::sin(th); }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(theta_integral([&](double th) { return rho(th) * std::cos(th) * std::sin(th); }) ==
          doctest::Approx(orientation_at(w, t, mol)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("phase wrapping") {
  CHECK(wrap_phase(-0.5) == doctest::Approx(2 * std::numbers::pi - 0.5));
  CHECK(wrap_phase(7.0) == doctest::Approx(7.0 - 2 * std::numbers::pi));
  CHECK(wrap_phase(2 * std::numbers::pi) == doctest::Approx(0.0));
}

TEST_CASE("extremum search") {
  const double period = 8.0;
  auto f = [&](double t) {
    const double x = 2 * std::numbers::pi * t / period;
    return std::cos(x) + 0.3 * std::sin(2 * x);
  };
  const auto r = find_oqr(f, 1.0, period);
  // brute force on a very fine grid as the reference
  double hi = -10, lo = 10;
  for (int k = 0; k <= 2'000'000; ++k) {
    const double v = f(1.0 + period * k / 2'000'000.0);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  CHECK(r.cos_max == doctest::Approx(hi).epsilon(1e-10));
  CHECK(r.cos_min == doctest::Approx(lo).epsilon(1e-10));
  CHECK(r.amplitude == doctest::Approx(hi - lo).epsilon(1e-10));
  CHECK(f(r.t_max) == doctest::Approx(r.cos_max));
}

TEST_CASE("populations and phases") {
  const auto mol = molecule_preset("HCN");
  std::mt19937 rng(4);
  const auto w = random_state(rng, 0, 5, 3.0);
  const auto r = populations_and_phases(w, 3.0, mol);
  double total = 0.0;
  for (double p : r.populations) total += p;
  CHECK(total == doctest::Approx(1.0));
  REQUIRE(r.phases.size() == r.populations.size() - 1);
  const auto psi = w.schroedinger_amplitudes(3.0, mol);
  CHECK(r.phases[1] == doctest::Approx(wrap_phase(std::arg(psi[2]) - std::arg(psi[1]))));
  const auto e = populations_and_phases(WavepacketCoeffs::eigenstate({1, 0}, BasisSpec(0, 3)), 1.0, mol);
  for (double ph : e.phases) CHECK(ph == 0.0);
}

TEST_CASE("thermal ensemble bookkeeping") {
  const auto mol = molecule_preset("HCN");
  EnsembleSettings s;
  s.j_max = 8;
  const auto p0 = PulseParams::from_thz(0.0, 0.0874);
  const auto quiet = build_thermal_ensemble(2.0, p0, mol, s);
  CHECK(quiet.total_weight() == doctest::Approx(1.0));
  const std::vector<double> times = {p0.duration(), 20.0, 30.0};
  for (double v : thermal_trace(quiet, times).values) CHECK(v == 0.0);

  s.weighting = EnsembleWeighting::Level;
  const auto level = build_thermal_ensemble(2.0, p0, mol, s);
  CHECK(level.total_weight() > 1.2);
}

TEST_CASE("thermal results do not depend on the thread count") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(7e6, 0.0874);
  EnsembleSettings s;
  s.sample_times = {2.0, 6.0};
  const auto one = build_thermal_ensemble(2.0, p, mol, s);
  s.threads = 3;
  const auto three = build_thermal_ensemble(2.0, p, mol, s);
  const std::vector<double> times = {2.0, 6.0, 15.0, 21.0};
  CHECK(thermal_trace(one, times).values == thermal_trace(three, times).values);
  CHECK(oqr_amplitude(one).amplitude == oqr_amplitude(three).amplitude);
}

TEST_CASE("ensemble series equals the weighted member sum") {
  const auto mol = molecule_preset("HCN");
  const auto p = PulseParams::from_thz(5e6, 0.0874);
  EnsembleSettings s;
  const auto e = build_thermal_ensemble(2.0, p, mol, s);
  const auto series = post_pulse_series(e);
  const double t = 17.3;
  double direct = 0.0;
  for (const auto& m : e.members) direct += m.weight * orientation_at(m.trajectory.at(t), t, mol);
  CHECK(series(t) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(thermal_trace(e, std::vector<double>{t}).values[0] == doctest::Approx(direct).epsilon(1e-12));
}

}
