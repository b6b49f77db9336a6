#include <doctest.h>

#include <stdexcept>

#include "oqr/config.hpp"
#include "oqr/errors.hpp"
#include "oqr/scan.hpp"

using namespace oqr;

TEST_SUITE("scan") {

TEST_CASE("grid layout and determinism across worker counts") {
  auto cfg = parse_config("", {"initial.mode=single", "scan.E0_count=4", "scan.freq_count=3"});
  const auto one = run_scan(cfg);
  cfg.threads = 3;
  const auto three = run_scan(cfg);
  REQUIRE(one.points.size() == 12);
  CHECK(one.failures() == 0);
  for (std::size_t k = 0; k < one.points.size(); ++k) {
    CHECK(one.points[k].report->amplitude == three.points[k].report->amplitude);
    CHECK(one.points[k].report->t_max == three.points[k].report->t_max);
  }
  CHECK(one.at(2, 1).e0 == one.e0_axis[2]);
  CHECK(one.at(2, 1).freq_thz == one.freq_axis[1]);
  CHECK(one.at(2, 1).delta1_thz == doctest::Approx(one.freq_axis[1] - cfg.resonant_freq_thz()));
  for (const auto& p : one.points) {
    CHECK(p.report->amplitude >= 0.0);
    CHECK(p.report->amplitude <= 2.0);
  }
}

TEST_CASE("failed points are marked, the rest survive") {
  const auto cfg = parse_config("", {"initial.mode=single", "basis.J_max=3", "scan.E0_min_V_per_m=1e5",
                                     "scan.E0_max_V_per_m=3e7", "scan.E0_count=2", "scan.freq_count=1"});
  const auto r = run_scan(cfg);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].ok());
  CHECK_FALSE(r.points[1].ok());
  CHECK_FALSE(r.points[1].report.has_value());
  CHECK(r.failures() == 1);
}

TEST_CASE("Magnus model scan") {
  const auto cfg = parse_config("", {"initial.mode=single", "scan.model=magnus", "scan.orders=1,2,3",
                                     "scan.E0_count=2", "scan.freq_count=2"});
  const auto r = run_scan(cfg);
  CHECK(r.failures() == 0);
  CHECK(r.points[0].phases->populations.size() == 3);
}

TEST_CASE("simulation output shapes") {
  const auto cfg = parse_config("", {"simulate.trace_samples=300", "simulate.density_times=5",
                                     "simulate.theta_points=19", "basis.J_max=8"});
  const auto r = run_simulate(cfg);
  CHECK(r.trace.times.size() == 300);
  CHECK(r.trace.times.back() == doctest::Approx(r.pulse_end + 2 * r.revival));
  CHECK(r.density.size() == 5);
  CHECK(r.density[0].size() == 19);
  CHECK(r.final_phases.size() == r.ensemble->members.size());
  CHECK(r.report.amplitude > 0.5);
  CHECK_THROWS_AS(run_simulate(parse_config("", {"scan.model=magnus", "initial.mode=single"})), ConfigError);
}

TEST_CASE("Magnus orders output") {
  const auto cfg = parse_config("", {"initial.mode=single", "scan.E0_count=3", "magnus.time_samples=11"});
  const auto r = run_magnus_orders(cfg);
  CHECK(r.final_vs_e0.size() == 12);
  CHECK(r.time_resolved.size() == 44);
  CHECK(r.time_resolved[3].order_tag == "1+2+3");
  for (const auto& row : r.time_resolved) {
    CHECK(row.populations[0] + row.populations[1] + row.populations[2] == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(run_magnus_orders(parse_config("", {"initial.mode=single", "initial.J=3"})), ConfigError);
  CHECK(order_tag({1, 3}) == "1+3");
}

TEST_CASE("spectrum") {
  const auto r = run_spectrum(parse_config("", {"spectrum.count=11"}));
  CHECK(r.freq_thz.size() == 11);
  CHECK(r.magnitude[0] < 1e-12 * 7e6 * 11.5);
  CHECK(*std::max_element(r.magnitude.begin(), r.magnitude.end()) > 0.0);
}

}
