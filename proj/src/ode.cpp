#include "oqr/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oqr/errors.hpp"

namespace oqr {

namespace {

// Dormand & Prince (1980) coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b* (5th minus embedded 4th order weights).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

double DormandPrince45::initial_step(const OdeRhs& f, double t0, double t1,
                                     const ComplexVector& y, const ComplexVector& dy0) {
  // Hairer-Norsett-Wanner starting step heuristic.
  const auto scale = [&](const ComplexVector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double sc = options_.atol + options_.rtol * std::abs(y[i]);
      s = std::max(s, std::abs(v[i]) / sc);
    }
    return s;
  };
  const double d0 = scale(y);
  const double d1 = scale(dy0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t1 - t0);
  ComplexVector y1 = y + h0 * dy0;
  ComplexVector dy1(y.size());
  f(t0 + h0, y1, dy1);
  ++stats_.rhs_evaluations;
  const double d2 = scale(dy1 - dy0) / h0;
  const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                              : std::pow(0.01 / std::max(d1, d2), 0.2);
  return std::min({100.0 * h0, h1, t1 - t0});
}

void DormandPrince45::integrate(const OdeRhs& f, double t0, double t1, ComplexVector& y,
                                double& step, const StepObserver& observer) {
  if (!(t1 > t0)) return;
  const Eigen::Index n = y.size();
  ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);

  f(t0, y, k1);
  ++stats_.rhs_evaluations;
  double h = step > 0.0 ? std::min(step, t1 - t0) : initial_step(f, t0, t1, y, k1);
  const double h_min = options_.min_step_fraction * (t1 - t0);

  double t = t0;
  long steps = 0;
  while (t < t1) {
    if (++steps > options_.max_steps) {
      throw NonConvergence("adaptive stepper exceeded the step budget");
    }
    bool last = false;
    if (t + h >= t1 || (t1 - (t + h)) < 1e-12 * (t1 - t0)) {
      h = t1 - t;
      last = true;
    }

    tmp = y + h * (a21 * k1);
    f(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, tmp, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double t_new = last ? t1 : t + h;
    f(t_new, y_new, k7);
    stats_.rhs_evaluations += 6;

    tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc =
          options_.atol + options_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(tmp[i]) / sc);
    }
    if (!std::isfinite(err) || !y_new.allFinite()) err = 1e10;

    if (err <= 1.0) {
      ++stats_.accepted;
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
      if (observer) observer(t, y);
      const double factor =
          err == 0.0 ? kMaxFactor
                     : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      const double proposed = h * factor;
      if (!last || step <= 0.0) step = proposed;
      h = proposed;
      if (last) break;
    } else {
      ++stats_.rejected;
      h *= std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      if (h < h_min) {
        throw NonConvergence("step size underflow at t = " + std::to_string(t) + " ps");
      }
    }
  }
}

}  // namespace oqr
