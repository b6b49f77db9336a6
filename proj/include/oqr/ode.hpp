#pragma once

#include <Eigen/Dense>
#include <functional>

namespace oqr {

using ComplexVector = Eigen::VectorXcd;

/// dy/dt = f(t, y), written into dy (pre-sized to y.size()).
using OdeRhs = std::function<void(double t, const ComplexVector& y, ComplexVector& dy)>;
/// Called after every accepted step.
using StepObserver = std::function<void(double t, const ComplexVector& y)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// Steps below min_step_fraction * |t1 - t0| raise NonConvergence.
  double min_step_fraction = 1e-14;
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

/// Embedded Dormand-Prince 5(4) with local extrapolation and FSAL.
///
/// The local error estimate is controlled componentwise in the max norm:
/// |err_i| <= atol + rtol * max(|y_i|, |y_new_i|). `step` carries the step
/// size across calls so that piecewise integration over sample points does
/// not restart the controller; pass 0 to let the stepper choose.
class DormandPrince45 {
 public:
  explicit DormandPrince45(OdeOptions options = {}) : options_(options) {}

  /// Integrates y from t0 to t1 (t1 > t0). Throws NonConvergence.
  void integrate(const OdeRhs& f, double t0, double t1, ComplexVector& y, double& step,
                 const StepObserver& observer = {});

  const OdeStats& stats() const { return stats_; }
  const OdeOptions& options() const { return options_; }

 private:
  double initial_step(const OdeRhs& f, double t0, double t1, const ComplexVector& y,
                      const ComplexVector& dy0);

  OdeOptions options_;
  OdeStats stats_;
};

}  // namespace oqr
