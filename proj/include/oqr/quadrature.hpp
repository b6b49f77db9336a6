#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oqr {

/// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Composite rule with `panels` equal panels on [a, b].
  template <class F>
  auto integrate(F&& f, double a, double b, int panels) const {
    using R = decltype(f(a));
    R total{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      R panel{};
      for (std::size_t k = 0; k < nodes_.size(); ++k) {
        panel += weights_[k] * f(mid + 0.5 * h * nodes_[k]);
      }
      total += 0.5 * h * panel;
    }
    return total;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared 16-point rule.
const GaussLegendre& default_gauss_rule();

/// Panel count for an integrand over [a, b] whose fastest oscillation is
/// max_omega (rad per unit time): at least 32 nodes per cycle.
int oscillatory_panel_count(double a, double b, double max_omega, int nodes_per_panel);

/// Composite Gauss-Legendre sized for an oscillatory integrand.
template <class F>
auto integrate_oscillatory(F&& f, double a, double b, double max_omega) {
  const auto& rule = default_gauss_rule();
  const int panels = oscillatory_panel_count(a, b, max_omega, rule.size());
  return rule.integrate(std::forward<F>(f), a, b, panels);
}

}  // namespace oqr
