#include "oqr/quadrature.hpp"

#include <numbers>
#include <stdexcept>
#include <utility>

namespace oqr {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre::GaussLegendre(int n) : nodes_(n), weights_(n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

const GaussLegendre& default_gauss_rule() {
  static const GaussLegendre rule(16);
  return rule;
}

int oscillatory_panel_count(double a, double b, double max_omega, int nodes_per_panel) {
  const double length = std::abs(b - a);
  const double cycles = length * std::abs(max_omega) / (2.0 * std::numbers::pi);
  const int needed = static_cast<int>(std::ceil(cycles * 32.0 / nodes_per_panel));
  return std::max(needed, 8);
}

}  // namespace oqr
