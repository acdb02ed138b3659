#pragma once

#include <functional>

namespace regdet {

/// Outcome of a composite Gauss-Legendre integration with panel doubling.
struct PanelQuadrature {
  double value = 0.0;
  /// |I(2n) - I(n)| of the final doubling step. Gauss-Legendre panels converge
  /// far faster than linearly, so this bounds the error of `value`.
  double error = 0.0;
  int panels = 0;
  int nodes_per_panel = 0;
  int doublings = 0;
};

/// Integrates a smooth `f` over [a, b] with equal-width 20-point
/// Gauss-Legendre panels, doubling the panel count until two successive
/// estimates differ by at most `abs_tol`. Throws ToleranceNotReached after
/// `max_doublings` unsuccessful refinements.
PanelQuadrature integrate_panels(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                 int initial_panels = 8, int max_doublings = 12);

}  // namespace regdet
