#include "regdet/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "regdet/error.hpp"
#include "regdet/summation.hpp"

namespace regdet {

namespace {

constexpr unsigned kNodes = 20;
using Rule = boost::math::quadrature::gauss<double, kNodes>;

double composite(const std::function<double(double)>& f, double a, double b, int panels) {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double width = (b - a) / panels;
  const double half = 0.5 * width;
  CompensatedSum total;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    CompensatedSum panel;
    for (std::size_t i = 0; i < x.size(); ++i) {
      // kNodes is even, so every tabulated abscissa is strictly positive.
      panel += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
    total += half * panel.value();
  }
  return total.value();
}

}  // namespace

PanelQuadrature integrate_panels(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                 int initial_panels, int max_doublings) {
  PanelQuadrature result;
  result.nodes_per_panel = static_cast<int>(kNodes);
  if (a == b) return result;

  int panels = std::max(1, initial_panels);
  double coarse = composite(f, a, b, panels);
  for (int d = 1; d <= max_doublings; ++d) {
    panels *= 2;
    const double fine = composite(f, a, b, panels);
    const double diff = std::abs(fine - coarse);
    result = {fine, diff, panels, static_cast<int>(kNodes), d};
    if (diff <= std::max(abs_tol, 4e-16 * std::abs(fine))) return result;
    coarse = fine;
  }
  std::ostringstream msg;
  msg << "panel quadrature on [" << a << ", " << b << "] stalled at error " << result.error;
  throw ToleranceNotReached(msg.str(), result.error);
}

}  // namespace regdet
