#include "regdet/special.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "regdet/error.hpp"

namespace regdet {

double bessel_k0(double z) {
  if (!(z > 0.0)) {
    std::ostringstream msg;
    msg << "K0 argument must be positive, got " << z;
    throw InvalidArgument("z", msg.str());
  }
  if (z <= 2.0) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    double i0 = 1.0;
    double harmonic = 0.0;
    double regular = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= q / (static_cast<double>(k) * k);
      harmonic += 1.0 / k;
      i0 += term;
      regular += term * harmonic;
      if (term < 1e-18 * i0) break;
    }
    return -(std::log(0.5 * z) + kEulerGamma) * i0 + regular;
  }
  // exp(-z) * int_0^inf exp(-z (cosh u - 1)) du; the integrand is analytic in
  // the strip |Im u| < pi/2, so the trapezoid error is ~exp(-pi^2 / h).
  constexpr double h = 0.125;
  const double u_max = std::acosh(1.0 + 50.0 / z);
  double sum = 0.5;
  for (double u = h; u <= u_max; u += h) sum += std::exp(-z * (std::cosh(u) - 1.0));
  return std::exp(-z) * h * sum;
}

double expint_e1(double x) {
  if (!(x > 0.0)) throw InvalidArgument("x", "E1 argument must be positive");
  return -std::expint(-x);
}

double exp_minus_one_plus(double x) {
  if (std::abs(x) < 0.5) {
    // x^2/2 - x^3/6 + x^4/24 - ...
    double term = 0.5 * x * x;
    double sum = term;
    for (int k = 3; k < 30; ++k) {
      term *= -x / k;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(-x) + x;
}

double zeta_negative_odd(unsigned n) {
  // zeta(-m) = -B_{m+1}/(m+1) with m = 2n+1.
  const double b = boost::math::bernoulli_b2n<double>(static_cast<int>(n + 1));
  return -b / (2.0 * n + 2.0);
}

}  // namespace regdet
