#pragma once

#include <numbers>

namespace regdet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
/// Riemann zeta'(-1).
inline constexpr double kZetaPrimeMinusOne = -0.16542114370045092921;

/// Modified Bessel function K_0(z) for z > 0, relative accuracy ~1e-15.
/// Power series below z = 2, double-exponential trapezoid on
/// K_0(z) = int_0^inf exp(-z cosh u) du above.
double bessel_k0(double z);

/// Exponential integral E_1(x) for x > 0.
double expint_e1(double x);

/// exp(-x) - 1 + x without cancellation for small |x|.
double exp_minus_one_plus(double x);

/// Riemann zeta at a negative odd integer, zeta(-(2n+1)), from Bernoulli numbers.
double zeta_negative_odd(unsigned n);

}  // namespace regdet
