#include "regdet/heat.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "regdet/error.hpp"
#include "regdet/quadrature.hpp"
#include "regdet/special.hpp"
#include "regdet/summation.hpp"

namespace regdet {

namespace {

constexpr double kSeriesSwitch = 0.2;  // tau = t / R^2 below which the sphere uses its expansion
constexpr std::size_t kSeriesTerms = 30;

/// Coefficients e_n of theta_S2(tau) = 1/tau + sum_n e_n tau^n on the unit sphere.
const std::array<double, kSeriesTerms>& sphere_coefficients() {
  static const std::array<double, kSeriesTerms> coeffs = [] {
    std::array<double, kSeriesTerms> c{};
    double factorial = 1.0;
    for (std::size_t j = 0; j < kSeriesTerms; ++j) {
      if (j > 0) factorial *= static_cast<double>(j);
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      c[j] = sign / factorial * 2.0 * (std::ldexp(1.0, -2 * static_cast<int>(j) - 1) - 1.0) *
             zeta_negative_odd(static_cast<unsigned>(j));
    }
    // Multiply by e^{tau/4} = sum_i (1/4)^i / i!, and fold in (e^{tau/4} - 1)/tau.
    std::array<double, kSeriesTerms + 2> quarter{};
    quarter[0] = 1.0;
    for (std::size_t i = 1; i < quarter.size(); ++i) quarter[i] = quarter[i - 1] * 0.25 / static_cast<double>(i);
    std::array<double, kSeriesTerms> e{};
    for (std::size_t n = 0; n < kSeriesTerms; ++n) {
      CompensatedSum s(quarter[n + 1]);
      for (std::size_t j = 0; j <= n; ++j) s += c[j] * quarter[n - j];
      e[n] = s.value();
    }
    return e;
  }();
  return coeffs;
}

double sphere_series_tail(double tau) {
  // sum_{n>=1} e_n tau^n by Horner.
  const auto& e = sphere_coefficients();
  double acc = 0.0;
  for (std::size_t n = kSeriesTerms - 1; n >= 1; --n) acc = (acc + e[n]) * tau;
  return acc;
}

/// sum_{k >= k0} (2k+1) exp(-tau k (k+1)).
double sphere_direct(double tau, int k0) {
  CompensatedSum sum;
  for (long k = k0;; ++k) {
    const double kk = static_cast<double>(k);
    const double term = (2.0 * kk + 1.0) * std::exp(-tau * kk * (kk + 1.0));
    sum += term;
    const bool decreasing = (2.0 * kk + 1.0) * (2.0 * kk + 1.0) * tau > 2.0;
    if (decreasing && term <= 1e-18 * std::abs(sum.value())) break;
    if (decreasing && term == 0.0) break;
  }
  return sum.value();
}

/// sum_{n >= 1} exp(-rate n^2).
double gaussian_tail_sum(double rate) {
  CompensatedSum sum;
  for (long n = 1;; ++n) {
    const double term = std::exp(-rate * static_cast<double>(n) * static_cast<double>(n));
    sum += term;
    if (term <= 1e-18 * sum.value() || term == 0.0) break;
  }
  return sum.value();
}

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("t", "heat time t must be positive");
}

void require_mass_sq(double mass_sq, const char* name = "m2") {
  if (!(mass_sq >= 0.0) || !std::isfinite(mass_sq)) {
    throw InvalidArgument(name, std::string(name) + " must be nonnegative");
  }
}

}  // namespace

HeatCoeffs heat_coeffs(const SurfaceModel& model, double mass_sq) {
  require_mass_sq(mass_sq);
  const double w = model.weyl_density();
  return {w, model.euler_characteristic / 6.0 - mass_sq * w};
}

LaplaceHeatTrace::LaplaceHeatTrace(const SurfaceModel& model) : model_(model) {}

LaplaceHeatTrace::Axis LaplaceHeatTrace::axis(double length, double t) const {
  const double x = 4.0 * kPi * kPi * t / (length * length);
  Axis a{};
  if (x >= kPi) {
    a.theta_minus_one = 2.0 * gaussian_tail_sum(x);
    a.theta = 1.0 + a.theta_minus_one;
    a.image_minus_one = std::numeric_limits<double>::quiet_NaN();
    a.poisson = false;
  } else {
    a.image_minus_one = 2.0 * gaussian_tail_sum(length * length / (4.0 * t));
    a.theta = length / std::sqrt(4.0 * kPi * t) * (1.0 + a.image_minus_one);
    a.theta_minus_one = a.theta - 1.0;
    a.poisson = true;
  }
  return a;
}

double LaplaceHeatTrace::full(double t) const {
  if (model_.kind == SurfaceKind::Sphere) {
    const double tau = t / (model_.radius * model_.radius);
    if (tau <= kSeriesSwitch) return 1.0 / tau + sphere_coefficients()[0] + sphere_series_tail(tau);
    return sphere_direct(tau, 0);
  }
  return axis(model_.length1, t).theta * axis(model_.length2, t).theta;
}

double LaplaceHeatTrace::nonzero(double t) const {
  if (model_.kind == SurfaceKind::Sphere) {
    const double tau = t / (model_.radius * model_.radius);
    if (tau <= kSeriesSwitch) return full(t) - 1.0;
    return sphere_direct(tau, 1);
  }
  const Axis a = axis(model_.length1, t);
  const Axis b = axis(model_.length2, t);
  return a.theta_minus_one + b.theta_minus_one + a.theta_minus_one * b.theta_minus_one;
}

double LaplaceHeatTrace::remainder(double t) const {
  if (model_.kind == SurfaceKind::Sphere) {
    const double tau = t / (model_.radius * model_.radius);
    if (tau <= kSeriesSwitch) return sphere_series_tail(tau);
    return sphere_direct(tau, 0) - 1.0 / tau - 1.0 / 3.0;
  }
  const Axis a = axis(model_.length1, t);
  const Axis b = axis(model_.length2, t);
  const double leading = model_.area / (4.0 * kPi * t);
  if (a.poisson && b.poisson) {
    return leading * (a.image_minus_one + b.image_minus_one + a.image_minus_one * b.image_minus_one);
  }
  return a.theta * b.theta - leading;
}

HeatTraceResult heat_trace(const SurfaceModel& model, double mass_sq, double t, double rel_tol,
                           HeatTraceMethod method) {
  require_time(t);
  require_mass_sq(mass_sq);
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw InvalidArgument("rel_tol", "rel_tol must lie in (0, 1e-3]");

  HeatTraceResult result;
  const double damping = std::exp(-mass_sq * t);
  constexpr long kMaxTerms = 50'000'000;

  if (model.kind == SurfaceKind::Sphere) {
    if (method == HeatTraceMethod::ImageSum) {
      throw InvalidArgument("method", "image-sum evaluation is only available on the torus");
    }
    // Direct summation; once (2k+1)^2 tau > 2 the terms decrease and
    // sum_{k>K} <= int_K^inf (2x+1) e^{-tau x(x+1)} dx = e^{-tau K(K+1)} / tau.
    const double tau = t / (model.radius * model.radius);
    CompensatedSum sum;
    double bound = std::numeric_limits<double>::infinity();
    for (long k = 0; k < kMaxTerms; ++k) {
      const double kk = static_cast<double>(k);
      sum += (2.0 * kk + 1.0) * std::exp(-tau * kk * (kk + 1.0));
      if ((2.0 * kk + 1.0) * (2.0 * kk + 1.0) * tau > 2.0) {
        bound = std::exp(-tau * kk * (kk + 1.0)) / tau;
        if (bound <= 0.1 * rel_tol * sum.value()) break;
      }
    }
    result.method = "direct";
    result.value = damping * sum.value();
    result.error_bound = damping * bound;
  } else {
    const bool images = method == HeatTraceMethod::ImageSum ||
                        (method == HeatTraceMethod::Auto &&
                         t < 0.1 * std::min(model.length1, model.length2) * std::min(model.length1, model.length2));
    // One-dimensional factor sum_{n in Z} exp(-rate n^2) with the bound
    // sum_{|n|>N} <= 2 e^{-rate (N+1)^2} / (1 - e^{-rate (2N+3)}).
    auto factor = [&](double rate, double prefactor, double& value, double& bound) {
      CompensatedSum s(1.0);
      double b = std::numeric_limits<double>::infinity();
      for (long n = 1; n < kMaxTerms; ++n) {
        const double nn = static_cast<double>(n);
        s += 2.0 * std::exp(-rate * nn * nn);
        b = 2.0 * std::exp(-rate * (nn + 1.0) * (nn + 1.0)) / (-std::expm1(-rate * (2.0 * nn + 3.0)));
        if (b <= 0.01 * rel_tol * s.value()) break;
      }
      value = prefactor * s.value();
      bound = prefactor * b;
    };
    double v1 = 0, b1 = 0, v2 = 0, b2 = 0;
    if (images) {
      factor(model.length1 * model.length1 / (4.0 * t), model.length1 / std::sqrt(4.0 * kPi * t), v1, b1);
      factor(model.length2 * model.length2 / (4.0 * t), model.length2 / std::sqrt(4.0 * kPi * t), v2, b2);
      result.method = "image-sum";
    } else {
      factor(4.0 * kPi * kPi * t / (model.length1 * model.length1), 1.0, v1, b1);
      factor(4.0 * kPi * kPi * t / (model.length2 * model.length2), 1.0, v2, b2);
      result.method = "direct";
    }
    result.value = damping * v1 * v2;
    result.error_bound = damping * ((v1 + b1) * (v2 + b2) - v1 * v2);
  }
  result.tolerance_met = result.error_bound <= rel_tol * result.value;
  return result;
}

HeatIntegral heat_integral(const SurfaceModel& model, double mass_sq, double abs_tol,
                           const HeatIntegralOptions& options) {
  if (!(mass_sq > 0.0) || !std::isfinite(mass_sq)) {
    throw InvalidArgument("m2",
                          "heat integral requires m^2 > 0; the massless case goes through the zero-mode "
                          "excluded determinant (verify_massless)");
  }
  if (!(abs_tol > 0.0 && abs_tol <= 1e-4)) throw InvalidArgument("abs_tol", "abs_tol must lie in (0, 1e-4]");

  const LaplaceHeatTrace theta(model);
  const double w = model.weyl_density();
  const double c0 = model.euler_characteristic / 6.0;
  const double scale = model.length_scale_sq();
  const double gap = mass_sq + first_nonzero_eigenvalue(model);

  QuadratureProfile prof;
  prof.t_lo = options.t_lo > 0.0 ? options.t_lo : 1e-12 * scale;
  prof.t_split = options.t_split > 0.0 ? options.t_split : scale;
  prof.t_hi = options.t_hi > 0.0 ? options.t_hi : prof.t_split + 48.0 / gap;
  if (!(prof.t_lo < prof.t_split && prof.t_split < prof.t_hi)) {
    throw InvalidArgument("options", "heat integral split points must satisfy t_lo < t_split < t_hi");
  }

  // [t_lo, t_split]: e^{-m^2 t} (theta - A / 4pi t) dt, with u = ln t.
  auto small = [&](double u) {
    const double t = std::exp(u);
    return t * std::exp(-mass_sq * t) * (theta.remainder(t) + c0);
  };
  const auto q_small = integrate_panels(small, std::log(prof.t_lo), std::log(prof.t_split), 0.1 * abs_tol);

  // [t_split, t_hi]: e^{-m^2 t} (theta - 1) dt.
  auto large = [&](double u) {
    const double t = std::exp(u);
    return t * std::exp(-mass_sq * t) * theta.nonzero(t);
  };
  const auto q_large = integrate_panels(large, std::log(prof.t_split), std::log(prof.t_hi), 0.1 * abs_tol);

  // [0, t_lo]: the integrand is chi/6 + O(t) there.
  const double g_lo = std::exp(-mass_sq * prof.t_lo) * (theta.remainder(prof.t_lo) + c0);
  prof.small_t_remainder = g_lo * prof.t_lo;
  const double small_bound = 2.0 * std::abs(g_lo - c0) * prof.t_lo + std::abs(c0) * mass_sq * prof.t_lo * prof.t_lo;

  // [t_hi, inf): theta - 1 decays at least like e^{-lambda_1 t}.
  prof.large_t_tail_bound = std::exp(-mass_sq * prof.t_hi) * theta.nonzero(prof.t_hi) / gap;

  // Closed-form pieces: int_{t_split}^inf e^{-m^2 t} (1 - A / 4pi t) dt and the
  // -(A / 4pi) ln m^2 shift to the finite part.
  const double x = mass_sq * prof.t_split;
  const double closed = std::exp(-x) / mass_sq - w * expint_e1(x) - w * std::log(mass_sq);

  CompensatedSum total;
  total += q_small.value;
  total += prof.small_t_remainder;
  total += q_large.value;
  total += closed;

  prof.panels_small_t = q_small.panels;
  prof.panels_large_t = q_large.panels;
  prof.nodes_per_panel = q_small.nodes_per_panel;

  HeatIntegral result;
  result.value = total.value();
  result.abs_error_bound = q_small.error + q_large.error + small_bound + prof.large_t_tail_bound +
                           4.0 * std::numeric_limits<double>::epsilon() *
                               (std::abs(q_small.value) + std::abs(q_large.value) + std::abs(closed));
  result.quadrature_profile = prof;
  if (result.abs_error_bound > abs_tol) {
    std::ostringstream msg;
    msg << "heat integral error bound " << result.abs_error_bound << " exceeds tolerance " << abs_tol;
    throw ToleranceNotReached(msg.str(), result.abs_error_bound);
  }
  return result;
}

double heat_constant_fit(const SurfaceModel& model, std::span<const double> t_grid, int degree) {
  if (degree < 0 || t_grid.size() < static_cast<std::size_t>(degree) + 2) {
    throw InvalidArgument("t_grid", "constant-term fit needs more grid points than coefficients");
  }
  const auto n = static_cast<Eigen::Index>(t_grid.size());
  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = t_grid[static_cast<std::size_t>(i)];
    const double theta = heat_trace(model, 0.0, t, 1e-14, HeatTraceMethod::Direct).value;
    rhs(i) = theta - model.weyl_density() / t;
    double power = 1.0;
    for (int j = 0; j <= degree; ++j) {
      design(i, j) = power;
      power *= t;
    }
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  return coef(0);
}

}  // namespace regdet
