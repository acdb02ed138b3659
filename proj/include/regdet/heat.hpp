#pragma once

#include <span>
#include <string>

#include "regdet/spectra.hpp"

namespace regdet {

/// Small-t coefficients of tr exp(-t(Delta + m^2)) = a_minus1 / t + a_0 + O(t).
struct HeatCoeffs {
  double a_minus1 = 0.0;  // A / 4pi
  double a_0 = 0.0;       // chi / 6 - m^2 A / 4pi
};

HeatCoeffs heat_coeffs(const SurfaceModel& model, double mass_sq);

/// Massless Laplace heat trace theta(t) = sum mult * exp(-t lambda), split
/// into pieces that can each be evaluated without cancellation at any t > 0.
///
/// Sphere: for t / R^2 <= 0.2 the small-t expansion
///   theta = e^{tau/4} (1/tau + sum_n c_n tau^n),
///   c_n = (-1)^n / n! * 2 (2^{-2n-1} - 1) zeta(-2n-1),
/// is used; its omitted part is O(exp(-pi^2 / tau)), far below rounding.
/// Larger t use direct summation over k.
/// Torus: each side factorizes into a one-dimensional theta series, summed
/// directly when 4 pi^2 t / L^2 >= pi and by Poisson (image) summation below.
class LaplaceHeatTrace {
 public:
  explicit LaplaceHeatTrace(const SurfaceModel& model);

  /// theta(t).
  double full(double t) const;
  /// theta(t) - 1, the nonzero modes only.
  double nonzero(double t) const;
  /// theta(t) - A / (4 pi t) - chi / 6, which is O(t) as t -> 0.
  double remainder(double t) const;

  const SurfaceModel& model() const noexcept { return model_; }

 private:
  struct Axis {
    double theta_minus_one;  // theta_1d - 1
    double image_minus_one;  // (sum_a exp(-a^2 L^2 / 4t)) - 1, valid when poisson
    double theta;
    bool poisson;
  };
  Axis axis(double length, double t) const;

  SurfaceModel model_;
};

enum class HeatTraceMethod { Auto, Direct, ImageSum };

struct HeatTraceResult {
  double value = 0.0;
  double error_bound = 0.0;  // certified truncation bound
  bool tolerance_met = true;
  std::string method;  // "direct" or "image-sum"
};

/// tr exp(-t(Delta + m^2)) by truncated spectral (or, on the torus, image)
/// summation with an explicit tail bound. `ImageSum` applies to tori only.
HeatTraceResult heat_trace(const SurfaceModel& model, double mass_sq, double t, double rel_tol = 1e-12,
                           HeatTraceMethod method = HeatTraceMethod::Auto);

/// Constant term of the massless heat trace from a least-squares fit of
/// theta(t) - A / 4pi t = c_0 + c_1 t + ... + c_degree t^degree, with theta
/// from direct spectral summation on `t_grid`.
double heat_constant_fit(const SurfaceModel& model, std::span<const double> t_grid, int degree = 3);

struct QuadratureProfile {
  double t_lo = 0.0;
  double t_split = 0.0;
  double t_hi = 0.0;
  int panels_small_t = 0;
  int panels_large_t = 0;
  int nodes_per_panel = 0;
  double small_t_remainder = 0.0;  // analytic contribution of [0, t_lo]
  double large_t_tail_bound = 0.0;  // bound on the omitted [t_hi, inf)
};

struct HeatIntegral {
  double value = 0.0;
  double abs_error_bound = 0.0;
  QuadratureProfile quadrature_profile;
};

/// Split points for `heat_integral`; zero selects the default.
struct HeatIntegralOptions {
  double t_lo = 0.0;
  double t_split = 0.0;
  double t_hi = 0.0;
};

/// The regularized heat integral
///
///   I(m^2) = FP_{s=0} sum mult (lambda + m^2)^{-1-s}
///          = int_0^inf e^{-m^2 t} (theta(t) - A / 4pi t) dt - (A / 4pi) ln m^2.
///
/// It is the constant term of tr C^{1+s} around s = 0 for C = (Delta + m^2)^{-1}.
/// The integrand decays like e^{-m^2 t}, so the second form converges; the
/// [t_split, inf) piece uses theta - 1 with the zero-mode part integrated in
/// closed form (an exponential integral).
HeatIntegral heat_integral(const SurfaceModel& model, double mass_sq, double abs_tol = 1e-10,
                           const HeatIntegralOptions& options = {});

}  // namespace regdet
