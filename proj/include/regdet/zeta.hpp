#pragma once

#include <span>
#include <vector>

#include "regdet/spectra.hpp"

namespace regdet {

struct ZetaResult {
  double zeta0 = 0.0;
  double zeta_prime0 = 0.0;
  double det_zeta = 0.0;  // exp(-zeta_prime0)
  double log_det = 0.0;   // -zeta_prime0
  double err_bound = 0.0;  // certified bound on |error of zeta_prime0|
  int excluded_zero_modes = 0;
  double t_split = 0.0;
};

/// Zeta-regularized determinant of Delta + m^2 by the Mellin split at t*:
///
///   zeta'(0) = F(0) + G(0) - a_{-1} / t* + b_0 (gamma + ln t*),
///   F(0) = int_0^{t*} (theta~ - a_{-1}/t - b_0) dt / t,
///   G(0) = int_{t*}^inf theta~ dt / t,
///
/// with theta~ the heat trace with excluded zero modes removed and
/// b_0 = a_0 - (excluded modes). With `exclude_zero_mode` the constant mode
/// is dropped, which for m^2 = 0 gives the primed determinant det'.
/// `t_split <= 0` picks the model's length scale.
ZetaResult zeta_det(const SurfaceModel& model, double mass_sq, bool exclude_zero_mode, double tol = 1e-10,
                    double t_split = 0.0);

struct DirichletTrace {
  double value = 0.0;
  double err_bound = 0.0;
};

/// tr C^{1+s} = sum mult (lambda + m^2)^{-1-s} for s > 0, by direct spectral
/// summation. Sphere: sum over k with a midpoint Euler-Maclaurin tail.
/// Torus: rows of fixed p are resummed in q with the exact one-dimensional
/// integral (its Poisson corrections are below e^{-40} for the rows where it
/// is used), and the p-sum is closed with Euler-Maclaurin.
DirichletTrace dirichlet_trace(const SurfaceModel& model, double mass_sq, double s);

struct LaurentFit {
  double residue = 0.0;      // coefficient of 1/s
  double finite_part = 0.0;  // constant coefficient
  std::vector<double> coefficients;  // c_{-1}, c_0, c_1, ...
  std::vector<double> s_grid;
  std::vector<double> values;
  double fit_residual = 0.0;  // rms of fit minus data
};

/// Least-squares fit of c_{-1}/s + c_0 + c_1 s (+ c_2 s^2 ... when
/// `regular_terms` > 2) to dirichlet_trace over `s_grid`.
LaurentFit mainlemma_fit(const SurfaceModel& model, double mass_sq, std::span<const double> s_grid,
                         int regular_terms = 2);

/// The default grid {0.2, 0.1, 0.05, 0.025}.
std::vector<double> default_laurent_grid();

}  // namespace regdet
