#pragma once

#include <cstdint>
#include <string>

#include "regdet/spectra.hpp"

namespace regdet {

/// gamma_0(m0) = (ln(m0 / 4) + gamma) / 2pi. Vanishes at m0 = 4 e^{-gamma}.
double gamma0(double m0);

struct Det2Options {
  /// Cutoff on Laplace eigenvalues; negative picks one giving about 10^6 modes.
  double lambda_max = -1.0;
  /// Add the Weyl-density integral of the omitted factors.
  bool tail_correction = true;
};

struct Det2Result {
  double log_value = 0.0;  // ln det_2(1 + m1^2 C)
  double value = 1.0;
  double lambda_max = 0.0;
  std::int64_t modes = 0;  // eigenvalues (with multiplicity) summed exactly
  double tail_correction = 0.0;
  double tail_bound = 0.0;  // bound on |omitted factors - tail_correction|
};

/// Hilbert-Schmidt determinant det_2(1 + m1^2 C), C = (Delta + m0^2)^{-1}:
///
///   ln det_2 = sum mult [ln(1 + x) - x],   x = m1^2 / (m0^2 + lambda).
///
/// Eigenvalues up to the cutoff are summed exactly; the rest is replaced by
/// the integral of the same summand against the Weyl density A / 4pi, which
/// in closed form is -(A / 4pi) [(U + a) ln(1 + a / U) - a], U = m0^2 + cutoff,
/// a = m1^2. On the sphere the continuum boundary sits halfway to the next
/// level and the first Euler-Maclaurin correction is included.
Det2Result det2(const SurfaceModel& model, double m0_sq, double m1_sq, const Det2Options& options = {});

enum class FinitePartSource { HeatIntegral, ImageSum };

std::string to_string(FinitePartSource source);

struct FinitePart {
  double gamma0 = 0.0;
  double cf_mean = 0.0;
  FinitePartSource source = FinitePartSource::HeatIntegral;
  double error_bound = 0.0;
};

/// Mean finite part of the covariance on the diagonal through the heat
/// integral: cf_mean = I(m0^2) / A + gamma0(m0).
FinitePart cf_mean(const SurfaceModel& model, double m0_sq, double abs_tol = 1e-10);

/// C_f(x, x) on a flat torus from the periodized free Green's function
/// K_0(m0 r) / 2pi with the -ln(m0 d) / 2pi singularity removed:
///
///   (ln 2 - gamma) / 2pi + (1 / 2pi) sum_{(a,b) != 0} K_0(m0 |(a L1, b L2)|).
///
/// Images are kept while K_0 > 1e-18; the omitted lattice tail is bounded by
/// its area integral.
FinitePart torus_cf_image_sum(double length1, double length2, double m0);

struct PointwiseGreen {
  double value = 0.0;
  double error_bound = 0.0;
};

/// C(x, y) for x != y. Torus: image sum of K_0 / 2pi. Sphere: Legendre series
/// with the massless part summed in closed form,
///   sum_{k>=1} (2k+1) P_k(cos t) / (k (k+1)) = -2 ln sin(t/2) - 1,
/// leaving an absolutely convergent remainder. Sphere points must stay
/// 10^-2 R away from each other and from the antipode.
PointwiseGreen green_pointwise(const SurfaceModel& model, double m0, const SpherePoint& x, const SpherePoint& y);
PointwiseGreen green_pointwise(const SurfaceModel& model, double m0, const TorusPoint& x, const TorusPoint& y);

}  // namespace regdet
