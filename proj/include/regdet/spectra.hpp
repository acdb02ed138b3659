#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace regdet {

enum class SurfaceKind { Sphere, RectTorus };

/// A closed model surface with closed-form Laplace spectrum: the round sphere
/// of radius R or the flat rectangular torus R^2 / (L1 Z x L2 Z).
struct SurfaceModel {
  SurfaceKind kind = SurfaceKind::Sphere;
  double radius = 0.0;  // sphere only
  double length1 = 0.0;  // torus only
  double length2 = 0.0;  // torus only
  double area = 0.0;
  int euler_characteristic = 0;

  /// Leading heat coefficient and Weyl density A / 4pi.
  double weyl_density() const noexcept;
  /// Length scale squared (R^2 or L1 L2) used to place default split points.
  double length_scale_sq() const noexcept;

  bool operator==(const SurfaceModel&) const = default;
};

SurfaceModel make_sphere(double radius);
SurfaceModel make_torus(double length1, double length2);

/// Parses `sphere:R=<float>` or `torus:L1=<float>,L2=<float>`.
SurfaceModel parse_surface(std::string_view spec);

/// Canonical specification string; `parse_surface(describe(m)) == m`.
std::string describe(const SurfaceModel& model);

/// One distinct Laplace eigenvalue with its multiplicity.
struct SpectralLine {
  double eigenvalue = 0.0;
  std::int64_t multiplicity = 0;
};

/// All eigenvalues <= lambda_max in increasing order with exact
/// multiplicities. Torus lattice points are grouped in integer arithmetic
/// whenever L1/L2 is a rational with denominator <= 10^6, so coincident
/// eigenvalues never split because of rounding.
std::vector<SpectralLine> spectrum(const SurfaceModel& model, double lambda_max);

/// Smallest nonzero eigenvalue.
double first_nonzero_eigenvalue(const SurfaceModel& model);

using SpherePoint = std::array<double, 3>;
using TorusPoint = std::array<double, 2>;

/// Great-circle distance. Points must lie on the sphere (|x| = R).
double geodesic_distance(const SurfaceModel& model, const SpherePoint& x, const SpherePoint& y);
/// Flat distance on the torus. Points must lie in [0, L1) x [0, L2).
double geodesic_distance(const SurfaceModel& model, const TorusPoint& x, const TorusPoint& y);

}  // namespace regdet
