#include "regdet/green.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "regdet/error.hpp"
#include "regdet/heat.hpp"
#include "regdet/special.hpp"
#include "regdet/summation.hpp"

namespace regdet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kDefaultModes = 1e6;
// K_0(40) ~ 8e-19.
constexpr double kImageCutoff = 40.0;

/// ln(1 + x) - x.
double log_factor(double x) { return std::log1p(x) - x; }

/// d/dlambda of log_factor(a / (m0^2 + lambda)).
double log_factor_slope(double a, double shifted) {
  const double x = a / shifted;
  return x * x / ((1.0 + x) * shifted);
}

/// int_U^inf [ln(1 + a/u) - a/u] du.
double weyl_tail(double a, double u) { return a - (u + a) * std::log1p(a / u); }

struct Partial {
  CompensatedSum sum;
  std::int64_t modes = 0;
};

Det2Result sphere_det2(const SurfaceModel& m, double m0_sq, double m1_sq, double lambda_max, bool tail) {
  const double r2 = m.radius * m.radius;
  // Largest k with k (k + 1) <= lambda_max R^2.
  auto k_max = static_cast<std::int64_t>(std::floor(0.5 * (std::sqrt(1.0 + 4.0 * lambda_max * r2) - 1.0)));
  while (static_cast<double>((k_max + 1) * (k_max + 2)) <= lambda_max * r2) ++k_max;
  while (k_max >= 0 && static_cast<double>(k_max * (k_max + 1)) > lambda_max * r2) --k_max;

  Det2Result r;
  r.lambda_max = lambda_max;
  const auto levels = static_cast<std::size_t>(k_max + 1);
  const CompensatedSum head = chunked_sum(levels, 4096, [&](std::size_t k) {
    const double kk = static_cast<double>(k);
    return (2.0 * kk + 1.0) * log_factor(m1_sq / (m0_sq + kk * (kk + 1.0) / r2));
  });
  r.modes = (k_max + 1) * (k_max + 1);
  double value = head.value();
  double bound = 4.0 * kEps * std::abs(value) * std::sqrt(static_cast<double>(levels));
  if (tail && m1_sq > 0.0) {
    // Levels sit at nu = k + 1/2 with weight 2 nu and lambda R^2 = nu^2 - 1/4;
    // the omitted levels are midpoints of [K+1, inf).
    const double nu_b = static_cast<double>(k_max) + 1.0;
    const double lambda_b = (nu_b * nu_b - 0.25) / r2;
    const double u = m0_sq + lambda_b;
    const double g1 = 2.0 * log_factor(m1_sq / u) + 4.0 * nu_b * nu_b / r2 * log_factor_slope(m1_sq, u);
    r.tail_correction = r2 * weyl_tail(m1_sq, u) + g1 / 24.0;
    // The next Euler-Maclaurin term is O(g'''), far below g' / 24.
    bound += std::abs(g1) / 24.0;
    value += r.tail_correction;
  }
  r.log_value = value;
  r.value = std::exp(value);
  r.tail_bound = bound;
  return r;
}

Det2Result torus_det2(const SurfaceModel& m, double m0_sq, double m1_sq, double lambda_max, bool tail) {
  const double b = 4.0 * kPi * kPi / (m.length1 * m.length1);
  const double c = 4.0 * kPi * kPi / (m.length2 * m.length2);
  const auto p_max = static_cast<std::int64_t>(std::floor(std::sqrt(lambda_max / b)));

  Det2Result r;
  r.lambda_max = lambda_max;
  const auto rows = static_cast<std::size_t>(2 * p_max + 1);
  const Partial total = chunked_reduce<Partial>(
      rows, 64,
      [&](std::size_t begin, std::size_t end) {
        Partial part;
        for (std::size_t i = begin; i < end; ++i) {
          const double p = static_cast<double>(static_cast<std::int64_t>(i) - p_max);
          const double row = b * p * p;
          if (row > lambda_max) continue;
          auto q_max = static_cast<std::int64_t>(std::floor(std::sqrt((lambda_max - row) / c)));
          while (q_max >= 0 && row + c * static_cast<double>(q_max * q_max) > lambda_max) --q_max;
          part.sum += log_factor(m1_sq / (m0_sq + row));
          for (std::int64_t q = 1; q <= q_max; ++q) {
            const double qq = static_cast<double>(q);
            part.sum += 2.0 * log_factor(m1_sq / (m0_sq + row + c * qq * qq));
          }
          part.modes += 2 * q_max + 1;
        }
        return part;
      },
      [](Partial& into, const Partial& part) {
        into.sum.merge(part.sum);
        into.modes += part.modes;
      },
      Partial{});
  r.modes = total.modes;
  double value = total.sum.value();
  double bound = 4.0 * kEps * std::abs(value) * std::sqrt(static_cast<double>(rows));
  if (tail && m1_sq > 0.0) {
    const double u = m0_sq + lambda_max;
    r.tail_correction = m.weyl_density() * weyl_tail(m1_sq, u);
    // Lattice-count discrepancy |N(l) - A l / 4pi| is at most the number of
    // cells meeting the ellipse boundary.
    const double discrepancy = 4.0 * (std::sqrt(lambda_max / b) + std::sqrt(lambda_max / c) + 2.0);
    bound += 3.0 * discrepancy * m1_sq * m1_sq / (2.0 * u * u);
    value += r.tail_correction;
  }
  r.log_value = value;
  r.value = std::exp(value);
  r.tail_bound = bound;
  return r;
}

/// (1 / 2pi) sum over lattice translates n of K_0(m0 |delta + n|), skipping
/// the origin when `skip_origin`. Returns {sum, bound on omitted tail}.
std::pair<double, double> image_sum(double l1, double l2, double m0, double dx, double dy, bool skip_origin) {
  const double radius = kImageCutoff / m0;
  const auto a_max = static_cast<std::int64_t>(std::ceil(radius / l1)) + 1;
  const auto b_max = static_cast<std::int64_t>(std::ceil(radius / l2)) + 1;
  const auto rows = static_cast<std::size_t>(2 * a_max + 1);
  const CompensatedSum sum = chunked_reduce<CompensatedSum>(
      rows, 32,
      [&](std::size_t begin, std::size_t end) {
        CompensatedSum acc;
        for (std::size_t i = begin; i < end; ++i) {
          const auto a = static_cast<std::int64_t>(i) - a_max;
          for (std::int64_t bb = -b_max; bb <= b_max; ++bb) {
            if (skip_origin && a == 0 && bb == 0) continue;
            const double r = std::hypot(dx + static_cast<double>(a) * l1, dy + static_cast<double>(bb) * l2);
            if (r > radius) continue;
            acc += bessel_k0(m0 * r);
          }
        }
        return acc;
      },
      [](CompensatedSum& into, const CompensatedSum& part) { into.merge(part); }, CompensatedSum{});
  // Omitted images lie beyond radius - cell diagonal; compare with the area integral.
  const double inner = std::max(radius - std::hypot(l1, l2), 0.5 * radius);
  const double tail = inner / m0 * boost::math::cyl_bessel_k(1, m0 * inner) / (l1 * l2);
  return {sum.value() / (2.0 * kPi), tail + 4.0 * kEps * std::abs(sum.value())};
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive (got " << value << ")";
    throw InvalidArgument(name, msg.str());
  }
}

}  // namespace

double gamma0(double m0) {
  require_positive(m0, "m0");
  return (std::log(m0 / 4.0) + kEulerGamma) / (2.0 * kPi);
}

Det2Result det2(const SurfaceModel& model, double m0_sq, double m1_sq, const Det2Options& options) {
  require_positive(m0_sq, "m0");
  if (!(m1_sq >= 0.0) || !std::isfinite(m1_sq)) throw InvalidArgument("m1", "m1^2 must be nonnegative");
  double lambda_max = options.lambda_max;
  if (lambda_max < 0.0) lambda_max = kDefaultModes / model.weyl_density();
  if (options.tail_correction && m1_sq > 0.0 && lambda_max < 10.0 * (m0_sq + m1_sq)) {
    throw InvalidArgument("lambda_max", "cutoff too small for the Weyl tail correction; need lambda_max >= 10 (m0^2 + m1^2)");
  }
  return model.kind == SurfaceKind::Sphere ? sphere_det2(model, m0_sq, m1_sq, lambda_max, options.tail_correction)
                                           : torus_det2(model, m0_sq, m1_sq, lambda_max, options.tail_correction);
}

std::string to_string(FinitePartSource source) {
  return source == FinitePartSource::HeatIntegral ? "heat-integral" : "image-sum";
}

FinitePart cf_mean(const SurfaceModel& model, double m0_sq, double abs_tol) {
  require_positive(m0_sq, "m0");
  const HeatIntegral hi = heat_integral(model, m0_sq, abs_tol);
  FinitePart fp;
  fp.gamma0 = gamma0(std::sqrt(m0_sq));
  fp.cf_mean = hi.value / model.area + fp.gamma0;
  fp.source = FinitePartSource::HeatIntegral;
  fp.error_bound = hi.abs_error_bound / model.area;
  return fp;
}

FinitePart torus_cf_image_sum(double length1, double length2, double m0) {
  require_positive(length1, "L1");
  require_positive(length2, "L2");
  require_positive(m0, "m0");
  const auto [images, tail] = image_sum(length1, length2, m0, 0.0, 0.0, true);
  FinitePart fp;
  fp.gamma0 = gamma0(m0);
  fp.cf_mean = (std::log(2.0) - kEulerGamma) / (2.0 * kPi) + images;
  fp.source = FinitePartSource::ImageSum;
  fp.error_bound = tail;
  return fp;
}

PointwiseGreen green_pointwise(const SurfaceModel& model, double m0, const SpherePoint& x, const SpherePoint& y) {
  require_positive(m0, "m0");
  const double d = geodesic_distance(model, x, y);
  const double r = model.radius;
  if (d < 1e-2 * r || kPi * r - d < 1e-2 * r) {
    throw InvalidArgument("y", "points too close to each other or to the antipode for the Legendre series");
  }
  const double theta = d / r;
  const double z = std::cos(theta);
  const double mu = m0 * m0 * r * r;
  constexpr int kTerms = 20000;

  // Remainder sum_{k>=1} (2k+1) P_k / (k (k+1) (k (k+1) + mu)).
  CompensatedSum rem;
  double p_prev = 1.0;
  double p = z;
  for (int k = 1; k <= kTerms; ++k) {
    const double kk = static_cast<double>(k);
    const double ev = kk * (kk + 1.0);
    rem += (2.0 * kk + 1.0) * p / (ev * (ev + mu));
    const double p_next = ((2.0 * kk + 1.0) * z * p - kk * p_prev) / (kk + 1.0);
    p_prev = p;
    p = p_next;
  }
  const double massless = -2.0 * std::log(std::sin(0.5 * theta)) - 1.0;
  PointwiseGreen out;
  out.value = (1.0 / mu + massless - mu * rem.value()) / (4.0 * kPi);
  // |P_k| <= sqrt(2 / (pi k sin)); terms beyond K are below 2 mu k^{-3} |P_k|.
  const double envelope = std::sqrt(2.0 / (kPi * std::sin(theta)));
  out.error_bound = (2.0 * mu * envelope * std::pow(kTerms, -2.5) / 2.5 + 1e-15 * kTerms) / (4.0 * kPi);
  return out;
}

PointwiseGreen green_pointwise(const SurfaceModel& model, double m0, const TorusPoint& x, const TorusPoint& y) {
  require_positive(m0, "m0");
  const double d = geodesic_distance(model, x, y);
  if (!(d > 0.0)) throw InvalidArgument("y", "points coincide");
  const auto [value, tail] = image_sum(model.length1, model.length2, m0, y[0] - x[0], y[1] - x[1], false);
  return {value, tail};
}

}  // namespace regdet
