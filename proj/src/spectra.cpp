#include "regdet/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "regdet/error.hpp"
#include "regdet/special.hpp"

namespace regdet {

namespace {

__extension__ using Wide = unsigned __int128;

void require_positive(double value, const char* name, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << " must be positive (" << name << " = " << value << ")";
    throw InvalidArgument(name, msg.str());
  }
}

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double parse_number(std::string_view text, const char* name) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidArgument(name, "cannot parse " + std::string(name) + " value '" + std::string(text) + "'");
  }
  return value;
}

/// Best rational a/b ~= x with b <= max_den, if one matches to ~1e-14.
std::optional<std::pair<std::uint64_t, std::uint64_t>> rational_ratio(double x, std::uint64_t max_den) {
  // Continued-fraction convergents.
  std::uint64_t h_prev = 1, h = 0, k_prev = 0, k = 1;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(rem);
    if (a_real > 1e12) break;
    const auto a = static_cast<std::uint64_t>(a_real);
    const std::uint64_t h_next = a * h_prev + h;
    const std::uint64_t k_next = a * k_prev + k;
    if (k_next > max_den) break;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;
    const double approx = static_cast<double>(h_prev) / static_cast<double>(k_prev);
    if (std::abs(approx - x) <= 1e-14 * x) return std::make_pair(h_prev, k_prev);
    const double frac = rem - a_real;
    if (frac <= 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

std::vector<SpectralLine> sphere_spectrum(const SurfaceModel& m, double lambda_max) {
  std::vector<SpectralLine> lines;
  const double inv_r2 = 1.0 / (m.radius * m.radius);
  for (std::int64_t k = 0;; ++k) {
    const double lambda = static_cast<double>(k * (k + 1)) * inv_r2;
    if (lambda > lambda_max) break;
    lines.push_back({lambda, 2 * k + 1});
  }
  return lines;
}

std::vector<SpectralLine> torus_spectrum(const SurfaceModel& m, double lambda_max) {
  const double c1 = 4.0 * kPi * kPi / (m.length1 * m.length1);
  const double c2 = 4.0 * kPi * kPi / (m.length2 * m.length2);
  const auto p_max = static_cast<std::int64_t>(std::floor(std::sqrt(lambda_max / c1)));
  const auto q_max = static_cast<std::int64_t>(std::floor(std::sqrt(lambda_max / c2)));
  auto eigen = [&](std::int64_t p, std::int64_t q) {
    return c1 * static_cast<double>(p * p) + c2 * static_cast<double>(q * q);
  };

  std::vector<SpectralLine> lines;
  const double l1 = m.length1;
  const double l2 = m.length2;
  if (auto ratio = rational_ratio((l1 * l1) / (l2 * l2), 1'000'000)) {
    // Only the squared side ratio matters: L1^2/L2^2 = a/b gives
    // lambda = (4 pi^2 / (L1^2 b)) (p^2 b + q^2 a).
    const Wide a = Wide(ratio->first);
    const Wide b = Wide(ratio->second);
    std::map<Wide, std::int64_t> classes;
    for (std::int64_t p = -p_max; p <= p_max; ++p) {
      for (std::int64_t q = -q_max; q <= q_max; ++q) {
        if (eigen(p, q) > lambda_max * (1.0 + 1e-15)) continue;
        const Wide key = Wide(p * p) * b + Wide(q * q) * a;
        ++classes[key];
      }
    }
    const double unit = 4.0 * kPi * kPi / (l1 * l1 * static_cast<double>(b));
    for (const auto& [key, count] : classes) {
      const double lambda = unit * static_cast<double>(key);
      if (lambda <= lambda_max) lines.push_back({lambda, count});
    }
  } else {
    // Incommensurable sides: only sign flips of (p, q) coincide.
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> classes;
    for (std::int64_t p = -p_max; p <= p_max; ++p) {
      for (std::int64_t q = -q_max; q <= q_max; ++q) {
        if (eigen(p, q) <= lambda_max) ++classes[{p * p, q * q}];
      }
    }
    for (const auto& [key, count] : classes) {
      lines.push_back({c1 * static_cast<double>(key.first) + c2 * static_cast<double>(key.second), count});
    }
    std::sort(lines.begin(), lines.end(),
              [](const SpectralLine& x, const SpectralLine& y) { return x.eigenvalue < y.eigenvalue; });
  }
  return lines;
}

}  // namespace

double SurfaceModel::weyl_density() const noexcept { return area / (4.0 * kPi); }

double SurfaceModel::length_scale_sq() const noexcept {
  return kind == SurfaceKind::Sphere ? radius * radius : length1 * length2;
}

SurfaceModel make_sphere(double radius) {
  require_positive(radius, "R", "radius");
  SurfaceModel m;
  m.kind = SurfaceKind::Sphere;
  m.radius = radius;
  m.area = 4.0 * kPi * radius * radius;
  m.euler_characteristic = 2;
  return m;
}

SurfaceModel make_torus(double length1, double length2) {
  require_positive(length1, "L1", "torus side length");
  require_positive(length2, "L2", "torus side length");
  SurfaceModel m;
  m.kind = SurfaceKind::RectTorus;
  m.length1 = length1;
  m.length2 = length2;
  m.area = length1 * length2;
  m.euler_characteristic = 0;
  return m;
}

SurfaceModel parse_surface(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("surface", "surface spec must look like sphere:R=<r> or torus:L1=<a>,L2=<b>");
  }
  const std::string_view kind = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);

  std::map<std::string, std::string_view, std::less<>> params;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InvalidArgument("surface", "malformed surface parameter '" + std::string(item) + "'");
    }
    params[std::string(item.substr(0, eq))] = item.substr(eq + 1);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }

  auto take = [&](const char* name) {
    auto it = params.find(name);
    if (it == params.end()) throw InvalidArgument(name, std::string("missing surface parameter ") + name);
    const double v = parse_number(it->second, name);
    params.erase(it);
    return v;
  };

  SurfaceModel model;
  if (kind == "sphere") {
    model = make_sphere(take("R"));
  } else if (kind == "torus") {
    const double l1 = take("L1");
    const double l2 = take("L2");
    model = make_torus(l1, l2);
  } else {
    throw InvalidArgument("surface", "unknown surface kind '" + std::string(kind) + "'");
  }
  if (!params.empty()) {
    throw InvalidArgument("surface", "unexpected surface parameter '" + params.begin()->first + "'");
  }
  return model;
}

std::string describe(const SurfaceModel& model) {
  if (model.kind == SurfaceKind::Sphere) return "sphere:R=" + format_number(model.radius);
  return "torus:L1=" + format_number(model.length1) + ",L2=" + format_number(model.length2);
}

std::vector<SpectralLine> spectrum(const SurfaceModel& model, double lambda_max) {
  if (!(lambda_max >= 0.0)) throw InvalidArgument("lambda_max", "lambda_max must be nonnegative");
  return model.kind == SurfaceKind::Sphere ? sphere_spectrum(model, lambda_max) : torus_spectrum(model, lambda_max);
}

double first_nonzero_eigenvalue(const SurfaceModel& model) {
  if (model.kind == SurfaceKind::Sphere) return 2.0 / (model.radius * model.radius);
  const double longest = std::max(model.length1, model.length2);
  return 4.0 * kPi * kPi / (longest * longest);
}

double geodesic_distance(const SurfaceModel& model, const SpherePoint& x, const SpherePoint& y) {
  if (model.kind != SurfaceKind::Sphere) throw InvalidArgument("x", "sphere coordinates given for a torus");
  auto check = [&](const SpherePoint& p, const char* name) {
    const double norm = std::hypot(p[0], p[1], p[2]);
    if (!(std::abs(norm - model.radius) <= 1e-9 * model.radius)) {
      throw InvalidArgument(name, std::string("point ") + name + " does not lie on the sphere");
    }
  };
  check(x, "x");
  check(y, "y");
  const SpherePoint cross{x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
  const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  return model.radius * std::atan2(std::hypot(cross[0], cross[1], cross[2]), dot);
}

double geodesic_distance(const SurfaceModel& model, const TorusPoint& x, const TorusPoint& y) {
  if (model.kind != SurfaceKind::RectTorus) throw InvalidArgument("x", "torus coordinates given for a sphere");
  auto check = [&](const TorusPoint& p, const char* name) {
    if (!(p[0] >= 0.0 && p[0] < model.length1 && p[1] >= 0.0 && p[1] < model.length2)) {
      throw InvalidArgument(name, std::string("point ") + name + " lies outside the fundamental domain");
    }
  };
  check(x, "x");
  check(y, "y");
  double best = std::numeric_limits<double>::infinity();
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      best = std::min(best, std::hypot(y[0] - x[0] + a * model.length1, y[1] - x[1] + b * model.length2));
    }
  }
  return best;
}

}  // namespace regdet
