#include "regdet/anomaly.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "regdet/error.hpp"
#include "regdet/green.hpp"
#include "regdet/heat.hpp"
#include "regdet/special.hpp"
#include "regdet/zeta.hpp"

namespace regdet {

namespace {

constexpr double kZetaTol = 1e-10;

// Finer grid and an extra regular term for the finite part; the plain
// 4-point, 3-term fit leaves ~1% bias on tori.
const std::vector<double> kSlopeGrid{0.2, 0.15, 0.1, 0.075, 0.05, 0.035, 0.025};
constexpr int kSlopeRegularTerms = 4;

std::string sci(double x) {
  std::ostringstream out;
  out << std::setprecision(6) << std::scientific << x;
  return out.str();
}

}  // namespace

double AnomalyReport::factor(const std::string& name) const {
  for (const auto& [key, value] : rhs_factors) {
    if (key == name) return value;
  }
  throw InvalidArgument("name", "no right-hand factor named " + name);
}

AnomalyReport verify_thm2(const SurfaceModel& model, double m0_sq, double m1_sq, double tol) {
  if (!(m0_sq > 0.0)) throw InvalidArgument("m0", "m0 must be positive");
  if (!(m1_sq >= 0.0)) throw InvalidArgument("m1", "m1^2 must be nonnegative");
  if (!(tol > 0.0)) throw InvalidArgument("tol", "tol must be positive");

  AnomalyReport r;
  r.identity = "mass-shift";
  r.model = model;
  r.m0_sq = m0_sq;
  r.m1_sq = m1_sq;
  r.tol = tol;

  const ZetaResult base = zeta_det(model, m0_sq, false, kZetaTol);
  const ZetaResult shifted = m1_sq == 0.0 ? base : zeta_det(model, m0_sq + m1_sq, false, kZetaTol);
  const Det2Result d2 = det2(model, m0_sq, m1_sq);
  double log_cf = 0.0;
  double cf_bound = 0.0;
  if (m1_sq > 0.0) {
    const HeatIntegral hi = heat_integral(model, m0_sq);
    log_cf = m1_sq * hi.value;
    cf_bound = m1_sq * hi.abs_error_bound;
  }

  const double log_lhs = shifted.log_det;
  const double log_rhs = base.log_det + d2.log_value + log_cf;
  r.lhs = std::exp(log_lhs);
  r.rhs_factors = {{"det_zeta_m0", base.det_zeta}, {"det2", d2.value}, {"exp_cf_term", std::exp(log_cf)}};
  r.rhs = std::exp(log_rhs);
  r.rel_residual = std::abs(std::expm1(log_lhs - log_rhs));
  r.error_budget = (m1_sq == 0.0 ? 0.0 : shifted.err_bound + base.err_bound + d2.tail_bound + cf_bound) +
                   8.0 * std::numeric_limits<double>::epsilon() * (std::abs(log_lhs) + std::abs(log_rhs));
  r.pass = r.rel_residual <= std::max(r.error_budget, tol);
  return r;
}

double thm1_prefactor(const SurfaceModel& model, double m0, double m1_sq) {
  if (!(m0 > 0.0)) throw InvalidArgument("m0", "m0 must be positive");
  return std::exp(m1_sq * (std::log(m0 / 4.0) + kEulerGamma) * model.weyl_density());
}

double residue_phase_space(const SurfaceModel& model) {
  using boost::math::quadrature::gauss;
  // Unit co-disk area at x is pi sqrt(det g).
  double volume = 0.0;
  if (model.kind == SurfaceKind::Sphere) {
    const double r2 = model.radius * model.radius;
    // (theta, phi) chart; the phi integral is 2 pi.
    volume = 2.0 * kPi * gauss<double, 20>::integrate([&](double th) { return kPi * r2 * std::sin(th); }, 0.0, kPi);
  } else {
    const double l1 = model.length1;
    const double l2 = model.length2;
    volume = gauss<double, 20>::integrate(
        [&](double) { return gauss<double, 20>::integrate([&](double) { return kPi; }, 0.0, l2); }, 0.0, l1);
  }
  return volume / (4.0 * kPi * kPi);
}

double prefactor_identity_residual(const SurfaceModel& model, double sigma, double m0, bool halved) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma", "sigma must be positive");
  const double w = model.weyl_density();
  const double m = std::sqrt(sigma);
  const double gamma_term = (halved ? 0.5 : 1.0) * sigma * gamma0(m0) * model.area;
  const double assembled = std::pow(m / m0, sigma * w) * std::exp(gamma_term);
  const double closed = std::pow(m * std::exp(kEulerGamma) / 4.0, sigma * w);
  return std::abs(assembled / closed - 1.0);
}

double extrapolate_to_zero(std::span<const double> h, std::span<const double> y) {
  if (h.size() != y.size() || h.empty()) throw InvalidArgument("h", "extrapolation needs matching nonempty data");
  std::vector<double> p(y.begin(), y.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double hi = h[i];
      const double hj = h[i + level];
      p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
    }
  }
  return p[0];
}

MasslessReport verify_massless(const SurfaceModel& model, double sigma, std::span<const double> m0_sequence,
                               double tol) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma", "sigma must be positive");
  if (m0_sequence.size() < 3) throw InvalidArgument("m0", "extrapolation needs at least three m0 values");
  for (std::size_t i = 0; i < m0_sequence.size(); ++i) {
    if (!(m0_sequence[i] > 0.0)) throw InvalidArgument("m0", "m0 values must be positive");
    if (i > 0 && !(m0_sequence[i] < m0_sequence[i - 1])) throw InvalidArgument("m0", "m0 sequence must decrease");
  }

  MasslessReport rep;
  rep.model = model;
  rep.sigma = sigma;
  rep.m0_sequence.assign(m0_sequence.begin(), m0_sequence.end());
  std::vector<double> h;
  for (double m0 : m0_sequence) h.push_back(m0 * m0);

  // (i) zero-mode limit.
  {
    std::vector<double> log_ratio;
    for (double hh : h) log_ratio.push_back(zeta_det(model, hh, false, kZetaTol).log_det - std::log(hh));
    const double limit = std::exp(extrapolate_to_zero(h, log_ratio));
    const ZetaResult primed = zeta_det(model, 0.0, true, kZetaTol);
    MasslessCheck c;
    c.name = "zero-mode-limit";
    c.value = limit;
    c.reference = primed.det_zeta;
    c.rel_error = std::abs(limit / primed.det_zeta - 1.0);
    c.tol = tol;
    c.pass = c.rel_error <= tol;
    c.detail = "det_zeta(m0^2 + Delta) / m0^2 extrapolated in m0^2 vs det'_zeta(Delta)";
    rep.checks.push_back(c);
  }

  // (ii) prefactor algebra.
  {
    double worst = 0.0;
    double worst_unhalved = 0.0;
    for (double m0 : m0_sequence) {
      worst = std::max(worst, prefactor_identity_residual(model, sigma, m0, true));
      worst_unhalved = std::max(worst_unhalved, prefactor_identity_residual(model, sigma, m0, false));
    }
    MasslessCheck c;
    c.name = "prefactor-algebra";
    c.value = worst;
    c.reference = 0.0;
    c.rel_error = worst;
    c.tol = 1e-12;
    c.pass = worst <= 1e-12;
    c.detail = "(m/m0)^{sigma A/4pi} exp(sigma gamma0 A/2) vs (m e^gamma/4)^{sigma A/4pi}, m = sqrt(sigma)";
    rep.checks.push_back(c);
    rep.notes.push_back("NOTE: with exp(sigma gamma0 A) in place of exp(sigma gamma0 A / 2) the assembly misses "
                        "the closed form by a relative " + sci(worst_unhalved) +
                        " over this m0 sequence; only the halved factor is consistent with the mass-shift constant.");
  }

  // (iii) continuity at sigma and the slope against the Dirichlet-trace finite part.
  {
    const ZetaResult at_sigma = zeta_det(model, sigma, false, kZetaTol);
    std::vector<double> diff;
    std::vector<double> slope;
    for (double hh : h) {
      const double d = zeta_det(model, sigma + hh, false, kZetaTol).log_det - at_sigma.log_det;
      diff.push_back(d);
      slope.push_back(d / hh);
    }
    const double extrapolated = extrapolate_to_zero(h, slope);
    const LaurentFit fit = mainlemma_fit(model, sigma, kSlopeGrid, kSlopeRegularTerms);
    MasslessCheck c;
    c.name = "continuity-slope";
    c.value = extrapolated;
    c.reference = fit.finite_part;
    c.rel_error = std::abs(extrapolated / fit.finite_part - 1.0);
    c.tol = 1e-2;
    const std::size_t last = h.size() - 1;
    const double order = std::log(std::abs(diff[last - 1] / diff[last])) / std::log(h[last - 1] / h[last]);
    c.pass = c.rel_error <= 1e-2 && std::abs(order - 1.0) < 0.1;
    c.detail = "observed order in m0^2 = " + sci(order) +
               "; slope of ln det_zeta(sigma + m0^2 + Delta) vs finite part of tr (sigma + Delta)^{-1-s}";
    rep.checks.push_back(c);
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace regdet
