#include "regdet/zeta.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "regdet/error.hpp"
#include "regdet/heat.hpp"
#include "regdet/quadrature.hpp"
#include "regdet/special.hpp"
#include "regdet/summation.hpp"

namespace regdet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// int_X^inf (a + c x^2)^{-sigma} dx by the binomial series in a / (c x^2).
double power_tail_integral(double a, double c, double sigma, double x) {
  const double ratio = a / (c * x * x);
  if (!(std::abs(ratio) < 0.25)) throw InvalidArgument("x", "tail integral start point too small");
  CompensatedSum sum;
  double binom = 1.0;  // binom(-sigma, j)
  double power = std::pow(c, -sigma) * std::pow(x, 1.0 - 2.0 * sigma);
  for (int j = 0; j < 60; ++j) {
    const double term = binom * power / (2.0 * sigma + 2.0 * j - 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum.value())) break;
    binom *= (-sigma - j) / (j + 1.0);
    power *= ratio;
  }
  return sum.value();
}

DirichletTrace sphere_dirichlet(const SurfaceModel& m, double mass_sq, double s) {
  const double sigma = 1.0 + s;
  const double r2 = m.radius * m.radius;
  const double c = mass_sq * r2 - 0.25;  // (m^2 + lambda_k) R^2 = nu^2 + c, nu = k + 1/2
  const double scale = std::pow(r2, -sigma) * std::pow(r2, 2.0 * sigma) * std::pow(r2, -sigma);  // == 1
  constexpr std::size_t kTerms = 20000;

  auto term = [&](std::size_t k) {
    const double nu = static_cast<double>(k) + 0.5;
    return 2.0 * nu * std::pow(nu * nu + c, -sigma);
  };
  const CompensatedSum head = chunked_sum(kTerms, 2048, term);

  // Midpoint Euler-Maclaurin: sum_{j>=0} g(a + 1/2 + j) = int_a^inf g + g'(a)/24 - 7 g'''(a)/5760 ...
  const double a = static_cast<double>(kTerms);
  const double u = a * a + c;
  const double integral = std::pow(u, -s) / s;
  const double g1 = 2.0 * std::pow(u, -sigma) - 4.0 * sigma * a * a * std::pow(u, -sigma - 1.0);
  const double g3 = 2.0 * (1.0 - 2.0 * sigma) * (2.0 * sigma) * (2.0 * sigma + 1.0) * std::pow(a, -2.0 - 2.0 * sigma);

  const double r_factor = std::pow(r2, sigma) * scale;  // (m^2 + lambda)^{-sigma} = R^{2 sigma} (nu^2 + c)^{-sigma}
  DirichletTrace out;
  out.value = r_factor * (head.value() + integral + g1 / 24.0);
  out.err_bound = r_factor * (2.0 * 7.0 / 5760.0 * std::abs(g3) + 8.0 * kEps * (head.value() + integral));
  return out;
}

DirichletTrace torus_dirichlet(const SurfaceModel& m, double mass_sq, double s) {
  const double sigma = 1.0 + s;
  const double b = 4.0 * kPi * kPi / (m.length1 * m.length1);
  const double c = 4.0 * kPi * kPi / (m.length2 * m.length2);
  // sum_{q in Z} (a + c q^2)^{-sigma} ~= sqrt(pi / c) Gamma(sigma - 1/2) / Gamma(sigma) a^{1/2 - sigma}
  // with Poisson corrections of order exp(-2 pi sqrt(a / c)).
  const double row_const = std::sqrt(kPi / c) * std::exp(std::lgamma(sigma - 0.5) - std::lgamma(sigma));
  constexpr double kRowSwitch = 7.5;  // 2 pi * 7.5 ~ 47
  constexpr std::int64_t kRows = 20000;
  constexpr std::int64_t kColumns = 4000;

  double em_error = 0.0;
  auto direct_row = [&](double a) {
    CompensatedSum row(std::pow(a, -sigma));
    for (std::int64_t q = 1; q <= kColumns; ++q) {
      const double qq = static_cast<double>(q);
      row += 2.0 * std::pow(a + c * qq * qq, -sigma);
    }
    const double x = static_cast<double>(kColumns) + 0.5;
    const double h1 = -2.0 * sigma * c * x * std::pow(a + c * x * x, -sigma - 1.0);
    row += 2.0 * (power_tail_integral(a, c, sigma, x) + h1 / 24.0);
    return row.value();
  };
  auto row_value = [&](std::int64_t p) {
    const double pp = static_cast<double>(p);
    const double a = mass_sq + b * pp * pp;
    if (std::sqrt(a / c) >= kRowSwitch) return row_const * std::pow(a, 0.5 - sigma);
    return direct_row(a);
  };

  // Rows p = 0, +-1, ..., +-kRows.
  const CompensatedSum head = chunked_sum(static_cast<std::size_t>(kRows) + 1, 512, [&](std::size_t i) {
    const auto p = static_cast<std::int64_t>(i);
    return (p == 0 ? 1.0 : 2.0) * row_value(p);
  });
  {
    const double x = static_cast<double>(kColumns) + 0.5;
    em_error += 4.0 * kRowSwitch * 7.0 / 5760.0 * 8.0 * sigma * sigma * sigma * std::pow(c, -sigma) *
                std::pow(x, -2.0 * sigma - 3.0);
  }

  // Remaining rows |p| > kRows all use the closed form.
  const double sigma_row = sigma - 0.5;
  const double x = static_cast<double>(kRows) + 0.5;
  const double h1 = -2.0 * sigma_row * b * x * std::pow(mass_sq + b * x * x, -sigma_row - 1.0);
  const double tail = 2.0 * row_const * (power_tail_integral(mass_sq, b, sigma_row, x) + h1 / 24.0);
  em_error += 2.0 * row_const * 7.0 / 5760.0 * 8.0 * sigma * sigma * sigma * std::pow(b, -sigma_row) *
              std::pow(x, -2.0 * sigma_row - 3.0);

  DirichletTrace out;
  out.value = head.value() + tail;
  out.err_bound = em_error + 8.0 * kEps * out.value * std::sqrt(static_cast<double>(kRows));
  return out;
}

}  // namespace

ZetaResult zeta_det(const SurfaceModel& model, double mass_sq, bool exclude_zero_mode, double tol, double t_split) {
  if (!(mass_sq >= 0.0) || !std::isfinite(mass_sq)) throw InvalidArgument("m2", "m2 must be nonnegative");
  if (mass_sq == 0.0 && !exclude_zero_mode) {
    throw InvalidArgument("m2", "zeta function is undefined at m2 = 0 unless the zero mode is excluded");
  }
  if (!(tol > 0.0 && tol <= 1e-4)) throw InvalidArgument("tol", "tol must lie in (0, 1e-4]");

  const LaplaceHeatTrace theta(model);
  const double w = model.weyl_density();
  const double chi6 = model.euler_characteristic / 6.0;
  const int n0 = exclude_zero_mode ? 1 : 0;
  const double a0 = chi6 - mass_sq * w;
  const double b0 = a0 - n0;
  const double ts = t_split > 0.0 ? t_split : model.length_scale_sq();
  const double t_lo = 1e-12 * model.length_scale_sq();
  const double gap = mass_sq + first_nonzero_eigenvalue(model);
  const double t_hi = ts + 48.0 / gap;
  if (!(t_lo < ts)) throw InvalidArgument("t_split", "t_split is too small");

  // theta~ - a_{-1}/t - b_0, written so that no O(1/t) terms cancel.
  auto f_small = [&](double t) {
    const double damp_m1 = std::expm1(-mass_sq * t);
    double v = (1.0 + damp_m1) * theta.remainder(t) + w * exp_minus_one_plus(mass_sq * t) / t + chi6 * damp_m1;
    if (exclude_zero_mode) v -= damp_m1;
    return v;
  };
  const auto qf = integrate_panels([&](double u) { return f_small(std::exp(u)); }, std::log(t_lo), std::log(ts),
                                   0.05 * tol);
  // Below t_lo the integrand is a_1 t + O(t^2): its integral in u is ~ f(t_lo).
  const double f_lo = f_small(t_lo);

  auto g_large = [&](double u) {
    const double t = std::exp(u);
    return std::exp(-mass_sq * t) * theta.nonzero(t);
  };
  const auto qg = integrate_panels(g_large, std::log(ts), std::log(t_hi), 0.05 * tol);
  const double zero_mode_g = exclude_zero_mode ? 0.0 : expint_e1(mass_sq * ts);
  const double g_tail = std::exp(-mass_sq * t_hi) * theta.nonzero(t_hi) / (t_hi * gap);

  CompensatedSum zp;
  zp += qf.value;
  zp += f_lo;
  zp += qg.value;
  zp += zero_mode_g;
  zp += -w / ts;
  zp += b0 * (kEulerGamma + std::log(ts));

  ZetaResult r;
  r.zeta0 = b0;
  r.zeta_prime0 = zp.value();
  r.log_det = -r.zeta_prime0;
  r.det_zeta = std::exp(r.log_det);
  r.excluded_zero_modes = n0;
  r.t_split = ts;
  r.err_bound = qf.error + qg.error + std::abs(f_lo) + g_tail +
                8.0 * kEps * (std::abs(qf.value) + std::abs(qg.value) + std::abs(zero_mode_g) + w / ts + std::abs(b0));
  if (r.err_bound > tol) {
    std::ostringstream msg;
    msg << "zeta determinant error bound " << r.err_bound << " exceeds tolerance " << tol;
    throw ToleranceNotReached(msg.str(), r.err_bound);
  }
  return r;
}

DirichletTrace dirichlet_trace(const SurfaceModel& model, double mass_sq, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("s", "Dirichlet trace requires s > 0");
  if (!(mass_sq > 0.0) || !std::isfinite(mass_sq)) throw InvalidArgument("m2", "Dirichlet trace requires m2 > 0");
  return model.kind == SurfaceKind::Sphere ? sphere_dirichlet(model, mass_sq, s)
                                           : torus_dirichlet(model, mass_sq, s);
}

std::vector<double> default_laurent_grid() { return {0.2, 0.1, 0.05, 0.025}; }

LaurentFit mainlemma_fit(const SurfaceModel& model, double mass_sq, std::span<const double> s_grid,
                         int regular_terms) {
  if (regular_terms < 2) throw InvalidArgument("regular_terms", "at least two regular terms are fitted");
  const auto params = static_cast<std::size_t>(regular_terms) + 1;
  if (s_grid.size() < std::max<std::size_t>(4, params)) {
    throw InvalidArgument("s_grid", "Laurent fit needs at least 4 grid points and one per coefficient");
  }
  std::set<double> distinct(s_grid.begin(), s_grid.end());
  if (distinct.size() != s_grid.size()) throw InvalidArgument("s_grid", "Laurent fit grid has repeated points");
  for (double s : s_grid) {
    if (!(s > 0.0 && s <= 0.5)) throw InvalidArgument("s_grid", "Laurent fit grid must lie in (0, 0.5]");
  }

  LaurentFit fit;
  fit.s_grid.assign(s_grid.begin(), s_grid.end());
  const auto n = static_cast<Eigen::Index>(s_grid.size());
  Eigen::MatrixXd design(n, static_cast<Eigen::Index>(params));
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = s_grid[static_cast<std::size_t>(i)];
    const double v = dirichlet_trace(model, mass_sq, s).value;
    fit.values.push_back(v);
    rhs(i) = v;
    design(i, 0) = 1.0 / s;
    double power = 1.0;
    for (std::size_t j = 1; j < params; ++j) {
      design(i, static_cast<Eigen::Index>(j)) = power;
      power *= s;
    }
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());
  fit.residue = coef(0);
  fit.finite_part = coef(1);
  fit.fit_residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace regdet
