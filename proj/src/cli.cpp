#include "regdet/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>

#include "regdet/error.hpp"
#include "regdet/special.hpp"
#include "regdet/summation.hpp"

namespace regdet {

namespace {

constexpr double kMainLemmaTol = 1e-4;
constexpr double kDefaultGffCutoff = 42.0;
constexpr std::uint64_t kDefaultGffSamples = 100000;
constexpr std::uint64_t kAcceptanceGffSamples = 1000000;

void require(bool ok, const char* flag, const std::string& message) {
  if (!ok) throw InvalidArgument(flag, message);
}

void validate(const RunConfig& c) {
  require(std::isfinite(c.m0) && c.m0 >= 0.0, "m0", "--m0 must be a nonnegative number");
  require(std::isfinite(c.m1) && c.m1 >= 0.0, "m1", "--m1 must be a nonnegative number");
  require(std::isfinite(c.sigma) && c.sigma > 0.0, "sigma", "--sigma must be positive");
  require(std::isfinite(c.tol) && c.tol > 0.0, "tol", "--tol must be positive");
  require(std::isfinite(c.t) && c.t > 0.0, "t", "--t must be positive");
}

Json base_inputs(const RunConfig& c) {
  Json in;
  in["surface"] = c.surface;
  in["m0"] = c.m0;
  in["m1"] = c.m1;
  in["sigma"] = c.sigma;
  in["tol"] = c.tol;
  in["lambda_max"] = c.lambda_max;
  in["t"] = c.t;
  in["seed"] = c.seed;
  in["samples"] = c.samples;
  return in;
}

Json check(const std::string& name, double value, double reference, double tol, bool absolute = true) {
  const double err = absolute ? std::abs(value - reference) : std::abs(value / reference - 1.0);
  return Json{{"check", name}, {"value", value}, {"reference", reference},   {absolute ? "abs_error" : "rel_error", err},
              {"tol", tol},    {"pass", err <= tol}};
}

bool all_pass(const Json& results) {
  return std::all_of(results.begin(), results.end(), [](const Json& r) { return !r.contains("pass") || r["pass"].get<bool>(); });
}

// ---------------------------------------------------------------- commands

Json cmd_heat_trace(const SurfaceModel& model, const RunConfig& c) {
  const double m2 = c.m0 * c.m0;
  const double rel_tol = std::min(c.tol, 1e-3);
  const HeatTraceResult r = heat_trace(model, m2, c.t, rel_tol);
  Json rec = to_json(r);
  rec["t"] = c.t;
  rec["m_sq"] = m2;
  rec["heat_coeffs"] = to_json(heat_coeffs(model, m2));
  rec["pass"] = r.tolerance_met;
  return Json::array({rec});
}

Json cmd_det_zeta(const SurfaceModel& model, const RunConfig& c) {
  const double m2 = c.m0 * c.m0;
  const ZetaResult z = zeta_det(model, m2, m2 == 0.0, std::min(c.tol, 1e-4));
  Json rec = to_json(z);
  rec["m_sq"] = m2;
  rec["heat_a0_minus_zero_modes"] = heat_coeffs(model, m2).a_0 - z.excluded_zero_modes;
  return Json::array({rec});
}

Json cmd_det2(const SurfaceModel& model, const RunConfig& c) {
  Det2Options opt;
  opt.lambda_max = c.lambda_max;
  Json rec = to_json(det2(model, c.m0 * c.m0, c.m1 * c.m1, opt));
  rec["m0_sq"] = c.m0 * c.m0;
  rec["m1_sq"] = c.m1 * c.m1;
  return Json::array({rec});
}

Json cmd_cf(const SurfaceModel& model, const RunConfig& c) {
  Json results = Json::array();
  const FinitePart heat = cf_mean(model, c.m0 * c.m0);
  results.push_back(to_json(heat));
  if (model.kind == SurfaceKind::RectTorus) {
    const FinitePart img = torus_cf_image_sum(model.length1, model.length2, c.m0);
    results.push_back(to_json(img));
    Json agree = check("heat-integral vs image-sum", heat.cf_mean, img.cf_mean, c.tol);
    agree["constant_offset_reference"] = (2.0 * kEulerGamma - 3.0 * std::log(2.0)) / (2.0 * kPi);
    results.push_back(agree);
  }
  return results;
}

Json cmd_verify_anomaly(const SurfaceModel& model, const RunConfig& c) {
  return Json::array({to_json(verify_thm2(model, c.m0 * c.m0, c.m1 * c.m1, c.tol))});
}

Json mainlemma_records(const SurfaceModel& model, double m2) {
  const auto grid = default_laurent_grid();
  const LaurentFit fit = mainlemma_fit(model, m2, grid);
  const HeatIntegral hi = heat_integral(model, m2);
  Json rec = to_json(fit);
  rec["m_sq"] = m2;
  rec["surface"] = describe(model);
  Json checks = Json::array();
  checks.push_back(check("residue vs A/4pi", fit.residue, model.weyl_density(), kMainLemmaTol));
  checks.push_back(check("residue vs phase space", fit.residue, residue_phase_space(model), kMainLemmaTol));
  checks.push_back(check("finite part vs heat integral", fit.finite_part, hi.value, kMainLemmaTol));
  rec["checks"] = checks;
  rec["pass"] = all_pass(checks);
  return rec;
}

Json cmd_verify_mainlemma(const SurfaceModel& model, const RunConfig& c) {
  require(c.m0 > 0.0, "m0", "--m0 must be positive for the Dirichlet trace");
  return Json::array({mainlemma_records(model, c.m0 * c.m0)});
}

Json cmd_verify_massless(const SurfaceModel& model, const RunConfig& c) {
  const std::vector<double> seq{0.2, 0.1, 0.05};
  return Json::array({to_json(verify_massless(model, c.sigma, seq, std::max(c.tol, 1e-4)))});
}

Json gff_record(const SurfaceModel& model, double m0, double m1, double cutoff, std::uint64_t n, std::uint64_t seed) {
  const MeasureIdentityResult r = verify_measure_identity(model, m0, m1, cutoff, n, seed);
  Json rec = to_json(r);
  rec["inputs"] = {{"surface", describe(model)}, {"m0", m0}, {"m1", m1}, {"lambda_max", cutoff}, {"samples", n},
                   {"seed", seed}};
  rec["pass"] = std::abs(r.estimate.z_score) < 3.0 && r.target_mismatch <= 1e-12;
  return rec;
}

Json cmd_gff_verify(const SurfaceModel& model, const RunConfig& c) {
  const double cutoff = c.lambda_max >= 0.0 ? c.lambda_max : kDefaultGffCutoff;
  const std::uint64_t n = c.samples > 0 ? c.samples : kDefaultGffSamples;
  return Json::array({gff_record(model, c.m0, c.m1, cutoff, n, c.seed)});
}

// The acceptance grid. Each entry is one criterion with its own pass flag.
Json cmd_verify_all(const RunConfig& c) {
  Json results = Json::array();
  const SurfaceModel sphere = make_sphere(1.0);
  const SurfaceModel square = make_torus(1.0, 1.0);
  const SurfaceModel oblong = make_torus(1.0, 2.0);
  auto criterion = [&](const std::string& id, const std::string& what, Json details) {
    Json rec{{"criterion", id}, {"description", what}, {"details", details}, {"pass", all_pass(details)}};
    results.push_back(rec);
  };

  criterion("A1", "mass-shift identity, three independent factors",
            Json::array({to_json(verify_thm2(sphere, 1.0, 1.0, 1e-6)), to_json(verify_thm2(square, 1.0, 2.0, 1e-6))}));

  {
    const LaurentFit fit = mainlemma_fit(sphere, 1.0, default_laurent_grid());
    const HeatIntegral hi = heat_integral(sphere, 1.0);
    criterion("A2", "Laurent residue and finite part of tr C^{1+s}",
              Json::array({check("residue vs A/4pi", fit.residue, 1.0, 1e-4),
                           check("finite part vs heat integral", fit.finite_part, hi.value, 1e-4)}));
  }

  {
    Json details = Json::array();
    for (const auto& m : {sphere, square, oblong}) {
      const LaurentFit fit = mainlemma_fit(m, 1.0, default_laurent_grid());
      const double phase = residue_phase_space(m);
      Json a = check(describe(m) + " fit vs A/4pi", fit.residue, m.weyl_density(), 1e-4);
      Json b = check(describe(m) + " fit vs phase space", fit.residue, phase, 1e-4);
      Json d = check(describe(m) + " phase space vs A/4pi", phase, m.weyl_density(), 1e-4);
      details.push_back(a);
      details.push_back(b);
      details.push_back(d);
    }
    criterion("A3", "residue three ways", details);
  }

  {
    const std::vector<double> grid{0.01, 0.015, 0.02, 0.025, 0.03, 0.04, 0.05, 0.06};
    const double sphere_c0 = heat_constant_fit(sphere, grid);
    const double t = 0.05;
    const double direct = heat_trace(square, 0.0, t, 1e-14, HeatTraceMethod::Direct).value;
    const double poisson = heat_trace(square, 0.0, t, 1e-14, HeatTraceMethod::ImageSum).value;
    Json torus = check("torus constant term at t=0.05 (direct minus Poisson image form)", direct - poisson, 0.0, 1e-8);
    torus["bare_subtraction"] = direct - square.weyl_density() / t;
    criterion("A4", "constant heat coefficient chi/6",
              Json::array({check("sphere constant-term fit", sphere_c0, 1.0 / 3.0, 1e-4), torus}));
  }

  {
    const FinitePart heat = cf_mean(square, 1.0);
    const FinitePart img = torus_cf_image_sum(1.0, 1.0, 1.0);
    Json agree = check("torus 1x1 m0=1 heat-integral vs image-sum C_f", heat.cf_mean, img.cf_mean, 1e-6);
    agree["constant_offset_reference"] = (2.0 * kEulerGamma - 3.0 * std::log(2.0)) / (2.0 * kPi);
    criterion("A5", "two C_f oracles", Json::array({agree}));
  }

  {
    const double special = 4.0 * std::exp(-kEulerGamma);
    criterion("A6", "special bare mass 4 exp(-gamma)",
              Json::array({check("gamma0", gamma0(special), 0.0, 1e-14),
                           check("mass-shift prefactor", thm1_prefactor(sphere, special, 1.0), 1.0, 1e-14)}));
  }

  {
    const std::uint64_t n = c.samples > 0 ? c.samples : kAcceptanceGffSamples;
    criterion("A7", "truncated measure identity by Monte Carlo",
              Json::array({gff_record(sphere, 1.0, 1.0, kDefaultGffCutoff, n, c.seed)}));
  }

  {
    const std::vector<double> seq{0.2, 0.1, 0.05};
    const MasslessReport rep = verify_massless(sphere, 1.0, seq, 1e-4);
    const double literature = std::exp(0.5 - 4.0 * kZetaPrimeMinusOne);
    const ZetaResult primed = zeta_det(sphere, 0.0, true);
    criterion("A8", "massless limit on the sphere",
              Json::array({to_json(rep.checks[0]),
                           check("det' vs exp(1/2 - 4 zeta'(-1))", primed.det_zeta, literature, 1e-4, false)}));
  }

  {
    std::mt19937_64 engine(c.seed);
    std::uniform_real_distribution<double> m0_dist(0.05, 3.0);
    std::uniform_real_distribution<double> sigma_dist(0.1, 4.0);
    double worst = 0.0;
    Json pairs = Json::array();
    for (int i = 0; i < 10; ++i) {
      const double m0 = m0_dist(engine);
      const double sigma = sigma_dist(engine);
      worst = std::max(worst, prefactor_identity_residual(sphere, sigma, m0));
      pairs.push_back({m0, sigma});
    }
    Json algebra = check("prefactor identity, worst of 10 random (m0, sigma)", worst, 0.0, 1e-12);
    algebra["pairs"] = pairs;
    const std::vector<double> seq{0.2, 0.1, 0.05};
    const MasslessReport rep = verify_massless(square, 2.0, seq, 1e-4);
    Json notes = rep.notes;
    criterion("A9", "massless-background prefactor and continuity",
              Json::array({algebra, to_json(rep.checks[2]), Json{{"notes", notes}}}));
  }

  return results;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> commands{"heat-trace",       "det-zeta",        "det2",
                                                 "cf",               "verify-anomaly",  "verify-mainlemma",
                                                 "verify-massless",  "gff-verify",      "verify-all"};
  return commands;
}

RunOutcome run(const std::string& command, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  Json& doc = out.document;
  doc["command"] = command;
  doc["inputs"] = base_inputs(config);
  try {
    const auto& known = cli_commands();
    if (std::find(known.begin(), known.end(), command) == known.end()) {
      throw InvalidArgument("command", "unknown command '" + command + "'");
    }
    validate(config);
    if (config.threads > 0) set_worker_count(config.threads);
    Json results;
    if (command == "verify-all") {
      results = cmd_verify_all(config);
    } else {
      const SurfaceModel model = parse_surface(config.surface);
      if (command == "heat-trace") results = cmd_heat_trace(model, config);
      else if (command == "det-zeta") results = cmd_det_zeta(model, config);
      else if (command == "det2") results = cmd_det2(model, config);
      else if (command == "cf") results = cmd_cf(model, config);
      else if (command == "verify-anomaly") results = cmd_verify_anomaly(model, config);
      else if (command == "verify-mainlemma") results = cmd_verify_mainlemma(model, config);
      else if (command == "verify-massless") results = cmd_verify_massless(model, config);
      else results = cmd_gff_verify(model, config);
    }
    doc["results"] = results;
    doc["pass"] = all_pass(results);
    out.exit_code = doc["pass"].get<bool>() ? 0 : 2;
  } catch (const InvalidArgument& e) {
    doc["results"] = Json::array();
    doc["pass"] = false;
    doc["error"] = {{"parameter", e.parameter()}, {"message", e.what()}};
    out.exit_code = 1;
  } catch (const ToleranceNotReached& e) {
    doc["results"] = Json::array();
    doc["pass"] = false;
    doc["error"] = {{"message", e.what()}, {"achieved", e.achieved()}};
    out.exit_code = 1;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  doc["runtime_ms"] = std::round(elapsed.count());
  doc["version"] = REGDET_VERSION;
  doc["timestamp"] = utc_timestamp();
  return out;
}

std::string render(const RunOutcome& outcome, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(outcome.document) : dump_json(outcome.document);
}

}  // namespace regdet
