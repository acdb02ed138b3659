#include "regdet/report.hpp"

#include <cstdio>
#include <sstream>

namespace regdet {

Json to_json(const SurfaceModel& model) {
  Json j;
  j["spec"] = describe(model);
  j["kind"] = model.kind == SurfaceKind::Sphere ? "sphere" : "torus";
  if (model.kind == SurfaceKind::Sphere) {
    j["radius"] = model.radius;
  } else {
    j["L1"] = model.length1;
    j["L2"] = model.length2;
  }
  j["area"] = model.area;
  j["euler_characteristic"] = model.euler_characteristic;
  return j;
}

Json to_json(const HeatCoeffs& c) { return Json{{"a_minus1", c.a_minus1}, {"a_0", c.a_0}}; }

Json to_json(const HeatTraceResult& r) {
  return Json{{"value", r.value}, {"error_bound", r.error_bound}, {"tolerance_met", r.tolerance_met}, {"method", r.method}};
}

Json to_json(const HeatIntegral& r) {
  const auto& p = r.quadrature_profile;
  return Json{{"value", r.value},
              {"abs_error_bound", r.abs_error_bound},
              {"quadrature_profile",
               {{"t_lo", p.t_lo},
                {"t_split", p.t_split},
                {"t_hi", p.t_hi},
                {"panels_small_t", p.panels_small_t},
                {"panels_large_t", p.panels_large_t},
                {"nodes_per_panel", p.nodes_per_panel},
                {"small_t_remainder", p.small_t_remainder},
                {"large_t_tail_bound", p.large_t_tail_bound}}}};
}

Json to_json(const ZetaResult& r) {
  return Json{{"zeta0", r.zeta0},         {"zeta_prime0", r.zeta_prime0},
              {"det_zeta", r.det_zeta},   {"log_det", r.log_det},
              {"err_bound", r.err_bound}, {"excluded_zero_modes", r.excluded_zero_modes},
              {"t_split", r.t_split}};
}

Json to_json(const LaurentFit& f) {
  return Json{{"residue", f.residue},
              {"finite_part", f.finite_part},
              {"fit_diagnostics",
               {{"coefficients", f.coefficients},
                {"s_grid", f.s_grid},
                {"values", f.values},
                {"fit_residual", f.fit_residual}}}};
}

Json to_json(const Det2Result& r) {
  return Json{{"log_value", r.log_value},         {"value", r.value},
              {"lambda_max", r.lambda_max},       {"modes", r.modes},
              {"tail_correction", r.tail_correction}, {"tail_bound", r.tail_bound}};
}

Json to_json(const FinitePart& fp) {
  return Json{
      {"gamma0", fp.gamma0}, {"cf_mean", fp.cf_mean}, {"source", to_string(fp.source)}, {"error_bound", fp.error_bound}};
}

Json to_json(const AnomalyReport& r) {
  Json factors = Json::object();
  for (const auto& [name, value] : r.rhs_factors) factors[name] = value;
  return Json{{"identity", r.identity},
              {"inputs", {{"surface", describe(r.model)}, {"m0_sq", r.m0_sq}, {"m1_sq", r.m1_sq}}},
              {"lhs", r.lhs},
              {"rhs_factors", factors},
              {"rhs", r.rhs},
              {"rel_residual", r.rel_residual},
              {"error_budget", r.error_budget},
              {"tol", r.tol},
              {"pass", r.pass},
              {"notes", r.notes}};
}

Json to_json(const MasslessCheck& c) {
  return Json{{"name", c.name},   {"value", c.value}, {"reference", c.reference}, {"rel_error", c.rel_error},
              {"tol", c.tol},     {"pass", c.pass},   {"detail", c.detail}};
}

Json to_json(const MasslessReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"identity", "massless-limit"},
              {"inputs", {{"surface", describe(r.model)}, {"sigma", r.sigma}, {"m0_sequence", r.m0_sequence}}},
              {"checks", checks},
              {"notes", r.notes},
              {"pass", r.pass}};
}

Json to_json(const MCEstimate& e) {
  return Json{{"mean", e.mean},
              {"std_error", e.std_error},
              {"n_samples", e.n_samples},
              {"target", e.target},
              {"z_score", e.z_score}};
}

Json to_json(const MeasureIdentityResult& r) {
  Json variance = Json::array();
  for (const auto& e : r.reweighted_variance) variance.push_back(to_json(e));
  return Json{{"estimate", to_json(r.estimate)},
              {"det2_target", r.det2_target},
              {"target_mismatch", r.target_mismatch},
              {"modes", r.modes},
              {"max_abs_variance_z", r.max_abs_variance_z},
              {"reweighted_variance", variance}};
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

namespace {

void flatten(const Json& node, const std::string& path, std::ostringstream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) flatten(value, path.empty() ? key : path + "." + key, out);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], path + "[" + std::to_string(i) + "]", out);
  } else if (node.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", node.get<double>());
    out << path << ',' << buf << '\n';
  } else if (node.is_string()) {
    std::string s = node.get<std::string>();
    std::string quoted = "\"";
    for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    out << path << ',' << quoted << "\"\n";
  } else {
    out << path << ',' << node.dump() << '\n';
  }
}

}  // namespace

std::string to_csv(const Json& doc) {
  std::ostringstream out;
  out << "path,value\n";
  for (const char* key : {"command", "pass", "version"}) {
    if (doc.contains(key)) flatten(doc[key], key, out);
  }
  if (doc.contains("results")) flatten(doc["results"], "results", out);
  return out.str();
}

}  // namespace regdet
