#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regdet/cli.hpp"
#include "regdet/error.hpp"

namespace py = pybind11;
using namespace regdet;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

SurfaceModel surface(const py::object& spec) {
  if (py::isinstance<py::str>(spec)) return parse_surface(spec.cast<std::string>());
  return spec.cast<SurfaceModel>();
}

}  // namespace

PYBIND11_MODULE(_regdet, m) {
  m.doc() = "Regularized determinants and heat traces on the round sphere and flat rectangular tori";

  py::register_exception<ToleranceNotReached>(m, "ToleranceNotReached", PyExc_RuntimeError);

  py::class_<SurfaceModel>(m, "SurfaceModel")
      .def_property_readonly("kind", [](const SurfaceModel& s) {
        return s.kind == SurfaceKind::Sphere ? "sphere" : "torus";
      })
      .def_readonly("radius", &SurfaceModel::radius)
      .def_readonly("length1", &SurfaceModel::length1)
      .def_readonly("length2", &SurfaceModel::length2)
      .def_readonly("area", &SurfaceModel::area)
      .def_readonly("euler_characteristic", &SurfaceModel::euler_characteristic)
      .def("__eq__", [](const SurfaceModel& a, const SurfaceModel& b) { return a == b; })
      .def("__repr__", [](const SurfaceModel& s) { return "SurfaceModel('" + describe(s) + "')"; })
      .def("__str__", &describe);

  m.def("make_sphere", &make_sphere, py::arg("radius"));
  m.def("make_torus", &make_torus, py::arg("length1"), py::arg("length2"));
  m.def("parse_surface", [](const std::string& s) { return parse_surface(s); }, py::arg("spec"));

  m.def(
      "spectrum",
      [](const py::object& s, double lambda_max) {
        std::vector<std::pair<double, std::int64_t>> out;
        for (const auto& line : spectrum(surface(s), lambda_max)) out.emplace_back(line.eigenvalue, line.multiplicity);
        return out;
      },
      py::arg("surface"), py::arg("lambda_max"));

  m.def(
      "heat_trace",
      [](const py::object& s, double m2, double t, double rel_tol) {
        return to_python(to_json(heat_trace(surface(s), m2, t, rel_tol)));
      },
      py::arg("surface"), py::arg("m2"), py::arg("t"), py::arg("rel_tol") = 1e-12);
  m.def(
      "heat_coeffs", [](const py::object& s, double m2) { return to_python(to_json(heat_coeffs(surface(s), m2))); },
      py::arg("surface"), py::arg("m2"));
  m.def(
      "heat_integral",
      [](const py::object& s, double m2, double abs_tol) {
        return to_python(to_json(heat_integral(surface(s), m2, abs_tol)));
      },
      py::arg("surface"), py::arg("m2"), py::arg("abs_tol") = 1e-10);

  m.def(
      "zeta_det",
      [](const py::object& s, double m2, bool exclude, double tol, double t_split) {
        return to_python(to_json(zeta_det(surface(s), m2, exclude, tol, t_split)));
      },
      py::arg("surface"), py::arg("m2"), py::arg("exclude_zero_mode") = false, py::arg("tol") = 1e-10,
      py::arg("t_split") = 0.0);
  m.def(
      "dirichlet_trace", [](const py::object& s, double m2, double x) { return dirichlet_trace(surface(s), m2, x).value; },
      py::arg("surface"), py::arg("m2"), py::arg("s"));
  m.def(
      "mainlemma_fit",
      [](const py::object& s, double m2, std::vector<double> grid, int regular_terms) {
        if (grid.empty()) grid = default_laurent_grid();
        return to_python(to_json(mainlemma_fit(surface(s), m2, grid, regular_terms)));
      },
      py::arg("surface"), py::arg("m2"), py::arg("s_grid") = std::vector<double>{}, py::arg("regular_terms") = 2);

  m.def("gamma0", &gamma0, py::arg("m0"));
  m.def(
      "det2",
      [](const py::object& s, double m0_sq, double m1_sq, double lambda_max, bool tail) {
        Det2Options opt;
        opt.lambda_max = lambda_max;
        opt.tail_correction = tail;
        return to_python(to_json(det2(surface(s), m0_sq, m1_sq, opt)));
      },
      py::arg("surface"), py::arg("m0_sq"), py::arg("m1_sq"), py::arg("lambda_max") = -1.0,
      py::arg("tail_correction") = true);
  m.def(
      "cf_mean", [](const py::object& s, double m0_sq) { return to_python(to_json(cf_mean(surface(s), m0_sq))); },
      py::arg("surface"), py::arg("m0_sq"));
  m.def(
      "torus_cf_image_sum",
      [](double l1, double l2, double m0) { return to_python(to_json(torus_cf_image_sum(l1, l2, m0))); },
      py::arg("length1"), py::arg("length2"), py::arg("m0"));

  m.def(
      "verify_thm2",
      [](const py::object& s, double m0_sq, double m1_sq, double tol) {
        return to_python(to_json(verify_thm2(surface(s), m0_sq, m1_sq, tol)));
      },
      py::arg("surface"), py::arg("m0_sq"), py::arg("m1_sq"), py::arg("tol") = 1e-6);
  m.def(
      "thm1_prefactor", [](const py::object& s, double m0, double m1_sq) { return thm1_prefactor(surface(s), m0, m1_sq); },
      py::arg("surface"), py::arg("m0"), py::arg("m1_sq"));
  m.def(
      "residue_phase_space", [](const py::object& s) { return residue_phase_space(surface(s)); }, py::arg("surface"));
  m.def(
      "verify_massless",
      [](const py::object& s, double sigma, const std::vector<double>& seq, double tol) {
        return to_python(to_json(verify_massless(surface(s), sigma, seq, tol)));
      },
      py::arg("surface"), py::arg("sigma"), py::arg("m0_sequence") = std::vector<double>{0.2, 0.1, 0.05},
      py::arg("tol") = 1e-4);
  m.def(
      "verify_measure_identity",
      [](const py::object& s, double m0, double m1, double lambda_max, std::size_t n, std::uint64_t seed) {
        MeasureIdentityResult r;
        {
          py::gil_scoped_release release;
          r = verify_measure_identity(surface(s), m0, m1, lambda_max, n, seed);
        }
        return to_python(to_json(r));
      },
      py::arg("surface"), py::arg("m0"), py::arg("m1"), py::arg("lambda_max"), py::arg("n"), py::arg("seed"));

  m.def(
      "run",
      [](const std::string& command, const py::dict& options) {
        RunConfig cfg;
        for (const auto& [key, value] : options) {
          const auto k = key.cast<std::string>();
          if (k == "surface") cfg.surface = value.cast<std::string>();
          else if (k == "m0") cfg.m0 = value.cast<double>();
          else if (k == "m1") cfg.m1 = value.cast<double>();
          else if (k == "sigma") cfg.sigma = value.cast<double>();
          else if (k == "tol") cfg.tol = value.cast<double>();
          else if (k == "lambda_max") cfg.lambda_max = value.cast<double>();
          else if (k == "t") cfg.t = value.cast<double>();
          else if (k == "seed") cfg.seed = value.cast<std::uint64_t>();
          else if (k == "samples") cfg.samples = value.cast<std::uint64_t>();
          else if (k == "threads") cfg.threads = value.cast<unsigned>();
          else throw py::key_error("unknown option " + k);
        }
        RunOutcome out;
        {
          py::gil_scoped_release release;
          out = run(command, cfg);
        }
        return py::make_tuple(out.exit_code, to_python(out.document));
      },
      py::arg("command"), py::arg("options") = py::dict());

  m.attr("__version__") = REGDET_VERSION;
}
