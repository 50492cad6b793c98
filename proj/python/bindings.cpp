#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hamreal/cli.hpp"
#include "hamreal/integrate.hpp"
#include "hamreal/models.hpp"
#include "hamreal/verify.hpp"

namespace py = pybind11;
using namespace hamreal;

namespace {

std::map<std::string, double> parameter_map(const Chart& chart) {
  std::map<std::string, double> out;
  for (const auto& p : chart.parameters())
    if (p.value) out[p.name] = *p.value;
  return out;
}

Point make_point(const Chart& chart, const std::vector<double>& coords, double t) {
  if (coords.size() != chart.dimension()) throw py::value_error("point needs " + std::to_string(chart.dimension()) + " coordinates");
  std::optional<double> time;
  if (chart.time()) time = t;
  return chart.point(coords, time);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hamiltonian realizations via the Jacobi last multiplier";

  static py::exception<Error> base(m, "Error");
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UndeclaredSymbol>(m, "UndeclaredSymbol", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PathSingularity>(m, "PathSingularity", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<DegenerateStructure>(m, "DegenerateStructure", base.ptr());

  py::class_<ModelSpec>(m, "Model")
      .def_readonly("name", &ModelSpec::name)
      .def_readonly("dimension", &ModelSpec::dimension)
      .def_readonly("errata", &ModelSpec::errata)
      .def_property_readonly("coordinates", [](const ModelSpec& s) { return s.chart.coordinates(); })
      .def_property_readonly("parameters", [](const ModelSpec& s) { return parameter_map(s.chart); })
      .def_property_readonly("dynamics",
                             [](const ModelSpec& s) {
                               std::vector<std::string> out;
                               for (const auto& e : s.dynamics) out.push_back(to_string(e));
                               return out;
                             })
      .def_property_readonly("multiplier", [](const ModelSpec& s) { return to_string(s.multiplier); })
      .def("with_parameters",
           [](const ModelSpec& s, const std::map<std::string, double>& values) {
             return s.with_parameters({values.begin(), values.end()});
           })
      .def("format", &format_model)
      .def("__repr__", [](const ModelSpec& s) { return "<hamreal.Model " + s.name + ">"; });

  m.def("list_models", &list_models);
  m.def("get_model", [](const std::string& name) { return get_model(name); }, py::arg("name"));
  m.def("load_model", &load_model, py::arg("path"));
  m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

  m.def(
      "verify_json",
      [](const ModelSpec& spec, std::size_t samples, std::uint64_t seed, double tol) {
        return report_json(verify_model(spec, {samples, seed, tol}));
      },
      py::arg("model"), py::arg("samples") = 500, py::arg("seed") = 42, py::arg("tol") = kDefaultTolerance);

  m.def(
      "integrate",
      [](const ModelSpec& spec, const std::vector<double>& init, double t0, double t1, double dt,
         const std::string& method, double max_step, bool variational) {
        IntegrationOptions o;
        o.method = parse_method(method);
        o.dt = dt;
        o.max_step = max_step;
        o.variational = variational;
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = integrate(spec.field(), spec.chart, init, t0, t1, o);
        }
        py::dict out;
        out["times"] = tr.times;
        out["states"] = tr.states;
        if (variational) out["log_jacobian"] = log_jacobian(tr);
        return out;
      },
      py::arg("model"), py::arg("init"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("dt") = 1e-2,
      py::arg("method") = "rk45", py::arg("max_step") = 0.0, py::arg("variational") = false);

  m.def(
      "evaluate",
      [](const ModelSpec& spec, const std::string& text, const std::vector<double>& coords, double t) {
        return eval(parse(text, spec.chart), make_point(spec.chart, coords, t));
      },
      py::arg("model"), py::arg("expr"), py::arg("coords"), py::arg("t") = 0.0,
      "Evaluate an expression in the model's chart.");

  m.def(
      "derivative",
      [](const ModelSpec& spec, const std::string& text, const std::string& symbol) {
        return to_string(simplify(diff(parse(text, spec.chart), symbol)));
      },
      py::arg("model"), py::arg("expr"), py::arg("symbol"));

  m.def(
      "reconstruct",
      [](const ModelSpec& spec, const std::vector<double>& base, const std::vector<double>& target, double t) {
        if (spec.dimension != 2) throw py::value_error("reconstruction needs a planar model");
        const auto r = reconstruct_hamiltonian_2d(spec.multiplier_data(), make_point(spec.chart, base, t),
                                                  make_point(spec.chart, target, t));
        return py::make_tuple(r.value, r.alternate);
      },
      py::arg("model"), py::arg("base"), py::arg("target"), py::arg("t") = 0.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a hamreal command line; returns (exit code, stdout, stderr).");
}
