#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "annrot/parallel.hpp"
#include "annrot/runner.hpp"
#include "annrot/zoo.hpp"

namespace py = pybind11;
using namespace annrot;

namespace {

// JSON crosses the boundary as strings; Python side can json.loads them.
LiftedAnnulusMap map_of(const std::string& spec) {
  return map_from_spec(json::parse(spec));
}

}  // namespace

PYBIND11_MODULE(annrot, m) {
  m.doc() = "rotation-set experiments for lifted annulus homeomorphisms";

  py::register_exception<SchemaError>(m, "SchemaError");
  py::register_exception<PreconditionError>(m, "PreconditionError");

  m.def("set_worker_count", &set_worker_count, py::arg("n"));

  m.def(
      "rho_n",
      [](const std::string& map_spec, double theta, double y, long n) {
        return rho_n(map_of(map_spec), AnnulusPoint(theta, y), n);
      },
      py::arg("map_spec"), py::arg("theta"), py::arg("y"), py::arg("n"),
      "average lifted displacement per iterate over n steps");

  m.def(
      "displacement_trace",
      [](const std::string& map_spec, double x, double y, long n) {
        OrbitTrace t = displacement(map_of(map_spec), CoverPoint{x, y}, n);
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : t.points) pts.emplace_back(p.x, p.y);
        return py::make_tuple(pts, t.total_displacement, t.escaped);
      },
      py::arg("map_spec"), py::arg("x"), py::arg("y"), py::arg("n"));

  m.def(
      "reference_skew_spec",
      [](double eps) { return reference_skew_spec(eps).dump(); },
      py::arg("eps") = 0.0);
  m.def("reference_tilted_spec",
        [] { return reference_tilted_spec().dump(); });

  m.def(
      "run_config",
      [](const std::string& config) {
        RunOutcome out = run_config(json::parse(config));
        return py::make_tuple(out.record.to_json().dump(), out.exit_code,
                              out.message);
      },
      py::arg("config"),
      "run one operation config; returns (record_json, exit_code, message)");

  m.def(
      "run_suite",
      [](const std::string& name) {
        RunOutcome out = run_suite(name);
        return py::make_tuple(out.record.to_json().dump(), out.exit_code,
                              out.message);
      },
      py::arg("name"));

  m.def(
      "check_record",
      [](const std::string& record_json) {
        return check_record(ResultRecord::from_json(json::parse(record_json)));
      },
      py::arg("record_json"), "names of failing re-validated asserts");
}
