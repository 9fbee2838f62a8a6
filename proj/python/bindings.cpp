#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cslab/errors.hpp"
#include "cslab/fock.hpp"
#include "cslab/harness.hpp"

namespace py = pybind11;

namespace {

// Records travel as JSON text; the package decodes them.
py::tuple run(const std::string& command, const std::map<std::string, std::string>& params) {
  const cslab::ExperimentConfig cfg = cslab::ExperimentConfig::parse(command, "", params);
  cslab::RunOutput out;
  {
    py::gil_scoped_release release;
    out = cslab::run_experiment(cfg);
  }
  std::vector<std::string> records;
  for (const auto& r : out.records) records.push_back(r.to_json().dump());
  py::object table = py::none();
  if (out.table) table = py::make_tuple(out.table->header, out.table->rows);
  return py::make_tuple(records, table, out.audit_failed);
}

}  // namespace

PYBIND11_MODULE(_cslab, m) {
  m.doc() = "Coherent-state path integrals and classical limits.";
  m.attr("__version__") = cslab::kVersion;

  auto base = py::register_exception<cslab::Error>(m, "Error");
  py::register_exception<cslab::ValidationError>(m, "ValidationError", base.ptr());

  m.def("commands", &cslab::experiment_commands);
  m.def("run", &run, py::arg("command"), py::arg("params") = std::map<std::string, std::string>{});
  m.def("defaults", [](const std::string& command) {
    return cslab::ExperimentConfig::parse(command, "").snapshot()["parameters"].dump();
  });

  m.def(
      "overlap",
      [](double bp, double bq, double kp, double kq, double hbar) {
        return cslab::overlap_analytic({bp, bq}, {kp, kq}, hbar);
      },
      py::arg("bra_p"), py::arg("bra_q"), py::arg("ket_p"), py::arg("ket_q"), py::arg("hbar") = 1.0);
  m.def(
      "coherent_state",
      [](double p, double q, std::size_t dim, double hbar) {
        const cslab::FockVector v = cslab::coherent_state({p, q}, dim, hbar);
        const cslab::Vector& a = v.amplitudes();
        return std::vector<cslab::cplx>(a.data(), a.data() + a.size());
      },
      py::arg("p"), py::arg("q"), py::arg("dim") = 64, py::arg("hbar") = 1.0,
      "Fock amplitudes of |p,q>; raises when the truncation loses weight.");
}
