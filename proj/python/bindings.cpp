#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcpn/cli.hpp"
#include "qcpn/dirac.hpp"
#include "qcpn/khomology.hpp"
#include "qcpn/ktheory.hpp"
#include "qcpn/ncalgebra.hpp"

namespace py = pybind11;

namespace {

// Reports cross the boundary as JSON text; the package decodes them.
std::string pairing_json(int n, int k, int N, double q, std::optional<int> cutoff) {
  return qcpn::to_json(qcpn::pairing(n, k, N, q, cutoff)).dump();
}

std::string pairing_matrix_json(int n, double q, std::optional<int> cutoff) {
  return qcpn::to_json(qcpn::pairing_matrix(n, q, cutoff)).dump();
}

std::string projection_json(int N, int n) { return qcpn::to_json(qcpn::verify_projection(N, n)).dump(); }

std::string qtrace(int N, int n) { return qcpn::qtrace(qcpn::projection(N, n)).to_string(); }

std::size_t relation_residuals(int n) {
  std::size_t nonzero = 0;
  for (const auto& r : qcpn::sphere_relation_residuals(n))
    if (!r.residual.is_zero()) ++nonzero;
  if (n >= 1) nonzero += qcpn::verify_cp_relations(n).violations.size();
  return nonzero;
}

std::string commutator_norms_json(int n, int i, int j, double q, const std::vector<int>& cutoffs, double d,
                                  std::uint64_t seed) {
  qcpn::PowerIterationOptions options;
  options.seed = seed;
  return qcpn::to_json(qcpn::commutator_norm(n, i, j, q, cutoffs, d, options)).dump();
}

std::string summability_json(int n, double d, double s, int cutoff) {
  return qcpn::to_json(qcpn::summability_diagnostic(n, d, s, cutoff)).dump();
}

py::tuple run(const std::string& command, int n, int k, int N, const std::string& q, std::optional<int> cutoff,
              std::optional<double> d, std::uint64_t seed, const std::string& format) {
  qcpn::cli::RunConfig config;
  qcpn::cli::RunResult result;
  try {
    config.command = qcpn::cli::parse_command(command);
    config.format = qcpn::cli::parse_format(format);
  } catch (const qcpn::cli::ConfigError& e) {
    return py::make_tuple(qcpn::cli::kExitConfig, std::string(), std::string(e.what()));
  }
  config.n = n;
  config.k = k;
  config.N = N;
  config.q = q;
  config.cutoff = cutoff;
  config.d = d;
  config.seed = seed;
  {
    py::gil_scoped_release release;
    result = qcpn::cli::run(config);
  }
  return py::make_tuple(result.status, result.report, result.error);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Index pairings, projections and spectra on quantum projective spaces";
  py::register_exception<qcpn::UncertifiedPairing>(m, "UncertifiedPairing", PyExc_RuntimeError);

  m.def("pairing_json", &pairing_json, py::arg("n"), py::arg("k"), py::arg("N"), py::arg("q"),
        py::arg("cutoff") = py::none(), py::call_guard<py::gil_scoped_release>());
  m.def("pairing_matrix_json", &pairing_matrix_json, py::arg("n"), py::arg("q"), py::arg("cutoff") = py::none(),
        py::call_guard<py::gil_scoped_release>());
  m.def("projection_json", &projection_json, py::arg("N"), py::arg("n"), py::call_guard<py::gil_scoped_release>());
  m.def("qtrace", &qtrace, py::arg("N"), py::arg("n"), "q-trace of P_N as a normal-form string");
  m.def("relation_residuals", &relation_residuals, py::arg("n"),
        "Number of sphere and CP relations with nonzero normalized residual");
  m.def("multiplicities", &qcpn::multiplicities, py::arg("n"), py::arg("max_lambda"));
  m.def("spectrum_multiplicity", &qcpn::spectrum_multiplicity, py::arg("n"), py::arg("lambda_"), py::arg("cutoff"));
  m.def("commutator_norms_json", &commutator_norms_json, py::arg("n"), py::arg("i"), py::arg("j"), py::arg("q"),
        py::arg("cutoffs"), py::arg("d") = 0.0, py::arg("seed") = 12345, py::call_guard<py::gil_scoped_release>());
  m.def("summability_json", &summability_json, py::arg("n"), py::arg("d"), py::arg("s"), py::arg("cutoff"));
  m.def("binomial", &qcpn::binomial, py::arg("a"), py::arg("b"));
  m.def("alternating_sum_identity", &qcpn::alternating_sum_identity, py::arg("i"), py::arg("j"));
  m.def("capconstr_count", &qcpn::capconstr_count, py::arg("n"), py::arg("k"), py::arg("t"));
  m.def("run", &run, py::arg("command"), py::arg("n") = 1, py::arg("k") = 1, py::arg("N") = 1,
        py::arg("q") = "1/2", py::arg("cutoff") = py::none(), py::arg("d") = py::none(), py::arg("seed") = 12345,
        py::arg("format") = "json");
}
