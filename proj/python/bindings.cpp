#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relfid/analytic.hpp"
#include "relfid/bounds.hpp"
#include "relfid/certify.hpp"
#include "relfid/cli.hpp"
#include "relfid/errors.hpp"
#include "relfid/heuristic.hpp"
#include "relfid/io.hpp"
#include "relfid/protosim.hpp"

namespace py = pybind11;
using namespace relfid;

namespace {

SearchConfig make_config(int restarts, std::uint64_t seed, int idler_dim) {
  SearchConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.idler_dim = idler_dim;
  return cfg;
}

py::dict bound_dict(const BoundValue& b) {
  py::dict d;
  d["value"] = b.value;
  d["kind"] = std::string(bound_kind_name(b.kind));
  d["idler_dim"] = b.idler_dim;
  d["converged"] = b.converged;
  return d;
}

ChannelPair pair_from_family(const std::string& family, const std::map<std::string, double>& params) {
  FamilySpec spec;
  spec.family = family_from_name(family);
  spec.params = params;
  return make_family(spec);
}

}  // namespace

PYBIND11_MODULE(_relfid, m) {
  m.doc() = "Relative-fidelity bounds for quantum channel discrimination";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<ChannelPair>(m, "ChannelPair")
      .def_static("from_family", &pair_from_family, py::arg("family"), py::arg("params"))
      .def_static(
          "from_json", [](const std::string& text) { return make_family(parse_family_spec(text)); },
          py::arg("text"))
      .def_property_readonly("dim_in", &ChannelPair::dim_in)
      .def_property_readonly("dim_out", &ChannelPair::dim_out)
      .def_property_readonly("c1_kraus", [](const ChannelPair& p) { return p.c1.kraus(); })
      .def_property_readonly("c2_kraus", [](const ChannelPair& p) { return p.c2.kraus(); })
      .def("is_entanglement_breaking",
           [](const ChannelPair& p) { return verified_entanglement_breaking(p); });

  m.def(
      "fidelity",
      [](const ComplexMatrix& a, const ComplexMatrix& b) {
        return fidelity(DensityMatrix(a), DensityMatrix(b));
      },
      py::arg("a"), py::arg("b"));
  m.def("trace_norm", &trace_norm, py::arg("m"));

  m.def("pauli_relfid_min", &analytic::pauli_relfid_min, py::arg("p"), py::arg("f"));
  m.def("unitary_relfid_min", &analytic::unitary_relfid_min, py::arg("theta"), py::arg("f"));
  m.def("unitary_fn_bound", &analytic::unitary_fn_bound, py::arg("theta"), py::arg("n"));
  m.def("eb_fcon", &analytic::eb_fcon, py::arg("delta_theta"));
  m.def("eb_relfid_min0", &analytic::eb_relfid_min0, py::arg("delta_theta"));
  m.def("eb_fopt", &analytic::eb_fopt, py::arg("delta_theta"));

  m.def(
      "fcon_min",
      [](const ChannelPair& p, int restarts, std::uint64_t seed, int idler_dim) {
        return bound_dict(fcon_min(p, make_config(restarts, seed, idler_dim)));
      },
      py::arg("pair"), py::arg("restarts") = 32, py::arg("seed") = 42, py::arg("idler_dim") = -1);
  m.def(
      "relfid_min",
      [](const ChannelPair& p, double f, int restarts, std::uint64_t seed, int idler_dim) {
        return bound_dict(relfid_min(p, f, make_config(restarts, seed, idler_dim)));
      },
      py::arg("pair"), py::arg("f"), py::arg("restarts") = 32, py::arg("seed") = 42, py::arg("idler_dim") = -1);

  m.def(
      "adaptivity_envelope",
      [](double fcon, double f) {
        const auto e = adaptivity_envelope(fcon, f);
        return std::make_pair(e.relfid, e.output_fidelity);
      },
      py::arg("fcon"), py::arg("f"));
  m.def("nuse_quadratic_bound", &nuse_quadratic_bound, py::arg("fcon"), py::arg("n"));
  m.def("perr_lower", &perr_lower, py::arg("fidelity"));

  m.def(
      "certify",
      [](const ChannelPair& p, double f, int budget, std::uint64_t seed, int idler_dim) {
        CertifyOptions o;
        o.budget = budget;
        o.seed = seed;
        o.idler_dim = idler_dim;
        const auto r = certify_lower_bound(p, f, o);
        py::dict d;
        d["lower"] = r.lower;
        d["upper"] = r.upper;
        d["budget_exhausted"] = r.budget_exhausted;
        py::list trace;
        for (const auto& t : r.trace) trace.append(py::make_tuple(t.iteration, t.lower, t.upper, t.n_points));
        d["trace"] = trace;
        return d;
      },
      py::arg("pair"), py::arg("f"), py::arg("budget") = 200, py::arg("seed") = 42, py::arg("idler_dim") = -1);

  m.def(
      "optimize_protocol",
      [](const ChannelPair& p, const std::string& kind, int uses, int ancilla_qubits, int restarts,
         std::uint64_t seed) {
        const auto r = optimize_protocol(protocol_kind_from_name(kind), uses, p, make_config(restarts, seed, -1),
                                         ancilla_qubits);
        py::dict d;
        d["fidelity"] = r.fidelity;
        d["converged"] = r.converged;
        d["witness"] = protocol_spec_to_json(r.witness, -1);
        return d;
      },
      py::arg("pair"), py::arg("kind"), py::arg("uses"), py::arg("ancilla_qubits") = 0, py::arg("restarts") = 8,
      py::arg("seed") = 42);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
