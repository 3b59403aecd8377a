#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "srbb/circuit.hpp"
#include "srbb/errors.hpp"
#include "srbb/exact.hpp"
#include "srbb/ladder.hpp"
#include "srbb/statelib.hpp"
#include "srbb/variational.hpp"

namespace py = pybind11;
using namespace srbb;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

StateVector to_state(const ComplexArray& a) {
  if (a.ndim() != 1) throw ValidationError("state must be a 1-d array");
  return StateVector(std::vector<Complex>(a.data(), a.data() + a.size()));
}

ComplexArray from_state(const StateVector& s) {
  return ComplexArray(static_cast<py::ssize_t>(s.dim()), s.amplitudes().data());
}

ComplexArray from_matrix(const UnitaryMatrix& u) {
  const auto d = static_cast<py::ssize_t>(u.dim());
  ComplexArray out({d, d});
  auto m = out.mutable_unchecked<2>();
  for (py::ssize_t r = 0; r < d; ++r)
    for (py::ssize_t c = 0; c < d; ++c) m(r, c) = u.matrix()(r, c);
  return out;
}

py::dict stats_dict(const CircuitStats& s) {
  py::dict d;
  d["depth"] = s.depth;
  d["n_cnot"] = s.n_cnot;
  d["n_rot"] = s.n_rot;
  d["n_other"] = s.n_other;
  return d;
}

py::dict report_dict(const TrainReport& r) {
  py::dict d;
  d["optimizer"] = r.optimizer;
  d["loss"] = r.loss;
  d["loss_curve"] = r.loss_curve;
  d["final_loss"] = r.final_loss;
  d["final_error"] = r.final_error;
  d["evals"] = r.evals;
  d["wall_time"] = r.wall_time;
  if (r.dataset_error) d["dataset_error"] = *r.dataset_error;
  return d;
}

OptimizerConfig make_optimizer(const std::string& name, int n, int epochs) {
  if (name == "nelder-mead") return NelderMeadConfig::for_qubits(n);
  if (name == "adam") {
    AdamConfig c;
    c.epochs = epochs;
    return c;
  }
  throw ValidationError("unknown optimizer '" + name + "' (adam, nelder-mead)");
}

}  // namespace

PYBIND11_MODULE(_srbb_qsp, m) {
  m.doc() = "Diagonal Z-factor state preparation circuits";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<Circuit>(m, "Circuit")
      .def_property_readonly("n_qubits", &Circuit::n_qubits)
      .def_property_readonly("slot_count", &Circuit::slot_count)
      .def("__len__", [](const Circuit& c) { return c.gates().size(); })
      .def("stats", [](const Circuit& c) { return stats_dict(stats(c)); })
      .def("to_qasm", [](const Circuit& c) { return to_qasm(c); })
      .def("unitary", [](const Circuit& c) { return from_matrix(unitary_of(c)); })
      .def("run", [](const Circuit& c, const ComplexArray& input) { return from_state(run(c, to_state(input))); },
           py::arg("input"))
      .def("output_state", [](const Circuit& c) { return from_state(run(c, StateVector(c.n_qubits()))); });

  m.def("parse_qasm", [](const std::string& text) { return parse_qasm(text); }, py::arg("text"));

  m.def("predicted_counts", [](int n) {
    const CountPrediction p = predicted_counts(n);
    py::dict d;
    d["depth"] = p.depth;
    d["n_rot"] = p.n_rot;
    d["n_cnot"] = p.n_cnot;
    return d;
  }, py::arg("n"));
  m.def("modulus_template", &build_modulus_template, py::arg("n"));
  m.def("phase_template", &build_phase_template, py::arg("n"));

  m.def("exact_prepare", [](const ComplexArray& amps, bool with_tail) {
    const ExactPreparation p = exact_prepare(to_state(amps), with_tail);
    py::dict d;
    d["circuit"] = p.circuit;
    d["global_phase"] = p.global_phase;
    d["theta_modulus"] = p.theta_modulus;
    d["theta_phase"] = p.theta_phase;
    return d;
  }, py::arg("amplitudes"), py::arg("with_tail") = true);

  m.def("train", [](const ComplexArray& amps, const std::string& optimizer, const std::string& loss,
                    std::uint64_t seed, std::size_t dataset_size, int epochs, bool warm_start) {
    const StateVector target = to_state(amps);
    TwoStageConfig cfg;
    cfg.modulus = {loss_from_string(loss), make_optimizer(optimizer, target.n_qubits(), epochs)};
    cfg.phase = cfg.modulus;
    cfg.seed = seed;
    cfg.dataset_size = dataset_size;
    cfg.warm_start = warm_start;
    TwoStageResult r;
    {
      py::gil_scoped_release release;
      r = two_stage_train(target, cfg);
    }
    py::dict d;
    d["circuit"] = r.circuit;
    d["global_phase"] = r.global_phase;
    d["theta_modulus"] = r.theta_modulus;
    d["theta_phase"] = r.theta_phase;
    d["final_error"] = r.final_error;
    d["dataset_error"] = r.dataset_error;
    d["completed"] = r.completed;
    d["failure"] = r.failure;
    d["modulus_report"] = report_dict(r.modulus_report);
    if (r.phase_report) d["phase_report"] = report_dict(*r.phase_report);
    return d;
  }, py::arg("amplitudes"), py::arg("optimizer") = "nelder-mead", py::arg("loss") = "frobenius",
     py::arg("seed") = 0, py::arg("dataset_size") = 1000, py::arg("epochs") = 50,
     py::arg("warm_start") = false);

  m.def("haar_random_state", [](int n, std::uint64_t seed) { return from_state(haar_random_state(n, seed)); },
        py::arg("n"), py::arg("seed"));
  m.def("state_from_spec", [](const std::string& spec_json) {
    return from_state(realize(state_spec_from_json(nlohmann::json::parse(spec_json))));
  }, py::arg("spec_json"));
  m.def("fidelity", [](const ComplexArray& a, const ComplexArray& b) { return fidelity(to_state(a), to_state(b)); });
  m.def("trace_distance", [](const ComplexArray& a, const ComplexArray& b) {
    return trace_distance(to_state(a), to_state(b));
  });
  m.def("hellinger", [](const std::vector<double>& p, const std::vector<double>& q) {
    return hellinger(ProbabilityDistribution(p), ProbabilityDistribution(q));
  });
}
