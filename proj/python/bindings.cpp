#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nmrqc/acceptance.hpp"
#include "nmrqc/automaton.hpp"
#include "nmrqc/config.hpp"
#include "nmrqc/core_model.hpp"
#include "nmrqc/decoherence.hpp"
#include "nmrqc/dnp.hpp"
#include "nmrqc/entangled.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/nmr_readout.hpp"
#include "nmrqc/scenarios.hpp"

namespace py = pybind11;
using namespace nmrqc;

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = "1.0.0";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", error.ptr());
  py::register_exception<StepFailure>(m, "StepFailure", error.ptr());
  py::register_exception<EncodingBlocked>(m, "EncodingBlocked", error.ptr());
  py::register_exception<InvalidPort>(m, "InvalidPort", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<ScenarioError>(m, "ScenarioError", error.ptr());

  py::class_<DonorSpecies>(m, "DonorSpecies")
      .def(py::init<>())
      .def_readwrite("gamma_e", &DonorSpecies::gamma_e)
      .def_readwrite("gamma_i", &DonorSpecies::gamma_i)
      .def_readwrite("hyperfine_a", &DonorSpecies::hyperfine_a)
      .def_readwrite("label", &DonorSpecies::label);
  m.def("phosphorus31", &phosphorus31);
  m.def("species_preset", [](const std::string& s) { return species_preset(s); });

  py::class_<Environment>(m, "Environment")
      .def(py::init<>())
      .def(py::init([](double b, double t, double ti, double rf) {
             Environment e;
             e.b_field = b;
             e.temp_lattice = t;
             e.temp_nuclear = ti;
             e.rf_amp = rf;
             return e;
           }),
           py::arg("b_field"), py::arg("temp_lattice") = 1.0, py::arg("temp_nuclear") = 1.0,
           py::arg("rf_amp") = 0.0)
      .def_readwrite("b_field", &Environment::b_field)
      .def_readwrite("temp_lattice", &Environment::temp_lattice)
      .def_readwrite("temp_nuclear", &Environment::temp_nuclear)
      .def_readwrite("rf_amp", &Environment::rf_amp)
      .def_readwrite("mw_amp", &Environment::mw_amp);

  py::class_<TransitionSet>(m, "TransitionSet")
      .def_readonly("omega_a_plus", &TransitionSet::omega_a_plus)
      .def_readonly("omega_a_minus", &TransitionSet::omega_a_minus)
      .def_readonly("omega_b", &TransitionSet::omega_b)
      .def_readonly("omega_c", &TransitionSet::omega_c)
      .def_readonly("omega_d", &TransitionSet::omega_d)
      .def_readonly("omega_s", &TransitionSet::omega_s);
  m.def("transition_frequencies", &transition_frequencies);
  m.def("field_parameter", py::overload_cast<const DonorSpecies&, double>(&field_parameter));
  m.def("breit_rabi_energy", &breit_rabi_energy);
  m.def("epsilon_pseudo_pure", &epsilon_pseudo_pure);
  m.def("max_qubits_dynamic", &max_qubits_dynamic);

  py::class_<GainFactor>(m, "GainFactor")
      .def_readonly("eta", &GainFactor::eta)
      .def_readonly("b_eff", &GainFactor::b_eff)
      .def_readonly("ratio", &GainFactor::ratio)
      .def_readonly("ratio_approx", &GainFactor::ratio_approx);
  m.def("gain_factor", &gain_factor);

  py::class_<RegisterGeometry>(m, "RegisterGeometry")
      .def(py::init<>())
      .def_readwrite("pitch_x", &RegisterGeometry::pitch_x)
      .def_readwrite("pitch_y", &RegisterGeometry::pitch_y)
      .def_readwrite("plate_thickness", &RegisterGeometry::plate_thickness)
      .def_readwrite("qubits_per_molecule", &RegisterGeometry::qubits_per_molecule)
      .def_readwrite("molecules_per_block", &RegisterGeometry::molecules_per_block)
      .def("total_molecules", &RegisterGeometry::total_molecules);
  m.def("snr_ensemble", &snr_ensemble);
  m.def("snr_ensemble_min_molecules", &snr_ensemble_min_molecules);

  py::class_<NoiseChannel>(m, "NoiseChannel")
      .def(py::init([](double variance, double corr_time) { return NoiseChannel{variance, corr_time, NoiseKind::custom}; }),
           py::arg("variance"), py::arg("corr_time"))
      .def_readwrite("variance", &NoiseChannel::variance)
      .def_readwrite("corr_time", &NoiseChannel::corr_time);
  m.def("decrement", &decrement);
  m.def("decoherence_time", &decoherence_time);
  m.def("required_field_over_temp",
        [](double target) { return required_field_over_temp(phosphorus31(), target).exact; });

  py::class_<RelaxationRates>(m, "RelaxationRates")
      .def(py::init<>())
      .def_readwrite("tau_b", &RelaxationRates::tau_b)
      .def_readwrite("t_par_a", &RelaxationRates::t_par_a)
      .def_readwrite("w_pump", &RelaxationRates::w_pump)
      .def_readwrite("temp", &RelaxationRates::temp);
  m.def("dnp_steady_state_nuclear_polarization", [](const RelaxationRates& r) { return dnp_steady_state(r).p_i(); });

  py::class_<CorrelatedPhaseModel>(m, "CorrelatedPhaseModel")
      .def_static("constant", &CorrelatedPhaseModel::constant, py::arg("sigma1_sq"), py::arg("sigma2_sq"),
                  py::arg("rho12"), py::arg("sigma_i_sq") = 0.0);
  m.def("epr_decrement", &epr_decrement);
  m.def("bell_decrement", &bell_decrement);
  m.def("averaged_epr", &averaged_epr, py::arg("model"), py::arg("t"), py::arg("sign") = 1);

  m.def("apply_program_text", [](const std::string& chain, const std::string& program) {
    return apply_program(ChainState::parse(chain), parse_program(program), ChainCouplings::defaults()).to_string();
  });
  m.def(
      "encode_logical",
      [](const std::string& chain, std::size_t position, int bit) {
        const auto r = encode_logical(ChainState::parse(chain), position, bit, ChainCouplings::defaults());
        return py::make_tuple(r.state.to_string(), serialize_program(r.program));
      },
      py::arg("chain"), py::arg("position"), py::arg("bit"));

  m.def("scenario_names", [] {
    std::vector<std::string> out;
    for (const auto& s : scenario_registry()) out.push_back(s.name);
    return out;
  });
  m.def(
      "run_config",
      [](const std::string& path, const std::string& out_dir, std::optional<std::uint64_t> seed, unsigned jobs) {
        RunOptions ro;
        ro.out_dir = out_dir;
        ro.seed = seed;
        ro.jobs = jobs;
        py::gil_scoped_release release;
        return run_config(load_config(path), ro).scenarios;
      },
      py::arg("path"), py::arg("out_dir"), py::arg("seed") = std::nullopt, py::arg("jobs") = 1);
  m.def(
      "run_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id);
        }
        return py::make_tuple(r.pass, r.details);
      },
      py::arg("id"));
}
