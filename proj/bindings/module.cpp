#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fcslab/verify.hpp"

namespace py = pybind11;
using namespace fcslab;

namespace {

std::pair<Eigen::VectorXd, Eigen::VectorXd> measure_arrays(const AtomicMeasure& mu) {
  Eigen::VectorXd locations(mu.size()), weights(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    locations(k) = mu.atoms()[k].location;
    weights(k) = mu.atoms()[k].weight;
  }
  return {locations, weights};
}

AtomicMeasure measure_from_arrays(const Eigen::VectorXd& locations,
                                  const Eigen::VectorXd& weights) {
  if (locations.size() != weights.size())
    throw ValidationError("measure: locations and weights must have equal length");
  std::vector<AtomicMeasure::Atom> atoms;
  for (Eigen::Index k = 0; k < locations.size(); ++k) atoms.push_back({locations(k), weights(k)});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

MeasureSide side_from_string(const std::string& side) {
  if (side == "system") return MeasureSide::System;
  if (side == "reservoir") return MeasureSide::Reservoir;
  throw ValidationError("side must be 'system' or 'reservoir'");
}

LimitMode mode_from_string(const std::string& mode) {
  if (mode == "kernel_exact" || mode == "cesaro_exact") return LimitMode::KernelExact;
  if (mode == "rank_one" || mode == "mixing_idealized") return LimitMode::RankOne;
  throw ValidationError("mode must be 'kernel_exact' or 'rank_one'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Counting statistics of energy exchange between a finite quantum system and a "
            "confined thermal reservoir";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<OpenSystemModel>(m, "Model")
      .def(py::init([](const Matrix& system_h, const Matrix& system_state,
                       const Matrix& reservoir_h, const Matrix& coupling, double lam,
                       double beta) {
             return build_model(HermitianObservable(system_h), DensityMatrix(system_state),
                                HermitianObservable(reservoir_h), HermitianObservable(coupling),
                                lam, beta);
           }),
           py::arg("system_hamiltonian"), py::arg("system_state"),
           py::arg("reservoir_hamiltonian"), py::arg("coupling"), py::arg("coupling_strength"),
           py::arg("inverse_temperature"))
      .def_property_readonly("system_dim", &OpenSystemModel::system_dim)
      .def_property_readonly("reservoir_dim", &OpenSystemModel::reservoir_dim)
      .def_property_readonly("total_dim", &OpenSystemModel::total_dim)
      .def_property_readonly("coupling_strength",
                             [](const OpenSystemModel& m) { return m.coupling_strength; })
      .def_property_readonly("inverse_temperature",
                             [](const OpenSystemModel& m) { return m.inverse_temperature; })
      .def_property_readonly("total_hamiltonian",
                             [](const OpenSystemModel& m) { return m.total_hamiltonian.matrix(); })
      .def("heat_system", &heat_system, py::arg("t"))
      .def("heat_reservoir", &heat_reservoir, py::arg("t"))
      .def("first_law_residual", &first_law_residual, py::arg("t"))
      .def("fcs_system", [](const OpenSystemModel& m, double t) {
        return measure_arrays(fcs_system(m, t));
      }, py::arg("t"))
      .def("fcs_reservoir_direct", [](const OpenSystemModel& m, double t) {
        return measure_arrays(fcs_reservoir_direct(m, t));
      }, py::arg("t"))
      .def("fcs_reservoir_modular",
           [](const OpenSystemModel& m, double t, int dense_cap, bool structured) {
             return measure_arrays(fcs_reservoir_modular(m, t, {dense_cap, structured}));
           },
           py::arg("t"), py::arg("dense_cap") = 48, py::arg("structured") = false)
      .def("generating_function", &fcs_generating_function, py::arg("t"), py::arg("alpha"))
      .def("cesaro_fcs", [](const OpenSystemModel& m, const std::string& side) {
        return measure_arrays(cesaro_fcs(m, side_from_string(side)));
      }, py::arg("side"))
      .def("fcs_limit_idealized", [](const OpenSystemModel& m, const std::string& side) {
        return measure_arrays(fcs_limit_idealized(m, side_from_string(side)));
      }, py::arg("side"))
      .def("double_limit_fcs",
           [](const OpenSystemModel& m) { return measure_arrays(double_limit_fcs(m)); })
      .def("transfer_identity_residual", &transfer_identity_residual, py::arg("t"), py::arg("s"))
      .def("generating_function_limit",
           [](const OpenSystemModel& m, double s, const std::string& mode) {
             return generating_function_limit(m, s, mode_from_string(mode));
           },
           py::arg("s"), py::arg("mode") = "kernel_exact")
      .def("decoupled_generating_function", &decoupled_generating_function, py::arg("gamma"))
      .def("continuation_factors", &continuation_factors, py::arg("gamma"));

  m.attr("__version__") = "0.1.0";

  m.def("two_level_system",
        [](double gap, std::vector<double> rho) {
          NamedBuilder b{"two_level", {{"gap", gap}, {"rho", rho}}};
          const SystemPart part = build_named_system(b);
          return py::make_tuple(part.hamiltonian.matrix(), part.state.matrix(), part.coupling_op);
        },
        py::arg("gap"), py::arg("rho") = std::vector<double>{0.5, 0.5},
        "Hamiltonian, state, and default coupling operator of a two-level system");
  m.def("spin_chain_reservoir",
        [](int n, double h, double g, double gz) {
          NamedBuilder b{"spin_chain_reservoir", {{"n", n}, {"h", h}, {"g", g}, {"gz", gz}}};
          const ReservoirPart part = build_named_reservoir(b, 0);
          return py::make_tuple(part.hamiltonian.matrix(), part.coupling_op);
        },
        py::arg("n"), py::arg("h"), py::arg("g") = 0.0, py::arg("gz") = 0.0,
        "Hamiltonian and default coupling operator of an open spin chain");
  m.def("random_reservoir",
        [](int n, std::uint64_t seed, double scale) {
          NamedBuilder b{"random_reservoir",
                         {{"n", n}, {"seed", static_cast<double>(seed)}, {"scale", scale}}};
          const ReservoirPart part = build_named_reservoir(b, 0);
          return py::make_tuple(part.hamiltonian.matrix(), part.coupling_op);
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("scale") = 1.0);
  m.def("truncated_oscillator",
        [](int cutoff, double omega0) {
          NamedBuilder b{"truncated_oscillator", {{"cutoff", cutoff}, {"omega0", omega0}}};
          const ReservoirPart part = build_named_reservoir(b, 0);
          return py::make_tuple(part.hamiltonian.matrix(), part.coupling_op);
        },
        py::arg("cutoff"), py::arg("omega0"));

  m.def("gibbs_state",
        [](const Matrix& h, double beta) {
          return gibbs_state(HermitianObservable(h), beta).matrix();
        },
        py::arg("hamiltonian"), py::arg("beta"));
  m.def("spectral_resolution",
        [](const Matrix& h, double tol) {
          const auto res = spectral_resolution(h, tol);
          return py::make_tuple(res.eigenvalues, res.projectors);
        },
        py::arg("hamiltonian"), py::arg("degeneracy_tol") = -1.0);
  m.def("heisenberg_evolve",
        [](const Matrix& a, const Matrix& h, double t) {
          return heisenberg_evolve(HermitianObservable(a), HermitianObservable(h), t).matrix();
        },
        py::arg("observable"), py::arg("hamiltonian"), py::arg("t"));
  m.def("kron", [](const Matrix& a, const Matrix& b) { return kron(a, b); });

  m.def("char_function",
        [](const Eigen::VectorXd& locations, const Eigen::VectorXd& weights, double gamma) {
          return char_function(measure_from_arrays(locations, weights), gamma);
        },
        py::arg("locations"), py::arg("weights"), py::arg("gamma"));
  m.def("measure_moment",
        [](const Eigen::VectorXd& locations, const Eigen::VectorXd& weights, int k) {
          return measure_moment(measure_from_arrays(locations, weights), k);
        },
        py::arg("locations"), py::arg("weights"), py::arg("k"));
  m.def("kolmogorov_distance",
        [](const Eigen::VectorXd& loc_a, const Eigen::VectorXd& w_a, const Eigen::VectorXd& loc_b,
           const Eigen::VectorXd& w_b) {
          return kolmogorov_distance(measure_from_arrays(loc_a, w_a),
                                     measure_from_arrays(loc_b, w_b));
        },
        py::arg("locations_a"), py::arg("weights_a"), py::arg("locations_b"),
        py::arg("weights_b"));
}
