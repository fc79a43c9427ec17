#ifndef FCSLAB_BUILDERS_HPP
#define FCSLAB_BUILDERS_HPP

#include <cstdint>
#include <json.hpp>
#include <string>

#include "fcslab/model.hpp"

namespace fcslab {

// Declarative model component: a builder name with a parameter map.
struct NamedBuilder {
  std::string name;
  nlohmann::json params;  // name -> value
};

// System factor produced by a builder: Hamiltonian, initial state, and the
// system side of the default coupling operator.
struct SystemPart {
  HermitianObservable hamiltonian;
  DensityMatrix state;
  Matrix coupling_op;
};

// Reservoir factor: Hamiltonian and the reservoir side of the default
// coupling operator.
struct ReservoirPart {
  HermitianObservable hamiltonian;
  Matrix coupling_op;
};

/// Builders: two_level {gap, rho}.
SystemPart build_named_system(const NamedBuilder& b);

/// Builders: spin_chain_reservoir {n, h, g, gz}, random_reservoir {n, seed,
/// scale}, truncated_oscillator {cutoff, omega0}. `seed` falls back to the
/// configuration seed when the builder omits it.
ReservoirPart build_named_reservoir(const NamedBuilder& b, std::uint64_t default_seed);

/// Assembles the coupled model; the coupling defaults to
/// system coupling_op (x) reservoir coupling_op.
OpenSystemModel build_named_model(const SystemPart& system, const ReservoirPart& reservoir,
                                  double coupling_strength, double inverse_temperature);

// Pauli matrices (2x2 blocks used throughout the builders and tests).
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// op acting on site `site` of an n-site chain of two-level cells.
Matrix chain_site_operator(const Matrix& op, int site, int sites);

}  // namespace fcslab

#endif
