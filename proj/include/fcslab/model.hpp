#ifndef FCSLAB_MODEL_HPP
#define FCSLAB_MODEL_HPP

#include <utility>

#include "fcslab/linalg.hpp"

namespace fcslab {

// Coupled system + confined reservoir. All cached fields are derived in
// build_model; instances are immutable afterwards.
struct OpenSystemModel {
  HermitianObservable system_hamiltonian;     // on the system factor
  DensityMatrix system_state;                 // initial system state, need not be faithful
  HermitianObservable reservoir_hamiltonian;  // on the reservoir factor
  HermitianObservable coupling;               // self-adjoint, on the product space
  double coupling_strength;
  double inverse_temperature;

  // cached
  HermitianObservable free_hamiltonian;   // H_S (x) 1 + 1 (x) H_R
  HermitianObservable total_hamiltonian;  // free + lambda * coupling
  DensityMatrix system_gibbs;
  DensityMatrix reservoir_gibbs;
  DensityMatrix initial_state;       // rho_S (x) reservoir_gibbs
  DensityMatrix reference_density;   // 1 (x) reservoir_gibbs, unnormalized

  int system_dim() const { return system_hamiltonian.dim(); }
  int reservoir_dim() const { return reservoir_hamiltonian.dim(); }
  int total_dim() const { return system_dim() * reservoir_dim(); }

  /// A |-> A (x) 1.
  Matrix embed_system(const Matrix& a) const;
  /// B |-> 1 (x) B.
  Matrix embed_reservoir(const Matrix& b) const;
};

OpenSystemModel build_model(HermitianObservable system_hamiltonian, DensityMatrix system_state,
                            HermitianObservable reservoir_hamiltonian, HermitianObservable coupling,
                            double coupling_strength, double inverse_temperature);

/// Energy flux observables (toward the system, out of the reservoir):
/// -i lambda [H_S (x) 1, V] and i lambda [1 (x) H_R, V].
std::pair<HermitianObservable, HermitianObservable> flux_observables(const OpenSystemModel& m);

/// Increase of system energy over [0, t], endpoint form (exact).
double heat_system(const OpenSystemModel& m, double t);

/// Decrease of reservoir energy over [0, t], endpoint form (exact).
double heat_reservoir(const OpenSystemModel& m, double t);

/// heat_reservoir - heat_system - lambda * <tau^t(V) - V>, an exact identity;
/// the returned value is pure round-off.
double first_law_residual(const OpenSystemModel& m, double t);

enum class HeatSide { System, Reservoir };

/// Validation-only flux-integral form of the heats: 64-node Gauss-Legendre
/// quadrature of the evolved flux expectation over [0, t].
double heat_via_flux_quadrature(const OpenSystemModel& m, double t, HeatSide side);

/// Uniform-in-time heat bound 2 * ||H_S (x) 1 + lambda V|| (largest singular value).
double heat_bound(const OpenSystemModel& m);

}  // namespace fcslab

#endif
