#include "fcslab/model.hpp"

#include <cmath>

namespace fcslab {

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Gauss-Legendre nodes and weights on [-1, 1] via the Golub-Welsch
// tridiagonal eigenproblem.
struct Quadrature {
  std::vector<double> nodes, weights;
};

Quadrature gauss_legendre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    q.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    q.weights[k] = 2.0 * v0 * v0;
  }
  return q;
}

}  // namespace

Matrix OpenSystemModel::embed_system(const Matrix& a) const {
  return kron(a, Matrix::Identity(reservoir_dim(), reservoir_dim()));
}

Matrix OpenSystemModel::embed_reservoir(const Matrix& b) const {
  return kron(Matrix::Identity(system_dim(), system_dim()), b);
}

OpenSystemModel build_model(HermitianObservable system_hamiltonian, DensityMatrix system_state,
                            HermitianObservable reservoir_hamiltonian, HermitianObservable coupling,
                            double coupling_strength, double inverse_temperature) {
  const int ds = system_hamiltonian.dim();
  const int dr = reservoir_hamiltonian.dim();
  if (system_state.dim() != ds)
    throw ValidationError("build_model: system_state dim " + std::to_string(system_state.dim()) +
                          " != system_hamiltonian dim " + std::to_string(ds));
  if (!system_state.normalized())
    throw ValidationError("build_model: system_state must be a normalized density matrix");
  if (coupling.dim() != ds * dr)
    throw ValidationError("build_model: coupling dim " + std::to_string(coupling.dim()) +
                          " != system dim * reservoir dim = " + std::to_string(ds * dr));
  if (!(inverse_temperature > 0) || !std::isfinite(inverse_temperature))
    throw ValidationError("build_model: inverse_temperature must be positive and finite");
  if (!std::isfinite(coupling_strength))
    throw ValidationError("build_model: coupling_strength must be finite");

  const Matrix id_s = Matrix::Identity(ds, ds);
  const Matrix id_r = Matrix::Identity(dr, dr);
  Matrix h_free = kron(system_hamiltonian.matrix(), id_r) + kron(id_s, reservoir_hamiltonian.matrix());
  Matrix h_total = h_free + coupling_strength * coupling.matrix();

  DensityMatrix system_gibbs = gibbs_state(system_hamiltonian, inverse_temperature);
  DensityMatrix reservoir_gibbs = gibbs_state(reservoir_hamiltonian, inverse_temperature);
  DensityMatrix initial(hermitize(kron(system_state.matrix(), reservoir_gibbs.matrix())));
  DensityMatrix reference(hermitize(kron(id_s, reservoir_gibbs.matrix())), /*normalized=*/false);

  return OpenSystemModel{std::move(system_hamiltonian),
                         std::move(system_state),
                         std::move(reservoir_hamiltonian),
                         std::move(coupling),
                         coupling_strength,
                         inverse_temperature,
                         HermitianObservable(std::move(h_free)),
                         HermitianObservable(std::move(h_total)),
                         std::move(system_gibbs),
                         std::move(reservoir_gibbs),
                         std::move(initial),
                         std::move(reference)};
}

std::pair<HermitianObservable, HermitianObservable> flux_observables(const OpenSystemModel& m) {
  const Matrix hs = m.embed_system(m.system_hamiltonian.matrix());
  const Matrix hr = m.embed_reservoir(m.reservoir_hamiltonian.matrix());
  const Matrix& v = m.coupling.matrix();
  const double lambda = m.coupling_strength;
  Matrix flux_in = hermitize(-kImag * lambda * commutator(hs, v));
  Matrix flux_out = hermitize(kImag * lambda * commutator(hr, v));
  return {HermitianObservable(std::move(flux_in)), HermitianObservable(std::move(flux_out))};
}

namespace {

double evolved_expectation(const OpenSystemModel& m, const Matrix& observable, double t) {
  const Matrix u = unitary_evolution(m.total_hamiltonian, t);
  const Matrix evolved = hermitize(u * observable * u.adjoint());
  return m.initial_state.expectation(evolved).real();
}

}  // namespace

double heat_system(const OpenSystemModel& m, double t) {
  const Matrix hs = m.embed_system(m.system_hamiltonian.matrix());
  return evolved_expectation(m, hs, t) - m.initial_state.expectation(hs).real();
}

double heat_reservoir(const OpenSystemModel& m, double t) {
  const Matrix hr = m.embed_reservoir(m.reservoir_hamiltonian.matrix());
  return m.initial_state.expectation(hr).real() - evolved_expectation(m, hr, t);
}

double first_law_residual(const OpenSystemModel& m, double t) {
  const Matrix& v = m.coupling.matrix();
  const double work = m.coupling_strength *
                      (evolved_expectation(m, v, t) - m.initial_state.expectation(v).real());
  return heat_reservoir(m, t) - heat_system(m, t) - work;
}

double heat_via_flux_quadrature(const OpenSystemModel& m, double t, HeatSide side) {
  static const Quadrature quad = gauss_legendre(64);
  const auto [flux_in, flux_out] = flux_observables(m);
  const Matrix& flux = (side == HeatSide::System) ? flux_in.matrix() : flux_out.matrix();
  double integral = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const double s = 0.5 * t * (quad.nodes[k] + 1.0);
    integral += 0.5 * t * quad.weights[k] * evolved_expectation(m, flux, s);
  }
  return integral;
}

double heat_bound(const OpenSystemModel& m) {
  const Matrix a =
      m.embed_system(m.system_hamiltonian.matrix()) + m.coupling_strength * m.coupling.matrix();
  return 2.0 * operator_norm(a);
}

}  // namespace fcslab
