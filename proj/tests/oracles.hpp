// Independent test oracles. These deliberately avoid the library's spectral
// machinery; they cross-check it through different routes (series expansions,
// index arithmetic, raw eigensolvers).
#ifndef FCSLAB_TESTS_ORACLES_HPP
#define FCSLAB_TESTS_ORACLES_HPP

#include <cmath>

#include "fcslab/builders.hpp"
#include "fcslab/config.hpp"

namespace oracles {

using fcslab::Complex;
using fcslab::Matrix;

// Scaling-and-squaring Taylor exponential; the library never uses this path.
inline Matrix taylor_expm(const Matrix& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().sum();
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  const Matrix scaled = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

// Index-arithmetic tensor product.
inline Matrix index_kron(const Matrix& a, const Matrix& b) {
  const auto ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
  for (Eigen::Index r = 0; r < out.rows(); ++r)
    for (Eigen::Index c = 0; c < out.cols(); ++c)
      out(r, c) = a(r / br, c / bc) * b(r % br, c % bc);
  return out;
}

// Closed-form eigenvalues of a 2x2 Hermitian matrix.
inline std::pair<double, double> eig2(const Matrix& m) {
  const double tr = m.trace().real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  return {tr / 2 - disc, tr / 2 + disc};
}

inline Matrix random_dense(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

// The pinned 16-dimensional reference model: a gap-2 qubit with populations
// (0.75, 0.25) against a 3-site chain, coupled through the first site.
inline fcslab::OpenSystemModel make_q1r3(double lambda = 0.1) {
  fcslab::NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {0.75, 0.25}}}};
  fcslab::NamedBuilder res{"spin_chain_reservoir", {{"n", 3}, {"h", 1.0}, {"g", 0.3}}};
  return fcslab::build_named_model(fcslab::build_named_system(sys),
                                   fcslab::build_named_reservoir(res, 0), lambda, 1.0);
}

// Small 8-dimensional variant used where unit tests need speed.
inline fcslab::OpenSystemModel make_q1r2(double lambda = 0.3) {
  fcslab::NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {0.75, 0.25}}}};
  fcslab::NamedBuilder res{"spin_chain_reservoir", {{"n", 2}, {"h", 1.0}, {"g", 0.3}}};
  return fcslab::build_named_model(fcslab::build_named_system(sys),
                                   fcslab::build_named_reservoir(res, 0), lambda, 1.0);
}

// Trapezoid time average of the two-time reservoir weights, evaluated per
// frequency from a raw eigensolve (no degeneracy grouping anywhere).
inline fcslab::AtomicMeasure trapezoid_reservoir_average(const fcslab::OpenSystemModel& m,
                                                         double t_max, double step) {
  Eigen::SelfAdjointEigenSolver<Matrix> hr(m.reservoir_hamiltonian.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> hl(m.total_hamiltonian.matrix());
  const int dr = m.reservoir_dim();
  const int d = m.total_dim();
  const auto& basis = hl.eigenvectors();

  const auto steps = static_cast<std::size_t>(std::llround(t_max / step));
  std::vector<double> weights_t(steps + 1, 1.0);
  weights_t.front() = weights_t.back() = 0.5;
  double wsum = 0.0;
  for (double w : weights_t) wsum += w;

  // Trapezoid average of e^{i w t} for every frequency pair.
  Matrix phase_avg(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double omega = hl.eigenvalues()(i) - hl.eigenvalues()(j);
      Complex acc = 0.0;
      for (std::size_t k = 0; k <= steps; ++k)
        acc += weights_t[k] * std::exp(fcslab::kImag * (omega * (step * static_cast<double>(k))));
      phase_avg(i, j) = acc / wsum;
    }

  std::vector<fcslab::AtomicMeasure::Atom> atoms;
  for (int a = 0; a < dr; ++a) {
    const Matrix pa = hr.eigenvectors().col(a) * hr.eigenvectors().col(a).adjoint();
    const Matrix first = basis.adjoint() *
                         fcslab::kron(m.system_state.matrix(),
                                      pa * m.reservoir_gibbs.matrix() * pa) *
                         basis;
    for (int b = 0; b < dr; ++b) {
      const Matrix pb = hr.eigenvectors().col(b) * hr.eigenvectors().col(b).adjoint();
      const Matrix second = basis.adjoint() * m.embed_reservoir(pb) * basis;
      // tr(A U_t B U_t*) resolved over eigenpairs: sum_ij A_ij B_ji e^{it(E_j - E_i)}.
      Complex w = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) w += first(i, j) * second(j, i) * phase_avg(j, i);
      atoms.push_back({hr.eigenvalues()(a) - hr.eigenvalues()(b), w.real()});
    }
  }
  return fcslab::AtomicMeasure::from_atoms(std::move(atoms));
}

}  // namespace oracles

#endif
