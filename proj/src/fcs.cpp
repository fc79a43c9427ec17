#include "fcslab/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace fcslab {

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms, double coalescing_tol) {
  if (!(coalescing_tol > 0)) throw ValidationError("AtomicMeasure: coalescing_tol must be > 0");
  for (auto& a : atoms) {
    if (a.weight < -1e-12)
      throw ValidationError("AtomicMeasure: weight " + std::to_string(a.weight) +
                            " below -1e-12 at location " + std::to_string(a.location));
    if (a.weight < 0) a.weight = 0.0;
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });

  AtomicMeasure mu;
  mu.coalescing_tol_ = coalescing_tol;
  for (const auto& a : atoms) {
    if (!mu.atoms_.empty() && a.location - mu.atoms_.back().location <= coalescing_tol) {
      Atom& last = mu.atoms_.back();
      const double w = last.weight + a.weight;
      last.location = w > 0 ? (last.location * last.weight + a.location * a.weight) / w
                            : 0.5 * (last.location + a.location);
      last.weight = w;
    } else {
      mu.atoms_.push_back(a);
    }
  }
  // Weights at or below 1e-15 are round-off of an exact zero; dropping them
  // moves the mass and mean by far less than the 1e-10 / 1e-9 contracts.
  std::erase_if(mu.atoms_, [](const Atom& a) { return a.weight <= 1e-15; });
  const double mass = mu.mass();
  if (std::abs(mass - 1.0) > 1e-10)
    throw ValidationError("AtomicMeasure: total mass " + std::to_string(mass) +
                          " differs from 1 beyond 1e-10");
  for (auto& a : mu.atoms_) {
    a.weight /= mass;
    // Locations inside the round-off floor are the zero atom.
    if (std::abs(a.location) <= 1e-12) a.location = 0.0;
  }
  return mu;
}

AtomicMeasure AtomicMeasure::point_mass(double location) {
  AtomicMeasure mu;
  mu.atoms_.push_back({location, 1.0});
  return mu;
}

double AtomicMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

double AtomicMeasure::mean() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.location * a.weight;
  return m;
}

void AtomicMeasure::to_csv(std::ostream& out) const {
  out << "location,weight\n";
  char buf[64];
  for (const auto& a : atoms_) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", a.location, a.weight);
    out << buf;
  }
}

namespace {

// Shared kernel of the two direct measures: both are double sums
//   weight(a, b) = tr(A_a . U_t B_b U_t*)
// over the spectral projectors of one factor Hamiltonian.
AtomicMeasure two_time_measure(const OpenSystemModel& m, double t,
                               const SpectralResolution& factor,
                               const std::function<Matrix(const Matrix&)>& first_weight,
                               const std::function<Matrix(const Matrix&)>& embed_second,
                               bool second_minus_first) {
  const Matrix u = unitary_evolution(m.total_hamiltonian, t);
  std::vector<Matrix> evolved;
  evolved.reserve(factor.size());
  for (const auto& p : factor.projectors) evolved.push_back(u * embed_second(p) * u.adjoint());

  std::vector<AtomicMeasure::Atom> atoms;
  atoms.reserve(factor.size() * factor.size());
  for (std::size_t b = 0; b < factor.size(); ++b) {
    const Matrix a_first = first_weight(factor.projectors[b]);
    for (std::size_t a = 0; a < factor.size(); ++a) {
      const double w = (a_first * evolved[a]).trace().real();
      const double loc = second_minus_first ? factor.eigenvalues[a] - factor.eigenvalues[b]
                                            : factor.eigenvalues[b] - factor.eigenvalues[a];
      atoms.push_back({loc, w});
    }
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

}  // namespace

AtomicMeasure fcs_system(const OpenSystemModel& m, double t) {
  const auto& res = m.system_hamiltonian.spectral();
  const Matrix& rho = m.system_state.matrix();
  const Matrix& wr = m.reservoir_gibbs.matrix();
  return two_time_measure(
      m, t, res, [&](const Matrix& p) { return kron(p * rho * p, wr); },
      [&](const Matrix& p) { return m.embed_system(p); },
      /*second_minus_first=*/true);
}

AtomicMeasure fcs_reservoir_direct(const OpenSystemModel& m, double t) {
  const auto& res = m.reservoir_hamiltonian.spectral();
  const Matrix& rho = m.system_state.matrix();
  const Matrix& wr = m.reservoir_gibbs.matrix();
  return two_time_measure(
      m, t, res, [&](const Matrix& p) { return kron(rho, p * wr * p); },
      [&](const Matrix& p) { return m.embed_reservoir(p); },
      /*second_minus_first=*/false);
}

AtomicMeasure fcs_reservoir_modular(const OpenSystemModel& m, double t,
                                    const ModularPathOptions& opts) {
  const double beta = m.inverse_temperature;
  const Matrix zeta = evolved_reference_density(m, t);
  const Matrix& eta = m.reference_density.matrix();
  const Matrix omega_vec = standard_vector(m);
  const int d = m.total_dim();

  std::vector<AtomicMeasure::Atom> atoms;
  if (d <= opts.dense_cap) {
    // Spectral measure of (1/beta) log Delta via the vectorized operator
    // (eta^{-1})^T (x) zeta acting on vec(Omega).
    const Matrix eta_inv = matrix_function(spectral_resolution(eta),
                                           [](double e) { return Complex(1.0 / e, 0.0); });
    const Matrix delta = kron(eta_inv.transpose(), zeta);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(delta));
    const Eigen::VectorXcd omega_flat = omega_vec.reshaped();
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      const double ev = solver.eigenvalues()(k);
      if (ev <= 0)
        throw DomainError("fcs_reservoir_modular: nonpositive relative modular eigenvalue");
      const double w = std::norm(solver.eigenvectors().col(k).dot(omega_flat));
      atoms.push_back({std::log(ev) / beta, w});
    }
  } else if (opts.structured) {
    // Eigenpairs of X -> zeta X eta^{-1} factorize as |u_i><w_j| with
    // eigenvalue zeta_i / eta_j.
    Eigen::SelfAdjointEigenSolver<Matrix> zs(zeta), es(eta);
    const Matrix overlap = zs.eigenvectors().adjoint() * omega_vec * es.eigenvectors();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double ev = zs.eigenvalues()(i) / es.eigenvalues()(j);
        if (ev <= 0)
          throw DomainError("fcs_reservoir_modular: nonpositive relative modular eigenvalue");
        atoms.push_back({std::log(ev) / beta, std::norm(overlap(i, j))});
      }
  } else {
    throw ResourceError("fcs_reservoir_modular: dimension " + std::to_string(d) +
                        " exceeds dense cap " + std::to_string(opts.dense_cap) +
                        " and the structured path is not enabled");
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

Complex fcs_generating_function(const OpenSystemModel& m, double t, Complex alpha) {
  if (alpha.real() < 0.0 || alpha.real() > 1.0)
    throw DomainError("fcs_generating_function: Re alpha must lie in [0, 1], got " +
                      std::to_string(alpha.real()));
  const Matrix zeta = evolved_reference_density(m, t);
  const Matrix& eta = m.reference_density.matrix();
  const Matrix omega_vec = standard_vector(m);
  const Matrix x = relative_modular_power(zeta, eta, alpha, omega_vec);
  return hs_inner(omega_vec, x);
}

Complex char_function(const AtomicMeasure& mu, double gamma) {
  Complex out = 0.0;
  for (const auto& a : mu.atoms()) out += a.weight * std::exp(kImag * (gamma * a.location));
  return out;
}

double measure_moment(const AtomicMeasure& mu, int k) {
  if (k < 1) throw ValidationError("measure_moment: order must be >= 1");
  double out = 0.0;
  for (const auto& a : mu.atoms()) out += a.weight * std::pow(a.location, k);
  return out;
}

double kolmogorov_distance(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  const double tol = std::max(mu.coalescing_tol(), nu.coalescing_tol());
  std::vector<std::pair<double, int>> events;  // (location, which measure)
  for (const auto& a : mu.atoms()) events.push_back({a.location, 0});
  for (const auto& a : nu.atoms()) events.push_back({a.location, 1});
  std::sort(events.begin(), events.end());

  std::size_t i = 0, j = 0;
  double cdf_mu = 0.0, cdf_nu = 0.0, dist = 0.0;
  std::size_t k = 0;
  while (k < events.size()) {
    // Consume one cluster of locations within tol before comparing CDFs.
    double hi = events[k].first;
    while (k < events.size() && events[k].first - hi <= tol) {
      hi = events[k].first;
      if (events[k].second == 0)
        cdf_mu += mu.atoms()[i++].weight;
      else
        cdf_nu += nu.atoms()[j++].weight;
      ++k;
    }
    dist = std::max(dist, std::abs(cdf_mu - cdf_nu));
  }
  return dist;
}

}  // namespace fcslab
