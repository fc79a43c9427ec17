#include "fcslab/asymptotics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>

#include "fcslab/hash.hpp"

namespace fcslab {

namespace {

struct TwoTimeKernels {
  std::vector<double> levels;   // distinct eigenvalues of the factor Hamiltonian
  std::vector<Matrix> first;    // post-measurement weights, embedded
  std::vector<Matrix> second;   // embedded projectors of the second measurement
  bool second_minus_first;      // atom location convention
};

TwoTimeKernels measurement_kernels(const OpenSystemModel& m, MeasureSide side) {
  TwoTimeKernels k;
  if (side == MeasureSide::Reservoir) {
    const auto& res = m.reservoir_hamiltonian.spectral();
    k.levels = res.eigenvalues;
    for (const auto& p : res.projectors) {
      k.first.push_back(kron(m.system_state.matrix(),
                             p * m.reservoir_gibbs.matrix() * p));
      k.second.push_back(m.embed_reservoir(p));
    }
    k.second_minus_first = false;  // decrease: eps - eps'
  } else {
    const auto& res = m.system_hamiltonian.spectral();
    k.levels = res.eigenvalues;
    for (const auto& p : res.projectors) {
      k.first.push_back(kron(p * m.system_state.matrix() * p, m.reservoir_gibbs.matrix()));
      k.second.push_back(m.embed_system(p));
    }
    k.second_minus_first = true;  // increase: e' - e
  }
  return k;
}

double atom_location(const TwoTimeKernels& k, std::size_t first, std::size_t second) {
  return k.second_minus_first ? k.levels[second] - k.levels[first]
                              : k.levels[first] - k.levels[second];
}

}  // namespace

AtomicMeasure cesaro_fcs(const OpenSystemModel& m, MeasureSide side) {
  const TwoTimeKernels kernels = measurement_kernels(m, side);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.total_hamiltonian.matrix());
  if (solver.info() != Eigen::Success)
    throw ValidationError("cesaro_fcs: eigensolver failed on the coupled Hamiltonian");
  const Eigen::Index last = solver.eigenvalues().size() - 1;
  const double radius =
      std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(last)));
  const auto groups = degeneracy_groups(solver.eigenvalues(), default_degeneracy_tol(radius));
  const Matrix& basis = solver.eigenvectors();

  const std::size_t nf = kernels.levels.size();
  std::vector<Matrix> first_bar(nf), second_bar(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    first_bar[k] = basis.adjoint() * kernels.first[k] * basis;
    second_bar[k] = basis.adjoint() * kernels.second[k] * basis;
  }

  std::vector<AtomicMeasure::Atom> atoms;
  atoms.reserve(nf * nf);
  for (std::size_t b = 0; b < nf; ++b) {
    for (std::size_t a = 0; a < nf; ++a) {
      // Only equal-eigenvalue pairs survive the infinite-time average.
      Complex w = 0.0;
      for (const auto& [start, count] : groups)
        w += first_bar[b]
                 .block(start, start, count, count)
                 .cwiseProduct(second_bar[a].block(start, start, count, count).transpose())
                 .sum();
      atoms.push_back({atom_location(kernels, b, a), w.real()});
    }
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure fcs_limit_idealized(const OpenSystemModel& m, MeasureSide side) {
  const DensityMatrix coupled_gibbs = gibbs_state(m.total_hamiltonian, m.inverse_temperature);
  std::vector<AtomicMeasure::Atom> atoms;
  if (side == MeasureSide::Reservoir) {
    const auto& res = m.reservoir_hamiltonian.spectral();
    for (std::size_t b = 0; b < res.size(); ++b) {
      const double p_first = m.reservoir_gibbs.expectation(res.projectors[b]).real();
      for (std::size_t a = 0; a < res.size(); ++a) {
        const double p_second = coupled_gibbs.expectation(m.embed_reservoir(res.projectors[a])).real();
        atoms.push_back({res.eigenvalues[b] - res.eigenvalues[a], p_first * p_second});
      }
    }
  } else {
    const auto& res = m.system_hamiltonian.spectral();
    for (std::size_t b = 0; b < res.size(); ++b) {
      const double p_first = m.system_state.expectation(res.projectors[b]).real();
      for (std::size_t a = 0; a < res.size(); ++a) {
        const double p_second = coupled_gibbs.expectation(m.embed_system(res.projectors[a])).real();
        atoms.push_back({res.eigenvalues[a] - res.eigenvalues[b], p_first * p_second});
      }
    }
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure double_limit_fcs(const OpenSystemModel& m) {
  const auto& res = m.system_hamiltonian.spectral();
  std::vector<AtomicMeasure::Atom> atoms;
  for (std::size_t b = 0; b < res.size(); ++b) {
    const double p_first = m.system_state.expectation(res.projectors[b]).real();
    for (std::size_t a = 0; a < res.size(); ++a) {
      const double p_second = m.system_gibbs.expectation(res.projectors[a]).real();
      atoms.push_back({res.eigenvalues[a] - res.eigenvalues[b], p_first * p_second});
    }
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

double transfer_identity_residual(const OpenSystemModel& m, double t, double s) {
  const Complex lhs = fcs_generating_function(m, t, Complex(0.5, s));
  const double beta = m.inverse_temperature;
  const SplitGenerator transfer = liouvillean_split(m, LiouvilleanKind::Transfer);
  const Superoperator shift = transfer.exponential(kImag * (beta * s));
  const Matrix left = shift.apply(system_weighted_vector(m));
  const Matrix right = liouvillean_split(m, LiouvilleanKind::Coupled)
                           .exponential(kImag * t)
                           .apply(shift.apply(reference_vector(m)));
  return std::abs(lhs - hs_inner(left, right));
}

namespace {

// Projection onto the kernel of the coupled Liouvillean: the pinching
// X |-> sum_g P_g X P_g over distinct-eigenvalue projectors of H_lambda.
Matrix pinch_coupled(const OpenSystemModel& m, const Matrix& x) {
  const auto& res = m.total_hamiltonian.spectral();
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& p : res.projectors) out += p * x * p;
  return out;
}

}  // namespace

Complex generating_function_limit(const OpenSystemModel& m, double s, LimitMode mode) {
  const double beta = m.inverse_temperature;
  const SplitGenerator transfer = liouvillean_split(m, LiouvilleanKind::Transfer);
  if (mode == LimitMode::RankOne) {
    const Matrix omega_l = araki_vector(m);
    const Complex f1 =
        hs_inner(system_weighted_vector(m), transfer.exponential(-kImag * (beta * s)).apply(omega_l));
    const Complex f2 =
        hs_inner(omega_l, transfer.exponential(kImag * (beta * s)).apply(reference_vector(m)));
    const double norm2 = hs_norm(omega_l) * hs_norm(omega_l);
    return f1 * f2 / norm2;
  }
  const Superoperator shift = transfer.exponential(kImag * (beta * s));
  const Matrix left = shift.apply(system_weighted_vector(m));
  const Matrix right = shift.apply(reference_vector(m));
  return hs_inner(left, pinch_coupled(m, right));
}

Complex decoupled_generating_function(const OpenSystemModel& m, double gamma) {
  const auto& res = m.system_hamiltonian.spectral();
  const Matrix forward =
      matrix_function(res, [gamma](double e) { return std::exp(kImag * (gamma * e)); });
  return m.system_state.expectation(forward.adjoint()) * m.system_gibbs.expectation(forward);
}

std::pair<Complex, Complex> continuation_factors(const OpenSystemModel& m, double gamma) {
  const double beta = m.inverse_temperature;
  const SplitGenerator interaction = interaction_split(m);
  const HermitianObservable system_embedded(m.embed_system(m.system_hamiltonian.matrix()));

  double z_system = 0.0;
  {
    const auto& res = m.system_hamiltonian.spectral();
    for (std::size_t k = 0; k < res.size(); ++k)
      z_system += std::exp(-beta * res.eigenvalues[k]) * res.projectors[k].trace().real();
  }

  // First factor: right-multiplication weight e^{(beta/2 - i gamma) H_S (x) 1}
  // applied to the decoupled-group orbit of the decoupled Gibbs vector.
  const Complex w1 = Complex(beta / 2.0, -gamma);
  const Matrix right1 =
      matrix_function(system_embedded.spectral(), [w1](double e) { return std::exp(w1 * e); });
  const Matrix x = interaction.exponential(-kImag * gamma).apply(decoupled_gibbs_vector(m)) * right1;
  const Complex g1 = hs_inner(system_weighted_vector(m), x);

  // Second factor: commutant-side phase e^{i gamma H_S (x) 1} on the orbit of
  // the perturbed Gibbs vector.
  const Matrix omega_l = araki_vector(m);
  const Matrix right2 = matrix_function(system_embedded.spectral(), [gamma](double e) {
    return std::exp(kImag * (gamma * e));
  });
  const Matrix y = interaction.exponential(kImag * gamma).apply(omega_l) * right2;
  const Complex g2 = std::sqrt(z_system) * hs_inner(omega_l, y);
  return {g1, g2};
}

namespace {

ScanRow scan_row(const OpenSystemModel& m, double value, const DistanceSpec& metric,
                 const AtomicMeasure* running_average) {
  const auto start = std::chrono::steady_clock::now();
  ScanRow row;
  row.value = value;
  const AtomicMeasure reference = double_limit_fcs(m);
  const AtomicMeasure measure =
      running_average ? *running_average
                      : (metric.mode == LimitMode::KernelExact
                             ? cesaro_fcs(m, MeasureSide::Reservoir)
                             : fcs_limit_idealized(m, MeasureSide::Reservoir));
  row.kolmogorov = kolmogorov_distance(measure, reference);
  double sup = 0.0;
  for (int k = 0; k < metric.gamma_points; ++k) {
    const double gamma =
        metric.gamma_min +
        (metric.gamma_max - metric.gamma_min) * k / std::max(1, metric.gamma_points - 1);
    sup = std::max(sup, std::abs(char_function(measure, gamma) - char_function(reference, gamma)));
  }
  row.cf_sup = sup;
  row.mean_reservoir = measure.mean();
  row.mean_system = reference.mean();
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ScanRow error_row(double value, double seconds) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return ScanRow{value, nan, nan, nan, nan, seconds, false};
}

constexpr int kDirectPathCap = 128;

}  // namespace

ScanResult scan(const std::vector<OpenSystemModel>& family, ScanAxis axis,
                const DistanceSpec& metric) {
  if (family.empty()) throw ValidationError("scan: family must not be empty");
  ScanResult result{axis, metric.mode, {}};

  if (axis == ScanAxis::Time) {
    // Running trapezoid average of the finite-time reservoir measure.
    const OpenSystemModel& m = family.front();
    if (m.total_dim() > kDirectPathCap)
      throw ResourceError("scan: dimension " + std::to_string(m.total_dim()) +
                          " exceeds the direct-path cap " + std::to_string(kDirectPathCap));
    std::vector<double> grid = metric.time_grid;
    if (grid.empty()) throw ValidationError("scan: time axis requires a time grid");
    std::vector<AtomicMeasure::Atom> integral;
    AtomicMeasure previous = fcs_reservoir_direct(m, grid.front());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto start = std::chrono::steady_clock::now();
      const AtomicMeasure current = k == 0 ? previous : fcs_reservoir_direct(m, grid[k]);
      if (k > 0) {
        const double dt = grid[k] - grid[k - 1];
        if (dt <= 0) throw ValidationError("scan: time grid must be strictly increasing");
        for (const auto& a : previous.atoms()) integral.push_back({a.location, 0.5 * dt * a.weight});
        for (const auto& a : current.atoms()) integral.push_back({a.location, 0.5 * dt * a.weight});
      }
      AtomicMeasure average = current;
      if (grid[k] > 0 && !integral.empty()) {
        auto scaled = integral;
        for (auto& a : scaled) a.weight /= grid[k];
        average = AtomicMeasure::from_atoms(std::move(scaled));
      }
      ScanRow row = scan_row(m, grid[k], metric, &average);
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.rows.push_back(row);
      previous = current;
    }
    return result;
  }

  std::vector<std::future<ScanRow>> futures;
  futures.reserve(family.size());
  for (const auto& m : family) {
    futures.push_back(std::async(std::launch::async, [&m, axis, &metric] {
      const double value =
          axis == ScanAxis::Lambda ? m.coupling_strength : static_cast<double>(m.reservoir_dim());
      if (m.total_dim() > kDirectPathCap) return error_row(value, 0.0);
      try {
        return scan_row(m, value, metric, nullptr);
      } catch (const ResourceError&) {
        return error_row(value, 0.0);
      }
    }));
  }
  for (auto& f : futures) result.rows.push_back(f.get());
  return result;
}

void ScanResult::to_csv(std::ostream& out) const {
  out << "axis,value,kolmogorov,cf_sup,mean_R,mean_S,seconds\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.3f\n", to_string(axis),
                  r.value, r.kolmogorov, r.cf_sup, r.mean_reservoir, r.mean_system, r.seconds);
    out << buf;
  }
}

LimitReport limit_report(const OpenSystemModel& m, MeasureSide side, LimitMode mode) {
  LimitReport report{mode,
                     mode == LimitMode::KernelExact ? cesaro_fcs(m, side)
                                                    : fcs_limit_idealized(m, side),
                     {},
                     {}};
  const AtomicMeasure reference = double_limit_fcs(m);
  report.distances["kolmogorov_vs_double_limit"] =
      kolmogorov_distance(report.measure, reference);
  double sup = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double gamma = -10.0 + 0.1 * k;
    sup = std::max(sup,
                   std::abs(char_function(report.measure, gamma) - char_function(reference, gamma)));
  }
  report.distances["cf_sup_vs_double_limit"] = sup;
  // First and second moment gaps are checked quantities; higher moments are
  // recorded without asserting convergence.
  for (int k = 1; k <= 4; ++k)
    report.distances["moment" + std::to_string(k) + "_gap"] =
        std::abs(measure_moment(report.measure, k) - measure_moment(reference, k));

  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const Matrix& a) {
    h = fnv1a64(a.data(), sizeof(Complex) * a.size(), h);
  };
  mix(m.system_hamiltonian.matrix());
  mix(m.system_state.matrix());
  mix(m.reservoir_hamiltonian.matrix());
  mix(m.coupling.matrix());
  const double params[2] = {m.coupling_strength, m.inverse_temperature};
  h = fnv1a64(params, sizeof(params), h);
  report.model_fingerprint = to_hex(h);
  return report;
}

const char* to_string(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::Time: return "time";
    case ScanAxis::Lambda: return "lambda";
    case ScanAxis::Size: return "size";
  }
  return "?";
}

const char* to_string(LimitMode mode) {
  return mode == LimitMode::KernelExact ? "cesaro_exact" : "mixing_idealized";
}

}  // namespace fcslab
