#ifndef FCSLAB_LINALG_HPP
#define FCSLAB_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <vector>

#include "fcslab/errors.hpp"

namespace fcslab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

constexpr Complex kImag{0.0, 1.0};

/// (A + A*)/2. Applied after conjugation chains to bound round-off drift.
Matrix hermitize(const Matrix& a);

/// Largest deviation |A - A*| relative to the largest entry of A.
double hermiticity_defect(const Matrix& a);

/// Tensor (Kronecker) product, row-major block convention: (A (x) B).
Matrix kron(const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt inner product tr(X* Y).
Complex hs_inner(const Matrix& x, const Matrix& y);

/// Hilbert-Schmidt norm sqrt(tr(X* X)).
double hs_norm(const Matrix& x);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// Seeded dense Hermitian matrix with independent Gaussian entries.
Matrix random_hermitian(int dim, std::mt19937_64& rng);

// Spectral resolution of a Hermitian matrix: ascending distinct eigenvalues
// with their orthogonal spectral projectors. Eigenvalues closer than the
// degeneracy tolerance are merged into a single projector.
struct SpectralResolution {
  std::vector<double> eigenvalues;  // distinct, ascending
  std::vector<Matrix> projectors;   // same length, each idempotent
  int dim = 0;

  std::size_t size() const { return eigenvalues.size(); }
  double spectral_radius() const;
  /// Reconstructs sum_e e P_e.
  Matrix reconstruct() const;
};

/// Default grouping tolerance: 1e-9 * max(1, spectral radius).
double default_degeneracy_tol(double spectral_radius);

/// Index ranges (start, count) of an ascending sequence, grouped by chaining
/// consecutive gaps <= tol. Shared by spectral resolutions and every
/// equal-eigenvalue projection in the library.
std::vector<std::pair<int, int>> degeneracy_groups(const Eigen::VectorXd& ascending, double tol);

// Dense complex Hermitian matrix with a lazily cached spectral resolution.
// Values are immutable after construction; copies share the cache.
class HermitianObservable {
 public:
  explicit HermitianObservable(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

  /// Spectral resolution at the default degeneracy tolerance (cached,
  /// computed at most once even under concurrent access).
  const SpectralResolution& spectral() const;

 private:
  Matrix entries_;
  struct Cache {
    std::once_flag once;
    std::optional<SpectralResolution> value;
  };
  std::shared_ptr<Cache> cache_;
};

/// Eigendecomposition with degeneracy grouping; tol < 0 selects the default.
SpectralResolution spectral_resolution(const HermitianObservable& h, double degeneracy_tol = -1.0);
SpectralResolution spectral_resolution(const Matrix& h, double degeneracy_tol = -1.0);

/// sum_e f(e) P_e. Throws DomainError naming the eigenvalue when f is not
/// finite there.
Matrix matrix_function(const SpectralResolution& res, const std::function<Complex(double)>& f);

// Positive semidefinite matrix with unit trace (or an unnormalized positive
// functional when normalized == false).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries, bool normalized = true);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  bool normalized() const { return normalized_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

  /// tr(rho A).
  Complex expectation(const Matrix& a) const;

 private:
  Matrix entries_;
  bool normalized_;
  double min_eigenvalue_;
};

/// Thermal state e^{-beta H} / tr(e^{-beta H}), computed with shifted
/// exponents so no finite beta overflows.
DensityMatrix gibbs_state(const HermitianObservable& h, double beta);

/// e^{itH} A e^{-itH}, re-Hermitized.
HermitianObservable heisenberg_evolve(const HermitianObservable& a, const HermitianObservable& h,
                                      double t);

/// e^{itH} through the spectral resolution.
Matrix unitary_evolution(const HermitianObservable& h, double t);

}  // namespace fcslab

#endif
