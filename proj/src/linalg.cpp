#include "fcslab/linalg.hpp"

#include <cmath>
#include <sstream>

namespace fcslab {

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double hermiticity_defect(const Matrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  const double defect = (a - a.adjoint().eval()).cwiseAbs().maxCoeff();
  return scale > 0 ? defect / scale : defect;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Complex hs_inner(const Matrix& x, const Matrix& y) { return (x.adjoint() * y).trace(); }

double hs_norm(const Matrix& x) { return x.norm(); }

double operator_norm(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  return hermitize(g);
}

double SpectralResolution::spectral_radius() const {
  double r = 0.0;
  for (double e : eigenvalues) r = std::max(r, std::abs(e));
  return r;
}

Matrix SpectralResolution::reconstruct() const {
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) out += eigenvalues[k] * projectors[k];
  return out;
}

double default_degeneracy_tol(double spectral_radius) {
  return 1e-9 * std::max(1.0, spectral_radius);
}

std::vector<std::pair<int, int>> degeneracy_groups(const Eigen::VectorXd& ascending, double tol) {
  std::vector<std::pair<int, int>> groups;
  const int n = static_cast<int>(ascending.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || ascending(i) - ascending(i - 1) > tol) {
      groups.emplace_back(start, i - start);
      start = i;
    }
  }
  return groups;
}

HermitianObservable::HermitianObservable(Matrix entries)
    : entries_(std::move(entries)), cache_(std::make_shared<Cache>()) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
    throw ValidationError("HermitianObservable: matrix must be square with dim >= 1, got " +
                          std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
  if (hermiticity_defect(entries_) > 1e-12)
    throw ValidationError("HermitianObservable: symmetry defect " +
                          std::to_string(hermiticity_defect(entries_)) +
                          " exceeds 1e-12 of the largest entry");
  entries_ = hermitize(entries_);
}

const SpectralResolution& HermitianObservable::spectral() const {
  std::call_once(cache_->once, [this] { cache_->value = spectral_resolution(entries_); });
  return *cache_->value;
}

SpectralResolution spectral_resolution(const HermitianObservable& h, double degeneracy_tol) {
  return spectral_resolution(h.matrix(), degeneracy_tol);
}

SpectralResolution spectral_resolution(const Matrix& h, double degeneracy_tol) {
  if (h.rows() != h.cols() || h.rows() < 1)
    throw ValidationError("spectral_resolution: matrix must be square with dim >= 1");
  if (hermiticity_defect(h) > 1e-12)
    throw ValidationError("spectral_resolution: input is not Hermitian (symmetry defect " +
                          std::to_string(hermiticity_defect(h)) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success)
    throw ValidationError("spectral_resolution: eigensolver failed to converge");
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  const int n = static_cast<int>(h.rows());

  double tol = degeneracy_tol;
  if (tol < 0) tol = default_degeneracy_tol(std::max(std::abs(evals(0)), std::abs(evals(n - 1))));
  if (tol <= 0) throw ValidationError("spectral_resolution: degeneracy tolerance must be > 0");

  SpectralResolution out;
  out.dim = n;
  for (const auto& [start, count] : degeneracy_groups(evals, tol)) {
    out.eigenvalues.push_back(evals.segment(start, count).mean());
    const Matrix block = evecs.middleCols(start, count);
    out.projectors.push_back(block * block.adjoint());
  }
  return out;
}

Matrix matrix_function(const SpectralResolution& res, const std::function<Complex(double)>& f) {
  Matrix out = Matrix::Zero(res.dim, res.dim);
  for (std::size_t k = 0; k < res.eigenvalues.size(); ++k) {
    const Complex v = f(res.eigenvalues[k]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "matrix_function: function is not finite at eigenvalue " << res.eigenvalues[k];
      throw DomainError(msg.str());
    }
    out += v * res.projectors[k];
  }
  return out;
}

DensityMatrix::DensityMatrix(Matrix entries, bool normalized)
    : entries_(std::move(entries)), normalized_(normalized) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
    throw ValidationError("DensityMatrix: matrix must be square with dim >= 1");
  if (hermiticity_defect(entries_) > 1e-12)
    throw ValidationError("DensityMatrix: entries are not Hermitian");
  entries_ = hermitize(entries_);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = solver.eigenvalues()(0);
  const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  if (min_eigenvalue_ < -1e-12 * scale)
    throw ValidationError("DensityMatrix: minimum eigenvalue " + std::to_string(min_eigenvalue_) +
                          " is negative beyond tolerance");
  if (normalized_ && std::abs(entries_.trace().real() - 1.0) > 1e-12)
    throw ValidationError("DensityMatrix: trace " + std::to_string(entries_.trace().real()) +
                          " differs from 1 beyond 1e-12");
}

Complex DensityMatrix::expectation(const Matrix& a) const {
  if (a.rows() != dim() || a.cols() != dim())
    throw ValidationError("DensityMatrix::expectation: dimension mismatch");
  return (entries_ * a).trace();
}

DensityMatrix gibbs_state(const HermitianObservable& h, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("gibbs_state: beta must be finite");
  const auto& res = h.spectral();
  // Shift so the largest Boltzmann exponent is exactly zero.
  double shift = res.eigenvalues.front();
  for (double e : res.eigenvalues)
    if (-beta * e > -beta * shift) shift = e;
  double z = 0.0;
  for (std::size_t k = 0; k < res.size(); ++k)
    z += std::exp(-beta * (res.eigenvalues[k] - shift)) * res.projectors[k].trace().real();
  Matrix rho = Matrix::Zero(res.dim, res.dim);
  for (std::size_t k = 0; k < res.size(); ++k)
    rho += (std::exp(-beta * (res.eigenvalues[k] - shift)) / z) * res.projectors[k];
  return DensityMatrix(hermitize(rho));
}

HermitianObservable heisenberg_evolve(const HermitianObservable& a, const HermitianObservable& h,
                                      double t) {
  if (a.dim() != h.dim())
    throw ValidationError("heisenberg_evolve: observable dim " + std::to_string(a.dim()) +
                          " != Hamiltonian dim " + std::to_string(h.dim()));
  if (t == 0.0) return a;
  const Matrix u = unitary_evolution(h, t);
  return HermitianObservable(hermitize(u * a.matrix() * u.adjoint()));
}

Matrix unitary_evolution(const HermitianObservable& h, double t) {
  return matrix_function(h.spectral(),
                         [t](double e) { return std::exp(kImag * (t * e)); });
}

}  // namespace fcslab
