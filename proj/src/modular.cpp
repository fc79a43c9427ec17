#include "fcslab/modular.hpp"

#include <cmath>
#include <sstream>

namespace fcslab {

bool in_natural_cone(const LiouvilleVector& x, double tol) {
  if (x.rows() != x.cols()) return false;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if ((x - x.adjoint().eval()).cwiseAbs().maxCoeff() > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(x), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0) >= -tol * scale;
}

Superoperator Superoperator::identity(int dim) {
  Superoperator s(dim);
  s.terms_.push_back({std::nullopt, std::nullopt});
  return s;
}

Superoperator Superoperator::sandwich(int dim, std::optional<Matrix> left,
                                      std::optional<Matrix> right) {
  if (left && (left->rows() != dim || left->cols() != dim))
    throw ValidationError("Superoperator: left factor dimension mismatch");
  if (right && (right->rows() != dim || right->cols() != dim))
    throw ValidationError("Superoperator: right factor dimension mismatch");
  Superoperator s(dim);
  s.terms_.push_back({std::move(left), std::move(right)});
  return s;
}

LiouvilleVector Superoperator::apply(const LiouvilleVector& x) const {
  if (x.rows() != dim_ || x.cols() != dim_)
    throw ValidationError("Superoperator::apply: vector dimension mismatch");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) {
    Matrix y = t.left ? (*t.left * x).eval() : x;
    if (t.right) y = y * *t.right;
    out += y;
  }
  return out;
}

namespace {

std::optional<Matrix> compose_factor(const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
  if (!a) return b;
  if (!b) return a;
  return (*a) * (*b);
}

}  // namespace

Superoperator Superoperator::compose(const Superoperator& inner) const {
  if (inner.dim_ != dim_) throw ValidationError("Superoperator::compose: dimension mismatch");
  Superoperator out(dim_);
  for (const auto& s : terms_)
    for (const auto& t : inner.terms_)
      // (L1 . R1) after (L2 . R2): X |-> L1 L2 X R2 R1
      out.terms_.push_back({compose_factor(s.left, t.left), compose_factor(t.right, s.right)});
  return out;
}

Superoperator Superoperator::operator+(const Superoperator& other) const {
  if (other.dim_ != dim_) throw ValidationError("Superoperator::operator+: dimension mismatch");
  Superoperator out(dim_);
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

Superoperator Superoperator::operator-(const Superoperator& other) const {
  return *this + other.scaled(-1.0);
}

Superoperator Superoperator::scaled(Complex c) const {
  Superoperator out(dim_);
  for (const auto& t : terms_) {
    Sandwich s = t;
    if (s.left)
      *s.left *= c;
    else
      s.left = c * Matrix::Identity(dim_, dim_);
    out.terms_.push_back(std::move(s));
  }
  return out;
}

Superoperator Superoperator::adjoint() const {
  Superoperator out(dim_);
  for (const auto& t : terms_) {
    Sandwich s;
    if (t.left) s.left = t.left->adjoint();
    if (t.right) s.right = t.right->adjoint();
    out.terms_.push_back(std::move(s));
  }
  return out;
}

const Matrix& Superoperator::dense() const {
  std::call_once(dense_cache_->once, [this] {
    const Eigen::Index d2 = static_cast<Eigen::Index>(dim_) * dim_;
    Matrix out = Matrix::Zero(d2, d2);
    const Matrix id = Matrix::Identity(dim_, dim_);
    for (const auto& t : terms_) {
      const Matrix& l = t.left ? *t.left : id;
      const Matrix& r = t.right ? *t.right : id;
      out += kron(r.transpose(), l);
    }
    dense_cache_->value = std::move(out);
  });
  return *dense_cache_->value;
}

Superoperator left_action(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("left_action: matrix must be square");
  return Superoperator::sandwich(static_cast<int>(a.rows()), a, std::nullopt);
}

Superoperator right_action(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("right_action: matrix must be square");
  return Superoperator::sandwich(static_cast<int>(a.rows()), std::nullopt, a);
}

LiouvilleVector modular_conjugation(const LiouvilleVector& x) { return x.adjoint(); }

Matrix positive_power(const Matrix& psd, Complex alpha) {
  const auto res = spectral_resolution(psd);
  const double top = std::max(1.0, res.spectral_radius());
  const double kernel_tol = 1e-12 * top;
  if (res.eigenvalues.front() < -kernel_tol)
    throw ValidationError("positive_power: matrix has a negative eigenvalue " +
                          std::to_string(res.eigenvalues.front()));
  Matrix out = Matrix::Zero(res.dim, res.dim);
  for (std::size_t k = 0; k < res.size(); ++k) {
    const double e = res.eigenvalues[k];
    if (e <= kernel_tol) {
      // 0^alpha = 0 for Re alpha > 0; 0^0 = 0 (support convention).
      if (alpha == Complex{0.0, 0.0} || alpha.real() > 0.0) continue;
      std::ostringstream msg;
      msg << "positive_power: singular matrix with exponent of real part " << alpha.real();
      throw DomainError(msg.str());
    }
    out += std::exp(alpha * std::log(e)) * res.projectors[k];
  }
  return out;
}

Superoperator relative_modular_superoperator(const Matrix& zeta, const Matrix& xi, Complex alpha) {
  if (zeta.rows() != xi.rows()) throw ValidationError("relative modular operator: dimension mismatch");
  const auto xi_res = spectral_resolution(xi);
  if (xi_res.eigenvalues.front() <= 1e-12 * std::max(1.0, xi_res.spectral_radius()))
    throw DomainError("relative modular operator: right functional is singular");
  Matrix right = matrix_function(
      xi_res, [alpha](double e) { return std::exp(-alpha * std::log(e)); });
  Matrix left = positive_power(zeta, alpha);
  return Superoperator::sandwich(static_cast<int>(zeta.rows()), std::move(left), std::move(right));
}

LiouvilleVector relative_modular_power(const Matrix& zeta, const Matrix& xi, Complex alpha,
                                       const LiouvilleVector& x) {
  return relative_modular_superoperator(zeta, xi, alpha).apply(x);
}

Superoperator SplitGenerator::generator() const {
  const int d = left_h.dim();
  return Superoperator::sandwich(d, left_h.matrix(), std::nullopt) +
         Superoperator::sandwich(d, std::nullopt, -right_h.matrix());
}

Superoperator SplitGenerator::exponential(Complex z) const {
  Matrix l = matrix_function(left_h.spectral(), [z](double e) { return std::exp(z * e); });
  Matrix r = matrix_function(right_h.spectral(), [z](double e) { return std::exp(-z * e); });
  return Superoperator::sandwich(left_h.dim(), std::move(l), std::move(r));
}

SplitGenerator liouvillean_split(const OpenSystemModel& m, LiouvilleanKind kind) {
  switch (kind) {
    case LiouvilleanKind::Free:
      return {m.free_hamiltonian, m.free_hamiltonian};
    case LiouvilleanKind::Coupled:
      return {m.total_hamiltonian, m.total_hamiltonian};
    case LiouvilleanKind::Transfer:
      return {m.total_hamiltonian,
              HermitianObservable(m.embed_reservoir(m.reservoir_hamiltonian.matrix()))};
  }
  throw ValidationError("liouvillean_split: unknown kind");
}

Superoperator standard_liouvillean(const OpenSystemModel& m, LiouvilleanKind kind) {
  return liouvillean_split(m, kind).generator();
}

SplitGenerator interaction_split(const OpenSystemModel& m) {
  return {m.total_hamiltonian, m.free_hamiltonian};
}

Superoperator cocycle(const OpenSystemModel& m, double t) {
  const Matrix u =
      unitary_evolution(m.total_hamiltonian, t) * unitary_evolution(m.free_hamiltonian, -t);
  return left_action(u);
}

LiouvilleVector standard_vector(const OpenSystemModel& m) {
  return kron(positive_power(m.system_state.matrix(), 0.5),
              positive_power(m.reservoir_gibbs.matrix(), 0.5));
}

LiouvilleVector reference_vector(const OpenSystemModel& m) {
  return kron(Matrix::Identity(m.system_dim(), m.system_dim()),
              positive_power(m.reservoir_gibbs.matrix(), 0.5));
}

LiouvilleVector decoupled_gibbs_vector(const OpenSystemModel& m) {
  return kron(positive_power(m.system_gibbs.matrix(), 0.5),
              positive_power(m.reservoir_gibbs.matrix(), 0.5));
}

LiouvilleVector system_weighted_vector(const OpenSystemModel& m) {
  return kron(m.system_state.matrix(), positive_power(m.reservoir_gibbs.matrix(), 0.5));
}

LiouvilleVector araki_vector(const OpenSystemModel& m) {
  const double beta = m.inverse_temperature;
  // Common energy shift keeps every exponent in range for any beta.
  const auto& free_res = m.free_hamiltonian.spectral();
  const double shift = free_res.eigenvalues.front();
  double z_shifted = 0.0;
  for (std::size_t k = 0; k < free_res.size(); ++k)
    z_shifted +=
        std::exp(-beta * (free_res.eigenvalues[k] - shift)) * free_res.projectors[k].trace().real();
  Matrix vec = matrix_function(m.total_hamiltonian.spectral(), [beta, shift](double e) {
    return std::exp(-0.5 * beta * (e - shift));
  });
  return hermitize(vec / std::sqrt(z_shifted));
}

Matrix evolved_reference_density(const OpenSystemModel& m, double t) {
  const Matrix u = unitary_evolution(m.total_hamiltonian, t);
  return hermitize(u * m.reference_density.matrix() * u.adjoint());
}

}  // namespace fcslab
