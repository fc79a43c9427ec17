#ifndef FCSLAB_MODULAR_HPP
#define FCSLAB_MODULAR_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "fcslab/model.hpp"

namespace fcslab {

// A d x d matrix regarded as a vector of the GNS (Liouville) space with
// inner product <X|Y> = tr(X* Y); see hs_inner / hs_norm in linalg.
using LiouvilleVector = Matrix;

/// Membership in the natural cone: Hermitian and positive semidefinite
/// within tol.
bool in_natural_cone(const LiouvilleVector& x, double tol = 1e-10);

// Linear map on the Liouville space kept as a sum of sandwich terms
// X |-> L X R (an absent factor means the identity). Sums and compositions
// stay in this form; a dense d^2 x d^2 materialization is available on
// demand for spectral work.
class Superoperator {
 public:
  struct Sandwich {
    std::optional<Matrix> left;
    std::optional<Matrix> right;
  };

  static Superoperator identity(int dim);
  static Superoperator sandwich(int dim, std::optional<Matrix> left, std::optional<Matrix> right);

  int dim() const { return dim_; }
  const std::vector<Sandwich>& terms() const { return terms_; }

  LiouvilleVector apply(const LiouvilleVector& x) const;
  Superoperator compose(const Superoperator& inner) const;  // this after inner
  Superoperator operator+(const Superoperator& other) const;
  Superoperator operator-(const Superoperator& other) const;
  Superoperator scaled(Complex c) const;
  /// Hilbert-Schmidt adjoint: X |-> L* X R* termwise.
  Superoperator adjoint() const;
  /// Column-major vectorization: vec(L X R) = (R^T (x) L) vec(X).
  /// Memoized; computed at most once even under concurrent first access.
  const Matrix& dense() const;

 private:
  explicit Superoperator(int dim) : dim_(dim) {}
  int dim_;
  std::vector<Sandwich> terms_;
  struct DenseCache {
    std::once_flag once;
    std::optional<Matrix> value;
  };
  std::shared_ptr<DenseCache> dense_cache_ = std::make_shared<DenseCache>();
};

/// pi(A): X |-> A X.
Superoperator left_action(const Matrix& a);

/// J pi(A*) J: X |-> X A.
Superoperator right_action(const Matrix& a);

/// Modular conjugation J X = X* (anti-linear, applied directly).
LiouvilleVector modular_conjugation(const LiouvilleVector& x);

/// Spectral power of a positive semidefinite matrix. The kernel maps to 0
/// for Re alpha > 0 and for alpha == 0; other powers of a singular matrix
/// are rejected.
Matrix positive_power(const Matrix& psd, Complex alpha);

/// Relative modular operator power: X |-> zeta^alpha X xi^{-alpha}.
/// xi must be strictly positive definite.
Superoperator relative_modular_superoperator(const Matrix& zeta, const Matrix& xi, Complex alpha);
LiouvilleVector relative_modular_power(const Matrix& zeta, const Matrix& xi, Complex alpha,
                                       const LiouvilleVector& x);

// Every Liouvillean used here splits as X |-> M X - X N with Hermitian M, N,
// so its exponential is the sandwich e^{zM} X e^{-zN}.
struct SplitGenerator {
  HermitianObservable left_h;   // M
  HermitianObservable right_h;  // N

  Superoperator generator() const;
  Superoperator exponential(Complex z) const;
};

enum class LiouvilleanKind {
  Free,     // X |-> [H_0, X]
  Coupled,  // X |-> [H_lambda, X]
  Transfer  // X |-> H_lambda X - X (1 (x) H_R)
};

SplitGenerator liouvillean_split(const OpenSystemModel& m, LiouvilleanKind kind);
Superoperator standard_liouvillean(const OpenSystemModel& m, LiouvilleanKind kind);

/// Generator of the perturbed unitary group that implements the coupled
/// dynamics while fixing the reference vector family: X |-> H_lambda X - X H_0.
SplitGenerator interaction_split(const OpenSystemModel& m);

/// The unitary cocycle relating evolved and static modular operators:
/// left multiplication by u_t = e^{itH_lambda} e^{-itH_0}.
Superoperator cocycle(const OpenSystemModel& m, double t);

/// Standard vector of the initial state: rho_S^{1/2} (x) omega_R^{1/2}.
LiouvilleVector standard_vector(const OpenSystemModel& m);

/// Standard vector of the reference functional: 1 (x) omega_R^{1/2}.
LiouvilleVector reference_vector(const OpenSystemModel& m);

/// Standard vector of the decoupled Gibbs state omega_0^{1/2}.
LiouvilleVector decoupled_gibbs_vector(const OpenSystemModel& m);

/// rho_S (x) omega_R^{1/2}, the initial vector re-weighted by the system state.
LiouvilleVector system_weighted_vector(const OpenSystemModel& m);

/// Perturbed Gibbs vector e^{-(beta/2)(H_lambda - c)} / sqrt(tr e^{-beta(H_0 - c)}),
/// the shift c making the computation overflow-free. Normalizing its rank-one
/// square recovers the Gibbs state of H_lambda.
LiouvilleVector araki_vector(const OpenSystemModel& m);

/// Density of the evolved reference functional: e^{itH_lambda} (1 (x) omega_R)
/// e^{-itH_lambda}, re-Hermitized.
Matrix evolved_reference_density(const OpenSystemModel& m, double t);

}  // namespace fcslab

#endif
