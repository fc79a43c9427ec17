#ifndef FCSLAB_FCS_HPP
#define FCSLAB_FCS_HPP

#include <iosfwd>
#include <vector>

#include "fcslab/modular.hpp"

namespace fcslab {

// Finitely supported probability measure on the real line. Atoms are sorted
// by location, pairwise separated by more than the coalescing tolerance, and
// carry nonnegative weights summing to one.
class AtomicMeasure {
 public:
  struct Atom {
    double location;
    double weight;
  };

  static constexpr double kDefaultCoalescingTol = 1e-8;

  /// Builds a measure from raw (location, weight) pairs: clamps weights in
  /// [-1e-12, 0) to zero, merges locations within the tolerance (weighted
  /// mean), drops zero atoms, and checks unit mass.
  static AtomicMeasure from_atoms(std::vector<Atom> atoms,
                                  double coalescing_tol = kDefaultCoalescingTol);

  static AtomicMeasure point_mass(double location = 0.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double coalescing_tol() const { return coalescing_tol_; }

  double mass() const;
  double mean() const;

  /// CSV with header `location,weight`, locations ascending, 17 significant
  /// digits.
  void to_csv(std::ostream& out) const;

 private:
  std::vector<Atom> atoms_;
  double coalescing_tol_ = kDefaultCoalescingTol;
};

/// Two-time measurement statistics of the system energy increase over [0, t];
/// atoms at e' - e for e, e' in sp(H_S).
AtomicMeasure fcs_system(const OpenSystemModel& m, double t);

/// Two-time measurement statistics of the reservoir energy decrease over
/// [0, t]; atoms at eps - eps' for eps, eps' in sp(H_R).
AtomicMeasure fcs_reservoir_direct(const OpenSystemModel& m, double t);

struct ModularPathOptions {
  int dense_cap = 48;       // largest total dimension for the d^2 x d^2 route
  bool structured = false;  // factorized eigenpair route, no cap
};

/// The reservoir measure recomputed as the spectral measure of
/// (1/beta) log Delta_{evolved reference | reference} for the initial vector.
/// Kept independent of fcs_reservoir_direct for cross-validation.
AtomicMeasure fcs_reservoir_modular(const OpenSystemModel& m, double t,
                                    const ModularPathOptions& opts = {});

/// Moment generating function <Omega | Delta^alpha Omega> of the reservoir
/// measure, defined on the closed strip 0 <= Re alpha <= 1.
Complex fcs_generating_function(const OpenSystemModel& m, double t, Complex alpha);

/// Characteristic function sum_k w_k e^{i gamma x_k}.
Complex char_function(const AtomicMeasure& mu, double gamma);

/// k-th raw moment sum_k w_k x_k^k.
double measure_moment(const AtomicMeasure& mu, int k);

/// sup_x |CDF_mu(x) - CDF_nu(x)|; locations within the coarser coalescing
/// tolerance are treated as a single point.
double kolmogorov_distance(const AtomicMeasure& mu, const AtomicMeasure& nu);

}  // namespace fcslab

#endif
