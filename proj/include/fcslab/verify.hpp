#ifndef FCSLAB_VERIFY_HPP
#define FCSLAB_VERIFY_HPP

#include <iosfwd>

#include "fcslab/config.hpp"

namespace fcslab {

struct CheckResult {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  /// CSV with header `check,residual,tolerance,pass`.
  void to_csv(std::ostream& out) const;
};

/// The full invariant suite on one model: spectral and Gibbs identities,
/// flux/heat bookkeeping, modular-structure relations, measure mean
/// identities, generating-function bounds, and limit consistency checks.
VerificationReport run_verification(const OpenSystemModel& m, const ExperimentConfig& cfg);

}  // namespace fcslab

#endif
