#ifndef FCSLAB_ASYMPTOTICS_HPP
#define FCSLAB_ASYMPTOTICS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fcslab/fcs.hpp"

namespace fcslab {

enum class MeasureSide { System, Reservoir };

/// Exact infinite-time average of the two-time measure: only equal-eigenvalue
/// pairs of the coupled Hamiltonian survive, so the weights reduce to block
/// sums over its distinct-eigenvalue groups.
AtomicMeasure cesaro_fcs(const OpenSystemModel& m, MeasureSide side);

/// The limit a mixing joint system would produce: product weights of the
/// reservoir Gibbs state and the coupled Gibbs state. In finite dimension it
/// differs from cesaro_fcs by the non-simple kernel of the coupled
/// Liouvillean; that gap is the finite-size diagnostic.
AtomicMeasure fcs_limit_idealized(const OpenSystemModel& m, MeasureSide side);

/// The closed-form double limit: atoms at e' - e weighted by
/// omega_S(P_{e'}) rho_S(P_e). Depends only on H_S, rho_S, beta.
AtomicMeasure double_limit_fcs(const OpenSystemModel& m);

/// |F(1/2 + is) - transfer-operator inner product|; an exact identity, so
/// the result is pure round-off.
double transfer_identity_residual(const OpenSystemModel& m, double t, double s);

enum class LimitMode { RankOne, KernelExact };

/// Infinite-time limit of the generating function on the critical line.
/// RankOne substitutes the mixing idealization (a rank-one projector onto the
/// perturbed Gibbs vector); KernelExact uses the exact projector onto the
/// kernel of the coupled Liouvillean, i.e. the true Cesaro limit.
Complex generating_function_limit(const OpenSystemModel& m, double s, LimitMode mode);

/// Zero-coupling limit rho_S(e^{-i gamma H_S}) omega_S(e^{i gamma H_S}).
Complex decoupled_generating_function(const OpenSystemModel& m, double gamma);

/// The two analytically continued factors whose product over ||Omega_lambda||^2
/// is the continuation of the rank-one limit to the characteristic-function
/// line. As the coupling vanishes they tend to
/// (Z^{-1/2} rho_S(e^{-i gamma H_S}), Z^{1/2} omega_S(e^{i gamma H_S})).
std::pair<Complex, Complex> continuation_factors(const OpenSystemModel& m, double gamma);

enum class ScanAxis { Time, Lambda, Size };

struct DistanceSpec {
  LimitMode mode = LimitMode::KernelExact;
  double gamma_min = -10.0;
  double gamma_max = 10.0;
  int gamma_points = 201;
  std::vector<double> time_grid;  // used by the time axis only
};

struct ScanRow {
  double value = 0.0;
  double kolmogorov = 0.0;
  double cf_sup = 0.0;
  double mean_reservoir = 0.0;
  double mean_system = 0.0;
  double seconds = 0.0;
  bool ok = true;
};

struct ScanResult {
  ScanAxis axis;
  LimitMode mode;
  std::vector<ScanRow> rows;

  /// CSV with header `axis,value,kolmogorov,cf_sup,mean_R,mean_S,seconds`.
  void to_csv(std::ostream& out) const;
};

/// Distances of the reservoir limit measure (per mode) to the double-limit
/// measure across a model family. The time axis reports the running
/// trapezoid average of the finite-time reservoir measure on the given grid
/// (the ergodic-average object) against the same reference.
ScanResult scan(const std::vector<OpenSystemModel>& family, ScanAxis axis,
                const DistanceSpec& metric);

struct LimitReport {
  LimitMode mode;
  AtomicMeasure measure;
  std::map<std::string, double> distances;
  std::string model_fingerprint;
};

LimitReport limit_report(const OpenSystemModel& m, MeasureSide side, LimitMode mode);

const char* to_string(ScanAxis axis);
const char* to_string(LimitMode mode);

}  // namespace fcslab

#endif
