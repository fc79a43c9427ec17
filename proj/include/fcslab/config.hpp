#ifndef FCSLAB_CONFIG_HPP
#define FCSLAB_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "fcslab/asymptotics.hpp"
#include "fcslab/builders.hpp"

namespace fcslab {

struct InlineSystem {
  Matrix hamiltonian;
  Matrix state;
};

struct InlineReservoir {
  Matrix hamiltonian;
};

struct ScanSpec {
  ScanAxis axis = ScanAxis::Lambda;
  std::vector<int> sizes;  // reservoir sizes for the size axis
};

// Declarative experiment description; see docs/config_schema.md for the JSON
// layout. Matrices are nested rows of [re, im] pairs.
struct ExperimentConfig {
  std::optional<NamedBuilder> system_builder;
  std::optional<InlineSystem> system_inline;
  std::optional<NamedBuilder> reservoir_builder;
  std::optional<InlineReservoir> reservoir_inline;
  std::optional<Matrix> coupling;

  double beta = 1.0;
  std::vector<double> lambdas{0.0};
  bool lambda_is_list = false;
  std::vector<double> time_grid;
  std::optional<ScanSpec> scan;
  std::string output_dir = ".";
  std::uint64_t seed = 0;

  double gamma_min = -10.0;
  double gamma_max = 10.0;
  int gamma_points = 201;
  int direct_cap = 128;
  int dense_modular_cap = 48;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Alphabetically ordered compact dump; the cache key hashes this.
std::string canonical_dump(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Reads and parses a config file; parse failures carry line/column
/// diagnostics, schema failures name the field.
ExperimentConfig load_config(const std::string& path);

/// Builds the model at the given coupling strength; size_override rebuilds
/// the reservoir builder with a different size parameter.
OpenSystemModel instantiate(const ExperimentConfig& cfg, double lambda,
                            std::optional<int> size_override = std::nullopt);

/// Model family for a scan axis: lambda varies over the config list, size
/// over scan.sizes (at the smallest lambda), time uses a single model.
std::vector<OpenSystemModel> build_family(const ExperimentConfig& cfg, ScanAxis axis);

Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json matrix_to_json(const Matrix& m);

}  // namespace fcslab

#endif
