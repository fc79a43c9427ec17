#include "fcslab/builders.hpp"

#include <cmath>

namespace fcslab {

namespace {

using nlohmann::json;

double require_number(const json& params, const std::string& builder, const std::string& key) {
  if (!params.contains(key))
    throw ValidationError("builder '" + builder + "': missing parameter '" + key + "'");
  if (!params.at(key).is_number())
    throw ValidationError("builder '" + builder + "': parameter '" + key + "' must be a number");
  return params.at(key).get<double>();
}

double number_or(const json& params, const std::string& builder, const std::string& key,
                 double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number())
    throw ValidationError("builder '" + builder + "': parameter '" + key + "' must be a number");
  return params.at(key).get<double>();
}

int require_int(const json& params, const std::string& builder, const std::string& key) {
  const double v = require_number(params, builder, key);
  const int n = static_cast<int>(std::llround(v));
  if (std::abs(v - n) > 0)
    throw ValidationError("builder '" + builder + "': parameter '" + key + "' must be an integer");
  return n;
}

}  // namespace

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix chain_site_operator(const Matrix& op, int site, int sites) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < sites; ++i)
    out = kron(out, i == site ? op : Matrix::Identity(2, 2));
  return out;
}

SystemPart build_named_system(const NamedBuilder& b) {
  if (b.name == "two_level") {
    const double gap = require_number(b.params, b.name, "gap");
    if (!(gap > 0)) throw ValidationError("builder 'two_level': gap must be > 0");
    std::vector<double> rho{0.5, 0.5};
    if (b.params.contains("rho")) {
      if (!b.params.at("rho").is_array() || b.params.at("rho").size() != 2)
        throw ValidationError("builder 'two_level': rho must be a list of 2 populations");
      rho = b.params.at("rho").get<std::vector<double>>();
    }
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = gap;
    Matrix r = Matrix::Zero(2, 2);
    r(0, 0) = rho[0];
    r(1, 1) = rho[1];
    return {HermitianObservable(std::move(h)), DensityMatrix(std::move(r)), pauli_x()};
  }
  throw ValidationError("unknown system builder '" + b.name + "'");
}

ReservoirPart build_named_reservoir(const NamedBuilder& b, std::uint64_t default_seed) {
  if (b.name == "spin_chain_reservoir") {
    const int n = require_int(b.params, b.name, "n");
    if (n < 1) throw ValidationError("builder 'spin_chain_reservoir': n must be >= 1");
    const double h = require_number(b.params, b.name, "h");
    const double g = number_or(b.params, b.name, "g", 0.0);
    const double gz = number_or(b.params, b.name, "gz", 0.0);
    const int dim = 1 << n;
    Matrix hr = Matrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) hr += (h / 2.0) * chain_site_operator(pauli_z(), i, n);
    for (int i = 0; i + 1 < n; ++i) {
      hr += g * chain_site_operator(pauli_x(), i, n) * chain_site_operator(pauli_x(), i + 1, n);
      if (gz != 0.0)
        hr += gz * chain_site_operator(pauli_z(), i, n) * chain_site_operator(pauli_z(), i + 1, n);
    }
    return {HermitianObservable(std::move(hr)), chain_site_operator(pauli_x(), 0, n)};
  }
  if (b.name == "random_reservoir") {
    const int n = require_int(b.params, b.name, "n");
    if (n < 1) throw ValidationError("builder 'random_reservoir': n must be >= 1");
    const double scale = number_or(b.params, b.name, "scale", 1.0);
    const auto seed = static_cast<std::uint64_t>(
        number_or(b.params, b.name, "seed", static_cast<double>(default_seed)));
    std::mt19937_64 rng(seed);
    Matrix hr = scale * random_hermitian(n, rng);
    Matrix coupling = random_hermitian(n, rng);
    coupling /= operator_norm(coupling);
    return {HermitianObservable(std::move(hr)), std::move(coupling)};
  }
  if (b.name == "truncated_oscillator") {
    const int cutoff = require_int(b.params, b.name, "cutoff");
    if (cutoff < 2) throw ValidationError("builder 'truncated_oscillator': cutoff must be >= 2");
    const double omega0 = require_number(b.params, b.name, "omega0");
    Matrix hr = Matrix::Zero(cutoff, cutoff);
    Matrix position = Matrix::Zero(cutoff, cutoff);
    for (int k = 0; k < cutoff; ++k) hr(k, k) = omega0 * k;
    for (int k = 0; k + 1 < cutoff; ++k) {
      position(k, k + 1) = std::sqrt((k + 1) / 2.0);
      position(k + 1, k) = std::sqrt((k + 1) / 2.0);
    }
    return {HermitianObservable(std::move(hr)), std::move(position)};
  }
  throw ValidationError("unknown reservoir builder '" + b.name + "'");
}

OpenSystemModel build_named_model(const SystemPart& system, const ReservoirPart& reservoir,
                                  double coupling_strength, double inverse_temperature) {
  Matrix v = kron(system.coupling_op, reservoir.coupling_op);
  return build_model(system.hamiltonian, system.state, reservoir.hamiltonian,
                     HermitianObservable(std::move(v)), coupling_strength, inverse_temperature);
}

}  // namespace fcslab
