#include "fcslab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fcslab {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ConfigError("field '" + field + "': expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array())
      throw ConfigError("field '" + field + "': row " + std::to_string(r) + " is not an array");
    if (r == 0) {
      cols = row.size();
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      throw ConfigError("field '" + field + "': row " + std::to_string(r) + " has " +
                        std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row.at(c);
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e.at(0).is_number() && e.at(1).is_number()) {
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      } else {
        throw ConfigError("field '" + field + "': entry (" + std::to_string(r) + "," +
                          std::to_string(c) + ") must be a number or an [re, im] pair");
      }
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

NamedBuilder builder_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
    throw ConfigError("field '" + field + "': builder requires a string 'name'");
  NamedBuilder b;
  b.name = j.at("name").get<std::string>();
  b.params = j.value("params", json::object());
  if (!b.params.is_object())
    throw ConfigError("field '" + field + ".params': expected an object");
  return b;
}

json builder_to_json(const NamedBuilder& b) {
  return json{{"name", b.name}, {"params", b.params}};
}

ScanAxis axis_from_string(const std::string& s, const std::string& field) {
  if (s == "time") return ScanAxis::Time;
  if (s == "lambda") return ScanAxis::Lambda;
  if (s == "size") return ScanAxis::Size;
  throw ConfigError("field '" + field + "': unknown axis '" + s +
                    "' (expected time, lambda, or size)");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig cfg;

  if (!j.contains("model") || !j.at("model").is_object())
    throw ConfigError("field 'model': required object missing");
  const json& model = j.at("model");

  auto read_component = [&](const char* which, auto&& on_builder, auto&& on_inline) {
    const std::string field = std::string("model.") + which;
    if (!model.contains(which)) throw ConfigError("field '" + field + "': required");
    const json& comp = model.at(which);
    const bool has_builder = comp.contains("builder");
    const bool has_inline = comp.contains("inline");
    if (has_builder == has_inline)
      throw ConfigError("field '" + field + "': exactly one of 'builder' or 'inline' required");
    if (has_builder)
      on_builder(builder_from_json(comp.at("builder"), field + ".builder"));
    else
      on_inline(comp.at("inline"), field + ".inline");
  };

  read_component(
      "system", [&](NamedBuilder b) { cfg.system_builder = std::move(b); },
      [&](const json& inl, const std::string& field) {
        if (!inl.contains("hamiltonian") || !inl.contains("rho"))
          throw ConfigError("field '" + field + "': needs 'hamiltonian' and 'rho'");
        cfg.system_inline = InlineSystem{matrix_from_json(inl.at("hamiltonian"), field + ".hamiltonian"),
                                         matrix_from_json(inl.at("rho"), field + ".rho")};
      });
  read_component(
      "reservoir", [&](NamedBuilder b) { cfg.reservoir_builder = std::move(b); },
      [&](const json& inl, const std::string& field) {
        if (!inl.contains("hamiltonian"))
          throw ConfigError("field '" + field + "': needs 'hamiltonian'");
        cfg.reservoir_inline =
            InlineReservoir{matrix_from_json(inl.at("hamiltonian"), field + ".hamiltonian")};
      });
  if (model.contains("coupling"))
    cfg.coupling = matrix_from_json(model.at("coupling"), "model.coupling");

  if (!j.contains("beta") || !j.at("beta").is_number())
    throw ConfigError("field 'beta': required number");
  cfg.beta = j.at("beta").get<double>();

  if (!j.contains("lambda")) throw ConfigError("field 'lambda': required number or list");
  const json& lam = j.at("lambda");
  if (lam.is_number()) {
    cfg.lambdas = {lam.get<double>()};
    cfg.lambda_is_list = false;
  } else if (lam.is_array() && !lam.empty()) {
    cfg.lambdas = lam.get<std::vector<double>>();
    cfg.lambda_is_list = true;
  } else {
    throw ConfigError("field 'lambda': must be a number or a non-empty list");
  }

  cfg.time_grid = j.value("time_grid", std::vector<double>{});
  if (j.contains("scan")) {
    const json& s = j.at("scan");
    if (!s.is_object() || !s.contains("axis"))
      throw ConfigError("field 'scan': object with 'axis' required");
    ScanSpec spec;
    spec.axis = axis_from_string(s.at("axis").get<std::string>(), "scan.axis");
    spec.sizes = s.value("sizes", std::vector<int>{});
    if (spec.axis == ScanAxis::Size && spec.sizes.empty())
      throw ConfigError("field 'scan.sizes': required for the size axis");
    cfg.scan = spec;
  }
  cfg.output_dir = j.value("output_dir", std::string("."));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      throw ConfigError("field 'seed': must be an unsigned integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("gamma_window")) {
    const json& w = j.at("gamma_window");
    if (!w.is_array() || w.size() != 2)
      throw ConfigError("field 'gamma_window': expected [min, max]");
    cfg.gamma_min = w.at(0).get<double>();
    cfg.gamma_max = w.at(1).get<double>();
  }
  cfg.gamma_points = j.value("gamma_points", 201);
  if (cfg.gamma_points < 2) throw ConfigError("field 'gamma_points': must be >= 2");
  if (j.contains("caps")) {
    const json& caps = j.at("caps");
    cfg.direct_cap = caps.value("direct", 128);
    cfg.dense_modular_cap = caps.value("dense_modular", 48);
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json model;
  if (cfg.system_builder)
    model["system"] = json{{"builder", builder_to_json(*cfg.system_builder)}};
  else
    model["system"] =
        json{{"inline", json{{"hamiltonian", matrix_to_json(cfg.system_inline->hamiltonian)},
                             {"rho", matrix_to_json(cfg.system_inline->state)}}}};
  if (cfg.reservoir_builder)
    model["reservoir"] = json{{"builder", builder_to_json(*cfg.reservoir_builder)}};
  else
    model["reservoir"] =
        json{{"inline", json{{"hamiltonian", matrix_to_json(cfg.reservoir_inline->hamiltonian)}}}};
  if (cfg.coupling) model["coupling"] = matrix_to_json(*cfg.coupling);

  json j;
  j["model"] = std::move(model);
  j["beta"] = cfg.beta;
  if (cfg.lambda_is_list)
    j["lambda"] = cfg.lambdas;
  else
    j["lambda"] = cfg.lambdas.front();
  if (!cfg.time_grid.empty()) j["time_grid"] = cfg.time_grid;
  if (cfg.scan) {
    json s{{"axis", to_string(cfg.scan->axis)}};
    if (!cfg.scan->sizes.empty()) s["sizes"] = cfg.scan->sizes;
    j["scan"] = std::move(s);
  }
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  j["gamma_window"] = json::array({cfg.gamma_min, cfg.gamma_max});
  j["gamma_points"] = cfg.gamma_points;
  j["caps"] = json{{"direct", cfg.direct_cap}, {"dense_modular", cfg.dense_modular_cap}};
  return j;
}

std::string canonical_dump(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(); }

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return canonical_dump(a) == canonical_dump(b);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column diagnostic.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("config '" + path + "' line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
  return config_from_json(j);
}

OpenSystemModel instantiate(const ExperimentConfig& cfg, double lambda,
                            std::optional<int> size_override) {
  SystemPart system = [&] {
    if (cfg.system_builder) return build_named_system(*cfg.system_builder);
    return SystemPart{HermitianObservable(cfg.system_inline->hamiltonian),
                      DensityMatrix(cfg.system_inline->state), Matrix()};
  }();
  ReservoirPart reservoir = [&] {
    if (cfg.reservoir_builder) {
      NamedBuilder b = *cfg.reservoir_builder;
      if (size_override) {
        const char* key = b.name == "truncated_oscillator" ? "cutoff" : "n";
        b.params[key] = *size_override;
      }
      return build_named_reservoir(b, cfg.seed);
    }
    if (size_override)
      throw ConfigError("scan over sizes requires a reservoir builder, not an inline matrix");
    return ReservoirPart{HermitianObservable(cfg.reservoir_inline->hamiltonian), Matrix()};
  }();

  if (cfg.coupling) {
    return build_model(system.hamiltonian, system.state, reservoir.hamiltonian,
                       HermitianObservable(*cfg.coupling), lambda, cfg.beta);
  }
  if (system.coupling_op.size() == 0 || reservoir.coupling_op.size() == 0)
    throw ConfigError("field 'model.coupling': required when a component is inline");
  return build_named_model(system, reservoir, lambda, cfg.beta);
}

std::vector<OpenSystemModel> build_family(const ExperimentConfig& cfg, ScanAxis axis) {
  std::vector<OpenSystemModel> family;
  switch (axis) {
    case ScanAxis::Lambda: {
      for (double lambda : cfg.lambdas) family.push_back(instantiate(cfg, lambda));
      break;
    }
    case ScanAxis::Size: {
      if (!cfg.scan || cfg.scan->sizes.empty())
        throw ConfigError("field 'scan.sizes': required for the size axis");
      const double lambda = *std::min_element(cfg.lambdas.begin(), cfg.lambdas.end());
      for (int size : cfg.scan->sizes) family.push_back(instantiate(cfg, lambda, size));
      break;
    }
    case ScanAxis::Time: {
      family.push_back(instantiate(cfg, cfg.lambdas.front()));
      break;
    }
  }
  return family;
}

}  // namespace fcslab
