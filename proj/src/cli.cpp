#include "fcslab/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fcslab/hash.hpp"
#include "fcslab/verify.hpp"

namespace fcslab {

namespace fs = std::filesystem;

namespace {

struct CommandOutput {
  int exit_code = 0;
  std::vector<std::string> files;  // names relative to the output directory
};

void write_text_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string csv_of_measure(const AtomicMeasure& mu) {
  std::ostringstream out;
  mu.to_csv(out);
  return out.str();
}

// File-level result cache. A hit replays the recorded outputs and exit code.
class OutputCache {
 public:
  OutputCache(const fs::path& output_dir, bool enabled) : enabled_(enabled) {
    if (const char* env = std::getenv("FCSLAB_CACHE_DIR"))
      dir_ = fs::path(env);
    else
      dir_ = output_dir / ".fcslab-cache";
  }

  std::optional<CommandOutput> replay(const std::string& key, const fs::path& output_dir) const {
    if (!enabled_) return std::nullopt;
    const fs::path entry = dir_ / key;
    const fs::path manifest_path = entry / "manifest.json";
    if (!fs::exists(manifest_path)) return std::nullopt;
    std::ifstream in(manifest_path);
    nlohmann::json manifest;
    in >> manifest;
    CommandOutput out;
    out.exit_code = manifest.at("exit_code").get<int>();
    fs::create_directories(output_dir);
    for (const auto& name : manifest.at("files")) {
      const std::string file = name.get<std::string>();
      fs::copy_file(entry / file, output_dir / file, fs::copy_options::overwrite_existing);
      out.files.push_back(file);
    }
    return out;
  }

  void store(const std::string& key, const fs::path& output_dir,
             const CommandOutput& result) const {
    if (!enabled_) return;
    const fs::path entry = dir_ / key;
    fs::create_directories(entry);
    for (const auto& file : result.files)
      fs::copy_file(output_dir / file, entry / file, fs::copy_options::overwrite_existing);
    nlohmann::json manifest{{"exit_code", result.exit_code}, {"files", result.files}};
    write_text_file(entry / "manifest.json", manifest.dump());
  }

 private:
  fs::path dir_;
  bool enabled_;
};

ModularPathOptions modular_options(const ExperimentConfig& cfg) {
  return {cfg.dense_modular_cap, false};
}

void require_direct_cap(const ExperimentConfig& cfg, const OpenSystemModel& m) {
  if (m.total_dim() > cfg.direct_cap)
    throw ResourceError("model dimension " + std::to_string(m.total_dim()) +
                        " exceeds the direct-path cap " + std::to_string(cfg.direct_cap));
}

CommandOutput cmd_verify(const ExperimentConfig& cfg, const fs::path& outdir) {
  const OpenSystemModel m = instantiate(cfg, cfg.lambdas.front());
  require_direct_cap(cfg, m);
  const VerificationReport report = run_verification(m, cfg);
  std::ostringstream csv;
  report.to_csv(csv);
  write_text_file(outdir / "verify_report.csv", csv.str());
  for (const auto& c : report.checks)
    if (!c.pass)
      std::cerr << "verify: FAIL " << c.name << " residual " << c.residual << " > tolerance "
                << c.tolerance << "\n";
  return {report.all_pass() ? 0 : 1, {"verify_report.csv"}};
}

CommandOutput cmd_fcs(const ExperimentConfig& cfg, double t, const fs::path& outdir) {
  const OpenSystemModel m = instantiate(cfg, cfg.lambdas.front());
  require_direct_cap(cfg, m);
  CommandOutput out;
  write_text_file(outdir / "p_system.csv", csv_of_measure(fcs_system(m, t)));
  out.files.push_back("p_system.csv");
  write_text_file(outdir / "p_reservoir_direct.csv", csv_of_measure(fcs_reservoir_direct(m, t)));
  out.files.push_back("p_reservoir_direct.csv");
  if (m.total_dim() <= cfg.dense_modular_cap) {
    write_text_file(outdir / "p_reservoir_modular.csv",
                    csv_of_measure(fcs_reservoir_modular(m, t, modular_options(cfg))));
    out.files.push_back("p_reservoir_modular.csv");
  }
  return out;
}

CommandOutput cmd_charfun(const ExperimentConfig& cfg, double t, const fs::path& outdir) {
  const OpenSystemModel m = instantiate(cfg, cfg.lambdas.front());
  require_direct_cap(cfg, m);
  std::ostringstream out;
  out << "gamma,F_re,F_im,limit_re,limit_im\n";
  char buf[256];
  for (int k = 0; k < cfg.gamma_points; ++k) {
    const double gamma =
        cfg.gamma_min + (cfg.gamma_max - cfg.gamma_min) * k / std::max(1, cfg.gamma_points - 1);
    const Complex f =
        fcs_generating_function(m, t, Complex(0.0, gamma / m.inverse_temperature));
    const Complex ref = decoupled_generating_function(m, gamma);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", gamma, f.real(), f.imag(),
                  ref.real(), ref.imag());
    out << buf;
  }
  write_text_file(outdir / "charfun.csv", out.str());
  return {0, {"charfun.csv"}};
}

CommandOutput cmd_scan(const ExperimentConfig& cfg, const std::string& axis_override,
                       const fs::path& outdir) {
  ScanAxis axis;
  if (!axis_override.empty()) {
    if (axis_override == "time")
      axis = ScanAxis::Time;
    else if (axis_override == "lambda")
      axis = ScanAxis::Lambda;
    else if (axis_override == "size")
      axis = ScanAxis::Size;
    else
      throw ConfigError("--axis: unknown axis '" + axis_override + "'");
  } else if (cfg.scan)
    axis = cfg.scan->axis;
  else if (cfg.lambda_is_list)
    axis = ScanAxis::Lambda;
  else
    throw ConfigError("field 'scan': required (or give 'lambda' as a list)");
  if (axis == ScanAxis::Time && cfg.time_grid.empty())
    throw ConfigError("field 'time_grid': required for the time axis");
  const std::vector<OpenSystemModel> family = build_family(cfg, axis);

  CommandOutput out;
  for (const LimitMode mode : {LimitMode::KernelExact, LimitMode::RankOne}) {
    DistanceSpec spec;
    spec.mode = mode;
    spec.gamma_min = cfg.gamma_min;
    spec.gamma_max = cfg.gamma_max;
    spec.gamma_points = cfg.gamma_points;
    spec.time_grid = cfg.time_grid;
    const ScanResult result = scan(family, axis, spec);
    std::ostringstream csv;
    result.to_csv(csv);
    const std::string name = std::string("scan_") +
                             (mode == LimitMode::KernelExact ? "cesaro" : "idealized") + ".csv";
    write_text_file(outdir / name, csv.str());
    out.files.push_back(name);
    if (axis == ScanAxis::Time) break;  // the running average has no idealized variant
  }
  return out;
}

CommandOutput cmd_limits(const ExperimentConfig& cfg, const fs::path& outdir) {
  const OpenSystemModel m = instantiate(cfg, cfg.lambdas.front());
  require_direct_cap(cfg, m);
  CommandOutput out;
  std::ostringstream summary;
  summary << "measure,kolmogorov_vs_double_limit,cf_sup_vs_double_limit,mean,"
             "moment2_gap,moment3_gap,moment4_gap,fingerprint\n";
  char buf[320];
  for (const MeasureSide side : {MeasureSide::System, MeasureSide::Reservoir}) {
    for (const LimitMode mode : {LimitMode::KernelExact, LimitMode::RankOne}) {
      const LimitReport report = limit_report(m, side, mode);
      const std::string name = std::string(mode == LimitMode::KernelExact ? "cesaro" : "idealized") +
                               (side == MeasureSide::System ? "_system" : "_reservoir");
      write_text_file(outdir / (name + ".csv"), csv_of_measure(report.measure));
      out.files.push_back(name + ".csv");
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", name.c_str(),
                    report.distances.at("kolmogorov_vs_double_limit"),
                    report.distances.at("cf_sup_vs_double_limit"), report.measure.mean(),
                    report.distances.at("moment2_gap"), report.distances.at("moment3_gap"),
                    report.distances.at("moment4_gap"), report.model_fingerprint.c_str());
      summary << buf;
    }
  }
  const AtomicMeasure reference = double_limit_fcs(m);
  write_text_file(outdir / "double_limit.csv", csv_of_measure(reference));
  out.files.push_back("double_limit.csv");
  std::snprintf(buf, sizeof(buf), "double_limit,0,0,%.17g,0,0,0,-\n", reference.mean());
  summary << buf;
  write_text_file(outdir / "limits_summary.csv", summary.str());
  out.files.push_back("limits_summary.csv");
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"fcslab: counting statistics of energy exchange between a finite quantum system "
               "and a confined thermal reservoir"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  bool no_cache = false;
  double t = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment configuration (JSON)")->required();
    cmd->add_option("--output-dir", output_override, "override the config output directory");
    cmd->add_flag("--no-cache", no_cache, "bypass the result cache");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite, exit 0 iff all pass");
  add_common(verify);
  CLI::App* fcs = app.add_subcommand("fcs", "finite-time counting statistics at --t");
  add_common(fcs);
  fcs->add_option("--t", t, "measurement interval length")->required();
  CLI::App* charfun = app.add_subcommand("charfun", "characteristic function table at --t");
  add_common(charfun);
  charfun->add_option("--t", t, "measurement interval length")->required();
  CLI::App* scan_cmd = app.add_subcommand("scan", "distance table across a model family");
  add_common(scan_cmd);
  std::string axis_override;
  scan_cmd->add_option("--axis", axis_override, "override the scan axis (time, lambda, size)");
  CLI::App* limits = app.add_subcommand("limits", "Cesaro, idealized, and closed-form limit measures");
  add_common(limits);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = load_config(config_path);
    const fs::path outdir = output_override.empty() ? fs::path(cfg.output_dir) : fs::path(output_override);
    fs::create_directories(outdir);

    std::string command;
    std::function<CommandOutput()> runner;
    if (verify->parsed()) {
      command = "verify";
      runner = [&] { return cmd_verify(cfg, outdir); };
    } else if (fcs->parsed()) {
      char key[64];
      std::snprintf(key, sizeof(key), "fcs|t=%.17g", t);
      command = key;
      runner = [&] { return cmd_fcs(cfg, t, outdir); };
    } else if (charfun->parsed()) {
      char key[64];
      std::snprintf(key, sizeof(key), "charfun|t=%.17g", t);
      command = key;
      runner = [&] { return cmd_charfun(cfg, t, outdir); };
    } else if (scan_cmd->parsed()) {
      command = "scan|axis=" + axis_override;
      runner = [&] { return cmd_scan(cfg, axis_override, outdir); };
    } else {
      command = "limits";
      runner = [&] { return cmd_limits(cfg, outdir); };
    }

    const OutputCache cache(outdir, !no_cache);
    const std::string key = to_hex(fnv1a64(canonical_dump(cfg) + "|" + command));
    if (auto replayed = cache.replay(key, outdir)) return replayed->exit_code;
    const CommandOutput result = runner();
    cache.store(key, outdir, result);
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fcslab
