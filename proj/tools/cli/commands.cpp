#include "commands.hpp"

#include <cstdio>
#include <filesystem>

#include "csv_io.hpp"
#include "gravinv/inversion.hpp"

namespace gravinv::cli {

namespace fs = std::filesystem;

namespace {

void echo_config(const RunConfig& config) {
  write_atomic(fs::path(config.output_dir) / "config.txt", render_config(config));
}

Vector to_contrast(const RunConfig& config, Vector densities) {
  return (densities.array() - config.background.value_or(0.0)).matrix();
}

Vector to_density(const RunConfig& config, Vector contrast) {
  return (contrast.array() + config.background.value_or(0.0)).matrix();
}

const std::string& require_path(const std::string& value, const char* key) {
  if (value.empty()) throw ConfigError(std::string(key) + " is required for this command");
  return value;
}

/// Reads a model file that must sit on the configured grid.
Vector read_grid_model(const RunConfig& config, const std::string& path, const SurveyGrid& grid) {
  ModelFile file = read_model(path);
  if (!(file.grid == grid)) {
    throw ConfigError(path + ": model grid does not match the configured grid");
  }
  return to_contrast(config, std::move(file.values));
}

StationSet stations_for(const RunConfig& config) {
  if (config.stations_file.empty()) return config.generated_stations();
  return read_stations(config.stations_file).stations;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const GeometryError*>(&e)) return kGeometryError;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const DomainError*>(&e)) {
    return kNumericalError;
  }
  return kParseError;
}

void cmd_forward(const RunConfig& config, std::ostream& log) {
  config.validate();
  ModelFile model = read_model(require_path(config.model_file, "model_file"));
  const StationSet stations = stations_for(config);
  const SensitivityMatrix g = assemble_sensitivity(model.grid, stations, config.threads);
  const GravityProfile profile = forward_map(g, to_contrast(config, std::move(model.values)));
  const fs::path out = fs::path(config.output_dir) / "predicted.csv";
  write_atomic(out, profile_csv(profile));
  echo_config(config);
  log << "forward: " << profile.size() << " stations -> " << out.string() << '\n';
}

void cmd_synth(const RunConfig& config, std::ostream& log) {
  config.validate();
  const NoiseSpec noise = config.noise();
  noise.validate();

  SurveyGrid grid = config.grid();
  Vector model;
  if (config.model_file.empty()) {
    config.validate_body();
    model = block_model(grid, config.body_cols.begin, config.body_cols.end,
                        config.body_rows.begin, config.body_rows.end, config.body_contrast);
  } else {
    ModelFile file = read_model(config.model_file);
    grid = file.grid;
    model = to_contrast(config, std::move(file.values));
  }
  const StationSet stations = stations_for(config);
  const SensitivityMatrix g = assemble_sensitivity(grid, stations, config.threads);
  const GravityProfile exact = forward_map(g, model);
  const Vector sigma = noise_sigmas(exact.values, noise.eta1, noise.eta2);
  const Vector d_obs = add_noise(exact.values, sigma, noise.seed);
  const double chi2 = chi_squared(d_obs, exact.values, sigma);

  const fs::path dir = config.output_dir;
  write_atomic(dir / "exact.csv", profile_csv(exact));
  write_atomic(dir / "observed.csv", stations_csv(stations, d_obs, sigma));
  write_atomic(dir / "true_model.csv", model_csv(grid, to_density(config, model)));
  write_atomic(dir / "synth_summary.txt",
               key_values({{"stations", std::to_string(stations.size())},
                           {"seed", std::to_string(noise.seed)},
                           {"eta1", format_number(noise.eta1)},
                           {"eta2", format_number(noise.eta2)},
                           {"chi2", format_number(chi2)}}));
  echo_config(config);
  log << "synth: " << stations.size() << " stations, seed " << noise.seed
      << ", chi2 = " << format_number(chi2) << '\n';
}

void cmd_invert(const RunConfig& config, std::ostream& log) {
  config.validate();
  const StationTable data =
      read_stations(require_path(config.stations_file, "stations_file"),
                    {"d_obs_mgal", "sigma_mgal"});
  const SurveyGrid grid = config.grid();
  const SensitivityMatrix g = assemble_sensitivity(grid, data.stations, config.threads);

  InversionConfig inv = config.inversion();
  if (!config.apr_model_file.empty()) {
    inv.m_apr = read_grid_model(config, config.apr_model_file, grid);
  }
  std::optional<Vector> truth;
  if (!config.true_model_file.empty()) {
    truth = read_grid_model(config, config.true_model_file, grid);
  }

  const InversionResult result =
      invert(g, data.d_obs, data.sigma, inv, [&](const IterationRecord& r) {
        log << "k=" << r.k << " alpha=" << format_number(r.alpha)
            << " fidelity=" << format_number(r.fidelity) << " clamped=" << r.clamped
            << " status=" << to_string(r.param_status) << '\n';
      });

  const fs::path dir = config.output_dir;
  const fs::path traces = config.trace_dir.empty() ? dir / "traces" : fs::path(config.trace_dir);
  for (const auto& r : result.records) {
    char name[32];
    std::snprintf(name, sizeof name, "curve_k%02zu.csv", r.k);
    write_atomic(traces / name, curve_csv(r.curve));
  }
  write_atomic(dir / "model.csv", model_csv(grid, to_density(config, result.model)));
  write_atomic(dir / "iterations.csv", iteration_log_csv(result.records));

  const IterationRecord& last = result.records.back();
  std::vector<std::pair<std::string, std::string>> summary = {
      {"converged", result.converged() ? "true" : "false"},
      {"termination", to_string(result.termination)},
      {"iterations", std::to_string(result.records.size())},
      {"alpha", format_number(result.final_alpha)},
      {"fidelity", format_number(last.fidelity)},
      {"objective", format_number(last.objective)},
      {"support_cells", std::to_string(support_count(result.model))},
  };
  if (truth) summary.emplace_back("relative_error", format_number(relative_error(*truth, result.model)));
  write_atomic(dir / "summary.txt", key_values(summary));
  echo_config(config);
  log << "invert: " << to_string(result.termination) << " after " << result.records.size()
      << " iterations, alpha = " << format_number(result.final_alpha) << '\n';
}

void cmd_preprocess(const RunConfig& config, std::ostream& log) {
  config.validate();
  const StationTable data =
      read_stations(require_path(config.stations_file, "stations_file"), {"d_obs_mgal"});
  GravityProfile profile{data.stations, data.d_obs};
  if (config.regional) profile = regional_residual(profile, config.regional_order);
  if (config.upward) {
    profile = upward_continue(profile, config.continuation_dz(), {config.padding_lengths});
  }
  const fs::path out = fs::path(config.output_dir) / "processed.csv";
  write_atomic(out, data.has_sigma ? stations_csv(profile.stations, profile.values, data.sigma)
                                   : profile_csv(profile, "d_obs_mgal"));
  echo_config(config);
  log << "preprocess: regional=" << (config.regional ? "on" : "off") << " upward="
      << (config.upward ? format_number(config.continuation_dz()) + " m" : "off") << " -> "
      << out.string() << '\n';
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& log,
                std::ostream& err) {
  try {
    if (name == "forward") {
      cmd_forward(config, log);
    } else if (name == "synth") {
      cmd_synth(config, log);
    } else if (name == "invert") {
      cmd_invert(config, log);
    } else if (name == "preprocess") {
      cmd_preprocess(config, log);
    } else {
      throw ConfigError("unknown command '" + name + "'");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace gravinv::cli
