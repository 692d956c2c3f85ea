#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gravinv/inversion.hpp"
#include "gravinv/errors.hpp"
#include "gravinv/synthdata.hpp"

namespace gravinv::cli {

/// Malformed input text: config syntax, CSV structure, unreadable files.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Half-open index range "a:b".
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Every setting a subcommand can use. Field names match the config keys.
struct RunConfig {
  // Grid.
  std::size_t n_cols = 50;
  std::size_t n_rows = 10;
  double cell_size = 10.0;
  double x_origin = 0.0;
  double z_top = 0.0;

  // Generated stations (synth): count 0 means one per column, spacing 0 means
  // cell_size, an absent x0 means the centre of the first column.
  std::size_t station_count = 0;
  std::optional<double> station_x0;
  double station_spacing = 0.0;
  double z_obs = 0.0;

  // Synthetic body, used by synth when no model file is given.
  IndexRange body_cols{20, 30};
  IndexRange body_rows{2, 7};
  double body_contrast = 1.0;

  // Noise.
  double eta1 = 0.03;
  double eta2 = 0.001;
  std::uint64_t seed = 1;

  // Inversion.
  double epsilon = 0.02;
  double beta = 0.6;
  double zeta = 0.1;
  double m_min = 0.0;
  double m_max = 1.0;
  double tau = 0.01;
  double cooling = 0.4;
  std::size_t max_iter = 20;
  ParamMethod param = ParamMethod::lcurve;
  StabilizerKind stabilizer = StabilizerKind::minimum_support;
  std::size_t alpha_count = 200;
  double alpha_floor = 1e-2;
  double gcv_flat_tolerance = 1e-3;
  GammaMean gamma_mean = GammaMean::nonzero;
  WeVariant we_variant = WeVariant::paper_eq_wk;
  unsigned threads = 1;

  /// Field mode: densities in files (and m_min/m_max) are absolute, the solver
  /// works on the contrast relative to this background.
  std::optional<double> background;

  // Preprocessing.
  bool regional = true;
  std::size_t regional_order = 1;
  bool upward = true;
  /// Absent means half the cell size.
  std::optional<double> upward_dz;
  double padding_lengths = 3.0;

  // Files.
  std::string stations_file;
  std::string model_file;
  std::string true_model_file;
  std::string apr_model_file;
  std::string output_dir = ".";
  std::string trace_dir;

  SurveyGrid grid() const;
  StationSet generated_stations() const;
  InversionConfig inversion() const;
  NoiseSpec noise() const;
  double continuation_dz() const { return upward_dz.value_or(cell_size / 2.0); }

  /// Absolute density to solver contrast and back; identities without a background.
  double to_contrast(double density) const { return density - background.value_or(0.0); }
  double to_density(double contrast) const { return contrast + background.value_or(0.0); }

  /// Throws ConfigError on any inconsistent value.
  void validate() const;
  /// Checks the synthetic body against the grid.
  void validate_body() const;
};

/// Sets one key from its text value. Throws ConfigError for an unknown key or
/// an unparsable value.
void set_key(RunConfig& config, const std::string& key, const std::string& value);

/// Applies "key=value".
void apply_assignment(RunConfig& config, const std::string& assignment);

/// Reads a key=value file: '#' starts a comment, blank lines are skipped,
/// repeated keys are rejected.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// All keys in sorted order with their resolved values.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& config);

/// resolved_entries rendered one "key=value" per line.
std::string render_config(const RunConfig& config);

std::vector<std::string> known_keys();

}  // namespace gravinv::cli
