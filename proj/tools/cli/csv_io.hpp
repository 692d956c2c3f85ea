#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "gravinv/inversion.hpp"

namespace gravinv::cli {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Locale-independent decimal parse of the whole string. Throws ParseError.
double parse_number(const std::string& text);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
/// Missing parent directories are created.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Station data as read from or written to a stations CSV.
struct StationTable {
  StationSet stations;
  Vector d_obs;
  Vector sigma;
  bool has_d_obs = false;
  bool has_sigma = false;
};

inline constexpr const char* kStationColumns[] = {"x_m", "z_obs_m", "d_obs_mgal", "sigma_mgal"};

/// Reads a stations CSV by header name. x_m and z_obs_m are always required;
/// `require` lists further columns that must be present. z_obs_m must be the
/// same on every row. Throws ParseError naming the offending column or line.
StationTable read_stations(const std::filesystem::path& path,
                           const std::vector<std::string>& require = {});

std::string stations_csv(const StationSet& stations, const Vector& d_obs, const Vector& sigma);

/// Profile without sigmas: x_m,z_obs_m,<value_column>.
std::string profile_csv(const GravityProfile& profile, const char* value_column = "d_mgal");

/// Model file: the grid header line, its values, then one row of densities per
/// grid row, shallowest first.
struct ModelFile {
  SurveyGrid grid;
  Vector values;
};
ModelFile read_model(const std::filesystem::path& path);
std::string model_csv(const SurveyGrid& grid, const Vector& values);

std::string iteration_log_csv(const std::vector<IterationRecord>& records);
std::string curve_csv(const std::vector<CurvePoint>& curve);

/// key=value lines.
std::string key_values(const std::vector<std::pair<std::string, std::string>>& entries);
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

}  // namespace gravinv::cli
