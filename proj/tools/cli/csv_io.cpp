#include "csv_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

namespace gravinv::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? std::string()
                                             : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ParseError(std::string("cannot open ") + what + " " + path.string());
  return in;
}

double field_number(const std::string& text, const std::string& where) {
  try {
    return parse_number(text);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw ParseError("cannot format number");
  return std::string(buf.data(), ptr);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("not a number: '" + text + "'");
  }
  return v;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw ParseError("write failed for " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

StationTable read_stations(const std::filesystem::path& path,
                           const std::vector<std::string>& require) {
  std::ifstream in = open(path, "stations file");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty stations file");
  const std::vector<std::string> header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) col.emplace(header[c], c);

  std::vector<std::string> needed = {"x_m", "z_obs_m"};
  needed.insert(needed.end(), require.begin(), require.end());
  for (const auto& name : needed) {
    if (!col.count(name)) {
      throw ParseError(path.string() + ": missing column '" + name + "'");
    }
  }
  const bool has_d = col.count("d_obs_mgal") > 0;
  const bool has_s = col.count("sigma_mgal") > 0;

  std::vector<double> x, d, s;
  std::optional<double> z_obs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto fields = split(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (fields.size() != header.size()) {
      throw ParseError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    x.push_back(field_number(fields[col["x_m"]], where));
    const double z = field_number(fields[col["z_obs_m"]], where);
    if (z_obs && z != *z_obs) {
      throw ParseError(where + ": z_obs_m differs between stations (flat profile required)");
    }
    z_obs = z;
    if (has_d) d.push_back(field_number(fields[col["d_obs_mgal"]], where));
    if (has_s) s.push_back(field_number(fields[col["sigma_mgal"]], where));
  }
  if (x.empty()) throw ParseError(path.string() + ": no station rows");

  StationTable t{StationSet(std::move(x), *z_obs), {}, {}, has_d, has_s};
  if (has_d) t.d_obs = Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
  if (has_s) t.sigma = Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
  return t;
}

std::string stations_csv(const StationSet& stations, const Vector& d_obs, const Vector& sigma) {
  std::ostringstream out;
  out << "x_m,z_obs_m,d_obs_mgal,sigma_mgal\n";
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << format_number(stations.x(i)) << ',' << format_number(stations.z_obs()) << ','
        << format_number(d_obs[k]) << ',' << format_number(sigma[k]) << '\n';
  }
  return out.str();
}

std::string profile_csv(const GravityProfile& profile, const char* value_column) {
  std::ostringstream out;
  out << "x_m,z_obs_m," << value_column << '\n';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << format_number(profile.stations.x(i)) << ','
        << format_number(profile.stations.z_obs()) << ','
        << format_number(profile.values[static_cast<Eigen::Index>(i)]) << '\n';
  }
  return out.str();
}

ModelFile read_model(const std::filesystem::path& path) {
  std::ifstream in = open(path, "model file");
  std::string line;
  const std::vector<std::string> expected = {"n_cols", "n_rows", "cell_size_m", "x_origin_m",
                                             "z_top_m"};
  if (!std::getline(in, line) || split(line) != expected) {
    throw ParseError(path.string() +
                     ":1: expected header n_cols,n_rows,cell_size_m,x_origin_m,z_top_m");
  }
  if (!std::getline(in, line)) throw ParseError(path.string() + ":2: missing grid values");
  const auto g = split(line);
  const std::string where2 = path.string() + ":2";
  if (g.size() != 5) throw ParseError(where2 + ": expected 5 grid values");
  const double cols = field_number(g[0], where2);
  const double rows = field_number(g[1], where2);
  if (!(cols >= 1.0) || !(rows >= 1.0) || cols != static_cast<double>(static_cast<std::size_t>(cols)) ||
      rows != static_cast<double>(static_cast<std::size_t>(rows))) {
    throw ParseError(where2 + ": n_cols and n_rows must be positive integers");
  }
  const auto n_cols = static_cast<std::size_t>(cols);
  const auto n_rows = static_cast<std::size_t>(rows);
  SurveyGrid grid(n_cols, n_rows, field_number(g[2], where2), field_number(g[3], where2),
                  field_number(g[4], where2));

  Vector values(static_cast<Eigen::Index>(n_cols * n_rows));
  std::size_t row = 0;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (row == n_rows) throw ParseError(where + ": more than n_rows density rows");
    const auto fields = split(line);
    if (fields.size() != n_cols) {
      throw ParseError(where + ": expected " + std::to_string(n_cols) + " densities, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      values[static_cast<Eigen::Index>(grid.index(row, c))] = field_number(fields[c], where);
    }
    ++row;
  }
  if (row != n_rows) {
    throw ParseError(path.string() + ": expected " + std::to_string(n_rows) +
                     " density rows, got " + std::to_string(row));
  }
  return {grid, std::move(values)};
}

std::string model_csv(const SurveyGrid& grid, const Vector& values) {
  std::ostringstream out;
  out << "n_cols,n_rows,cell_size_m,x_origin_m,z_top_m\n"
      << grid.n_cols() << ',' << grid.n_rows() << ',' << format_number(grid.cell_size()) << ','
      << format_number(grid.x_origin()) << ',' << format_number(grid.z_top()) << '\n';
  for (std::size_t r = 0; r < grid.n_rows(); ++r) {
    for (std::size_t c = 0; c < grid.n_cols(); ++c) {
      if (c > 0) out << ',';
      out << format_number(values[static_cast<Eigen::Index>(grid.index(r, c))]);
    }
    out << '\n';
  }
  return out.str();
}

std::string iteration_log_csv(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  out << "k,alpha,fidelity,stabilizer,objective,model_change,param_status\n";
  for (const auto& r : records) {
    out << r.k << ',' << format_number(r.alpha) << ',' << format_number(r.fidelity) << ','
        << format_number(r.stabilizer_value) << ',' << format_number(r.objective) << ','
        << format_number(r.model_change) << ',' << to_string(r.param_status) << '\n';
  }
  return out.str();
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "alpha,residual_norm,seminorm,gcv\n";
  for (const auto& p : curve) {
    out << format_number(p.alpha) << ',' << format_number(p.residual_norm) << ','
        << format_number(p.seminorm) << ',' << format_number(p.gcv) << '\n';
  }
  return out.str();
}

std::string key_values(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream out;
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  return out.str();
}

std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path) {
  std::ifstream in = open(path, "file");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace gravinv::cli
