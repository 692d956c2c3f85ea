#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "csv_io.hpp"

namespace gravinv::cli {

namespace {

struct KeySpec {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_number(v);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

IndexRange to_range(const std::string& key, const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos) throw ConfigError(key + ": expected 'begin:end', got '" + v + "'");
  return {static_cast<std::size_t>(to_unsigned(key, v.substr(0, colon))),
          static_cast<std::size_t>(to_unsigned(key, v.substr(colon + 1)))};
}

std::optional<double> to_optional(const std::string& key, const std::string& v) {
  if (v.empty() || v == "none") return std::nullopt;
  return to_double(key, v);
}

std::string show(double v) { return format_number(v); }
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(bool v) { return v ? "true" : "false"; }
std::string show(const IndexRange& r) {
  return std::to_string(r.begin) + ":" + std::to_string(r.end);
}
std::string show(const std::optional<double>& v) { return v ? format_number(*v) : "none"; }

template <typename E>
E to_enum(const std::string& key, const std::string& v, std::initializer_list<E> choices) {
  for (E e : choices) {
    if (v == to_string(e)) return e;
  }
  std::string allowed;
  for (E e : choices) allowed += std::string(allowed.empty() ? "" : ", ") + to_string(e);
  throw ConfigError(key + ": expected one of " + allowed + ", got '" + v + "'");
}

#define GRAVINV_DOUBLE(name) \
  { #name, {[](RunConfig& c, const std::string& v) { c.name = to_double(#name, v); }, \
            [](const RunConfig& c) { return show(c.name); }} }
#define GRAVINV_SIZE(name) \
  { #name, {[](RunConfig& c, const std::string& v) { c.name = to_unsigned(#name, v); }, \
            [](const RunConfig& c) { return show(static_cast<std::uint64_t>(c.name)); }} }
#define GRAVINV_OPTIONAL(name) \
  { #name, {[](RunConfig& c, const std::string& v) { c.name = to_optional(#name, v); }, \
            [](const RunConfig& c) { return show(c.name); }} }
#define GRAVINV_BOOL(name) \
  { #name, {[](RunConfig& c, const std::string& v) { c.name = to_bool(#name, v); }, \
            [](const RunConfig& c) { return show(c.name); }} }
#define GRAVINV_RANGE(name) \
  { #name, {[](RunConfig& c, const std::string& v) { c.name = to_range(#name, v); }, \
            [](const RunConfig& c) { return show(c.name); }} }
#define GRAVINV_STRING(name) \
  { #name, {[](RunConfig& c, const std::string& v) { c.name = v; }, \
            [](const RunConfig& c) { return c.name; }} }

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      GRAVINV_SIZE(n_cols),
      GRAVINV_SIZE(n_rows),
      GRAVINV_DOUBLE(cell_size),
      GRAVINV_DOUBLE(x_origin),
      GRAVINV_DOUBLE(z_top),
      GRAVINV_SIZE(station_count),
      GRAVINV_OPTIONAL(station_x0),
      GRAVINV_DOUBLE(station_spacing),
      GRAVINV_DOUBLE(z_obs),
      GRAVINV_RANGE(body_cols),
      GRAVINV_RANGE(body_rows),
      GRAVINV_DOUBLE(body_contrast),
      GRAVINV_DOUBLE(eta1),
      GRAVINV_DOUBLE(eta2),
      GRAVINV_SIZE(seed),
      GRAVINV_DOUBLE(epsilon),
      GRAVINV_DOUBLE(beta),
      GRAVINV_DOUBLE(zeta),
      GRAVINV_DOUBLE(m_min),
      GRAVINV_DOUBLE(m_max),
      GRAVINV_DOUBLE(tau),
      GRAVINV_DOUBLE(cooling),
      GRAVINV_SIZE(max_iter),
      {"param",
       {[](RunConfig& c, const std::string& v) {
          c.param = to_enum("param", v, {ParamMethod::lcurve, ParamMethod::gcv});
        },
        [](const RunConfig& c) { return std::string(to_string(c.param)); }}},
      {"stabilizer",
       {[](RunConfig& c, const std::string& v) {
          c.stabilizer = to_enum("stabilizer", v,
                                 {StabilizerKind::minimum_support, StabilizerKind::smoothness});
        },
        [](const RunConfig& c) { return std::string(to_string(c.stabilizer)); }}},
      GRAVINV_SIZE(alpha_count),
      GRAVINV_DOUBLE(alpha_floor),
      GRAVINV_DOUBLE(gcv_flat_tolerance),
      {"gamma_mean",
       {[](RunConfig& c, const std::string& v) {
          if (v == "nonzero") {
            c.gamma_mean = GammaMean::nonzero;
          } else if (v == "all") {
            c.gamma_mean = GammaMean::all;
          } else {
            throw ConfigError("gamma_mean: expected one of nonzero, all, got '" + v + "'");
          }
        },
        [](const RunConfig& c) {
          return std::string(c.gamma_mean == GammaMean::nonzero ? "nonzero" : "all");
        }}},
      {"we_variant",
       {[](RunConfig& c, const std::string& v) {
          c.we_variant =
              to_enum("we_variant", v, {WeVariant::paper_eq_wk, WeVariant::fixed_apr});
        },
        [](const RunConfig& c) { return std::string(to_string(c.we_variant)); }}},
      GRAVINV_SIZE(threads),
      GRAVINV_OPTIONAL(background),
      GRAVINV_BOOL(regional),
      GRAVINV_SIZE(regional_order),
      GRAVINV_BOOL(upward),
      GRAVINV_OPTIONAL(upward_dz),
      GRAVINV_DOUBLE(padding_lengths),
      GRAVINV_STRING(stations_file),
      GRAVINV_STRING(model_file),
      GRAVINV_STRING(true_model_file),
      GRAVINV_STRING(apr_model_file),
      GRAVINV_STRING(output_dir),
      GRAVINV_STRING(trace_dir),
  };
  return table;
}

#undef GRAVINV_DOUBLE
#undef GRAVINV_SIZE
#undef GRAVINV_OPTIONAL
#undef GRAVINV_BOOL
#undef GRAVINV_RANGE
#undef GRAVINV_STRING

}  // namespace

SurveyGrid RunConfig::grid() const {
  return SurveyGrid(n_cols, n_rows, cell_size, x_origin, z_top);
}

StationSet RunConfig::generated_stations() const {
  const std::size_t count = station_count == 0 ? n_cols : station_count;
  const double spacing = station_spacing == 0.0 ? cell_size : station_spacing;
  const double x0 = station_x0.value_or(x_origin + cell_size / 2.0);
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = x0 + spacing * static_cast<double>(i);
  return StationSet(std::move(x), z_obs);
}

InversionConfig RunConfig::inversion() const {
  InversionConfig c;
  c.epsilon = epsilon;
  c.beta = beta;
  c.zeta = zeta;
  c.bounds = {to_contrast(m_min), to_contrast(m_max)};
  c.tau = tau;
  c.cooling = cooling;
  c.max_iter = max_iter;
  c.param_method = param;
  c.stabilizer = stabilizer;
  c.alpha_count = alpha_count;
  c.alpha_floor = alpha_floor;
  c.gcv_flat_tolerance = gcv_flat_tolerance;
  c.gamma_mean = gamma_mean;
  c.we_variant = we_variant;
  return c;
}

NoiseSpec RunConfig::noise() const { return {eta1, eta2, seed}; }

void RunConfig::validate_body() const {
  if (body_cols.begin >= body_cols.end || body_rows.begin >= body_rows.end) {
    throw ConfigError("body_cols and body_rows must be non-empty ranges");
  }
  if (body_cols.end > n_cols || body_rows.end > n_rows) {
    throw ConfigError("synthetic body extends beyond the grid");
  }
}

void RunConfig::validate() const {
  if (n_cols == 0 || n_rows == 0) throw ConfigError("grid needs at least one row and column");
  if (!(cell_size > 0.0)) throw ConfigError("cell_size must be > 0");
  if (station_spacing < 0.0) throw ConfigError("station_spacing must be >= 0");
  if (threads == 0) throw ConfigError("threads must be >= 1");
  if (upward_dz && !(*upward_dz > 0.0)) throw ConfigError("upward_dz must be > 0");
  if (!(padding_lengths >= 0.0)) throw ConfigError("padding_lengths must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  inversion().validate(n_cols * n_rows);
}

void set_key(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second.set(config, value);
}

void apply_assignment(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + assignment + "'");
  }
  set_key(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ParseError(where + "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (auto [it, fresh] = seen.emplace(key, lineno); !fresh) {
      throw ParseError(where + "key '" + key + "' already set on line " +
                       std::to_string(it->second));
    }
    try {
      set_key(config, key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, spec] : key_table()) out.emplace_back(key, spec.get(config));
  return out;
}

std::string render_config(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& [key, value] : resolved_entries(config)) out << key << '=' << value << '\n';
  return out.str();
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& entry : key_table()) keys.push_back(entry.first);
  return keys;
}

}  // namespace gravinv::cli
