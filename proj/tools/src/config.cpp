#include "aoi/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace aoi::cli {

namespace {

const std::map<std::string, std::set<std::string>> kSchema{
    {"link", {"L", "M", "R", "snr", "snr_db", "dispersion_variant"}},
    {"arrival", {"lambda"}},
    {"penalty", {"mode", "alpha", "beta"}},
    {"run",
     {"strategies", "horizon", "replications", "seed", "threads", "axis", "grid", "bind_beta",
      "record_optimum", "m_min", "m_max", "forced_epsilon"}},
    {"output", {"format", "path"}},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& field, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError(field, "expected a finite number, got '" + t + "'");
  }
  return v;
}

std::int64_t to_int(const std::string& field, std::string_view text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(field, "expected an integer, got '" + t + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& field, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& field, std::string_view text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError(field, "expected true or false, got '" + t + "'");
}

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto v = raw_.get_optional<std::string>(RawConfig::path_type(section + "." + key, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  double real(const std::string& section, const std::string& key, double fallback) const {
    const auto v = get(section, key);
    return v ? to_double(section + "." + key, *v) : fallback;
  }

 private:
  const RawConfig& raw_;
};

void check_schema(const RawConfig& raw) {
  for (const auto& [section, body] : raw) {
    const auto it = kSchema.find(section);
    if (it == kSchema.end()) {
      throw ConfigError(section, "unknown section");
    }
    if (!body.data().empty() && body.empty()) {
      throw ConfigError(section, "expected a section, got a bare key");
    }
    for (const auto& [key, _] : body) {
      if (!it->second.contains(key)) {
        throw ConfigError(section + "." + key, "unknown key");
      }
    }
  }
}

LinkConfig resolve_link(const Reader& r) {
  const auto bits_text = r.get("link", "L");
  const std::int64_t bits = bits_text ? to_int("link.L", *bits_text) : 100;
  if (bits < 1) throw ConfigError("link.L", "must be at least 1");

  const auto m_text = r.get("link", "M");
  const auto r_text = r.get("link", "R");
  if (m_text && r_text) throw ConfigError("link.M", "give exactly one of M and R");
  std::int64_t m = 118;
  if (m_text) {
    m = to_int("link.M", *m_text);
    if (m < 1) throw ConfigError("link.M", "must be at least 1");
  } else if (r_text) {
    const double rate = to_double("link.R", *r_text);
    if (!(rate > 0.0)) throw ConfigError("link.R", "must be positive");
    m = blocklength_for_rate(bits, rate);
  }

  const auto snr_text = r.get("link", "snr");
  const auto db_text = r.get("link", "snr_db");
  if (snr_text && db_text) throw ConfigError("link.snr", "give exactly one of snr and snr_db");
  double snr = 3.0;
  if (snr_text) {
    snr = to_double("link.snr", *snr_text);
  } else if (db_text) {
    snr = snr_from_db(to_double("link.snr_db", *db_text));
  }
  if (!(snr > 0.0)) throw ConfigError("link.snr", "must be positive");
  return LinkConfig(bits, m, snr);
}

PenaltyShape resolve_penalty(const Reader& r) {
  const auto mode = r.get("penalty", "mode");
  const auto alpha = r.get("penalty", "alpha");
  const auto beta = r.get("penalty", "beta");
  if (mode && *mode == "linear") {
    if (alpha || beta) {
      throw ConfigError("penalty.mode", "linear mode takes no alpha or beta");
    }
    return PenaltyShape::linear();
  }
  if (mode && *mode != "alpha_beta") {
    throw ConfigError("penalty.mode", "expected 'linear' or 'alpha_beta', got '" + *mode + "'");
  }
  if (!alpha && !beta) return PenaltyShape::exponential(0.002, 10.0);
  if (!alpha || !beta) {
    throw ConfigError(alpha ? "penalty.beta" : "penalty.alpha",
                      "alpha and beta must be given together");
  }
  try {
    return PenaltyShape::from_pair(to_double("penalty.alpha", *alpha),
                                   to_double("penalty.beta", *beta));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("penalty", e.what());
  }
}

std::vector<StrategyKind> parse_strategies(const std::string& field, std::string_view text) {
  std::vector<StrategyKind> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      const auto s = parse_strategy(item);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
  }
  if (out.empty()) throw ConfigError(field, "no strategy given");
  return out;
}

RunSection resolve_run(const Reader& r) {
  RunSection run;
  if (const auto v = r.get("run", "strategies")) run.strategies = parse_strategies("run.strategies", *v);
  run.horizon = r.real("run", "horizon", run.horizon);
  if (!(run.horizon > 0.0)) throw ConfigError("run.horizon", "must be positive");
  if (const auto v = r.get("run", "replications")) {
    const auto n = to_uint("run.replications", *v);
    if (n < 1 || n > 1000000) throw ConfigError("run.replications", "must be in [1, 1e6]");
    run.replications = static_cast<std::uint32_t>(n);
  }
  if (const auto v = r.get("run", "seed")) run.seed = to_uint("run.seed", *v);
  if (const auto v = r.get("run", "threads")) {
    run.threads = static_cast<unsigned>(to_uint("run.threads", *v));
  }
  if (const auto v = r.get("run", "axis")) {
    try {
      run.axis = parse_sweep_axis(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("run.axis", e.what());
    }
  }
  if (const auto v = r.get("run", "grid")) {
    try {
      run.grid = parse_grid(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("run.grid", e.what());
    }
  }
  if (const auto v = r.get("run", "bind_beta")) run.bind_beta = to_bool("run.bind_beta", *v);
  if (const auto v = r.get("run", "record_optimum")) {
    run.record_optimum = to_bool("run.record_optimum", *v);
  }
  if (const auto v = r.get("run", "m_min")) run.m_min = to_int("run.m_min", *v);
  if (const auto v = r.get("run", "m_max")) run.m_max = to_int("run.m_max", *v);
  if (run.m_min < 1) throw ConfigError("run.m_min", "must be at least 1");
  if (run.m_max != 0 && run.m_max < run.m_min) {
    throw ConfigError("run.m_max", "must not be below run.m_min");
  }
  return run;
}

}  // namespace

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text:
      return "text";
    case OutputFormat::Csv:
      return "csv";
    case OutputFormat::Json:
      return "json";
  }
  return "?";
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(text) +
                              "' (expected text, csv or json)");
}

RawConfig read_config_file(const std::string& path) {
  RawConfig raw;
  try {
    boost::property_tree::ini_parser::read_ini(path, raw);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("--config", e.what());
  }
  return raw;
}

RawConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, raw);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config", e.what());
  }
  return raw;
}

void apply_override(RawConfig& raw, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const std::string key = trim(assignment.substr(0, eq));
  const auto dot = key.find('.');
  if (eq == std::string_view::npos || dot == std::string::npos || dot == 0 ||
      dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos) {
    throw ConfigError("--set", "expected section.key=value, got '" + std::string(assignment) + "'");
  }
  raw.put(RawConfig::path_type(key, '.'), trim(assignment.substr(eq + 1)));
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double("grid", item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw std::invalid_argument("range grid must be start:stop:step with step > 0");
    }
    const auto n = static_cast<std::int64_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    if (n > 1000000) throw std::invalid_argument("range grid is too long");
    for (std::int64_t i = 0; i <= n; ++i) {
      // 12 significant digits, so 0.4 + 15 * 0.02 becomes exactly 0.7
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", parts[0] + static_cast<double>(i) * parts[2]);
      out.push_back(std::strtod(buf, nullptr));
    }
  } else {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!trim(item).empty()) out.push_back(to_double("grid", item));
    }
  }
  if (out.empty()) throw std::invalid_argument("grid is empty");
  return out;
}

ExperimentConfig resolve(const RawConfig& raw) {
  check_schema(raw);
  const Reader r(raw);

  ExperimentConfig cfg{SystemParams{resolve_link(r), 0.01, resolve_penalty(r)}, {}, {}};
  if (const auto v = r.get("link", "dispersion_variant")) {
    try {
      cfg.params.variant = parse_dispersion_variant(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("link.dispersion_variant", e.what());
    }
  }
  cfg.params.lambda = r.real("arrival", "lambda", 0.01);
  if (!(cfg.params.lambda > 0.0)) throw ConfigError("arrival.lambda", "must be positive");
  if (const auto v = r.get("run", "forced_epsilon")) {
    const double e = to_double("run.forced_epsilon", *v);
    if (!(e >= 0.0 && e < 1.0)) throw ConfigError("run.forced_epsilon", "must be in [0, 1)");
    cfg.params.forced_epsilon = e;
  }
  cfg.run = resolve_run(r);

  if (const auto v = r.get("output", "format")) {
    try {
      cfg.output.format = parse_output_format(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("output.format", e.what());
    }
  }
  if (const auto v = r.get("output", "path")) cfg.output.path = *v;
  return cfg;
}

}  // namespace aoi::cli
