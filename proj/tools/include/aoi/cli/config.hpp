#pragma once

#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/optimize.hpp"

namespace aoi::cli {

/// Bad or inconsistent configuration. The message starts with the field
/// path, e.g. "link.M: ...".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class OutputFormat { Text, Csv, Json };

std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view text);

struct RunSection {
  std::vector<StrategyKind> strategies;  ///< empty: the command's default set
  double horizon = 1e7;
  std::uint32_t replications = 10;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;

  SweepAxis axis = SweepAxis::CodingRate;
  std::vector<double> grid;
  bool bind_beta = true;
  bool record_optimum = false;
  std::int64_t m_min = kBlocklengthValidityBound;
  std::int64_t m_max = 0;
};

struct OutputSection {
  std::optional<OutputFormat> format;
  std::string path;  ///< empty: standard output
};

struct ExperimentConfig {
  SystemParams params;
  RunSection run;
  OutputSection output;
};

using RawConfig = boost::property_tree::ptree;

/// Reads an INI document. Throws ConfigError on I/O or syntax errors.
RawConfig read_config_file(const std::string& path);
RawConfig parse_config_text(const std::string& text);

/// Applies "section.key=value". Later assignments win.
void apply_override(RawConfig& raw, std::string_view assignment);

/// Checks the document and fills in defaults (the Fig. 2 operating point:
/// L=100, M=118, snr=3, lambda=0.01, alpha=0.002, beta=10).
ExperimentConfig resolve(const RawConfig& raw);

/// "0.4:1.0:0.02" (inclusive, step rounded to the grid) or "0.1,0.2,0.5".
std::vector<double> parse_grid(std::string_view text);

}  // namespace aoi::cli
