#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aoi/optimize.hpp"
#include "aoi/sim.hpp"

namespace aoi::cli {

/// Header and cells of one CSV document plus its leading comment line.
struct CsvTable {
  std::string metadata;  ///< without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

/// "%.12g"; NaN prints as "nan".
std::string format_number(double v);

/// "aoi-penalty-lab v<version> seed=<seed|na> variant=<variant>".
std::string metadata_line(std::optional<std::uint64_t> seed, DispersionVariant variant);

void write_csv(std::ostream& out, const CsvTable& table);
/// Throws std::invalid_argument on ragged rows or quoted fields.
CsvTable read_csv(std::istream& in);

/// Sweep rows in the documented schema. The coding-rate axis adds
/// blocklength and realized_rate; recorded optima add opt_blocklength,
/// opt_rate and opt_value.
CsvTable sweep_table(const std::vector<SweepRow>& rows, bool rate_columns, bool optimum_columns,
                     const std::string& metadata);

/// One parsed sweep row. Fields beyond the base schema are present only if
/// their columns are.
struct SweepRecord {
  std::string axis;
  double axis_value;
  std::string strategy;
  std::string status;
  double value;
  double epsilon;
  bool feasible;
  std::optional<std::int64_t> blocklength;
  std::optional<double> realized_rate;
  std::optional<std::int64_t> opt_blocklength;
  std::optional<double> opt_rate;
  std::optional<double> opt_value;
};

std::vector<SweepRecord> parse_sweep_table(const CsvTable& table);

/// Per-replication rows followed by one aggregate row (replication "all").
CsvTable simulation_table(const std::vector<SimResult>& results, std::uint64_t seed,
                          const std::string& metadata);

}  // namespace aoi::cli
