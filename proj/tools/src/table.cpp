#include "aoi/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aoi/version.hpp"

namespace aoi::cli {

namespace {

double parse_real(const std::string& cell) {
  if (cell == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw std::invalid_argument("not a number: '" + cell + "'");
  }
  return v;
}

std::int64_t parse_integer(const std::string& cell) {
  char* end = nullptr;
  const long long v = std::strtoll(cell.c_str(), &end, 10);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw std::invalid_argument("not an integer: '" + cell + "'");
  }
  return v;
}

bool parse_flag(const std::string& cell) {
  if (cell == "true") return true;
  if (cell == "false") return false;
  throw std::invalid_argument("not a boolean: '" + cell + "'");
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string metadata_line(std::optional<std::uint64_t> seed, DispersionVariant variant) {
  std::ostringstream os;
  os << "aoi-penalty-lab v" << kVersion << " seed=";
  if (seed) {
    os << *seed;
  } else {
    os << "na";
  }
  os << " variant=" << to_string(variant);
  return os.str();
}

void write_csv(std::ostream& out, const CsvTable& table) {
  if (!table.metadata.empty()) out << "# " << table.metadata << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0 && !have_header) {
      t.metadata = line.substr(2);
      continue;
    }
    if (line.find('"') != std::string::npos) {
      throw std::invalid_argument("quoted CSV fields are not supported");
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.header.size()) {
        throw std::invalid_argument("row has " + std::to_string(cells.size()) + " fields, header has " +
                                    std::to_string(t.header.size()));
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::invalid_argument("CSV has no header");
  return t;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows, bool rate_columns, bool optimum_columns,
                     const std::string& metadata) {
  CsvTable t;
  t.metadata = metadata;
  t.header = {"axis", "axis_value", "strategy", "status", "value", "epsilon", "feasible"};
  if (rate_columns) {
    t.header.push_back("blocklength");
    t.header.push_back("realized_rate");
  }
  if (optimum_columns) {
    t.header.push_back("opt_blocklength");
    t.header.push_back("opt_rate");
    t.header.push_back("opt_value");
  }
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::string(to_string(r.axis)),
                                   format_number(r.axis_value),
                                   std::string(to_string(r.strategy)),
                                   r.status == EvalStatus::Finite ? "Finite" : "Divergent",
                                   format_number(r.value),
                                   format_number(r.epsilon),
                                   r.feasible ? "true" : "false"};
    if (rate_columns) {
      cells.push_back(std::to_string(r.blocklength));
      cells.push_back(format_number(r.realized_rate));
    }
    if (optimum_columns) {
      if (r.optimum) {
        cells.push_back(std::to_string(r.optimum->blocklength));
        cells.push_back(format_number(r.optimum->rate));
        cells.push_back(format_number(r.optimum->value));
      } else {
        cells.insert(cells.end(), {"na", "nan", "nan"});
      }
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::vector<SweepRecord> parse_sweep_table(const CsvTable& t) {
  const std::size_t axis = t.column("axis"), value_col = t.column("axis_value"),
                    strategy = t.column("strategy"), status = t.column("status"),
                    value = t.column("value"), eps = t.column("epsilon"),
                    feasible = t.column("feasible");
  auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto block = optional_column("blocklength");
  const auto rate = optional_column("realized_rate");
  const auto opt_block = optional_column("opt_blocklength");
  const auto opt_rate = optional_column("opt_rate");
  const auto opt_value = optional_column("opt_value");

  std::vector<SweepRecord> out;
  for (const auto& row : t.rows) {
    SweepRecord r{row[axis],          parse_real(row[value_col]), row[strategy], row[status],
                  parse_real(row[value]), parse_real(row[eps]),   parse_flag(row[feasible]),
                  {}, {}, {}, {}, {}};
    if (block) r.blocklength = parse_integer(row[*block]);
    if (rate) r.realized_rate = parse_real(row[*rate]);
    if (opt_block && row[*opt_block] != "na") r.opt_blocklength = parse_integer(row[*opt_block]);
    if (opt_rate) r.opt_rate = parse_real(row[*opt_rate]);
    if (opt_value) r.opt_value = parse_real(row[*opt_value]);
    out.push_back(std::move(r));
  }
  return out;
}

CsvTable simulation_table(const std::vector<SimResult>& results, std::uint64_t seed,
                          const std::string& metadata) {
  CsvTable t;
  t.metadata = metadata;
  t.header = {"strategy",    "replication",     "seed",           "cycles",
              "avg_penalty", "avg_linear_aoi",  "mean_Y",         "exp_alpha_Y_hat",
              "exp_alpha_T_hat", "ci_halfwidth"};
  for (const auto& r : results) {
    const std::string name(to_string(r.strategy));
    for (const auto& rep : r.per_replication) {
      t.rows.push_back({name, std::to_string(rep.index), std::to_string(rep.seed),
                        std::to_string(rep.cycles), format_number(rep.avg_penalty),
                        format_number(rep.avg_linear_aoi), format_number(rep.mean_Y),
                        format_number(rep.exp_alpha_Y_hat), format_number(rep.exp_alpha_T_hat),
                        "nan"});
    }
    t.rows.push_back({name, "all", std::to_string(seed), std::to_string(r.cycles),
                      format_number(r.avg_penalty), format_number(r.avg_linear_aoi),
                      format_number(r.mean_Y), format_number(r.exp_alpha_Y_hat),
                      format_number(r.exp_alpha_T_hat), format_number(r.ci_halfwidth)});
  }
  return t;
}

}  // namespace aoi::cli
