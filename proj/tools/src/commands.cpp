#include "aoi/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "aoi/cli/table.hpp"
#include "aoi/version.hpp"

namespace aoi::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<StrategyKind> strategies_for(Command cmd, const ExperimentConfig& cfg) {
  if (!cfg.run.strategies.empty()) {
    if (cmd == Command::Simulate) {
      for (auto s : cfg.run.strategies) {
        if (s == StrategyKind::ZeroWaiting) {
          throw ConfigError("run.strategies", "ZeroWaiting has no simulator");
        }
      }
    }
    return cfg.run.strategies;
  }
  if (cmd == Command::Simulate) return {kSimulatedStrategies.begin(), kSimulatedStrategies.end()};
  return {kAllStrategies.begin(), kAllStrategies.end()};
}

/// Where the command's main output goes: the configured path or `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("output.path", "cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

Json cell_json(const std::string& cell) {
  if (cell == "true") return true;
  if (cell == "false") return false;
  if (cell == "nan" || cell == "na") return nullptr;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (!cell.empty() && end == cell.c_str() + cell.size()) {
    if (cell.find_first_of(".eEn") == std::string::npos) {
      if (cell[0] == '-') return std::stoll(cell);
      return std::stoull(cell);
    }
    return v;
  }
  return cell;
}

Json table_json(const CsvTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json rec = Json::object();
    for (std::size_t i = 0; i < t.header.size(); ++i) rec[t.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(rec));
  }
  return rows;
}

Json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string shape_text(const PenaltyShape& s) {
  if (s.is_linear()) return "linear (alpha -> 0, beta = 1/alpha)";
  std::ostringstream os;
  os << to_string(s.mode()) << " alpha=" << format_number(s.alpha())
     << " beta=" << format_number(s.beta());
  return os.str();
}

std::string validity_warning(const SystemParams& p) {
  if (!p.link.below_validity_bound()) return {};
  return "M=" + std::to_string(p.link.blocklength()) + " is below " +
         std::to_string(kBlocklengthValidityBound) +
         "; the normal approximation of the block error rate is loose there";
}

void write_header(std::ostream& os, Command cmd, const SystemParams& p) {
  os << "aoi-penalty-lab v" << kVersion << ' ' << to_string(cmd) << '\n';
  os << "link: L=" << p.link.bits_per_update() << " M=" << p.link.blocklength()
     << " R=" << format_number(p.link.coding_rate()) << " snr=" << format_number(p.link.snr())
     << " (linear) variant=" << to_string(p.variant) << " epsilon=" << format_number(p.epsilon())
     << (p.forced_epsilon ? " (forced)" : "") << '\n';
  os << "arrival: lambda=" << format_number(p.lambda) << '\n';
  os << "penalty: " << shape_text(p.shape) << '\n';
  if (const auto w = validity_warning(p); !w.empty()) os << "warning: " << w << '\n';
}

Json link_json(const SystemParams& p) {
  return Json{{"L", p.link.bits_per_update()},
              {"M", p.link.blocklength()},
              {"R", p.link.coding_rate()},
              {"snr", p.link.snr()},
              {"variant", std::string(to_string(p.variant))},
              {"epsilon", p.epsilon()},
              {"lambda", p.lambda},
              {"penalty_mode", std::string(to_string(p.shape.mode()))},
              {"alpha", p.shape.alpha()},
              {"beta", p.shape.beta()}};
}

OutputFormat format_or(const ExperimentConfig& cfg, OutputFormat fallback) {
  return cfg.output.format.value_or(fallback);
}

int cmd_eval(const ExperimentConfig& cfg, std::ostream& out) {
  const auto& p = cfg.params;
  const auto strategies = strategies_for(Command::Eval, cfg);
  Sink sink(cfg.output.path, out);
  auto& os = sink.get();
  const auto format = format_or(cfg, OutputFormat::Text);

  std::vector<std::pair<StrategyKind, EvalResult>> results;
  for (auto s : strategies) results.emplace_back(s, evaluate(s, p));

  if (format == OutputFormat::Text) {
    write_header(os, Command::Eval, p);
    for (const auto& [s, r] : results) {
      os << '\n' << to_string(s) << ": ";
      if (r.finite()) {
        os << format_number(r.value);
        if (r.via_linear_limit) os << " (linear limit, Richardson extrapolation)";
      } else {
        os << "Divergent (" << r.reason << ")";
      }
      os << '\n';
      if (r.moments) {
        const auto& m = *r.moments;
        if (!p.shape.is_linear()) {
          os << "  E[exp(aT)] = " << format_number(m.exp_alpha_T)
             << "  E[exp(aY)] = " << format_number(m.exp_alpha_Y) << '\n';
        }
        os << "  E[Y] = " << format_number(m.mean_Y) << '\n';
      }
      for (const auto& c : r.feasibility.conditions) {
        os << "  " << c.name << ": " << (c.holds ? "holds" : "violated")
           << " (margin " << format_number(c.margin) << ")\n";
      }
    }
    return kExitOk;
  }

  if (format == OutputFormat::Csv) {
    CsvTable t;
    t.metadata = metadata_line(std::nullopt, p.variant);
    t.header = {"strategy", "status", "value", "epsilon", "feasible", "exp_alpha_T",
                "exp_alpha_Y", "mean_Y", "reason"};
    for (const auto& [s, r] : results) {
      const auto m = r.moments.value_or(MomentTriple{NAN, NAN, NAN});
      t.rows.push_back({std::string(to_string(s)), r.finite() ? "Finite" : "Divergent",
                        format_number(r.finite() ? r.value : NAN), format_number(r.epsilon),
                        r.feasibility.all_hold() ? "true" : "false",
                        format_number(m.exp_alpha_T), format_number(m.exp_alpha_Y),
                        format_number(m.mean_Y), r.finite() ? "" : r.reason});
    }
    write_csv(os, t);
    return kExitOk;
  }

  Json doc{{"version", kVersion}, {"command", "eval"}, {"parameters", link_json(p)}};
  doc["warnings"] = Json::array();
  if (const auto w = validity_warning(p); !w.empty()) doc["warnings"].push_back(w);
  Json arr = Json::array();
  for (const auto& [s, r] : results) {
    Json rec{{"strategy", std::string(to_string(s))},
             {"status", r.finite() ? "Finite" : "Divergent"},
             {"value", r.finite() ? number_json(r.value) : Json(nullptr)},
             {"reason", r.reason},
             {"epsilon", r.epsilon},
             {"via_linear_limit", r.via_linear_limit}};
    if (r.moments) {
      rec["moments"] = Json{{"exp_alpha_T", number_json(r.moments->exp_alpha_T)},
                            {"exp_alpha_Y", number_json(r.moments->exp_alpha_Y)},
                            {"mean_Y", number_json(r.moments->mean_Y)}};
    }
    Json conds = Json::array();
    for (const auto& c : r.feasibility.conditions) {
      conds.push_back(Json{{"name", c.name}, {"holds", c.holds}, {"margin", number_json(c.margin)}});
    }
    rec["conditions"] = std::move(conds);
    arr.push_back(std::move(rec));
  }
  doc["results"] = std::move(arr);
  os << std::setw(2) << doc << '\n';
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& p = cfg.params;
  const auto strategies = strategies_for(Command::Simulate, cfg);
  const std::uint64_t seed = cfg.run.seed.value_or(1);

  SimConfig sc{.params = p};
  sc.horizon = cfg.run.horizon;
  sc.seed = seed;
  sc.replications = cfg.run.replications;
  sc.threads = cfg.run.threads;
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("run.horizon", e.what());
  }

  // csv/json without a path go to standard output, and the report moves to
  // the diagnostic stream
  const auto format = format_or(cfg, cfg.output.path.empty() ? OutputFormat::Text
                                                             : OutputFormat::Csv);
  const bool data_on_stdout = format != OutputFormat::Text && cfg.output.path.empty();
  std::ostream& report = data_on_stdout ? err : out;

  write_header(report, Command::Simulate, p);
  report << "run: horizon=" << format_number(sc.horizon) << " replications=" << sc.replications
         << " seed=" << seed << '\n';

  std::vector<SimResult> results;
  for (auto s : strategies) {
    SimResult r;
    try {
      r = run(sc, s);
    } catch (const SimulationFailure& e) {
      err << "error: " << e.what() << '\n';
      return kExitSimulation;
    }
    const auto a = evaluate(s, p);
    report << '\n' << to_string(s) << ": simulated " << format_number(r.avg_penalty) << " +/- "
           << format_number(r.ci_halfwidth) << " (95% CI, " << r.cycles << " cycles)\n";
    if (a.finite()) {
      const double z = r.std_error > 0.0 ? (r.avg_penalty - a.value) / r.std_error : NAN;
      report << "  closed form " << format_number(a.value) << ", z = " << std::fixed
             << std::setprecision(2) << z << std::defaultfloat << std::setprecision(6) << '\n';
      if (a.moments && !p.shape.is_linear()) {
        report << "  E[Y] " << format_number(r.mean_Y) << " (closed " << format_number(a.moments->mean_Y)
               << "), E[exp(aY)] " << format_number(r.exp_alpha_Y_hat) << " (closed "
               << format_number(a.moments->exp_alpha_Y) << "), E[exp(aT)] "
               << format_number(r.exp_alpha_T_hat) << " (closed "
               << format_number(a.moments->exp_alpha_T) << ")\n";
      }
    } else {
      // no finite target: show how the estimate moves with the horizon
      SimConfig shorter = sc;
      shorter.horizon = std::max(sc.horizon / 10.0, 100.0 * p.blocklength());
      double early = NAN;
      try {
        early = run(shorter, s).avg_penalty;
      } catch (const SimulationFailure&) {
      }
      report << "  closed form Divergent (" << a.reason << ")\n"
             << "  growth: horizon " << format_number(shorter.horizon) << " -> "
             << format_number(early) << ", horizon " << format_number(sc.horizon) << " -> "
             << format_number(r.avg_penalty)
             << (r.avg_penalty > early ? " (growing)" : " (not growing)") << '\n';
    }
    report << "  mean AoI " << format_number(r.avg_linear_aoi) << " +/- "
           << format_number(r.linear_ci_halfwidth) << '\n';
    results.push_back(std::move(r));
  }

  if (format != OutputFormat::Text) {
    Sink sink(cfg.output.path, out);
    const auto table = simulation_table(results, seed, metadata_line(seed, p.variant));
    if (format == OutputFormat::Csv) {
      write_csv(sink.get(), table);
    } else {
      sink.get() << std::setw(2) << table_json(table) << '\n';
    }
  }
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.run.grid.empty()) throw ConfigError("run.grid", "required for sweep");
  SweepSpec spec{.axis = cfg.run.axis,
                 .grid = cfg.run.grid,
                 .strategies = strategies_for(Command::Sweep, cfg),
                 .base = cfg.params,
                 .bind_beta_to_alpha = cfg.run.bind_beta,
                 .record_optimum = cfg.run.record_optimum,
                 .opt_m_min = cfg.run.m_min,
                 .opt_m_max = cfg.run.m_max};
  std::vector<SweepRow> rows;
  try {
    rows = sweep(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("run.grid", e.what());
  }
  const auto table = sweep_table(rows, spec.axis == SweepAxis::CodingRate, spec.record_optimum,
                                 metadata_line(cfg.run.seed, cfg.params.variant));
  Sink sink(cfg.output.path, out);
  if (format_or(cfg, OutputFormat::Csv) == OutputFormat::Json) {
    sink.get() << std::setw(2) << table_json(table) << '\n';
  } else {
    write_csv(sink.get(), table);
  }
  return kExitOk;
}

int cmd_optimize(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& p = cfg.params;
  Sink sink(cfg.output.path, out);
  auto& os = sink.get();
  const auto format = format_or(cfg, OutputFormat::Text);
  int code = kExitOk;

  CsvTable t;
  t.metadata = metadata_line(std::nullopt, p.variant);
  t.header = {"strategy", "blocklength", "rate", "value", "m_min", "m_max", "feasible_points"};
  if (format == OutputFormat::Text) write_header(os, Command::Optimize, p);

  for (auto s : strategies_for(Command::Optimize, cfg)) {
    SearchSpec spec{.m_min = cfg.run.m_min,
                    .m_max = cfg.run.m_max,
                    .objective_strategy = s,
                    .base = p};
    try {
      const auto opt = optimal_blocklength(spec);
      if (format == OutputFormat::Text) {
        os << to_string(s) << ": M* = " << opt.blocklength << ", R* = " << format_number(opt.rate)
           << ", value " << format_number(opt.value) << ", range [" << opt.m_min << ", "
           << opt.m_max << "], " << opt.feasible_points << " feasible points\n";
      }
      t.rows.push_back({std::string(to_string(s)), std::to_string(opt.blocklength),
                        format_number(opt.rate), format_number(opt.value),
                        std::to_string(opt.m_min), std::to_string(opt.m_max),
                        std::to_string(opt.feasible_points)});
    } catch (const NoFeasibleBlocklength& e) {
      err << "error: " << to_string(s) << ": " << e.what() << '\n';
      code = kExitNoFeasible;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("run.m_min", e.what());
    }
  }
  if (format == OutputFormat::Csv) write_csv(os, t);
  if (format == OutputFormat::Json) os << std::setw(2) << table_json(t) << '\n';
  return code;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Eval:
      return "eval";
    case Command::Simulate:
      return "simulate";
    case Command::Sweep:
      return "sweep";
    case Command::Optimize:
      return "optimize";
  }
  return "?";
}

int run_command(Command cmd, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cmd) {
      case Command::Eval:
        return cmd_eval(cfg, out);
      case Command::Simulate:
        return cmd_simulate(cfg, out, err);
      case Command::Sweep:
        return cmd_sweep(cfg, out);
      case Command::Optimize:
        return cmd_optimize(cfg, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace aoi::cli
