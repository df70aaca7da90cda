#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aoi/analytic.hpp"

namespace aoi {

/// Integer blocklength search range for one strategy. The blocklength in
/// `base.link` is ignored.
struct SearchSpec {
  std::int64_t m_min = kBlocklengthValidityBound;
  std::int64_t m_max = 0;  ///< 0 means 20 * L
  StrategyKind objective_strategy = StrategyKind::Npnb;
  SystemParams base;

  std::int64_t resolved_m_max() const;
  void validate() const;
};

struct Optimum {
  std::int64_t blocklength;
  double rate;
  double value;
  std::int64_t m_min;
  std::int64_t m_max;
  std::int64_t feasible_points;
};

class NoFeasibleBlocklength : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive scan of M in [m_min, m_max]; Divergent points are skipped and
/// ties go to the smaller M. Throws NoFeasibleBlocklength naming the
/// violated conditions at both ends of the range.
Optimum optimal_blocklength(const SearchSpec& spec);

enum class SweepAxis { CodingRate, Lambda, Alpha };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepSpec {
  SweepAxis axis = SweepAxis::CodingRate;
  std::vector<double> grid;  ///< strictly increasing
  std::vector<StrategyKind> strategies;
  SystemParams base;
  /// Alpha sweeps: set beta = 1/alpha at every point. Otherwise the sign
  /// of base beta is kept and only alpha moves.
  bool bind_beta_to_alpha = true;
  /// Record optimal_blocklength per row (range below).
  bool record_optimum = false;
  std::int64_t opt_m_min = kBlocklengthValidityBound;
  std::int64_t opt_m_max = 0;

  void validate() const;
};

struct SweepRow {
  SweepAxis axis;
  double axis_value;
  StrategyKind strategy;
  EvalStatus status;
  double value;        ///< NaN when Divergent
  std::string reason;  ///< violated condition when Divergent
  double epsilon;
  bool feasible;
  std::int64_t blocklength;  ///< blocklength actually evaluated
  double realized_rate;      ///< L / blocklength
  std::optional<Optimum> optimum;
};

/// Blocklength realising a requested coding rate: round(L / R).
std::int64_t blocklength_for_rate(std::int64_t bits, double rate);

/// Rows in grid order, then strategy order (NPNB, NPOB, Preemption,
/// ZeroWaiting) whatever order `spec.strategies` lists them in.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// Parameters of a sweep row's evaluation point.
SystemParams sweep_point(const SweepSpec& spec, double axis_value);

}  // namespace aoi
