#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/stats.hpp"
#include "aoi/strategy.hpp"

namespace aoi {

enum class WarmupPolicy { StartAtFirstReception };

struct SimConfig {
  SystemParams params;
  double horizon = 1e7;  ///< channel uses
  std::uint64_t seed = 1;
  std::uint32_t replications = 1;
  WarmupPolicy warmup = WarmupPolicy::StartAtFirstReception;
  /// Worker threads for independent replications; 0 picks the hardware
  /// concurrency. Results do not depend on this value.
  unsigned threads = 0;

  /// Throws std::invalid_argument unless horizon >= 100 * M and
  /// replications >= 1.
  void validate() const;
};

/// One inter-reception cycle.
struct CycleRecord {
  double Y;            ///< time between the two receptions
  double T_prev;       ///< system time of the update received at the start
  double Q;            ///< penalty area over the cycle
  double linear_area;  ///< area under the plain age over the cycle
  std::uint32_t attempts;  ///< completed transmissions, the last one successful
  /// Preemptions suffered before each completed transmission (preemption
  /// strategy only; zeros otherwise).
  std::vector<std::uint32_t> preempt_counts;
};

struct ReplicationResult {
  std::uint32_t index = 0;
  std::uint64_t seed = 0;

  double avg_penalty = 0.0;
  double avg_linear_aoi = 0.0;
  double mean_Y = 0.0;
  double exp_alpha_Y_hat = 0.0;
  double exp_alpha_T_hat = 0.0;
  std::uint64_t cycles = 0;
  /// Regenerative (ratio-estimator) standard error of avg_penalty.
  double penalty_std_error = 0.0;

  double sum_Q = 0.0;
  double sum_Y = 0.0;
  double sum_linear = 0.0;
  stats::Accumulator y;
  stats::Accumulator exp_alpha_y;
  stats::Accumulator exp_alpha_t;

  /// attempt_histogram[h-1] counts cycles with h completed transmissions.
  std::vector<std::uint64_t> attempt_histogram;
  /// preemption_histogram[k] counts completed transmissions preceded by k
  /// preemptions.
  std::vector<std::uint64_t> preemption_histogram;

  double busy_time = 0.0;
  double idle_time = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t receptions = 0;
};

struct SimResult {
  StrategyKind strategy = StrategyKind::Npnb;
  double horizon = 0.0;

  double avg_penalty = 0.0;
  double avg_linear_aoi = 0.0;
  double mean_Y = 0.0;
  double exp_alpha_Y_hat = 0.0;
  double exp_alpha_T_hat = 0.0;
  std::uint64_t cycles = 0;

  /// Across replications (t-based 95% interval); a single replication falls
  /// back to the regenerative standard error and a normal quantile.
  double std_error = 0.0;
  double ci_halfwidth = 0.0;
  double linear_std_error = 0.0;
  double linear_ci_halfwidth = 0.0;

  // Per-cycle standard errors, pooled over all replications.
  double mean_Y_se = 0.0;
  double exp_alpha_Y_se = 0.0;
  double exp_alpha_T_se = 0.0;

  std::vector<std::uint64_t> attempt_histogram;
  std::vector<std::uint64_t> preemption_histogram;
  std::vector<ReplicationResult> per_replication;
};

/// Raised when a replication sees no complete cycle within its horizon.
class SimulationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// splitmix64(splitmix64(seed) ^ index): independent, reproducible streams
/// per replication.
std::uint64_t replication_seed(std::uint64_t seed, std::uint32_t index);

using CycleObserver = std::function<void(const CycleRecord&)>;

/// Runs one replication. Throws SimulationFailure if no cycle completes.
ReplicationResult run_replication(const SimConfig& config, StrategyKind strategy,
                                  std::uint32_t index, const CycleObserver& observer = {});

/// Runs all replications and aggregates them in index order.
SimResult run(const SimConfig& config, StrategyKind strategy);

enum class EventKind {
  Generated,
  Dropped,
  Buffered,
  BufferReplaced,
  TxStart,
  TxAbort,
  TxSuccess,
  TxFail,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct TraceEvent {
  double time;
  EventKind kind;
  std::uint64_t update_id;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;
  bool truncated = false;
  ReplicationResult result;
};

/// Event log of replication 0. Recording stops after `max_events`; the
/// replication itself always runs to the horizon.
Trace trace(const SimConfig& config, StrategyKind strategy, std::size_t max_events);

/// One event per line: time (6 decimals), kind, update id, tab-separated.
void write_event_log(std::ostream& out, std::span<const TraceEvent> events);
std::vector<TraceEvent> read_event_log(std::istream& in);

/// Recomputes the time-average penalty from an untruncated event log.
double replay_average_penalty(std::span<const TraceEvent> events, const PenaltyShape& shape);

}  // namespace aoi
