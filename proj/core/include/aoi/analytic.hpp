#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aoi/finite_blocklength.hpp"
#include "aoi/penalty.hpp"
#include "aoi/strategy.hpp"

namespace aoi {

/// Everything the closed forms depend on.
struct SystemParams {
  LinkConfig link;
  double lambda;  ///< status update generation rate, per channel use
  PenaltyShape shape;
  DispersionVariant variant = DispersionVariant::AsWritten;
  /// Replaces the block error rate computed from `link`. Meant for tests
  /// that need exact values such as 0.
  std::optional<double> forced_epsilon;

  /// Throws std::invalid_argument if lambda is not positive and finite or
  /// a forced epsilon lies outside [0, 1).
  void validate() const;

  double epsilon() const;
  double blocklength() const { return static_cast<double>(link.blocklength()); }
};

/// E[exp(alpha T_{j-1})], E[exp(alpha Y_j)] and E[Y_j]. A moment whose
/// defining series diverges is reported as +infinity.
struct MomentTriple {
  double exp_alpha_T;
  double exp_alpha_Y;
  double mean_Y;
};

struct Condition {
  std::string name;
  bool holds;
  /// Positive when the condition holds; its size is the slack.
  double margin;
};

struct Feasibility {
  std::vector<Condition> conditions;

  bool all_hold() const;
  /// First violated condition, if any.
  const Condition* first_violation() const;
};

enum class EvalStatus { Finite, Divergent };

struct EvalResult {
  EvalStatus status = EvalStatus::Divergent;
  double value = 0.0;  ///< meaningful only when Finite
  std::string reason;  ///< names the violated condition when Divergent
  std::optional<MomentTriple> moments;
  Feasibility feasibility;
  double epsilon = 0.0;
  bool via_linear_limit = false;

  bool finite() const { return status == EvalStatus::Finite; }
};

// Condition names shared by the evaluators and reports.
inline constexpr const char* kGeometricSeries = "geometric-series condition";
inline constexpr const char* kIdleTransform = "idle-transform condition";
inline constexpr const char* kBufferSeries = "buffer-series condition";
inline constexpr const char* kAlphaBelowLambda = "alpha < lambda";
inline constexpr const char* kPreemptionSeries = "preemption-series condition";

Feasibility npnb_feasibility(const SystemParams& p);
Feasibility npob_feasibility(const SystemParams& p);
Feasibility preemption_feasibility(const SystemParams& p);
Feasibility zero_waiting_feasibility(const SystemParams& p);
Feasibility feasibility(StrategyKind strategy, const SystemParams& p);

MomentTriple npnb_moments(const SystemParams& p);
MomentTriple npob_moments(const SystemParams& p);
MomentTriple preemption_moments(const SystemParams& p);

/// Per-attempt interval of the preemption strategy (idle time, preempted
/// partial transmissions and the final full transmission).
double preemption_attempt_exp_alpha(const SystemParams& p);
double preemption_attempt_mean(const SystemParams& p);

/// beta * E[e^{aT}] * (E[e^{aY}] - 1) / (alpha * E[Y]) - beta.
double assemble_average_penalty(const PenaltyShape& shape, const MomentTriple& m);

// Average penalty under each strategy. A LinearLimit shape is routed to
// linear_limit; otherwise the result is Divergent whenever one of the
// strategy's feasibility conditions fails.
EvalResult npnb_average_penalty(const SystemParams& p);
EvalResult npob_average_penalty(const SystemParams& p);
EvalResult preemption_average_penalty(const SystemParams& p);
EvalResult zero_waiting_average_penalty(const LinkConfig& link, const PenaltyShape& shape,
                                        DispersionVariant variant,
                                        std::optional<double> forced_epsilon = std::nullopt);

/// Average linear age for the strategy, taken as the alpha -> 0 limit of
/// its closed form with beta = 1/alpha. Richardson extrapolation over
/// alpha in {a0, a0/2, a0/4}, a0 = 1e-4 / max(M, E[Y]).
EvalResult linear_limit(StrategyKind strategy, const SystemParams& p);

/// Single evaluation of the closed form at an explicit (alpha, 1/alpha).
/// Exposed for checking the convergence of linear_limit.
double linear_limit_probe(StrategyKind strategy, const SystemParams& p, double alpha);

EvalResult evaluate(StrategyKind strategy, const SystemParams& p);

/// Second-order cycle statistics; infinite where the series diverges.
struct CycleSecondMoments {
  double mean_T;
  double mean_Y_sq;     ///< E[Y^2]
  double exp_2alpha_Y;  ///< E[exp(2 alpha Y)]
  double exp_2alpha_T;  ///< E[exp(2 alpha T)]
};

/// E[T], E[Y^2] from the compound-geometric structure of the cycle and the
/// doubled-alpha transforms. With a LinearLimit shape the transforms are 1.
CycleSecondMoments cycle_second_moments(StrategyKind strategy, const SystemParams& p);

/// Mean linear age E[T] + E[Y^2] / (2 E[Y]), an exact alternative to the
/// alpha -> 0 extrapolation in linear_limit.
double mean_age_closed_form(StrategyKind strategy, const SystemParams& p);

}  // namespace aoi
