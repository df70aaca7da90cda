#include "aoi/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace aoi {
namespace {

const PenaltyShape kExp = PenaltyShape::exponential(0.002, 10.0);

SimConfig config(StrategyKind, std::int64_t m = 118, double lambda = 0.01,
                 PenaltyShape shape = kExp) {
  SimConfig c{.params = SystemParams{LinkConfig(100, m, 3.0), lambda, shape}};
  c.horizon = 2e6;
  c.seed = 20240611;
  c.replications = 2;
  return c;
}

TEST(Sim, SeededRunsAreBitIdentical) {
  for (auto s : kSimulatedStrategies) {
    auto c = config(s);
    const auto a = run(c, s);
    c.threads = 1;
    const auto b = run(c, s);
    EXPECT_EQ(a.avg_penalty, b.avg_penalty);
    EXPECT_EQ(a.avg_linear_aoi, b.avg_linear_aoi);
    EXPECT_EQ(a.exp_alpha_Y_hat, b.exp_alpha_Y_hat);
    EXPECT_EQ(a.cycles, b.cycles);
    EXPECT_EQ(a.ci_halfwidth, b.ci_halfwidth);
  }
}

TEST(Sim, ReplicationSeedsAreDistinct) {
  EXPECT_NE(replication_seed(2, 0), replication_seed(3, 0));
  EXPECT_NE(replication_seed(2, 1), replication_seed(3, 0));
  EXPECT_NE(replication_seed(7, 0), replication_seed(7, 1));
  auto c = config(StrategyKind::Npnb);
  c.replications = 1;
  c.seed = 2;
  const double a = run(c, StrategyKind::Npnb).avg_penalty;
  c.seed = 3;
  EXPECT_NE(a, run(c, StrategyKind::Npnb).avg_penalty);
}

TEST(Sim, CycleInvariants) {
  for (auto s : kSimulatedStrategies) {
    auto c = config(s);
    std::uint64_t seen = 0;
    run_replication(c, s, 0, [&](const CycleRecord& rec) {
      ++seen;
      EXPECT_GE(rec.Y, 118.0 - 1e-9);
      if (s == StrategyKind::Npob) {
        EXPECT_GE(rec.T_prev, 118.0 - 1e-9);
      } else {
        EXPECT_NEAR(rec.T_prev, 118.0, 1e-9);
      }
      EXPECT_GE(rec.attempts, 1u);
      EXPECT_EQ(rec.preempt_counts.size(), rec.attempts);
      EXPECT_DOUBLE_EQ(rec.Q, cycle_area(kExp, rec.T_prev, rec.Y));
      EXPECT_DOUBLE_EQ(rec.linear_area, linear_cycle_area(rec.T_prev, rec.Y));
    });
    EXPECT_GT(seen, 1000u);
  }
}

TEST(Sim, TimeAccounting) {
  for (auto s : kSimulatedStrategies) {
    const auto c = config(s);
    const auto r = run_replication(c, s, 0);
    EXPECT_NEAR(r.busy_time + r.idle_time, c.horizon, 1e-6);
    EXPECT_GT(r.busy_time, 0.0);
    EXPECT_GT(r.generated, r.receptions);
  }
}

TEST(Sim, ZeroWaitingIsRejected) {
  EXPECT_THROW(run(config(StrategyKind::Npnb), StrategyKind::ZeroWaiting),
               std::invalid_argument);
}

TEST(Sim, ConfigValidation) {
  auto c = config(StrategyKind::Npnb);
  c.horizon = 118.0 * 99;
  EXPECT_THROW(run(c, StrategyKind::Npnb), std::invalid_argument);
  c = config(StrategyKind::Npnb);
  c.replications = 0;
  EXPECT_THROW(run(c, StrategyKind::Npnb), std::invalid_argument);
}

TEST(Sim, NoReceptionIsReported) {
  auto c = config(StrategyKind::Npnb);
  c.params.lambda = 1e-9;
  c.horizon = 11800;
  try {
    run(c, StrategyKind::Npnb);
    FAIL() << "expected SimulationFailure";
  } catch (const SimulationFailure& e) {
    EXPECT_NE(std::string(e.what()).find("11800"), std::string::npos);
  }
}

TEST(Sim, MatchesClosedFormWithinThreeSigma) {
  for (auto s : kSimulatedStrategies) {
    auto c = config(s);
    c.horizon = 5e6;
    c.replications = 4;
    const auto r = run(c, s);
    const auto a = evaluate(s, c.params);
    ASSERT_TRUE(a.finite());
    EXPECT_LT(std::abs(r.avg_penalty - a.value), 3.0 * r.std_error + 1e-12) << to_string(s);
    EXPECT_LT(std::abs(r.mean_Y - a.moments->mean_Y), 3.0 * r.mean_Y_se) << to_string(s);
  }
}

TEST(Sim, PreemptionWithoutErrors) {
  auto c = config(StrategyKind::Preemption, 100, 0.01);
  c.params.forced_epsilon = 0.0;
  c.horizon = 1e7;
  const auto r = run(c, StrategyKind::Preemption);
  EXPECT_LT(std::abs(r.mean_Y - std::exp(1.0) / 0.01), 3.0 * r.mean_Y_se);
  for (std::size_t h = 1; h < r.attempt_histogram.size(); ++h) {
    EXPECT_EQ(r.attempt_histogram[h], 0u);
  }
}

TEST(Sim, AttemptsAreGeometric) {
  auto c = config(StrategyKind::Npnb, 110);
  c.horizon = 2e7;
  c.replications = 1;
  const auto r = run(c, StrategyKind::Npnb);
  const auto gof = stats::geometric_gof(r.attempt_histogram, 1.0 - c.params.epsilon());
  EXPECT_GT(gof.p_value, 0.01);
}

TEST(Sim, DivergentPenaltyGrowsWithHorizon) {
  auto c = config(StrategyKind::Npnb, 118, 0.01, PenaltyShape::exponential(0.03, 1.0));
  ASSERT_FALSE(evaluate(StrategyKind::Npnb, c.params).finite());
  c.replications = 1;
  c.horizon = 1e6;
  const double short_run = run(c, StrategyKind::Npnb).avg_penalty;
  c.horizon = 1e7;
  EXPECT_GT(run(c, StrategyKind::Npnb).avg_penalty, short_run);
}

class TraceTest : public ::testing::TestWithParam<StrategyKind> {};

TEST_P(TraceTest, ReplayReproducesRun) {
  const auto s = GetParam();
  auto c = config(s);
  c.horizon = 2e5;
  const auto t = trace(c, s, 1u << 20);
  ASSERT_FALSE(t.truncated);
  EXPECT_EQ(replay_average_penalty(t.events, kExp), t.result.avg_penalty);
  EXPECT_EQ(run_replication(c, s, 0).avg_penalty, t.result.avg_penalty);

  std::stringstream buf;
  write_event_log(buf, t.events);
  const auto back = read_event_log(buf);
  ASSERT_EQ(back.size(), t.events.size());
  EXPECT_EQ(back.front().kind, t.events.front().kind);
  EXPECT_NEAR(replay_average_penalty(back, kExp), t.result.avg_penalty,
              1e-6 * t.result.avg_penalty);
}

TEST_P(TraceTest, EventsFollowStrategy) {
  const auto s = GetParam();
  auto c = config(s);
  c.horizon = 2e5;
  const auto t = trace(c, s, 1u << 20);
  bool in_tx = false;
  int buffered_during_tx = 0;
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const auto& e = t.events[i];
    if (i > 0) EXPECT_GE(e.time, t.events[i - 1].time);
    switch (e.kind) {
      case EventKind::Buffered:
      case EventKind::BufferReplaced:
        EXPECT_EQ(s, StrategyKind::Npob);
        EXPECT_TRUE(in_tx);
        if (e.kind == EventKind::Buffered) {
          EXPECT_EQ(buffered_during_tx, 0);
        } else {
          EXPECT_EQ(buffered_during_tx, 1);
        }
        buffered_during_tx = 1;
        break;
      case EventKind::TxAbort:
        EXPECT_EQ(s, StrategyKind::Preemption);
        ASSERT_LT(i + 1, t.events.size());
        EXPECT_EQ(t.events[i + 1].kind, EventKind::TxStart);
        EXPECT_EQ(t.events[i + 1].time, e.time);
        in_tx = false;
        break;
      case EventKind::TxStart:
        EXPECT_FALSE(in_tx);
        in_tx = true;
        if (buffered_during_tx) buffered_during_tx = 0;
        break;
      case EventKind::TxSuccess:
      case EventKind::TxFail:
        EXPECT_TRUE(in_tx);
        in_tx = false;
        break;
      case EventKind::Dropped:
        EXPECT_EQ(s, StrategyKind::Npnb);
        break;
      case EventKind::Generated:
        break;
    }
  }
}

TEST_P(TraceTest, TruncationKeepsResult) {
  const auto s = GetParam();
  auto c = config(s);
  c.horizon = 2e5;
  const auto t = trace(c, s, 10);
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.events.size(), 10u);
  EXPECT_EQ(t.result.avg_penalty, run_replication(c, s, 0).avg_penalty);
}

INSTANTIATE_TEST_SUITE_P(Strategies, TraceTest, ::testing::ValuesIn(kSimulatedStrategies),
                         [](const auto& info) { return std::string(to_string(info.param)); });

}  // namespace
}  // namespace aoi
