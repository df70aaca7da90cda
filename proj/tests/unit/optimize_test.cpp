#include "aoi/optimize.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace aoi {
namespace {

SystemParams base(PenaltyShape shape = PenaltyShape::exponential(0.002, 10.0),
                  double lambda = 0.01) {
  return SystemParams{LinkConfig(100, 118, 3.0), lambda, shape};
}

SweepSpec make_sweep(SweepAxis axis, std::vector<double> grid,
                     std::vector<StrategyKind> strategies) {
  return SweepSpec{.axis = axis, .grid = std::move(grid), .strategies = std::move(strategies),
                   .base = base()};
}

TEST(Optimum, SingletonRange) {
  SearchSpec spec{.m_min = 130, .m_max = 130, .objective_strategy = StrategyKind::Npnb,
                  .base = base()};
  const auto opt = optimal_blocklength(spec);
  EXPECT_EQ(opt.blocklength, 130);
  EXPECT_EQ(opt.feasible_points, 1);
  auto p = base();
  p.link = p.link.with_blocklength(130);
  EXPECT_DOUBLE_EQ(opt.value, evaluate(StrategyKind::Npnb, p).value);
}

TEST(Optimum, KnownOptimum) {
  SearchSpec spec{.objective_strategy = StrategyKind::Npnb, .base = base()};
  const auto opt = optimal_blocklength(spec);
  EXPECT_EQ(opt.blocklength, 121);
  EXPECT_EQ(opt.m_min, 100);
  EXPECT_EQ(opt.m_max, 2000);
  EXPECT_DOUBLE_EQ(opt.rate, 100.0 / 121.0);
}

TEST(Optimum, IsUnimodalWitness) {
  for (auto s : {StrategyKind::Npnb, StrategyKind::Npob, StrategyKind::Preemption}) {
    SearchSpec spec{.m_min = 100, .m_max = 300, .objective_strategy = s, .base = base()};
    const auto opt = optimal_blocklength(spec);
    double prev = -1.0;
    for (std::int64_t m = opt.blocklength; m <= 180; ++m) {
      auto p = base();
      p.link = p.link.with_blocklength(m);
      const auto r = evaluate(s, p);
      if (!r.finite()) break;
      EXPECT_GE(r.value, prev) << to_string(s) << " M=" << m;
      prev = r.value;
    }
    prev = -1.0;
    for (std::int64_t m = opt.blocklength; m >= 100; --m) {
      auto p = base();
      p.link = p.link.with_blocklength(m);
      const double v = evaluate(s, p).value;
      EXPECT_GE(v, prev) << to_string(s) << " M=" << m;
      prev = v;
    }
  }
}

TEST(Optimum, NoFeasiblePointNamesConditions) {
  SearchSpec spec{.m_min = 400, .m_max = 420, .objective_strategy = StrategyKind::Preemption,
                  .base = base()};
  try {
    optimal_blocklength(spec);
    FAIL() << "expected NoFeasibleBlocklength";
  } catch (const NoFeasibleBlocklength& e) {
    EXPECT_NE(std::string(e.what()).find(kPreemptionSeries), std::string::npos);
  }
}

TEST(Optimum, RejectsBadRange) {
  SearchSpec spec{.m_min = 300, .m_max = 200, .base = base()};
  EXPECT_THROW(optimal_blocklength(spec), std::invalid_argument);
  spec = SearchSpec{.m_min = 0, .m_max = 200, .base = base()};
  EXPECT_THROW(optimal_blocklength(spec), std::invalid_argument);
}

TEST(Sweep, RowsInGridThenStrategyOrder) {
  auto spec = make_sweep(SweepAxis::Lambda, {0.005, 0.01, 0.05}, {StrategyKind::ZeroWaiting, StrategyKind::Preemption, StrategyKind::Npnb});
  const auto rows = sweep(spec);
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(rows[i].axis_value, spec.grid[i / 3]);
  }
  EXPECT_EQ(rows[0].strategy, StrategyKind::Npnb);
  EXPECT_EQ(rows[1].strategy, StrategyKind::Preemption);
  EXPECT_EQ(rows[2].strategy, StrategyKind::ZeroWaiting);
}

TEST(Sweep, DivergentRowsCarryReason) {
  auto spec = make_sweep(SweepAxis::CodingRate, {0.25, 0.85}, {StrategyKind::Preemption});
  const auto rows = sweep(spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].blocklength, 400);
  EXPECT_EQ(rows[0].status, EvalStatus::Divergent);
  EXPECT_TRUE(std::isnan(rows[0].value));
  EXPECT_FALSE(rows[0].feasible);
  EXPECT_FALSE(rows[0].reason.empty());
  EXPECT_EQ(rows[1].blocklength, 118);
  EXPECT_TRUE(rows[1].feasible);
  EXPECT_DOUBLE_EQ(rows[1].realized_rate, 100.0 / 118.0);
}

TEST(Sweep, AlphaAxisBindsBeta) {
  auto spec = make_sweep(SweepAxis::Alpha, {5e-4, 1e-3}, {StrategyKind::Npnb});
  const auto p = sweep_point(spec, 1e-3);
  EXPECT_DOUBLE_EQ(p.shape.alpha(), 1e-3);
  EXPECT_DOUBLE_EQ(p.shape.beta(), 1e3);
  spec.bind_beta_to_alpha = false;
  EXPECT_DOUBLE_EQ(sweep_point(spec, 1e-3).shape.beta(), 10.0);
}

TEST(Sweep, OptimumRecordedPerRow) {
  auto spec = make_sweep(SweepAxis::Alpha, {5e-4, 1e-3, 2e-3, 5e-3}, {StrategyKind::Npnb});
  spec.record_optimum = true;
  const auto rows = sweep(spec);
  ASSERT_EQ(rows.size(), 4u);
  const std::int64_t expected[] = {120, 120, 121, 124};
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_TRUE(rows[i].optimum.has_value());
    EXPECT_EQ(rows[i].optimum->blocklength, expected[i]);
  }
}

TEST(Sweep, Deterministic) {
  auto spec = make_sweep(SweepAxis::CodingRate, {}, {kAllStrategies.begin(), kAllStrategies.end()});
  for (double r = 0.4; r < 1.0; r += 0.1) spec.grid.push_back(r);
  const auto a = sweep(spec);
  const auto b = sweep(spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::isnan(a[i].value), std::isnan(b[i].value));
    if (!std::isnan(a[i].value)) EXPECT_EQ(a[i].value, b[i].value);
  }
}

TEST(Sweep, Validation) {
  auto spec = make_sweep(SweepAxis::CodingRate, {0.5, 0.4}, {StrategyKind::Npnb});
  EXPECT_THROW(sweep(spec), std::invalid_argument);
  spec.grid = {0.5};
  spec.strategies = {};
  EXPECT_THROW(sweep(spec), std::invalid_argument);
}

TEST(SweepAxis, Parse) {
  EXPECT_EQ(parse_sweep_axis("lambda"), SweepAxis::Lambda);
  EXPECT_EQ(parse_sweep_axis("coding_rate"), SweepAxis::CodingRate);
  EXPECT_EQ(to_string(SweepAxis::Alpha), "alpha");
  EXPECT_THROW(parse_sweep_axis("beta"), std::invalid_argument);
  EXPECT_EQ(blocklength_for_rate(100, 0.85), 118);
}

}  // namespace
}  // namespace aoi
