#include "aoi/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace aoi::stats {
namespace {

TEST(Accumulator, MeanAndVariance) {
  Accumulator acc;
  for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) acc.add(x);
  EXPECT_EQ(acc.n, 8u);
  EXPECT_DOUBLE_EQ(acc.mean(), 5.0);
  EXPECT_NEAR(acc.variance(), 32.0 / 7.0, 1e-12);
  EXPECT_NEAR(acc.std_error(), std::sqrt(32.0 / 7.0 / 8.0), 1e-12);
}

TEST(Accumulator, MergeMatchesSequential) {
  Accumulator a, b, all;
  for (int i = 0; i < 10; ++i) {
    (i < 4 ? a : b).add(i * 1.5);
    all.add(i * 1.5);
  }
  a.merge(b);
  EXPECT_EQ(a.n, all.n);
  EXPECT_DOUBLE_EQ(a.mean(), all.mean());
  EXPECT_DOUBLE_EQ(a.variance(), all.variance());
}

TEST(Accumulator, DegenerateSizes) {
  Accumulator acc;
  EXPECT_EQ(acc.variance(), 0.0);
  acc.add(3.0);
  EXPECT_EQ(acc.variance(), 0.0);
  EXPECT_EQ(acc.mean(), 3.0);
}

TEST(Summary, MeanAndStddev) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(mean(xs), 2.5);
  EXPECT_NEAR(stddev(xs), std::sqrt(5.0 / 3.0), 1e-12);
}

TEST(TCritical, KnownQuantiles) {
  EXPECT_NEAR(t_critical(0.95, 9), 2.2621571627409915, 1e-9);
  EXPECT_NEAR(t_critical(0.95, 1), 12.706204736174698, 1e-8);
  EXPECT_NEAR(t_critical(0.95, 1000000), 1.959966, 1e-5);
}

TEST(GeometricGof, AcceptsGeometricSample) {
  std::mt19937_64 rng(7);
  std::geometric_distribution<int> geo(0.8);
  std::vector<std::uint64_t> hist(20, 0);
  for (int i = 0; i < 100000; ++i) ++hist[std::min(geo(rng), 19)];
  const auto r = geometric_gof(hist, 0.8);
  EXPECT_GT(r.p_value, 0.01);
  EXPECT_GE(r.bins, 3u);
  EXPECT_EQ(r.dof, r.bins - 1);
}

TEST(GeometricGof, RejectsWrongParameter) {
  std::mt19937_64 rng(7);
  std::geometric_distribution<int> geo(0.8);
  std::vector<std::uint64_t> hist(20, 0);
  for (int i = 0; i < 100000; ++i) ++hist[std::min(geo(rng), 19)];
  EXPECT_LT(geometric_gof(hist, 0.79).p_value, 0.01);
}

TEST(GeometricGof, ExactCountsGiveZeroStatistic) {
  std::vector<std::uint64_t> hist{512, 256, 128, 64, 32, 16, 8, 4, 2, 1, 1};
  const auto r = geometric_gof(hist, 0.5);
  EXPECT_EQ(r.bins, 8u);
  EXPECT_NEAR(r.statistic, 0.0, 1e-9);
  EXPECT_NEAR(r.p_value, 1.0, 1e-9);
}

}  // namespace
}  // namespace aoi::stats
