#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aoi::stats {

/// Running sums for a scalar sample.
struct Accumulator {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Accumulator& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const;
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  double std_error() const;
};

double mean(std::span<const double> xs);
/// Unbiased sample standard deviation; 0 for fewer than two samples.
double stddev(std::span<const double> xs);

/// Two-sided Student-t critical value, e.g. level 0.95 -> t_{0.975, dof}.
double t_critical(double level, std::uint64_t dof);

struct GofResult {
  double statistic;
  std::uint64_t dof;
  double p_value;
  std::uint64_t bins;
};

/// Pearson chi-square test of a histogram against a geometric law:
/// `histogram[i]` counts outcomes whose probability is p (1-p)^i, so index 0
/// is H = 1 for an attempt count and K = 0 for a preemption count. Bins are
/// merged from the tail until every expected count is at least
/// `min_expected`.
GofResult geometric_gof(std::span<const std::uint64_t> histogram, double success_prob,
                        double min_expected = 5.0);

}  // namespace aoi::stats
