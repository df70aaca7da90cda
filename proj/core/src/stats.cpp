#include "aoi/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aoi::stats {

double Accumulator::mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }

double Accumulator::variance() const {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double m = sum / nn;
  const double v = (sum_sq - nn * m * m) / (nn - 1.0);
  return v > 0.0 ? v : 0.0;
}

double Accumulator::std_error() const {
  return n < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n));
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double t_critical(double level, std::uint64_t dof) {
  if (dof == 0) {
    throw std::invalid_argument("t_critical: dof must be positive");
  }
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.5 + 0.5 * level);
}

GofResult geometric_gof(std::span<const std::uint64_t> histogram, double success_prob,
                        double min_expected) {
  if (!(success_prob > 0.0 && success_prob <= 1.0)) {
    throw std::invalid_argument("geometric_gof: success probability must be in (0, 1]");
  }
  const double total = static_cast<double>(
      std::accumulate(histogram.begin(), histogram.end(), std::uint64_t{0}));
  if (total == 0.0) {
    throw std::invalid_argument("geometric_gof: empty histogram");
  }

  // Walk bins while the bin AND the remaining tail both clear min_expected.
  std::vector<double> expected;
  std::vector<double> observed;
  double tail_prob = 1.0;
  double pmf = success_prob;
  std::size_t k = 0;
  while (true) {
    const double rest = tail_prob - pmf;
    if (pmf * total < min_expected || rest * total < min_expected) break;
    expected.push_back(pmf * total);
    observed.push_back(k < histogram.size() ? static_cast<double>(histogram[k]) : 0.0);
    tail_prob = rest;
    pmf *= (1.0 - success_prob);
    ++k;
  }
  double tail_obs = 0.0;
  for (std::size_t i = k; i < histogram.size(); ++i) tail_obs += static_cast<double>(histogram[i]);
  expected.push_back(tail_prob * total);
  observed.push_back(tail_obs);

  double chi2 = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    chi2 += d * d / expected[i];
  }
  GofResult r{chi2, 0, 1.0, expected.size()};
  if (expected.size() >= 2) {
    r.dof = expected.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  }
  return r;
}

}  // namespace aoi::stats
