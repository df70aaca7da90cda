#include "aoi/finite_blocklength.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oracles/quadrature.hpp"

namespace aoi {
namespace {

TEST(QFunction, HalfAtZero) { EXPECT_DOUBLE_EQ(q_function(0.0), 0.5); }

TEST(QFunction, FarTailIsTinyAndNonNegative) {
  const double v = q_function(40.0);
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 1e-300);
}

TEST(QFunction, MatchesHighPrecisionQuadrature) {
  // frozen from the 50-digit oracle: 0.15865525393145705141476745...
  constexpr double kQ1 = 0.15865525393145705141;
  EXPECT_NEAR(q_function(1.0), kQ1, 1e-15);
  for (double x : {-6.0, -2.5, -0.3, 0.0, 0.7, 1.0, 2.0, 3.3, 5.0, 8.0}) {
    const double reference = static_cast<double>(oracle::gaussian_tail(oracle::Float50(x)));
    EXPECT_NEAR(q_function(x), reference, 1e-12) << "x=" << x;
  }
}

TEST(QFunction, SymmetryAndMonotonicity) {
  double prev = q_function(-8.0);
  for (double x = -8.0; x <= 8.0; x += 0.125) {
    EXPECT_NEAR(q_function(x) + q_function(-x), 1.0, 1e-12);
    if (x > -8.0) {
      EXPECT_LT(q_function(x), prev);
    }
    EXPECT_GT(q_function(x), 0.0);
    EXPECT_LT(q_function(x), 1.0);
    prev = q_function(x);
  }
}

TEST(QFunction, RejectsNonFinite) {
  EXPECT_THROW(q_function(std::numeric_limits<double>::infinity()), std::domain_error);
  EXPECT_THROW(q_function(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(LinkConfig, ValidatesFields) {
  EXPECT_THROW(LinkConfig(0, 100, 3.0), std::invalid_argument);
  EXPECT_THROW(LinkConfig(100, 0, 3.0), std::invalid_argument);
  EXPECT_THROW(LinkConfig(100, 100, 0.0), std::invalid_argument);
  EXPECT_THROW(LinkConfig(100, 100, -1.0), std::invalid_argument);
  const LinkConfig ok(100, 118, 3.0);
  EXPECT_DOUBLE_EQ(ok.coding_rate(), 100.0 / 118.0);
  EXPECT_FALSE(ok.below_validity_bound());
  EXPECT_TRUE(LinkConfig(100, 90, 3.0).below_validity_bound());
}

TEST(LinkConfig, DecibelConversion) {
  EXPECT_DOUBLE_EQ(snr_from_db(0.0), 1.0);
  EXPECT_NEAR(snr_from_db(10.0 * std::log10(3.0)), 3.0, 1e-14);
}

TEST(BlockErrorRate, HalfWhenRateEqualsCapacity) {
  // 0.5 log2(1 + 3) = 1 = 100 / 100
  EXPECT_NEAR(block_error_rate(LinkConfig(100, 100, 3.0)), 0.5, 1e-12);
  EXPECT_NEAR(block_error_rate(LinkConfig(100, 100, 3.0), DispersionVariant::StandardPolyanskiy),
              0.5, 1e-12);
}

TEST(BlockErrorRate, GoldenValueAt118) {
  // frozen from the 50-digit quadrature oracle
  constexpr double kAsWritten = 0.043431284025742779751;
  constexpr double kStandard = 0.046713396981957834784;
  EXPECT_NEAR(block_error_rate(LinkConfig(100, 118, 3.0)), kAsWritten, 1e-15);
  EXPECT_NEAR(block_error_rate(LinkConfig(100, 118, 3.0), DispersionVariant::StandardPolyanskiy),
              kStandard, 1e-15);
  EXPECT_NEAR(kAsWritten,
              static_cast<double>(oracle::block_error_rate(100, 118, 3, false)), 1e-15);
  EXPECT_NEAR(kStandard, static_cast<double>(oracle::block_error_rate(100, 118, 3, true)),
              1e-15);
}

TEST(BlockErrorRate, DecreasesWithBlocklengthBelowCapacity) {
  EXPECT_GT(block_error_rate(LinkConfig(100, 150, 3.0)),
            block_error_rate(LinkConfig(100, 300, 3.0)));
  for (auto variant : {DispersionVariant::AsWritten, DispersionVariant::StandardPolyanskiy}) {
    double prev = block_error_rate(LinkConfig(100, 101, 3.0), variant);
    for (std::int64_t m = 102; m <= 220; ++m) {
      const double e = block_error_rate(LinkConfig(100, m, 3.0), variant);
      EXPECT_LT(e, prev) << "M=" << m;
      EXPECT_GT(e, 0.0);
      EXPECT_LT(e, 1.0);
      prev = e;
    }
  }
}

TEST(BlockErrorRate, SmoothInSnr) {
  double prev = block_error_rate(LinkConfig(100, 118, 2.0));
  for (double snr = 2.01; snr <= 4.0; snr += 0.01) {
    const double e = block_error_rate(LinkConfig(100, 118, snr));
    EXPECT_LT(e, prev);
    EXPECT_LT(prev - e, 0.02) << "jump at snr=" << snr;
    prev = e;
  }
}

TEST(BlockErrorRate, VariantsDifferBoundedly) {
  // StandardPolyanskiy has the larger dispersion for snr > 1, so a larger
  // error rate below capacity; the gap stays small on the working range.
  for (std::int64_t m = 105; m <= 200; m += 5) {
    const LinkConfig cfg(100, m, 3.0);
    const double a = block_error_rate(cfg, DispersionVariant::AsWritten);
    const double s = block_error_rate(cfg, DispersionVariant::StandardPolyanskiy);
    EXPECT_GE(s, a);
    EXPECT_LT(s - a, 0.01) << "M=" << m;
  }
}

TEST(DispersionVariant, ParsesNames) {
  EXPECT_EQ(parse_dispersion_variant("as_written"), DispersionVariant::AsWritten);
  EXPECT_EQ(parse_dispersion_variant("standard"), DispersionVariant::StandardPolyanskiy);
  EXPECT_THROW(parse_dispersion_variant("bogus"), std::invalid_argument);
}

}  // namespace
}  // namespace aoi
