#include "aoi/finite_blocklength.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aoi {

std::string_view to_string(DispersionVariant v) {
  switch (v) {
    case DispersionVariant::AsWritten:
      return "as_written";
    case DispersionVariant::StandardPolyanskiy:
      return "standard";
  }
  return "unknown";
}

DispersionVariant parse_dispersion_variant(std::string_view text) {
  if (text == "as_written" || text == "aswritten" || text == "as-written") {
    return DispersionVariant::AsWritten;
  }
  if (text == "standard" || text == "standard_polyanskiy" || text == "polyanskiy") {
    return DispersionVariant::StandardPolyanskiy;
  }
  throw std::invalid_argument("unknown dispersion variant '" + std::string(text) +
                              "' (expected as_written or standard)");
}

LinkConfig::LinkConfig(std::int64_t bits_per_update, std::int64_t blocklength, double snr)
    : bits_(bits_per_update), blocklength_(blocklength), snr_(snr) {
  if (bits_ < 1) {
    throw std::invalid_argument("bits_per_update must be >= 1, got " + std::to_string(bits_));
  }
  if (blocklength_ < 1) {
    throw std::invalid_argument("blocklength must be >= 1, got " +
                                std::to_string(blocklength_));
  }
  if (!(snr_ > 0.0) || !std::isfinite(snr_)) {
    throw std::invalid_argument("snr must be positive and finite");
  }
}

double snr_from_db(double db) {
  if (!std::isfinite(db)) {
    throw std::invalid_argument("snr_db must be finite");
  }
  return std::pow(10.0, db / 10.0);
}

double q_function(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("q_function: argument must be finite");
  }
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double dispersion(double snr, DispersionVariant variant) {
  switch (variant) {
    case DispersionVariant::AsWritten:
      return 1.0 - 1.0 / (1.0 + snr * snr);
    case DispersionVariant::StandardPolyanskiy:
      return 1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr));
  }
  throw std::invalid_argument("dispersion: bad variant");
}

double block_error_argument(const LinkConfig& cfg, DispersionVariant variant) {
  const double m = static_cast<double>(cfg.blocklength());
  const double capacity = 0.5 * std::log2(1.0 + cfg.snr());
  const double numerator = capacity - cfg.coding_rate();
  const double denominator =
      std::numbers::log2e * std::sqrt(dispersion(cfg.snr(), variant) / (2.0 * m));
  return numerator / denominator;
}

double block_error_rate(const LinkConfig& cfg, DispersionVariant variant) {
  return q_function(block_error_argument(cfg, variant));
}

}  // namespace aoi
