#pragma once

#include <cstdint>
#include <string_view>

namespace aoi {

/// Which dispersion term the block error rate approximation uses.
///
/// `AsWritten` uses 1 - 1/(1 + snr^2); `StandardPolyanskiy` uses the
/// textbook AWGN dispersion 1 - 1/(1 + snr)^2. The two differ noticeably at
/// low SNR (0.9 vs 0.9375 at snr = 3), so callers pick one explicitly.
enum class DispersionVariant { AsWritten, StandardPolyanskiy };

std::string_view to_string(DispersionVariant v);
DispersionVariant parse_dispersion_variant(std::string_view text);

/// Below this blocklength the normal approximation is no longer tight.
inline constexpr std::int64_t kBlocklengthValidityBound = 100;

/// Channel and packet parameters of the point-to-point link.
class LinkConfig {
 public:
  /// Throws std::invalid_argument unless bits >= 1, blocklength >= 1 and
  /// snr is positive and finite. `snr` is a linear power ratio.
  LinkConfig(std::int64_t bits_per_update, std::int64_t blocklength, double snr);

  std::int64_t bits_per_update() const { return bits_; }
  std::int64_t blocklength() const { return blocklength_; }
  double snr() const { return snr_; }

  double coding_rate() const {
    return static_cast<double>(bits_) / static_cast<double>(blocklength_);
  }

  /// True when blocklength < kBlocklengthValidityBound.
  bool below_validity_bound() const { return blocklength_ < kBlocklengthValidityBound; }

  LinkConfig with_blocklength(std::int64_t blocklength) const {
    return LinkConfig(bits_, blocklength, snr_);
  }

  friend bool operator==(const LinkConfig&, const LinkConfig&) = default;

 private:
  std::int64_t bits_;
  std::int64_t blocklength_;
  double snr_;
};

/// Converts decibels to a linear power ratio.
double snr_from_db(double db);

/// Standard Gaussian upper tail probability Q(x).
///
/// Evaluated through erfc, which keeps the absolute error below 1e-12 on
/// the whole real line and underflows gracefully to 0 for large x.
/// Throws std::domain_error for non-finite input.
double q_function(double x);

double dispersion(double snr, DispersionVariant variant);

/// The argument handed to q_function by block_error_rate.
double block_error_argument(const LinkConfig& cfg, DispersionVariant variant);

/// Finite-blocklength AWGN block error rate for an L-bit update sent in
/// M channel uses at the given SNR.
double block_error_rate(const LinkConfig& cfg,
                        DispersionVariant variant = DispersionVariant::AsWritten);

}  // namespace aoi
