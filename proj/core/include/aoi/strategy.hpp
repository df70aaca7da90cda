#pragma once

#include <array>
#include <string_view>

namespace aoi {

/// Packet management at the transmitter.
///
/// ZeroWaiting is the limit of the non-preemptive strategies as the
/// generation rate grows without bound; it only has a closed form.
enum class StrategyKind { Npnb, Npob, Preemption, ZeroWaiting };

inline constexpr std::array<StrategyKind, 4> kAllStrategies = {
    StrategyKind::Npnb, StrategyKind::Npob, StrategyKind::Preemption,
    StrategyKind::ZeroWaiting};

inline constexpr std::array<StrategyKind, 3> kSimulatedStrategies = {
    StrategyKind::Npnb, StrategyKind::Npob, StrategyKind::Preemption};

/// "NPNB", "NPOB", "Preemption", "ZeroWaiting".
std::string_view to_string(StrategyKind kind);

/// Case-insensitive; also accepts "preempt", "zw", "zero_waiting".
StrategyKind parse_strategy(std::string_view text);

}  // namespace aoi
