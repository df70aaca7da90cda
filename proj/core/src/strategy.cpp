#include "aoi/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace aoi {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Npnb:
      return "NPNB";
    case StrategyKind::Npob:
      return "NPOB";
    case StrategyKind::Preemption:
      return "Preemption";
    case StrategyKind::ZeroWaiting:
      return "ZeroWaiting";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "npnb") return StrategyKind::Npnb;
  if (key == "npob") return StrategyKind::Npob;
  if (key == "preemption" || key == "preempt" || key == "p") return StrategyKind::Preemption;
  if (key == "zerowaiting" || key == "zero_waiting" || key == "zw") {
    return StrategyKind::ZeroWaiting;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) +
                              "' (expected NPNB, NPOB, Preemption or ZeroWaiting)");
}

}  // namespace aoi
