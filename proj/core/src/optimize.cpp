#include "aoi/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aoi {
namespace {

std::string describe_violation(const EvalResult& r, std::int64_t m) {
  std::ostringstream out;
  out << "M=" << m << ": ";
  if (const Condition* c = r.feasibility.first_violation()) {
    out << c->name << " (margin " << c->margin << ")";
  } else {
    out << r.reason;
  }
  return out.str();
}

}  // namespace

std::int64_t SearchSpec::resolved_m_max() const {
  return m_max > 0 ? m_max : 20 * base.link.bits_per_update();
}

void SearchSpec::validate() const {
  base.validate();
  if (m_min < 1) {
    throw std::invalid_argument("m_min must be >= 1");
  }
  if (m_min > resolved_m_max()) {
    throw std::invalid_argument("m_min must not exceed m_max");
  }
}

Optimum optimal_blocklength(const SearchSpec& spec) {
  spec.validate();
  const std::int64_t hi = spec.resolved_m_max();
  Optimum best{0, 0.0, std::numeric_limits<double>::infinity(), spec.m_min, hi, 0};
  for (std::int64_t m = spec.m_min; m <= hi; ++m) {
    SystemParams p = spec.base;
    p.link = p.link.with_blocklength(m);
    const auto r = evaluate(spec.objective_strategy, p);
    if (!r.finite()) continue;
    ++best.feasible_points;
    if (r.value < best.value) {
      best.value = r.value;
      best.blocklength = m;
    }
  }
  if (best.feasible_points == 0) {
    auto at = [&](std::int64_t m) {
      SystemParams p = spec.base;
      p.link = p.link.with_blocklength(m);
      return describe_violation(evaluate(spec.objective_strategy, p), m);
    };
    throw NoFeasibleBlocklength("no feasible blocklength in [" + std::to_string(spec.m_min) +
                                ", " + std::to_string(hi) + "] for " +
                                std::string(to_string(spec.objective_strategy)) + "; " +
                                at(spec.m_min) + "; " + at(hi));
  }
  best.rate = static_cast<double>(spec.base.link.bits_per_update()) /
              static_cast<double>(best.blocklength);
  return best;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::CodingRate:
      return "coding_rate";
    case SweepAxis::Lambda:
      return "lambda";
    case SweepAxis::Alpha:
      return "alpha";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "coding_rate" || text == "rate" || text == "R") return SweepAxis::CodingRate;
  if (text == "lambda") return SweepAxis::Lambda;
  if (text == "alpha") return SweepAxis::Alpha;
  throw std::invalid_argument("unknown sweep axis '" + std::string(text) +
                              "' (expected coding_rate, lambda or alpha)");
}

void SweepSpec::validate() const {
  base.validate();
  if (grid.empty()) {
    throw std::invalid_argument("sweep grid must not be empty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("sweep grid must be strictly increasing");
    }
  }
  if (strategies.empty()) {
    throw std::invalid_argument("sweep needs at least one strategy");
  }
  for (double v : grid) {
    if (!std::isfinite(v) || (axis != SweepAxis::Alpha && !(v > 0.0))) {
      throw std::invalid_argument("sweep grid values must be finite and positive");
    }
    if (axis == SweepAxis::Alpha && v == 0.0) {
      throw std::invalid_argument("alpha grid must not contain 0 (use the linear mode)");
    }
  }
}

std::int64_t blocklength_for_rate(std::int64_t bits, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("coding rate must be positive and finite");
  }
  return std::max<std::int64_t>(1, std::llround(static_cast<double>(bits) / rate));
}

SystemParams sweep_point(const SweepSpec& spec, double axis_value) {
  SystemParams p = spec.base;
  switch (spec.axis) {
    case SweepAxis::CodingRate:
      p.link = p.link.with_blocklength(
          blocklength_for_rate(p.link.bits_per_update(), axis_value));
      break;
    case SweepAxis::Lambda:
      p.lambda = axis_value;
      break;
    case SweepAxis::Alpha:
      if (spec.bind_beta_to_alpha || p.shape.is_linear()) {
        p.shape = PenaltyShape::from_pair(axis_value, 1.0 / axis_value);
      } else {
        p.shape = PenaltyShape::from_pair(axis_value, p.shape.beta());
      }
      break;
  }
  return p;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<StrategyKind> order;
  for (auto s : kAllStrategies) {
    if (std::find(spec.strategies.begin(), spec.strategies.end(), s) != spec.strategies.end()) {
      order.push_back(s);
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(spec.grid.size() * order.size());
  for (double v : spec.grid) {
    const SystemParams p = sweep_point(spec, v);
    for (auto s : order) {
      const auto r = evaluate(s, p);
      SweepRow row{spec.axis,
                   v,
                   s,
                   r.status,
                   r.finite() ? r.value : std::numeric_limits<double>::quiet_NaN(),
                   r.finite() ? std::string{} : r.reason,
                   r.epsilon,
                   r.feasibility.all_hold(),
                   p.link.blocklength(),
                   p.link.coding_rate(),
                   std::nullopt};
      if (spec.record_optimum) {
        SearchSpec search{spec.opt_m_min, spec.opt_m_max, s, p};
        try {
          row.optimum = optimal_blocklength(search);
        } catch (const NoFeasibleBlocklength&) {
          row.optimum.reset();
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace aoi
