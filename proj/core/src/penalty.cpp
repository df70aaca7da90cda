#include "aoi/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

std::string_view to_string(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::Exponential:
      return "exponential";
    case PenaltyMode::Logarithmic:
      return "logarithmic";
    case PenaltyMode::LinearLimit:
      return "linear";
  }
  return "unknown";
}

PenaltyShape PenaltyShape::from_pair(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("penalty alpha and beta must be finite");
  }
  if (alpha > 0.0 && beta > 0.0) {
    return PenaltyShape(PenaltyMode::Exponential, alpha, beta);
  }
  if (alpha < 0.0 && beta < 0.0) {
    return PenaltyShape(PenaltyMode::Logarithmic, alpha, beta);
  }
  throw std::invalid_argument(
      "penalty alpha and beta must be both positive or both negative (use the linear "
      "mode for alpha -> 0)");
}

PenaltyShape PenaltyShape::exponential(double alpha, double beta) {
  auto shape = from_pair(alpha, beta);
  if (shape.mode() != PenaltyMode::Exponential) {
    throw std::invalid_argument("exponential penalty requires alpha > 0 and beta > 0");
  }
  return shape;
}

PenaltyShape PenaltyShape::logarithmic(double alpha, double beta) {
  auto shape = from_pair(alpha, beta);
  if (shape.mode() != PenaltyMode::Logarithmic) {
    throw std::invalid_argument("logarithmic penalty requires alpha < 0 and beta < 0");
  }
  return shape;
}

PenaltyShape PenaltyShape::linear() { return PenaltyShape(PenaltyMode::LinearLimit, 0.0, 0.0); }

AoiSegment AoiSegment::make(double start_time, double end_time, double start_age) {
  if (!(end_time > start_time)) {
    throw std::invalid_argument("segment end_time must exceed start_time");
  }
  if (!(start_age >= 0.0)) {
    throw std::invalid_argument("segment start_age must be non-negative");
  }
  return AoiSegment{start_time, end_time, start_age};
}

double expm1_ratio(double x) {
  if (std::abs(x) < 1e-12) {
    return 1.0 + 0.5 * x;
  }
  return std::expm1(x) / x;
}

double penalty_at(const PenaltyShape& shape, double age) {
  if (!(age >= 0.0)) {
    throw std::domain_error("penalty_at: age must be non-negative");
  }
  if (shape.is_linear()) {
    return age;
  }
  return shape.beta() * std::expm1(shape.alpha() * age);
}

double cycle_area(const PenaltyShape& shape, double t_prev, double y) {
  if (shape.is_linear()) {
    return linear_cycle_area(t_prev, y);
  }
  const double a = shape.alpha();
  const double b = shape.beta();
  // (b/a) e^{a t} (e^{a y} - 1) - b y, with the 1/a folded into expm1_ratio
  return b * y * (std::exp(a * t_prev) * expm1_ratio(a * y) - 1.0);
}

double segment_penalty_integral(const PenaltyShape& shape, const AoiSegment& seg) {
  return cycle_area(shape, seg.start_age, seg.length());
}

double linear_cycle_area(double t_prev, double y) { return t_prev * y + 0.5 * y * y; }

}  // namespace aoi
