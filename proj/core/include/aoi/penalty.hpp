#pragma once

#include <string_view>

namespace aoi {

enum class PenaltyMode { Exponential, Logarithmic, LinearLimit };

std::string_view to_string(PenaltyMode mode);

/// The alpha-beta age penalty C(age) = beta * (exp(alpha * age) - 1), or the
/// plain linear age C(age) = age (the alpha -> 0, beta = 1/alpha limit).
///
/// Exponential requires alpha, beta > 0; Logarithmic requires alpha, beta < 0.
/// Both make C non-negative and non-decreasing.
class PenaltyShape {
 public:
  /// Infers Exponential or Logarithmic from the signs. Throws
  /// std::invalid_argument for zero, mixed-sign or non-finite parameters.
  static PenaltyShape from_pair(double alpha, double beta);
  static PenaltyShape exponential(double alpha, double beta);
  static PenaltyShape logarithmic(double alpha, double beta);
  static PenaltyShape linear();

  PenaltyMode mode() const { return mode_; }
  bool is_linear() const { return mode_ == PenaltyMode::LinearLimit; }

  /// Zero for LinearLimit.
  double alpha() const { return alpha_; }
  /// Zero for LinearLimit.
  double beta() const { return beta_; }

  friend bool operator==(const PenaltyShape&, const PenaltyShape&) = default;

 private:
  PenaltyShape(PenaltyMode mode, double alpha, double beta)
      : mode_(mode), alpha_(alpha), beta_(beta) {}

  PenaltyMode mode_;
  double alpha_;
  double beta_;
};

/// A stretch of the age trajectory between two receptions. Age grows with
/// unit slope, so the end age is start_age + length().
struct AoiSegment {
  double start_time;
  double end_time;
  double start_age;

  /// Throws std::invalid_argument unless end_time > start_time and
  /// start_age >= 0.
  static AoiSegment make(double start_time, double end_time, double start_age);

  double length() const { return end_time - start_time; }
  double end_age() const { return start_age + length(); }
};

/// expm1(x) / x, continuous at 0.
double expm1_ratio(double x);

/// Penalty of a given age. Throws std::domain_error for negative age.
double penalty_at(const PenaltyShape& shape, double age);

/// Closed-form integral of the penalty over a segment.
double segment_penalty_integral(const PenaltyShape& shape, const AoiSegment& seg);

/// Penalty area of one inter-reception cycle: the age starts at `t_prev`
/// (system time of the previously received update) and grows for `y`.
double cycle_area(const PenaltyShape& shape, double t_prev, double y);

/// Area under the linear age over the same cycle: t_prev * y + y^2 / 2.
double linear_cycle_area(double t_prev, double y);

}  // namespace aoi
