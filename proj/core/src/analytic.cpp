#include "aoi/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Condition geometric_series(double alpha, double eps, double m) {
  // e^{aM} eps < 1, i.e. alpha < -ln(eps) / M (natural log)
  if (eps <= 0.0) {
    return {kGeometricSeries, true, kInf};
  }
  const double bound = -std::log(eps) / m;
  return {kGeometricSeries, alpha < bound, bound - alpha};
}

/// lambda/(lambda-alpha) * (1 - e^{(alpha-lambda)M}), with the removable
/// singularity at alpha == lambda replaced by its limit lambda*M.
double truncated_wait_term(double lambda, double alpha, double m) {
  if (std::abs(lambda - alpha) < 1e-12 * lambda) {
    return lambda * m;
  }
  return lambda * m * expm1_ratio((alpha - lambda) * m);
}

double npob_wait_transform(double lambda, double alpha, double m) {
  return std::exp(-lambda * m) + truncated_wait_term(lambda, alpha, m);
}

EvalResult divergent(Feasibility f, double eps, std::optional<MomentTriple> moments) {
  EvalResult r;
  r.status = EvalStatus::Divergent;
  r.epsilon = eps;
  r.moments = moments;
  if (const Condition* c = f.first_violation()) {
    r.reason = c->name;
  } else {
    r.reason = "non-finite closed form";
  }
  r.feasibility = std::move(f);
  return r;
}

EvalResult finite_or_divergent(double value, Feasibility f, double eps, MomentTriple moments) {
  if (!std::isfinite(value)) {
    return divergent(std::move(f), eps, moments);
  }
  EvalResult r;
  r.status = EvalStatus::Finite;
  r.value = value;
  r.epsilon = eps;
  r.moments = moments;
  r.feasibility = std::move(f);
  return r;
}

double npnb_closed_form(double lambda, double alpha, double beta, double eps, double m) {
  const double e_am = std::exp(alpha * m);
  const double denom = lambda * (1.0 - eps * e_am) - alpha;
  const double g = e_am * lambda * (1.0 - eps) * (lambda * std::expm1(alpha * m) + alpha) /
                   (alpha * (lambda * m + 1.0) * denom);
  return beta * (g - 1.0);
}

double npob_closed_form(double lambda, double alpha, double beta, double eps, double m) {
  const double e_am = std::exp(alpha * m);
  const double e_lm = std::exp(-lambda * m);
  const double e_alm = std::exp((alpha - lambda) * m);
  const double wait = npob_wait_transform(lambda, alpha, m);
  // E[e^{aY}] - 1 = N / D, written without the 1 - 1 cancellation
  const double numer = (lambda - alpha) * std::expm1(alpha * m) + alpha * e_alm;
  const double denom = lambda * (1.0 - e_am * eps) - alpha * (1.0 - eps * (e_am - e_alm));
  const double g = lambda * (1.0 - eps) * e_am * wait * numer /
                   (alpha * (lambda * m + e_lm) * denom);
  return beta * (g - 1.0);
}

double preemption_closed_form(double lambda, double alpha, double beta, double eps, double m) {
  // beta*alpha*e^{lambda M} / (lambda(1-eps)e^{alpha M} - alpha e^{lambda M}),
  // scaled by e^{-lambda M} to stay finite for large lambda*M
  return beta * alpha / (lambda * (1.0 - eps) * std::exp((alpha - lambda) * m) - alpha);
}

double zero_waiting_closed_form(double alpha, double beta, double eps, double m) {
  const double e_am = std::exp(alpha * m);
  const double g = e_am * (1.0 - eps) * expm1_ratio(alpha * m) / (1.0 - eps * e_am);
  return beta * (g - 1.0);
}

double closed_form(StrategyKind strategy, double lambda, double alpha, double beta, double eps,
                   double m) {
  switch (strategy) {
    case StrategyKind::Npnb:
      return npnb_closed_form(lambda, alpha, beta, eps, m);
    case StrategyKind::Npob:
      return npob_closed_form(lambda, alpha, beta, eps, m);
    case StrategyKind::Preemption:
      return preemption_closed_form(lambda, alpha, beta, eps, m);
    case StrategyKind::ZeroWaiting:
      return zero_waiting_closed_form(alpha, beta, eps, m);
  }
  throw std::invalid_argument("closed_form: bad strategy");
}

double mean_cycle_length(StrategyKind strategy, double lambda, double eps, double m) {
  switch (strategy) {
    case StrategyKind::Npnb:
      return (lambda * m + 1.0) / (lambda * (1.0 - eps));
    case StrategyKind::Npob:
      return (lambda * m + std::exp(-lambda * m)) / (lambda * (1.0 - eps));
    case StrategyKind::Preemption:
      return std::exp(lambda * m) / (lambda * (1.0 - eps));
    case StrategyKind::ZeroWaiting:
      return m / (1.0 - eps);
  }
  throw std::invalid_argument("mean_cycle_length: bad strategy");
}

Feasibility feasibility_at(StrategyKind strategy, const SystemParams& p, double alpha) {
  SystemParams probe = p;
  probe.shape = PenaltyShape::exponential(alpha, 1.0 / alpha);
  return feasibility(strategy, probe);
}

}  // namespace

void SystemParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (forced_epsilon && !(*forced_epsilon >= 0.0 && *forced_epsilon < 1.0)) {
    throw std::invalid_argument("forced epsilon must lie in [0, 1)");
  }
}

double SystemParams::epsilon() const {
  if (forced_epsilon) {
    return *forced_epsilon;
  }
  return block_error_rate(link, variant);
}

bool Feasibility::all_hold() const {
  for (const auto& c : conditions) {
    if (!c.holds) return false;
  }
  return true;
}

const Condition* Feasibility::first_violation() const {
  for (const auto& c : conditions) {
    if (!c.holds) return &c;
  }
  return nullptr;
}

Feasibility npnb_feasibility(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double idle = p.lambda * (1.0 - eps * std::exp(a * m)) - a;
  return Feasibility{{geometric_series(a, eps, m), {kIdleTransform, idle > 0.0, idle}}};
}

Feasibility npob_feasibility(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double l = p.lambda;
  const double buffer =
      (l - a) * (1.0 - eps * std::exp(a * m)) - a * eps * std::exp((a - l) * m);
  return Feasibility{{geometric_series(a, eps, m), {kBufferSeries, buffer > 0.0, buffer}}};
}

Feasibility preemption_feasibility(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double l = p.lambda;
  // lambda(1-eps)e^{aM} > alpha e^{lambda M}, divided through by e^{lambda M}
  const double series = l * (1.0 - eps) * std::exp((a - l) * m) - a;
  return Feasibility{{{kAlphaBelowLambda, a < l, l - a},
                      {kPreemptionSeries, series > 0.0, series}}};
}

Feasibility zero_waiting_feasibility(const SystemParams& p) {
  return Feasibility{{geometric_series(p.shape.alpha(), p.epsilon(), p.blocklength())}};
}

Feasibility feasibility(StrategyKind strategy, const SystemParams& p) {
  switch (strategy) {
    case StrategyKind::Npnb:
      return npnb_feasibility(p);
    case StrategyKind::Npob:
      return npob_feasibility(p);
    case StrategyKind::Preemption:
      return preemption_feasibility(p);
    case StrategyKind::ZeroWaiting:
      return zero_waiting_feasibility(p);
  }
  throw std::invalid_argument("feasibility: bad strategy");
}

MomentTriple npnb_moments(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double l = p.lambda;
  const double e_am = std::exp(a * m);
  MomentTriple t{e_am, kInf, mean_cycle_length(StrategyKind::Npnb, l, eps, m)};
  if (npnb_feasibility(p).all_hold()) {
    t.exp_alpha_Y = l * (1.0 - eps) * e_am / (l * (1.0 - eps * e_am) - a);
  }
  return t;
}

MomentTriple npob_moments(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double l = p.lambda;
  const double e_am = std::exp(a * m);
  MomentTriple t{e_am * npob_wait_transform(l, a, m), kInf,
                 mean_cycle_length(StrategyKind::Npob, l, eps, m)};
  if (npob_feasibility(p).all_hold()) {
    const double e_alm = std::exp((a - l) * m);
    t.exp_alpha_Y = (1.0 - eps) * e_am * (l + a * std::expm1(-l * m)) /
                    (l * (1.0 - e_am * eps) - a * (1.0 - eps * (e_am - e_alm)));
  }
  return t;
}

double preemption_attempt_exp_alpha(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double m = p.blocklength();
  const double l = p.lambda;
  const double scaled = l * std::exp((a - l) * m);
  if (!(a < l) || !(scaled > a)) {
    return kInf;
  }
  return scaled / (scaled - a);
}

double preemption_attempt_mean(const SystemParams& p) {
  return std::exp(p.lambda * p.blocklength()) / p.lambda;
}

MomentTriple preemption_moments(const SystemParams& p) {
  const double a = p.shape.alpha();
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double l = p.lambda;
  MomentTriple t{std::exp(a * m), kInf, mean_cycle_length(StrategyKind::Preemption, l, eps, m)};
  if (preemption_feasibility(p).all_hold()) {
    const double scaled = l * (1.0 - eps) * std::exp((a - l) * m);
    t.exp_alpha_Y = scaled / (scaled - a);
  }
  return t;
}

double assemble_average_penalty(const PenaltyShape& shape, const MomentTriple& m) {
  const double b = shape.beta();
  return b * m.exp_alpha_T * (m.exp_alpha_Y - 1.0) / (shape.alpha() * m.mean_Y) - b;
}

EvalResult npnb_average_penalty(const SystemParams& p) {
  p.validate();
  if (p.shape.is_linear()) return linear_limit(StrategyKind::Npnb, p);
  auto f = npnb_feasibility(p);
  const auto moments = npnb_moments(p);
  const double eps = p.epsilon();
  if (!f.all_hold()) return divergent(std::move(f), eps, moments);
  return finite_or_divergent(npnb_closed_form(p.lambda, p.shape.alpha(), p.shape.beta(), eps,
                                              p.blocklength()),
                             std::move(f), eps, moments);
}

EvalResult npob_average_penalty(const SystemParams& p) {
  p.validate();
  if (p.shape.is_linear()) return linear_limit(StrategyKind::Npob, p);
  auto f = npob_feasibility(p);
  const auto moments = npob_moments(p);
  const double eps = p.epsilon();
  if (!f.all_hold()) return divergent(std::move(f), eps, moments);
  return finite_or_divergent(npob_closed_form(p.lambda, p.shape.alpha(), p.shape.beta(), eps,
                                              p.blocklength()),
                             std::move(f), eps, moments);
}

EvalResult preemption_average_penalty(const SystemParams& p) {
  p.validate();
  if (p.shape.is_linear()) return linear_limit(StrategyKind::Preemption, p);
  auto f = preemption_feasibility(p);
  const auto moments = preemption_moments(p);
  const double eps = p.epsilon();
  if (!f.all_hold()) return divergent(std::move(f), eps, moments);
  return finite_or_divergent(preemption_closed_form(p.lambda, p.shape.alpha(), p.shape.beta(),
                                                    eps, p.blocklength()),
                             std::move(f), eps, moments);
}

EvalResult zero_waiting_average_penalty(const LinkConfig& link, const PenaltyShape& shape,
                                        DispersionVariant variant,
                                        std::optional<double> forced_epsilon) {
  // lambda plays no role in the zero-waiting limit
  SystemParams p{link, 1.0, shape, variant, forced_epsilon};
  p.validate();
  if (shape.is_linear()) return linear_limit(StrategyKind::ZeroWaiting, p);
  auto f = zero_waiting_feasibility(p);
  const double eps = p.epsilon();
  const double m = p.blocklength();
  const double e_am = std::exp(shape.alpha() * m);
  MomentTriple moments{e_am, kInf, mean_cycle_length(StrategyKind::ZeroWaiting, 1.0, eps, m)};
  if (f.all_hold()) {
    moments.exp_alpha_Y = (1.0 - eps) * e_am / (1.0 - eps * e_am);
  }
  if (!f.all_hold()) return divergent(std::move(f), eps, moments);
  return finite_or_divergent(zero_waiting_closed_form(shape.alpha(), shape.beta(), eps, m),
                             std::move(f), eps, moments);
}

double linear_limit_probe(StrategyKind strategy, const SystemParams& p, double alpha) {
  return closed_form(strategy, p.lambda, alpha, 1.0 / alpha, p.epsilon(), p.blocklength());
}

EvalResult linear_limit(StrategyKind strategy, const SystemParams& p) {
  p.validate();
  const double m = p.blocklength();
  const double eps = p.epsilon();
  const MomentTriple moments{1.0, 1.0, mean_cycle_length(strategy, p.lambda, eps, m)};
  // Steps are measured against the cycle length as well as M: with long
  // cycles a0 = 1e-4 / M sits close to the pole of E[e^{aY}].
  const double scale = std::isfinite(moments.mean_Y) ? std::max(m, moments.mean_Y) : m;
  const double a0 = 1e-4 / scale;

  Feasibility f = feasibility_at(strategy, p, a0);
  if (!f.all_hold() || !(eps < 1.0)) {
    auto r = divergent(std::move(f), eps, moments);
    r.via_linear_limit = true;
    return r;
  }

  const double f1 = linear_limit_probe(strategy, p, a0);
  const double f2 = linear_limit_probe(strategy, p, a0 / 2.0);
  const double f4 = linear_limit_probe(strategy, p, a0 / 4.0);
  // two Richardson steps with step ratio 2 remove the O(a) and O(a^2) terms
  const double value = (8.0 * f4 - 6.0 * f2 + f1) / 3.0;

  auto r = finite_or_divergent(value, std::move(f), eps, moments);
  r.via_linear_limit = true;
  return r;
}

EvalResult evaluate(StrategyKind strategy, const SystemParams& p) {
  switch (strategy) {
    case StrategyKind::Npnb:
      return npnb_average_penalty(p);
    case StrategyKind::Npob:
      return npob_average_penalty(p);
    case StrategyKind::Preemption:
      return preemption_average_penalty(p);
    case StrategyKind::ZeroWaiting:
      return zero_waiting_average_penalty(p.link, p.shape, p.variant, p.forced_epsilon);
  }
  throw std::invalid_argument("evaluate: bad strategy");
}

CycleSecondMoments cycle_second_moments(StrategyKind strategy, const SystemParams& p) {
  p.validate();
  const double m = p.blocklength();
  const double l = p.lambda;
  const double eps = p.epsilon();

  // attempt interval B: mean and second moment
  double b1 = 0.0;
  double b2 = 0.0;
  double mean_t = m;
  switch (strategy) {
    case StrategyKind::Npnb:
      b1 = m + 1.0 / l;
      b2 = b1 * b1 + 1.0 / (l * l);
      break;
    case StrategyKind::Npob: {
      const double q = std::exp(-l * m);
      b1 = m + q / l;
      b2 = m * m + 2.0 * m * q / l + 2.0 * q / (l * l);
      // E[W] with W = 0 w.p. e^{-lM} and density l e^{-lt} on [0, M)
      mean_t = m + (1.0 - q * (1.0 + l * m)) / l;
      break;
    }
    case StrategyKind::Preemption: {
      const double g = std::exp(l * m);
      b1 = g / l;
      b2 = 2.0 * g * (g - l * m) / (l * l);
      break;
    }
    case StrategyKind::ZeroWaiting:
      b1 = m;
      b2 = m * m;
      break;
  }
  const double h1 = 1.0 / (1.0 - eps);
  const double h2 = (1.0 + eps) / ((1.0 - eps) * (1.0 - eps));
  CycleSecondMoments out{mean_t, h1 * (b2 - b1 * b1) + h2 * b1 * b1, 1.0, 1.0};

  if (!p.shape.is_linear()) {
    SystemParams doubled = p;
    doubled.shape = PenaltyShape::from_pair(2.0 * p.shape.alpha(), p.shape.beta());
    MomentTriple t{};
    switch (strategy) {
      case StrategyKind::Npnb:
        t = npnb_moments(doubled);
        break;
      case StrategyKind::Npob:
        t = npob_moments(doubled);
        break;
      case StrategyKind::Preemption:
        t = preemption_moments(doubled);
        break;
      case StrategyKind::ZeroWaiting: {
        const auto r = zero_waiting_average_penalty(doubled.link, doubled.shape, doubled.variant,
                                                    doubled.forced_epsilon);
        t = *r.moments;
        break;
      }
    }
    out.exp_2alpha_Y = t.exp_alpha_Y;
    out.exp_2alpha_T = t.exp_alpha_T;
  }
  return out;
}

double mean_age_closed_form(StrategyKind strategy, const SystemParams& p) {
  const auto second = cycle_second_moments(strategy, p);
  const double mean_y = mean_cycle_length(strategy, p.lambda, p.epsilon(), p.blocklength());
  return second.mean_T + second.mean_Y_sq / (2.0 * mean_y);
}

}  // namespace aoi
