#include "aoi/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>

namespace aoi {
namespace {

/// Uniform and exponential variates from mt19937_64, sampled by hand so the
/// stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

struct Update {
  double generated = 0.0;
  std::uint64_t id = 0;
};

class EventSink {
 public:
  explicit EventSink(std::size_t max_events) : max_(max_events) {}

  void emit(double time, EventKind kind, std::uint64_t id) {
    if (events.size() < max_) {
      events.push_back({time, kind, id});
    } else {
      truncated = true;
    }
  }

  std::vector<TraceEvent> events;
  bool truncated = false;

 private:
  std::size_t max_;
};

/// Tracks receptions and folds complete cycles into the running sums.
class CycleMeter {
 public:
  CycleMeter(const PenaltyShape& shape, ReplicationResult& out, const CycleObserver& observer)
      : shape_(shape), alpha_(shape.alpha()), out_(out), observer_(observer) {}

  void on_completion(std::uint32_t preemptions) {
    ++attempts_;
    preempts_.push_back(preemptions);
  }

  void on_reception(double now, double generated) {
    const double system_time = now - generated;
    if (have_reception_) {
      const double y = now - last_reception_;
      const double q = cycle_area(shape_, last_system_time_, y);
      const double lin = linear_cycle_area(last_system_time_, y);
      out_.sum_Q += q;
      out_.sum_Y += y;
      out_.sum_linear += lin;
      sum_qq_ += q * q;
      sum_qy_ += q * y;
      out_.y.add(y);
      out_.exp_alpha_y.add(std::exp(alpha_ * y));
      out_.exp_alpha_t.add(std::exp(alpha_ * last_system_time_));
      ++out_.cycles;

      if (out_.attempt_histogram.size() < attempts_) out_.attempt_histogram.resize(attempts_);
      ++out_.attempt_histogram[attempts_ - 1];
      for (auto k : preempts_) {
        if (out_.preemption_histogram.size() <= k) out_.preemption_histogram.resize(k + 1);
        ++out_.preemption_histogram[k];
      }
      if (observer_) {
        observer_(CycleRecord{y, last_system_time_, q, lin, attempts_, preempts_});
      }
    }
    have_reception_ = true;
    last_reception_ = now;
    last_system_time_ = system_time;
    attempts_ = 0;
    preempts_.clear();
  }

  double regenerative_std_error() const {
    const auto n = out_.cycles;
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double r = out_.sum_Q / out_.sum_Y;
    const double sum_yy = out_.y.sum_sq;
    double ss = sum_qq_ - 2.0 * r * sum_qy_ + r * r * sum_yy;
    ss = std::max(ss, 0.0);
    const double mean_y = out_.sum_Y / nn;
    return std::sqrt(ss / (nn - 1.0) / nn) / mean_y;
  }

 private:
  const PenaltyShape& shape_;
  double alpha_;
  ReplicationResult& out_;
  const CycleObserver& observer_;

  bool have_reception_ = false;
  double last_reception_ = 0.0;
  double last_system_time_ = 0.0;
  std::uint32_t attempts_ = 0;
  std::vector<std::uint32_t> preempts_;
  double sum_qq_ = 0.0;
  double sum_qy_ = 0.0;
};

ReplicationResult simulate(const SimConfig& config, StrategyKind strategy, std::uint32_t index,
                           const CycleObserver& observer, EventSink* sink) {
  config.validate();
  if (strategy == StrategyKind::ZeroWaiting) {
    throw std::invalid_argument("ZeroWaiting has no simulator; use the closed form");
  }

  ReplicationResult out;
  out.index = index;
  out.seed = replication_seed(config.seed, index);

  const auto& p = config.params;
  const double m = p.blocklength();
  const double eps = p.epsilon();
  const double lambda = p.lambda;
  const double horizon = config.horizon;

  Rng rng(out.seed);
  CycleMeter meter(p.shape, out, observer);
  auto emit = [sink](double t, EventKind k, std::uint64_t id) {
    if (sink) sink->emit(t, k, id);
  };

  double next_arrival = rng.exponential(lambda);
  std::uint64_t next_id = 0;

  bool busy = false;
  double tx_end = 0.0;
  Update tx{0.0, 0};
  Update buffer;
  bool buffered = false;
  std::uint32_t preemptions = 0;
  double state_since = 0.0;

  auto start = [&](const Update& u, double now) {
    if (!busy) {
      out.idle_time += now - state_since;
      state_since = now;
      busy = true;
    }
    tx = u;
    tx_end = now + m;
    emit(now, EventKind::TxStart, u.id);
  };

  while (true) {
    // completion wins ties with an arrival
    const bool completion = busy && tx_end <= next_arrival;
    const double now = completion ? tx_end : next_arrival;
    if (now > horizon) break;

    if (completion) {
      busy = false;
      out.busy_time += now - state_since;
      state_since = now;
      meter.on_completion(preemptions);
      preemptions = 0;
      const bool success = rng.uniform() >= eps;
      if (success) {
        emit(now, EventKind::TxSuccess, tx.id);
        ++out.receptions;
        meter.on_reception(now, tx.generated);
      } else {
        emit(now, EventKind::TxFail, tx.id);
      }
      if (strategy == StrategyKind::Npob && buffered) {
        buffered = false;
        start(buffer, now);
      }
      continue;
    }

    const Update arrival{now, next_id++};
    ++out.generated;
    emit(now, EventKind::Generated, arrival.id);
    next_arrival = now + rng.exponential(lambda);

    if (!busy) {
      start(arrival, now);
      continue;
    }
    switch (strategy) {
      case StrategyKind::Npnb:
        emit(now, EventKind::Dropped, arrival.id);
        break;
      case StrategyKind::Npob:
        emit(now, buffered ? EventKind::BufferReplaced : EventKind::Buffered, arrival.id);
        buffer = arrival;
        buffered = true;
        break;
      case StrategyKind::Preemption:
        emit(now, EventKind::TxAbort, tx.id);
        ++preemptions;
        start(arrival, now);
        break;
      case StrategyKind::ZeroWaiting:
        break;
    }
  }

  if (busy) {
    out.busy_time += horizon - state_since;
  } else {
    out.idle_time += horizon - state_since;
  }

  if (out.cycles == 0) {
    std::ostringstream msg;
    msg << "no complete reception cycle within horizon " << horizon << " c.u. (strategy "
        << to_string(strategy) << ", replication " << index << ")";
    throw SimulationFailure(msg.str());
  }

  const double n = static_cast<double>(out.cycles);
  out.avg_penalty = out.sum_Q / out.sum_Y;
  out.avg_linear_aoi = out.sum_linear / out.sum_Y;
  out.mean_Y = out.sum_Y / n;
  out.exp_alpha_Y_hat = out.exp_alpha_y.mean();
  out.exp_alpha_T_hat = out.exp_alpha_t.mean();
  out.penalty_std_error = meter.regenerative_std_error();
  return out;
}

template <typename T>
void merge_histogram(std::vector<T>& into, const std::vector<T>& from) {
  if (into.size() < from.size()) into.resize(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (!(horizon >= 100.0 * params.blocklength()) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be finite and at least 100 * M channel uses");
  }
  if (replications < 1) {
    throw std::invalid_argument("replications must be >= 1");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t seed, std::uint32_t index) {
  // mixing the seed first keeps seed ^ index collisions (2^1 == 3^0) apart
  return splitmix64(splitmix64(seed) ^ index);
}

ReplicationResult run_replication(const SimConfig& config, StrategyKind strategy,
                                  std::uint32_t index, const CycleObserver& observer) {
  return simulate(config, strategy, index, observer, nullptr);
}

SimResult run(const SimConfig& config, StrategyKind strategy) {
  config.validate();
  const std::uint32_t reps = config.replications;
  std::vector<ReplicationResult> results(reps);
  std::vector<std::exception_ptr> errors(reps);

  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, reps);

  std::atomic<std::uint32_t> next{0};
  auto work = [&] {
    for (std::uint32_t i = next++; i < reps; i = next++) {
      try {
        results[i] = simulate(config, strategy, i, {}, nullptr);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimResult r;
  r.strategy = strategy;
  r.horizon = config.horizon;
  std::vector<double> penalties;
  std::vector<double> linear;
  stats::Accumulator y;
  stats::Accumulator ey;
  stats::Accumulator et;
  for (const auto& rep : results) {
    penalties.push_back(rep.avg_penalty);
    linear.push_back(rep.avg_linear_aoi);
    y.merge(rep.y);
    ey.merge(rep.exp_alpha_y);
    et.merge(rep.exp_alpha_t);
    r.cycles += rep.cycles;
    merge_histogram(r.attempt_histogram, rep.attempt_histogram);
    merge_histogram(r.preemption_histogram, rep.preemption_histogram);
  }
  r.avg_penalty = stats::mean(penalties);
  r.avg_linear_aoi = stats::mean(linear);
  r.mean_Y = y.mean();
  r.exp_alpha_Y_hat = ey.mean();
  r.exp_alpha_T_hat = et.mean();
  r.mean_Y_se = y.std_error();
  r.exp_alpha_Y_se = ey.std_error();
  r.exp_alpha_T_se = et.std_error();

  if (reps >= 2) {
    const double root = std::sqrt(static_cast<double>(reps));
    const double t = stats::t_critical(0.95, reps - 1);
    r.std_error = stats::stddev(penalties) / root;
    r.linear_std_error = stats::stddev(linear) / root;
    r.ci_halfwidth = t * r.std_error;
    r.linear_ci_halfwidth = t * r.linear_std_error;
  } else {
    // single replication: regenerative ratio-estimator error
    constexpr double z = 1.959963984540054;
    const auto& rep = results.front();
    r.std_error = rep.penalty_std_error;
    r.ci_halfwidth = z * r.std_error;
    if (config.params.shape.is_linear()) {
      r.linear_std_error = r.std_error;
    } else {
      SimConfig lin = config;
      lin.params.shape = PenaltyShape::linear();
      r.linear_std_error = simulate(lin, strategy, 0, {}, nullptr).penalty_std_error;
    }
    r.linear_ci_halfwidth = z * r.linear_std_error;
  }
  r.per_replication = std::move(results);
  return r;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Generated:
      return "generated";
    case EventKind::Dropped:
      return "dropped";
    case EventKind::Buffered:
      return "buffered";
    case EventKind::BufferReplaced:
      return "buffer_replaced";
    case EventKind::TxStart:
      return "tx_start";
    case EventKind::TxAbort:
      return "tx_abort";
    case EventKind::TxSuccess:
      return "tx_success";
    case EventKind::TxFail:
      return "tx_fail";
  }
  return "unknown";
}

EventKind parse_event_kind(std::string_view text) {
  for (auto k : {EventKind::Generated, EventKind::Dropped, EventKind::Buffered,
                 EventKind::BufferReplaced, EventKind::TxStart, EventKind::TxAbort,
                 EventKind::TxSuccess, EventKind::TxFail}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown event kind '" + std::string(text) + "'");
}

Trace trace(const SimConfig& config, StrategyKind strategy, std::size_t max_events) {
  if (max_events == 0) {
    throw std::invalid_argument("max_events must be positive");
  }
  EventSink sink(max_events);
  Trace t;
  t.result = simulate(config, strategy, 0, {}, &sink);
  t.events = std::move(sink.events);
  t.truncated = sink.truncated;
  return t;
}

void write_event_log(std::ostream& out, std::span<const TraceEvent> events) {
  char buf[64];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof buf, "%.6f", e.time);
    out << buf << '\t' << to_string(e.kind) << '\t' << e.update_id << '\n';
  }
}

std::vector<TraceEvent> read_event_log(std::istream& in) {
  std::vector<TraceEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string time;
    std::string kind;
    std::string id;
    if (!std::getline(fields, time, '\t') || !std::getline(fields, kind, '\t') ||
        !std::getline(fields, id, '\t')) {
      throw std::invalid_argument("malformed event log line: " + line);
    }
    events.push_back({std::stod(time), parse_event_kind(kind), std::stoull(id)});
  }
  return events;
}

double replay_average_penalty(std::span<const TraceEvent> events, const PenaltyShape& shape) {
  std::unordered_map<std::uint64_t, double> generated;
  bool have_reception = false;
  double last_reception = 0.0;
  double last_system_time = 0.0;
  double sum_q = 0.0;
  double sum_y = 0.0;
  for (const auto& e : events) {
    if (e.kind == EventKind::Generated) {
      generated.emplace(e.update_id, e.time);
    } else if (e.kind == EventKind::TxSuccess) {
      const auto it = generated.find(e.update_id);
      if (it == generated.end()) {
        throw std::invalid_argument("tx_success for an update that was never generated");
      }
      if (have_reception) {
        const double y = e.time - last_reception;
        sum_q += cycle_area(shape, last_system_time, y);
        sum_y += y;
      }
      have_reception = true;
      last_reception = e.time;
      last_system_time = e.time - it->second;
      generated.erase(it);
    }
  }
  if (sum_y == 0.0) {
    throw SimulationFailure("event log holds no complete reception cycle");
  }
  return sum_q / sum_y;
}

}  // namespace aoi
