#include "qmax/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <queue>

#include "qmax/block_maxima.hpp"
#include "qmax/csv_io.hpp"
#include "qmax/errors.hpp"
#include "qmax/random.hpp"

namespace qmax {

namespace {

// Processing order among events at the same instant: a service finishing
// exactly at the end of green completes before the signal turns red, and a
// sample observes every other event at its instant.
enum class EventKind : int { ServiceComplete = 0, RedStart = 1, GreenStart = 2, Arrival = 3, Sample = 4 };

struct Event {
  double time;
  EventKind kind;
  std::uint64_t token;  // service generation, cycle index or sample index

  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    return static_cast<int>(kind) > static_cast<int>(other.kind);
  }
};

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const SignalSimConfig& c) {
  if (!positive_finite(c.arrival_rate)) throw DomainError("arrival_rate must be positive and finite");
  if (!positive_finite(c.service_headway)) {
    throw DomainError("service_headway must be positive and finite");
  }
  if (!positive_finite(c.cycle_length)) throw DomainError("cycle_length must be positive and finite");
  if (!(c.green_fraction > 0.0 && c.green_fraction <= 1.0)) {
    throw DomainError("green_fraction must lie in (0, 1]");
  }
  if (!positive_finite(c.horizon)) throw DomainError("horizon must be positive and finite");
  if (c.sample_interval.count() <= 0) throw DomainError("sample_interval must be positive");
  if (c.service_headway > c.green_time()) {
    throw DomainError("service_headway exceeds the green time; no vehicle could ever depart");
  }
  if (!c.allow_oversaturated && !(c.arrival_rate < c.capacity())) {
    throw DomainError("arrival_rate " + std::to_string(c.arrival_rate) +
                      " veh/s is not below capacity " + std::to_string(c.capacity()) +
                      " veh/s; set allow_oversaturated for oversaturation studies");
  }
}

QueueTrace simulate(const SignalSimConfig& config) {
  validate(config);
  const double cycle = config.cycle_length;
  const double green = config.green_time();
  const double headway = config.service_headway;
  const double horizon = config.horizon;
  const auto interval_s = static_cast<double>(config.sample_interval.count());

  QueueTrace trace;
  trace.config = config;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  CounterStream arrivals_rng(config.seed, 0);

  double next_arrival = arrivals_rng.next_exponential(config.arrival_rate);
  if (next_arrival <= horizon) events.push({next_arrival, EventKind::Arrival, 0});
  events.push({0.0, EventKind::GreenStart, 0});
  const auto sample_count = static_cast<std::uint64_t>(std::floor(horizon / interval_s));
  if (sample_count > 0) events.push({interval_s, EventKind::Sample, 1});

  std::deque<std::size_t> queue;  // indices into arrival_times
  bool is_green = false;
  double green_end = 0.0;
  bool serving = false;
  std::uint64_t service_token = 0;

  double last_time = 0.0;
  double area = 0.0;
  std::vector<double> sampled;
  sampled.reserve(sample_count);
  trace.sample_times.reserve(sample_count);

  auto try_start_service = [&](double now) {
    if (serving || !is_green || queue.empty()) return;
    serving = true;
    ++service_token;
    events.push({now + headway, EventKind::ServiceComplete, service_token});
  };

  while (!events.empty()) {
    const Event ev = events.top();
    if (ev.time > horizon) break;
    events.pop();
    area += static_cast<double>(queue.size()) * (ev.time - last_time);
    last_time = ev.time;

    switch (ev.kind) {
      case EventKind::Arrival: {
        queue.push_back(trace.arrival_times.size());
        trace.arrival_times.push_back(ev.time);
        trace.departure_times.push_back(std::numeric_limits<double>::quiet_NaN());
        next_arrival = ev.time + arrivals_rng.next_exponential(config.arrival_rate);
        if (next_arrival <= horizon) events.push({next_arrival, EventKind::Arrival, 0});
        try_start_service(ev.time);
        break;
      }
      case EventKind::ServiceComplete: {
        if (!serving || ev.token != service_token) break;  // abandoned at red
        serving = false;
        const std::size_t id = queue.front();
        queue.pop_front();
        trace.departure_times[id] = ev.time;
        trace.waits.push_back(ev.time - headway - trace.arrival_times[id]);
        ++trace.departures;
        try_start_service(ev.time);
        break;
      }
      case EventKind::GreenStart: {
        is_green = true;
        green_end = static_cast<double>(ev.token) * cycle + green;
        if (green < cycle) {
          events.push({green_end, EventKind::RedStart, ev.token});
        } else {
          events.push({static_cast<double>(ev.token + 1) * cycle, EventKind::GreenStart, ev.token + 1});
        }
        try_start_service(ev.time);
        break;
      }
      case EventKind::RedStart: {
        is_green = false;
        serving = false;  // any pending completion is now stale
        events.push({static_cast<double>(ev.token + 1) * cycle, EventKind::GreenStart, ev.token + 1});
        break;
      }
      case EventKind::Sample: {
        sampled.push_back(static_cast<double>(queue.size()));
        trace.sample_times.push_back(ev.time);
        if (ev.token < sample_count) {
          events.push({static_cast<double>(ev.token + 1) * interval_s, EventKind::Sample, ev.token + 1});
        }
        break;
      }
    }
  }
  area += static_cast<double>(queue.size()) * (horizon - last_time);

  trace.arrivals = trace.arrival_times.size();
  trace.final_queue = queue.size();
  trace.departure_times.resize(trace.departures);  // FIFO: undeparted vehicles form the tail
  trace.time_average_queue = area / horizon;

  trace.sampled_lengths = make_uniform_series(config.label, config.start_time + config.sample_interval,
                                              config.sample_interval, std::move(sampled));
  trace.running_max_lengths = running_maxima(trace.sampled_lengths.values);
  trace.running_max_waits = running_maxima(trace.waits);
  return trace;
}

std::vector<double> running_maxima(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
  return out;
}

RunningMaxima running_maxima(const QueueTrace& trace) {
  if (trace.sampled_lengths.empty()) throw InsufficientDataError("trace has no samples");
  return {running_maxima(trace.sampled_lengths.values), running_maxima(trace.waits)};
}

GumbelLimitFit fit_gumbel_limit(std::span<const double> times, std::span<const double> running_max,
                                double t_min) {
  if (times.size() != running_max.size()) throw DomainError("times and values differ in length");
  std::vector<double> x, y;
  GumbelLimitFit fit;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_min && times[i] > 0.0) {
      fit.times.push_back(times[i]);
      x.push_back(std::log(times[i]));
      y.push_back(running_max[i]);
    }
  }
  if (x.size() < 3) {
    throw InsufficientDataError("Gumbel limit fit needs at least 3 samples at or after t_min, got " +
                                std::to_string(x.size()));
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("Gumbel limit fit needs distinct sample times");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  if (!(slope > 0.0)) {
    throw DomainError("running maximum shows no logarithmic growth (slope " + std::to_string(slope) +
                      ")");
  }
  fit.gamma = slope;
  fit.log_beta = intercept / slope;
  fit.fit_r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.residual_z.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residual_z.push_back((y[i] - slope * x[i] - intercept) / slope);
  }
  return fit;
}

GumbelLimitFit fit_gumbel_limit(const QueueTrace& trace, double t_min) {
  return fit_gumbel_limit(trace.sample_times, trace.running_max_lengths, t_min);
}

std::size_t ConvergenceReport::count_gev_within(std::size_t rank) const {
  return static_cast<std::size_t>(std::count_if(seeds.begin(), seeds.end(), [&](const auto& s) {
    return s.gev_rank != 0 && s.gev_rank <= rank;
  }));
}

ConvergenceReport block_maxima_convergence_check(const SignalSimConfig& config,
                                                 std::size_t block_size,
                                                 std::span<const std::uint64_t> seeds,
                                                 const FitOptions& options) {
  validate(config);
  if (block_size == 0) throw DomainError("block size must be at least 1");
  ConvergenceReport report;
  report.block_size = block_size;
  for (std::uint64_t seed : seeds) {
    ConvergenceSeedResult result;
    result.seed = seed;
    try {
      auto seeded = config;
      seeded.seed = seed;
      const auto trace = simulate(seeded);
      const auto maxima = extract_block_maxima(trace.sampled_lengths, block_size);
      result.block_count = maxima.maxima.size();
      const auto table = rank_candidates(maxima.maxima, comparison_catalog(), options,
                                         config.label + " seed " + std::to_string(seed));
      result.best_family = std::string(family_name(table.entries.front().family));
      result.gev_rank = table.rank_of(Family::GenExtreme);
      if (const auto* gev = table.fit_for(Family::GenExtreme); gev != nullptr && gev->ok) {
        result.xi = gev->params[2];
      } else if (gev != nullptr) {
        result.diagnostic = "genextreme: " + gev->diagnostic;
      }
    } catch (const std::exception& e) {
      result.diagnostic = e.what();
    }
    report.seeds.push_back(std::move(result));
  }
  return report;
}

void export_trace_csv(const QueueTrace& trace, std::ostream& out, double units_per_vehicle) {
  if (!positive_finite(units_per_vehicle)) throw DomainError("units_per_vehicle must be positive");
  auto series = trace.sampled_lengths;
  for (double& v : series.values) v *= units_per_vehicle;
  write_csv(out, std::span<const TimeSeries>(&series, 1));
}

}  // namespace qmax
