#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qmax/fitting.hpp"
#include "qmax/time_series.hpp"

namespace qmax {

inline constexpr double kDefaultVehicleSpacingFt = 25.0;

/// One signalized approach: Poisson arrivals, deterministic service headway
/// during green, no service during red. Times are seconds from `start_time`.
struct SignalSimConfig {
  double arrival_rate = 0.1;     // vehicles per second
  double service_headway = 2.0;  // seconds per vehicle while green
  double cycle_length = 120.0;   // seconds; green occupies [k c, k c + g)
  double green_fraction = 0.5;
  double horizon = 1e6;          // seconds
  std::chrono::seconds sample_interval = kDefaultInterval;
  std::uint64_t seed = 42;
  bool allow_oversaturated = false;
  Timestamp start_time{};
  std::string label = "sim";

  double green_time() const { return green_fraction * cycle_length; }
  /// Vehicles per second the signal can discharge on average.
  double capacity() const { return green_fraction / service_headway; }
};

/// Throws DomainError for non-positive or non-finite rates and durations, a
/// headway longer than the green time, a sample interval of zero, or an
/// arrival rate at or above capacity without `allow_oversaturated`.
void validate(const SignalSimConfig& config);

struct QueueTrace {
  /// L(t) at t = k * sample_interval, k = 1..floor(horizon / interval).
  /// Counts every event at or before t; in vehicles.
  TimeSeries sampled_lengths;
  std::vector<double> sample_times;  // seconds since start
  /// Per departed vehicle, FIFO order: departure - headway - arrival, the time
  /// spent queued before the service that completed.
  std::vector<double> waits;
  std::vector<double> running_max_lengths;
  std::vector<double> running_max_waits;

  std::vector<double> arrival_times;    // every arrival within the horizon
  std::vector<double> departure_times;  // departure_times[i] belongs to arrival_times[i]
  std::size_t arrivals = 0;
  std::size_t departures = 0;
  std::size_t final_queue = 0;
  /// Time integral of L over [0, horizon] divided by the horizon.
  double time_average_queue = 0.0;

  SignalSimConfig config;
};

/// Event-driven run. A service in progress when the signal turns red is
/// abandoned and restarts from scratch at the next green; a service that
/// completes exactly at the end of green counts. Identical configs give
/// bit-identical traces, and a longer horizon extends a shorter one.
QueueTrace simulate(const SignalSimConfig& config);

/// Prefix maxima.
std::vector<double> running_maxima(std::span<const double> values);

struct RunningMaxima {
  std::vector<double> lengths;
  std::vector<double> waits;
};

/// Throws InsufficientDataError for a trace without samples.
RunningMaxima running_maxima(const QueueTrace& trace);

/// L*(t) = gamma (log t + log beta + Z) fitted by OLS of L* on log t.
struct GumbelLimitFit {
  double gamma = 0.0;
  double log_beta = 0.0;  // intercept / gamma
  std::vector<double> times;
  std::vector<double> residual_z;  // (L* - gamma log t - gamma log beta) / gamma
  double fit_r2 = 0.0;
};

/// Uses the points with t >= t_min. Throws InsufficientDataError below 3 such
/// points and DomainError when the fitted slope is not positive.
GumbelLimitFit fit_gumbel_limit(std::span<const double> times, std::span<const double> running_max,
                                double t_min);
GumbelLimitFit fit_gumbel_limit(const QueueTrace& trace, double t_min);

struct ConvergenceSeedResult {
  std::uint64_t seed = 0;
  std::size_t block_count = 0;
  std::size_t gev_rank = 0;  // 0: GEV fit failed or the ranking was empty
  double xi = 0.0;
  std::string best_family;
  std::string diagnostic;
};

struct ConvergenceReport {
  std::size_t block_size = 0;
  std::vector<ConvergenceSeedResult> seeds;

  std::size_t count_gev_within(std::size_t rank) const;
};

/// Simulates each seed, takes block maxima of the sampled lengths and ranks
/// the comparison catalog on them. Per-seed failures become diagnostics.
ConvergenceReport block_maxima_convergence_check(const SignalSimConfig& config,
                                                 std::size_t block_size,
                                                 std::span<const std::uint64_t> seeds,
                                                 const FitOptions& options = {});

/// Writes the sampled lengths in the ingest CSV schema, each value multiplied
/// by `units_per_vehicle` (1: vehicles; kDefaultVehicleSpacingFt: feet).
void export_trace_csv(const QueueTrace& trace, std::ostream& out, double units_per_vehicle = 1.0);

}  // namespace qmax
