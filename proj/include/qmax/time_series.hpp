#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmax {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kDefaultInterval{120};

/// Queue-length observations with their wall-clock timestamps.
///
/// `interval` is the nominal sampling step. Raw series are uniformly sampled
/// (times[i+1] - times[i] == interval); a series produced by the active-hours
/// filter keeps the original timestamps and therefore has overnight gaps, but
/// is treated as contiguous by everything downstream.
struct TimeSeries {
  std::string label;
  std::chrono::seconds interval = kDefaultInterval;
  std::vector<Timestamp> times;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  Timestamp start_time() const { return times.empty() ? Timestamp{} : times.front(); }
};

/// Builds a uniformly sampled series starting at `start`.
TimeSeries make_uniform_series(std::string label, Timestamp start, std::chrono::seconds interval,
                               std::vector<double> values);

/// Same timestamps and label, new values (sizes must match).
TimeSeries with_values(const TimeSeries& like, std::vector<double> values);

/// Parses "YYYY-MM-DDTHH:MM:SS" (a space may replace the 'T'; a trailing 'Z'
/// is accepted). Timestamps are wall-clock times; no zone conversion happens.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

/// Time of day as an offset from midnight.
struct TimeOfDay {
  std::chrono::seconds since_midnight{0};

  friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;
};

/// Parses "HH:MM" or "HH:MM:SS"; "24:00" denotes the end of the day.
TimeOfDay parse_time_of_day(std::string_view text);
std::string format_time_of_day(TimeOfDay tod);

}  // namespace qmax
