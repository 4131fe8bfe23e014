#pragma once

#include <cstddef>

#include "qmax/time_series.hpp"

namespace qmax {

// 15 hours of 2-minute samples.
inline constexpr std::size_t kDefaultSeasonalPeriod = 450;

inline constexpr TimeOfDay kDefaultDayStart{std::chrono::hours{7}};
inline constexpr TimeOfDay kDefaultDayEnd{std::chrono::hours{22}};

/// Additive decomposition X = S + T + R aligned to the input series.
///
/// Trend and residual are NaN in the first and last `edge` positions, where the
/// centered moving average is not defined.
struct DecompositionResult {
  TimeSeries seasonal;
  TimeSeries trend;
  TimeSeries residual;
  std::size_t period = 0;
  std::size_t edge = 0;
};

/// Keeps samples whose time of day lies in [day_start, day_end), concatenated
/// in order. Throws EmptySeriesError when nothing survives.
TimeSeries active_hours_filter(const TimeSeries& series, TimeOfDay day_start = kDefaultDayStart,
                               TimeOfDay day_end = kDefaultDayEnd);

/// Classical moving-average decomposition.
///
/// trend: centered moving average over `period` samples (for even periods the
/// 2 x period filter with half weights on both ends). seasonal: per-phase mean
/// of the detrended series, re-centered to zero mean over one period.
/// residual = series - trend - seasonal.
///
/// Throws InsufficientDataError unless series.size() >= 2 * period.
DecompositionResult decompose(const TimeSeries& series, std::size_t period = kDefaultSeasonalPeriod);

/// Residual with the undefined edges removed.
TimeSeries residual_series(const DecompositionResult& result);

/// Samples lost at each end of the trend: floor(period / 2).
constexpr std::size_t trend_edge(std::size_t period) { return period / 2; }

/// Total samples dropped by residual_series: period when even, period - 1 when odd.
constexpr std::size_t residual_edge_loss(std::size_t period) { return 2 * trend_edge(period); }

}  // namespace qmax
