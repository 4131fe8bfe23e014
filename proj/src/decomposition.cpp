#include "qmax/decomposition.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmax/errors.hpp"

namespace qmax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::chrono::seconds time_of_day(Timestamp ts) {
  return ts - std::chrono::floor<std::chrono::days>(ts);
}

}  // namespace

TimeSeries active_hours_filter(const TimeSeries& series, TimeOfDay day_start, TimeOfDay day_end) {
  if (!(day_start < day_end)) {
    throw DomainError("active window start " + format_time_of_day(day_start) +
                      " must precede end " + format_time_of_day(day_end));
  }
  if (series.times.size() != series.values.size()) {
    throw DomainError("series '" + series.label + "' has mismatched timestamps and values");
  }
  TimeSeries out;
  out.label = series.label;
  out.interval = series.interval;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto tod = time_of_day(series.times[i]);
    if (tod >= day_start.since_midnight && tod < day_end.since_midnight) {
      out.times.push_back(series.times[i]);
      out.values.push_back(series.values[i]);
    }
  }
  if (out.empty()) {
    throw EmptySeriesError("no samples of '" + series.label + "' fall inside " +
                           format_time_of_day(day_start) + "-" + format_time_of_day(day_end));
  }
  return out;
}

DecompositionResult decompose(const TimeSeries& series, std::size_t period) {
  if (period < 2) throw DomainError("seasonal period must be at least 2");
  const std::size_t n = series.size();
  if (n < 2 * period) {
    throw InsufficientDataError("series '" + series.label + "' has " + std::to_string(n) +
                                " samples; decomposition with period " + std::to_string(period) +
                                " needs at least " + std::to_string(2 * period));
  }
  const auto& x = series.values;
  const std::size_t half = trend_edge(period);
  const bool even = period % 2 == 0;
  const double inv_period = 1.0 / static_cast<double>(period);

  std::vector<double> trend(n, kNaN);
  for (std::size_t i = half; i + half < n; ++i) {
    double sum = 0.0;
    if (even) {
      sum = 0.5 * (x[i - half] + x[i + half]);
      for (std::size_t j = i - half + 1; j < i + half; ++j) sum += x[j];
    } else {
      for (std::size_t j = i - half; j <= i + half; ++j) sum += x[j];
    }
    trend[i] = sum * inv_period;
  }

  std::vector<double> phase_sum(period, 0.0);
  std::vector<std::size_t> phase_count(period, 0);
  for (std::size_t i = half; i + half < n; ++i) {
    phase_sum[i % period] += x[i] - trend[i];
    ++phase_count[i % period];
  }
  std::vector<double> pattern(period);
  double pattern_mean = 0.0;
  for (std::size_t k = 0; k < period; ++k) {
    pattern[k] = phase_sum[k] / static_cast<double>(phase_count[k]);
    pattern_mean += pattern[k];
  }
  pattern_mean *= inv_period;
  for (double& v : pattern) v -= pattern_mean;

  std::vector<double> seasonal(n);
  std::vector<double> residual(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    seasonal[i] = pattern[i % period];
    if (!std::isnan(trend[i])) residual[i] = x[i] - trend[i] - seasonal[i];
  }

  DecompositionResult result;
  result.seasonal = with_values(series, std::move(seasonal));
  result.trend = with_values(series, std::move(trend));
  result.residual = with_values(series, std::move(residual));
  result.period = period;
  result.edge = half;
  return result;
}

TimeSeries residual_series(const DecompositionResult& result) {
  const auto& full = result.residual;
  TimeSeries out;
  out.label = full.label;
  out.interval = full.interval;
  const std::size_t n = full.size();
  if (n < 2 * result.edge) return out;
  for (std::size_t i = result.edge; i + result.edge < n; ++i) {
    out.times.push_back(full.times[i]);
    out.values.push_back(full.values[i]);
  }
  return out;
}

}  // namespace qmax
