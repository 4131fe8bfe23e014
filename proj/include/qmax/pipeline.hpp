#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmax/csv_io.hpp"
#include "qmax/decomposition.hpp"
#include "qmax/fitting.hpp"
#include "qmax/gof.hpp"

namespace qmax {

inline constexpr const char* kToolVersion = "qmax 0.1.0";

struct PipelineConfig {
  std::size_t seasonal_period = kDefaultSeasonalPeriod;
  TimeOfDay day_start = kDefaultDayStart;
  TimeOfDay day_end = kDefaultDayEnd;
  std::size_t block_size = 1;
  Binning binning;
  std::vector<Family> catalog{comparison_catalog().begin(), comparison_catalog().end()};
  /// Empty: the best-ranked family plus gumbel_r.
  std::vector<Family> gof_families;
  double linearity_threshold = kDefaultLinearityThreshold;
};

/// Throws DomainError for a zero period or block size, an empty catalog, or
/// an active window that is empty.
void validate(const PipelineConfig& config);

/// key -> value text, in a fixed order; also the config-file syntax.
std::vector<std::pair<std::string, std::string>> config_echo(const PipelineConfig& config);

/// Sets one field from its config-file text. Keys: seasonal_period,
/// active_window ("HH:MM-HH:MM"), block_size, binning ("fd" or a bin count),
/// catalog and gof_families (comma-separated names; "auto" for the default
/// GoF selection), linearity_threshold. Throws InputError on unknown keys or
/// malformed values.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
/// Throws InputError naming the line for anything else.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in,
                                                                 std::string_view source);

/// Comma-separated family names. Throws InputError for unknown names.
std::vector<Family> parse_family_list(std::string_view text);

struct DecompositionSummary {
  std::size_t input_samples = 0;
  std::size_t active_samples = 0;
  std::size_t residual_samples = 0;
  std::size_t period = 0;
  std::size_t edge = 0;
  double seasonal_min = 0.0;
  double seasonal_max = 0.0;
  double residual_mean = 0.0;
  double residual_sd = 0.0;
};

struct GofEntry {
  Family family = Family::GenExtreme;
  FittedDistribution fit;
  std::optional<GofReport> report;
  std::string diagnostic;  // set when the fit or the diagnostics failed
};

struct SeriesAnalysis {
  std::string label;
  bool ok = false;
  std::string diagnostic;
  DecompositionSummary decomposition;
  std::vector<double> samples;  // block maxima of the residual: what was fitted
  std::optional<RankingTable> ranking;
  std::vector<GofEntry> gof;
};

struct Provenance {
  std::string tool_version = kToolVersion;
  std::vector<std::pair<std::string, std::string>> config;
  std::map<std::string, std::string> input_checksums;  // name -> FNV-1a 64 hex
  std::string generated_at;  // the only field that varies between identical runs
};

struct AnalysisReport {
  std::vector<SeriesAnalysis> series;  // sorted by label
  Provenance provenance;
  PipelineConfig config;
  std::vector<std::string> warnings;

  std::size_t failed_count() const;
};

/// Per series: active-hours filter, decomposition, residual, block maxima,
/// ranking, GoF. A failing series becomes a diagnostic entry.
/// Throws EmptyReportError for a dataset without series.
AnalysisReport run_pipeline(const CorridorDataset& dataset, const PipelineConfig& config = {});

/// Single-series analysis used by run_pipeline.
SeriesAnalysis analyze_series(const TimeSeries& series, const PipelineConfig& config);

/// GoF for each family: reuses fits from `table` when present.
std::vector<GofEntry> gof_for_families(std::span<const double> samples,
                                       std::span<const Family> families,
                                       const RankingTable* table, const PipelineConfig& config);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace qmax
