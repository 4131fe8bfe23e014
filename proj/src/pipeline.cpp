#include "qmax/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "qmax/block_maxima.hpp"
#include "qmax/errors.hpp"

namespace qmax {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_positive_size(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || v == 0) {
    throw InputError(std::string(key) + ": expected a positive integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::string join_families(std::span<const Family> families) {
  std::string out;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (i > 0) out += ',';
    out += family_name(families[i]);
  }
  return out;
}

std::string now_iso8601() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return format_timestamp(now) + "Z";
}

}  // namespace

void validate(const PipelineConfig& config) {
  if (config.seasonal_period == 0) throw DomainError("seasonal_period must be positive");
  if (config.block_size == 0) throw DomainError("block_size must be positive");
  if (config.catalog.empty()) throw DomainError("catalog must name at least one family");
  if (!(config.day_start < config.day_end)) {
    throw DomainError("active window " + format_time_of_day(config.day_start) + "-" +
                      format_time_of_day(config.day_end) + " is empty");
  }
  if (config.binning.rule == Binning::Rule::FixedCount && config.binning.bin_count == 0) {
    throw DomainError("fixed binning needs a positive bin count");
  }
  if (!(config.linearity_threshold >= 0.0 && config.linearity_threshold <= 1.0)) {
    throw DomainError("linearity_threshold must lie in [0, 1]");
  }
}

std::vector<std::pair<std::string, std::string>> config_echo(const PipelineConfig& config) {
  return {
      {"seasonal_period", std::to_string(config.seasonal_period)},
      {"active_window", format_time_of_day(config.day_start) + "-" + format_time_of_day(config.day_end)},
      {"block_size", std::to_string(config.block_size)},
      {"binning", config.binning.rule == Binning::Rule::FreedmanDiaconis
                      ? std::string("fd")
                      : std::to_string(config.binning.bin_count)},
      {"catalog", join_families(config.catalog)},
      {"gof_families", config.gof_families.empty() ? std::string("auto")
                                                   : join_families(config.gof_families)},
      {"linearity_threshold", format_double(config.linearity_threshold)},
  };
}

std::vector<Family> parse_family_list(std::string_view text) {
  std::vector<Family> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto name = trim(text.substr(pos, comma - pos));
    if (!name.empty()) {
      const auto family = family_from_name(name);
      if (!family) throw InputError("unknown distribution family '" + std::string(name) + "'");
      if (std::find(out.begin(), out.end(), *family) == out.end()) out.push_back(*family);
    }
    pos = comma + 1;
  }
  return out;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "seasonal_period") {
    config.seasonal_period = parse_positive_size(key, value);
  } else if (key == "block_size") {
    config.block_size = parse_positive_size(key, value);
  } else if (key == "active_window") {
    const auto dash = value.find('-');
    if (dash == std::string_view::npos) throw InputError("active_window: expected HH:MM-HH:MM");
    try {
      config.day_start = parse_time_of_day(trim(value.substr(0, dash)));
      config.day_end = parse_time_of_day(trim(value.substr(dash + 1)));
    } catch (const std::exception& e) {
      throw InputError(std::string("active_window: ") + e.what());
    }
  } else if (key == "binning") {
    if (value == "fd" || value == "freedman-diaconis") {
      config.binning = Binning::freedman_diaconis();
    } else {
      config.binning = Binning::fixed(parse_positive_size(key, value));
    }
  } else if (key == "catalog") {
    config.catalog = parse_family_list(value);
    if (config.catalog.empty()) throw InputError("catalog: no families given");
  } else if (key == "gof_families") {
    config.gof_families = value == "auto" ? std::vector<Family>{} : parse_family_list(value);
  } else if (key == "linearity_threshold") {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() || !(v >= 0.0 && v <= 1.0)) {
      throw InputError("linearity_threshold: expected a number in [0, 1]");
    }
    config.linearity_threshold = v;
  } else {
    throw InputError("unknown pipeline setting '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in,
                                                                 std::string_view source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos || trim(view.substr(0, eq)).empty()) {
      throw InputError(std::string(source) + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    out.emplace_back(std::string(trim(view.substr(0, eq))), std::string(trim(view.substr(eq + 1))));
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t AnalysisReport::failed_count() const {
  return static_cast<std::size_t>(
      std::count_if(series.begin(), series.end(), [](const SeriesAnalysis& s) { return !s.ok; }));
}

std::vector<GofEntry> gof_for_families(std::span<const double> samples,
                                       std::span<const Family> families,
                                       const RankingTable* table, const PipelineConfig& config) {
  std::vector<GofEntry> out;
  const FitOptions options{config.binning, {}};
  for (Family family : families) {
    GofEntry entry;
    entry.family = family;
    try {
      const FittedDistribution* cached = table ? table->fit_for(family) : nullptr;
      entry.fit = cached ? *cached : fit_mle(samples, family, options);
      if (!entry.fit.ok) {
        entry.diagnostic = entry.fit.diagnostic;
      } else {
        entry.report = make_gof_report(samples, entry.fit, config.linearity_threshold);
      }
    } catch (const std::exception& e) {
      entry.diagnostic = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

SeriesAnalysis analyze_series(const TimeSeries& series, const PipelineConfig& config) {
  SeriesAnalysis out;
  out.label = series.label;
  auto& summary = out.decomposition;
  summary.input_samples = series.size();
  summary.period = config.seasonal_period;
  std::string stage = "active-hours filter";
  try {
    const auto active = active_hours_filter(series, config.day_start, config.day_end);
    summary.active_samples = active.size();

    stage = "decomposition";
    const auto parts = decompose(active, config.seasonal_period);
    const auto residual = residual_series(parts);
    summary.edge = parts.edge;
    summary.residual_samples = residual.size();
    const auto [smin, smax] =
        std::minmax_element(parts.seasonal.values.begin(), parts.seasonal.values.end());
    summary.seasonal_min = *smin;
    summary.seasonal_max = *smax;
    double mean = 0.0;
    for (double v : residual.values) mean += v;
    mean /= static_cast<double>(residual.size());
    double ss = 0.0;
    for (double v : residual.values) ss += (v - mean) * (v - mean);
    summary.residual_mean = mean;
    summary.residual_sd =
        residual.size() > 1 ? std::sqrt(ss / static_cast<double>(residual.size() - 1)) : 0.0;

    stage = "block maxima";
    out.samples = extract_block_maxima(residual, config.block_size).maxima;

    stage = "ranking";
    out.ranking = rank_candidates(out.samples, config.catalog, FitOptions{config.binning, {}},
                                  series.label);

    stage = "goodness of fit";
    std::vector<Family> families = config.gof_families;
    if (families.empty()) {
      families.push_back(out.ranking->entries.front().family);
      if (families.front() != Family::GumbelR) families.push_back(Family::GumbelR);
    }
    out.gof = gof_for_families(out.samples, families, &*out.ranking, config);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.diagnostic = stage + ": " + e.what();
  }
  return out;
}

AnalysisReport run_pipeline(const CorridorDataset& dataset, const PipelineConfig& config) {
  if (dataset.series.empty()) throw EmptyReportError("dataset contains no series");
  validate(config);

  AnalysisReport report;
  report.config = config;
  report.warnings = dataset.warnings;
  report.provenance.config = config_echo(config);
  std::ostringstream canonical;
  write_csv(canonical, dataset.series);
  report.provenance.input_checksums["dataset"] = fnv1a_hex(canonical.str());

  std::vector<const TimeSeries*> ordered;
  for (const auto& s : dataset.series) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const TimeSeries* a, const TimeSeries* b) { return a->label < b->label; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->label == ordered[i - 1]->label) {
      throw InputError("duplicate series label '" + ordered[i]->label + "'");
    }
  }
  for (const auto* s : ordered) report.series.push_back(analyze_series(*s, config));
  report.provenance.generated_at = now_iso8601();
  return report;
}

}  // namespace qmax
