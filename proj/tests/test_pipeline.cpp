#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qmax/decomposition.hpp"
#include "qmax/errors.hpp"
#include "qmax/pipeline.hpp"
#include "qmax/report.hpp"
#include "qmax/simulator.hpp"
#include "sampling.hpp"

using namespace qmax;
using namespace std::chrono;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kPerDay = 720;
constexpr std::size_t kActive = 450;
const Timestamp kStart = parse_timestamp("2024-04-01T00:00:00");

double injected_seasonal(std::size_t phase) {
  return 10 * std::sin(2 * std::numbers::pi * static_cast<double>(phase) / kActive);
}

// Whole days of 2-minute samples; inside 07:00-22:00 the value is
// carrier + noise, where the carrier is trend + a period-450 seasonal pattern
// indexed by position in the filtered series. Overnight values are zero.
TimeSeries carrier_series(std::string label, std::size_t days, const std::vector<double>& noise) {
  std::vector<double> v(days * kPerDay, 0.0);
  std::size_t j = 0;
  for (std::size_t d = 0; d < days; ++d) {
    for (std::size_t k = 0; k < kActive; ++k, ++j) {
      v[d * kPerDay + 210 + k] = 50 + 0.001 * static_cast<double>(j) + injected_seasonal(k) + noise[j];
    }
  }
  return make_uniform_series(std::move(label), kStart, seconds{120}, std::move(v));
}

CorridorDataset dataset_of(std::vector<TimeSeries> series) {
  CorridorDataset d;
  for (auto& s : series) {
    d.metadata[s.label] = {"NB", "ft"};
    d.series.push_back(std::move(s));
  }
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("qmax_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Pipeline, CarrierWithoutNoiseRecoversSeasonalExactly) {
  const std::size_t days = 6;
  const auto s = carrier_series("clean", days, std::vector<double>(days * kActive, 0.0));
  const auto filtered = active_hours_filter(s);
  ASSERT_EQ(filtered.size(), days * kActive);
  const auto r = decompose(filtered, kActive);
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    EXPECT_NEAR(r.seasonal.values[i], injected_seasonal(i % kActive), 1e-6) << i;
  }
}

TEST(Pipeline, GevResidualsOnCarrierRankGevFirst) {
  const std::size_t days = 20;
  const auto noise = qmax::testing::gev_samples(314, days * kActive, {0.0, 1.5, 0.25});
  const auto report = run_pipeline(dataset_of({carrier_series("gev", days, noise)}));
  ASSERT_EQ(report.series.size(), 1u);
  const auto& a = report.series[0];
  ASSERT_TRUE(a.ok) << a.diagnostic;
  EXPECT_EQ(a.decomposition.input_samples, days * kPerDay);
  EXPECT_EQ(a.decomposition.active_samples, days * kActive);
  EXPECT_EQ(a.decomposition.residual_samples, days * kActive - kActive);
  EXPECT_EQ(a.samples.size(), a.decomposition.residual_samples);
  ASSERT_TRUE(a.ranking.has_value());
  EXPECT_EQ(a.ranking->entries.front().family, Family::GenExtreme);
  // The seasonal estimate absorbs the per-phase noise means over the indices
  // where the trend is defined; predict its range from that.
  const std::size_t n = days * kActive, edge = kActive / 2;
  std::vector<double> phase_mean(kActive, 0.0);
  std::vector<double> phase_count(kActive, 0.0);
  for (std::size_t i = edge; i + edge < n; ++i) {
    phase_mean[i % kActive] += noise[i];
    phase_count[i % kActive] += 1;
  }
  double centre = 0;
  for (std::size_t k = 0; k < kActive; ++k) centre += (phase_mean[k] /= phase_count[k]) / kActive;
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 0; k < kActive; ++k) {
    const double s = injected_seasonal(k) + phase_mean[k] - centre;
    lo = std::min(lo, s), hi = std::max(hi, s);
  }
  EXPECT_NEAR(a.decomposition.seasonal_max, hi, 0.3);
  EXPECT_NEAR(a.decomposition.seasonal_min, lo, 0.3);
  // Default GoF selection: the winner plus gumbel_r.
  ASSERT_EQ(a.gof.size(), 2u);
  EXPECT_EQ(a.gof[0].family, Family::GenExtreme);
  EXPECT_EQ(a.gof[1].family, Family::GumbelR);
  ASSERT_TRUE(a.gof[0].report.has_value());
  EXPECT_GT(a.gof[0].report->pp_r2, 0.99);
}

TEST(Pipeline, NineSimulatedIntersections) {
  PipelineConfig cfg;
  cfg.day_start = parse_time_of_day("00:00");
  cfg.day_end = parse_time_of_day("24:00");
  std::vector<TimeSeries> series;
  for (int i = 0; i < 9; ++i) {
    SignalSimConfig c;
    c.seed = 100 + i;
    c.horizon = 1.5e5;
    c.arrival_rate = 0.06 + 0.015 * i;
    c.green_fraction = 0.45 + 0.03 * (i % 3);
    c.label = "int" + std::to_string(i);
    c.start_time = kStart;
    series.push_back(simulate(c).sampled_lengths);
  }
  const auto report = run_pipeline(dataset_of(series), cfg);
  ASSERT_EQ(report.series.size(), 9u);
  EXPECT_EQ(report.failed_count(), 0u);
  const auto j = report_to_json(report);
  EXPECT_EQ(j["series"].size(), 9u);
  EXPECT_EQ(j["gev_summary"].size(), 9u);
  for (const auto& s : report.series) {
    ASSERT_TRUE(s.ranking.has_value()) << s.label << ": " << s.diagnostic;
    EXPECT_FALSE(s.ranking->entries.empty());
  }
}

TEST(Pipeline, EmptyDatasetIsAnError) {
  EXPECT_THROW(run_pipeline(CorridorDataset{}), EmptyReportError);
}

TEST(Pipeline, FailureIsolation) {
  const std::size_t days = 4;
  const auto a = carrier_series("a", days, qmax::testing::gev_samples(1, days * kActive, {0, 1, 0.1}));
  const auto b = carrier_series("b", days, qmax::testing::normal_samples(2, days * kActive));
  const auto bad = make_uniform_series("c", kStart + hours{8}, seconds{120}, std::vector<double>(100, 1.0));
  const auto with_bad = run_pipeline(dataset_of({a, bad, b}));
  const auto without = run_pipeline(dataset_of({b, a}));
  ASSERT_EQ(with_bad.series.size(), 3u);
  EXPECT_EQ(with_bad.failed_count(), 1u);
  EXPECT_EQ(with_bad.series[2].label, "c");
  EXPECT_FALSE(with_bad.series[2].ok);
  EXPECT_NE(with_bad.series[2].diagnostic.find("decompos"), std::string::npos) << with_bad.series[2].diagnostic;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& x = with_bad.series[i];
    const auto& y = without.series[i];
    EXPECT_EQ(x.label, y.label);
    EXPECT_EQ(x.samples, y.samples);
    ASSERT_TRUE(x.ranking && y.ranking);
    ASSERT_EQ(x.ranking->entries.size(), y.ranking->entries.size());
    for (std::size_t k = 0; k < x.ranking->entries.size(); ++k) {
      EXPECT_EQ(x.ranking->entries[k].family, y.ranking->entries[k].family);
      EXPECT_EQ(x.ranking->entries[k].rss, y.ranking->entries[k].rss);
    }
  }
}

TEST(Pipeline, DuplicateLabelsRejected) {
  const auto s = make_uniform_series("x", kStart, seconds{120}, std::vector<double>(10, 1.0));
  EXPECT_THROW(run_pipeline(dataset_of({s, s})), InputError);
}

TEST(Report, EmitManifestAndDeterminism) {
  const std::size_t days = 4;
  const auto s = carrier_series("Cedar Pkwy", days,
                                qmax::testing::gev_samples(8, days * kActive, {0, 1, 0.2}));
  auto report = run_pipeline(dataset_of({s}));
  report.provenance.generated_at = "fixed";
  const auto dir = scratch_dir("emit");
  const auto manifest = emit_report(report, dir, {.svg = true});
  auto has = [&](const std::string& rel) {
    return std::find(manifest.begin(), manifest.end(), fs::path(rel)) != manifest.end();
  };
  for (const char* f : {"Cedar_Pkwy/ranking.csv", "Cedar_Pkwy/histogram.csv", "Cedar_Pkwy/pp.csv",
                        "Cedar_Pkwy/qq.csv", "Cedar_Pkwy/ranking.txt", "report.json",
                        "ranking_table.csv"}) {
    EXPECT_TRUE(has(f)) << f;
  }
  for (const auto& rel : manifest) EXPECT_TRUE(fs::exists(dir / rel)) << rel;
  EXPECT_TRUE(std::is_sorted(manifest.begin(), manifest.end()));
  std::vector<std::string> first;
  for (const auto& rel : manifest) first.push_back(slurp(dir / rel));
  const auto again = emit_report(report, dir, {.svg = true});
  ASSERT_EQ(again, manifest);
  for (std::size_t i = 0; i < manifest.size(); ++i) EXPECT_EQ(slurp(dir / manifest[i]), first[i]) << manifest[i];
  const auto ranking = slurp(dir / "Cedar_Pkwy/ranking.csv");
  const auto& top = report.series[0].ranking->entries[0];
  const std::string top_name(family_name(top.family));
  EXPECT_EQ(ranking.rfind("rank,family,rss,status\n1," + top_name + ",", 0), 0u) << ranking;
  const auto txt = slurp(dir / "Cedar_Pkwy/ranking.txt");
  EXPECT_NE(txt.find(format_ranking_cell(top_name, top.rss)), std::string::npos) << txt;
  EXPECT_TRUE(check_numeric_csv(dir / "Cedar_Pkwy/pp.csv", {"theoretical_cdf", "empirical_cdf"}).empty() ||
              check_numeric_csv(dir / "Cedar_Pkwy/pp.csv", {"empirical_cdf", "theoretical_cdf"}).empty());
  const auto svg = slurp(dir / "Cedar_Pkwy/histogram.svg");
  EXPECT_EQ(svg.find("href"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Report, FailedSeriesGetsErrorFile) {
  const auto bad = make_uniform_series("bad/one", kStart + hours{8}, seconds{120}, std::vector<double>(50, 1.0));
  const auto report = run_pipeline(dataset_of({bad}));
  const auto dir = scratch_dir("failed");
  const auto manifest = emit_report(report, dir);
  EXPECT_TRUE(std::find(manifest.begin(), manifest.end(), fs::path("bad_one/error.txt")) != manifest.end());
  EXPECT_FALSE(fs::exists(dir / "bad_one/ranking.csv"));
  fs::remove_all(dir);
}

TEST(Config, EchoRoundTripsThroughSetters) {
  PipelineConfig c;
  set_config_value(c, "seasonal_period", "300");
  set_config_value(c, "active_window", "06:30-21:00");
  set_config_value(c, "block_size", "7");
  set_config_value(c, "binning", "40");
  set_config_value(c, "catalog", "genextreme, norm ,uniform");
  set_config_value(c, "gof_families", "gumbel_r");
  set_config_value(c, "linearity_threshold", "0.95");
  EXPECT_EQ(c.seasonal_period, 300u);
  EXPECT_EQ(c.block_size, 7u);
  EXPECT_EQ(c.binning.bin_count, 40u);
  EXPECT_EQ(c.catalog.size(), 3u);
  PipelineConfig copy;
  for (const auto& [k, v] : config_echo(c)) set_config_value(copy, k, v);
  EXPECT_EQ(config_echo(copy), config_echo(c));
  const auto defaults = config_echo(PipelineConfig{});
  EXPECT_EQ(defaults[0], (std::pair<std::string, std::string>{"seasonal_period", "450"}));
}

TEST(Config, RejectsBadInput) {
  PipelineConfig c;
  EXPECT_THROW(set_config_value(c, "colour", "red"), InputError);
  EXPECT_THROW(set_config_value(c, "block_size", "seven"), InputError);
  EXPECT_THROW(set_config_value(c, "catalog", "genextreme,vonmises"), InputError);
  EXPECT_THROW(set_config_value(c, "active_window", "22:00"), InputError);
  PipelineConfig zero;
  zero.block_size = 0;
  EXPECT_THROW(validate(zero), DomainError);
}

TEST(Config, KeyValueFile) {
  std::istringstream in("# comment\n\nseasonal_period = 450\n  block_size=2  \n");
  const auto kv = read_key_values(in, "c.cfg");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"block_size", "2"}));
  std::istringstream bad("block_size 2\n");
  try {
    read_key_values(bad, "c.cfg");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("c.cfg:1"), std::string::npos) << e.what();
  }
}

TEST(Checksum, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
