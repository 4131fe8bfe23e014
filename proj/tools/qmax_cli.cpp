// qmax command-line front end: analyze, simulate, fit, gof.
//
// Every option can also come from a key = value file given with --config;
// keys are the long option names with '_' for '-'. Command-line values win.
// Exit codes: 0 success, 1 some series failed, 2 invalid input, 3 internal error.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "qmax/csv_io.hpp"
#include "qmax/errors.hpp"
#include "qmax/gof.hpp"
#include "qmax/pipeline.hpp"
#include "qmax/report.hpp"
#include "qmax/simulator.hpp"

namespace {

using namespace qmax;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInternal = 3;

using Settings = std::map<std::string, std::string>;

const std::set<std::string> kPipelineKeys = {"seasonal_period", "active_window", "block_size",
                                             "binning",         "catalog",       "gof_families",
                                             "linearity_threshold"};

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

// Registers --<key> whose value lands in `given[key]`.
void add_setting(CLI::App* app, Settings& given, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      dashed(key), [&given, key](const std::string& v) { given[key] = v; }, help);
}

void add_switch(CLI::App* app, Settings& given, const std::string& key, const std::string& help) {
  app->add_flag_function(
      dashed(key), [&given, key](std::int64_t) { given[key] = "true"; }, help);
}

// Config file first, then command-line values on top. Keys that belong to
// another subcommand are ignored; keys unknown everywhere are errors.
Settings merge_settings(const std::string& config_path, const Settings& given,
                        const std::set<std::string>& own_keys, const std::set<std::string>& all_keys) {
  Settings merged;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config file '" + config_path + "'");
    for (auto& [k, v] : read_key_values(in, config_path)) {
      if (!all_keys.count(k)) throw InputError(config_path + ": unknown setting '" + k + "'");
      if (own_keys.count(k)) merged[k] = v;
    }
  }
  for (const auto& [k, v] : given) merged[k] = v;
  return merged;
}

double to_double(const Settings& s, const std::string& key, double fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  double v = 0.0;
  const auto& t = it->second;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw InputError(key + ": expected a number, got '" + t + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const Settings& s, const std::string& key, std::uint64_t fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  std::uint64_t v = 0;
  const auto& t = it->second;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw InputError(key + ": expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) return false;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw InputError(key + ": expected true or false, got '" + it->second + "'");
}

std::string to_string_or(const Settings& s, const std::string& key, std::string fallback) {
  const auto it = s.find(key);
  return it == s.end() ? fallback : it->second;
}

IngestOptions ingest_options(const Settings& s) {
  IngestOptions o;
  const auto neg = to_string_or(s, "negatives", "reject");
  if (neg == "reject") {
    o.negatives = NegativePolicy::Reject;
  } else if (neg == "clamp") {
    o.negatives = NegativePolicy::ClampZero;
  } else {
    throw InputError("negatives: expected reject or clamp");
  }
  const auto gaps = to_string_or(s, "gaps", "reject");
  if (gaps == "reject") {
    o.gaps = GapPolicy::Reject;
  } else if (gaps == "fill") {
    o.gaps = GapPolicy::ForwardFill;
  } else {
    throw InputError("gaps: expected reject or fill");
  }
  o.max_fill = to_unsigned(s, "max_fill", o.max_fill);
  o.bad_row_tolerance = to_unsigned(s, "bad_row_tolerance", o.bad_row_tolerance);
  o.stuck_threshold = to_unsigned(s, "stuck_threshold", o.stuck_threshold);
  o.units = to_string_or(s, "units", o.units);
  return o;
}

PipelineConfig pipeline_config(const Settings& s) {
  PipelineConfig config;
  for (const auto& [k, v] : s) {
    if (kPipelineKeys.count(k)) set_config_value(config, k, v);
  }
  validate(config);
  return config;
}

const TimeSeries& pick_series(const CorridorDataset& dataset, const Settings& s) {
  const auto label = to_string_or(s, "label", "");
  if (label.empty()) {
    if (dataset.series.size() != 1) {
      throw InputError("input holds " + std::to_string(dataset.series.size()) +
                       " series; choose one with --label");
    }
    return dataset.series.front();
  }
  const auto* found = dataset.find(label);
  if (!found) throw InputError("no series labelled '" + label + "'");
  return *found;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_analyze(const Settings& s) {
  const auto input = to_string_or(s, "input", "");
  const auto out = to_string_or(s, "out", "");
  if (input.empty() || out.empty()) throw InputError("analyze needs --input and --out");
  const auto config = pipeline_config(s);
  const std::string bytes = read_file(input);
  std::istringstream stream(bytes);
  const auto dataset = ingest_csv(stream, ingest_options(s), input);
  print_warnings(dataset.warnings);
  auto report = run_pipeline(dataset, config);
  report.provenance.input_checksums["input_file"] = fnv1a_hex(bytes);
  EmitOptions emit;
  emit.svg = to_bool(s, "svg");
  const auto manifest = emit_report(report, out, emit);
  for (const auto& p : manifest) std::cout << (std::filesystem::path(out) / p).string() << '\n';
  for (const auto& series : report.series) {
    if (!series.ok) std::cerr << "series '" << series.label << "' failed: " << series.diagnostic << '\n';
  }
  return report.failed_count() == 0 ? kExitOk : kExitPartial;
}

int run_simulate(const Settings& s) {
  SignalSimConfig c;
  c.arrival_rate = to_double(s, "arrival_rate", c.arrival_rate);
  c.service_headway = to_double(s, "service_headway", c.service_headway);
  c.cycle_length = to_double(s, "cycle_length", c.cycle_length);
  c.green_fraction = to_double(s, "green_fraction", c.green_fraction);
  c.horizon = to_double(s, "horizon", c.horizon);
  c.sample_interval = std::chrono::seconds{
      static_cast<long long>(to_unsigned(s, "sample_interval", c.sample_interval.count()))};
  c.seed = to_unsigned(s, "seed", c.seed);
  c.allow_oversaturated = to_bool(s, "allow_oversaturated");
  c.label = to_string_or(s, "label", c.label);
  if (const auto it = s.find("start"); it != s.end()) c.start_time = parse_timestamp(it->second);
  const auto units = to_string_or(s, "units", "vehicles");
  double scale = 1.0;
  if (units == "feet" || units == "ft") {
    scale = to_double(s, "vehicle_spacing_ft", kDefaultVehicleSpacingFt);
  } else if (units != "vehicles") {
    throw InputError("units: expected vehicles or feet");
  }

  const auto trace = simulate(c);
  const auto out = to_string_or(s, "out", "-");
  if (out == "-") {
    export_trace_csv(trace, std::cout, scale);
  } else {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + out + "' for writing");
    export_trace_csv(trace, file, scale);
    if (!file) throw IoError("write failed for '" + out + "'");
  }
  std::cerr << "arrivals " << trace.arrivals << ", departures " << trace.departures
            << ", final queue " << trace.final_queue << ", mean queue " << trace.time_average_queue
            << " veh, samples " << trace.sampled_lengths.size() << '\n';
  return kExitOk;
}

int run_fit(const Settings& s) {
  const auto input = to_string_or(s, "input", "");
  if (input.empty()) throw InputError("fit needs --input");
  const auto config = pipeline_config(s);
  const auto dataset = ingest_csv_file(input, ingest_options(s));
  print_warnings(dataset.warnings);
  const auto& series = pick_series(dataset, s);
  const auto samples = to_bool(s, "pipeline")
                           ? analyze_series(series, config).samples
                           : series.values;
  if (samples.empty()) throw InputError("series '" + series.label + "' yielded no samples to fit");
  const auto table = rank_candidates(samples, config.catalog, FitOptions{config.binning, {}},
                                     series.label);
  std::cout << series.label << " (" << samples.size() << " samples)\n"
            << format_ranking_text(table);
  for (const auto& fit : table.fits) {
    if (!fit.ok) continue;
    std::cout << family_name(fit.family) << ':';
    const auto names = param_names(fit.family);
    for (std::size_t i = 0; i < fit.params.size(); ++i) {
      std::cout << ' ' << names[i] << '=' << format_double(fit.params[i]);
    }
    std::cout << " loglik=" << format_double(fit.log_likelihood) << '\n';
  }
  return table.failures.empty() ? kExitOk : kExitPartial;
}

int run_gof(const Settings& s) {
  const auto input = to_string_or(s, "input", "");
  if (input.empty()) throw InputError("gof needs --input");
  const auto config = pipeline_config(s);
  const auto dataset = ingest_csv_file(input, ingest_options(s));
  print_warnings(dataset.warnings);
  const auto& series = pick_series(dataset, s);
  const auto samples = to_bool(s, "pipeline")
                           ? analyze_series(series, config).samples
                           : series.values;
  std::vector<Family> families = config.gof_families;
  if (families.empty()) families.push_back(Family::GumbelR);
  const auto entries = gof_for_families(samples, families, nullptr, config);
  bool all_ok = true;
  const auto out = to_string_or(s, "out", "");
  for (const auto& e : entries) {
    const std::string fam(family_name(e.family));
    if (!e.report) {
      all_ok = false;
      std::cout << fam << ": failed: " << e.diagnostic << '\n';
      continue;
    }
    const auto& r = *e.report;
    std::cout << fam << ": pp_r2=" << format_double(r.pp_r2) << " qq_r2=" << format_double(r.qq_r2)
              << " ks=" << format_double(r.ks_statistic) << " p=" << format_double(r.ks_p_value)
              << (r.linear ? " linear" : " not-linear") << '\n';
    if (!out.empty()) {
      std::filesystem::create_directories(out);
      for (const auto& [name, points, head] :
           {std::tuple{"pp_", &r.pp, "empirical_cdf,theoretical_cdf"},
            std::tuple{"qq_", &r.qq, "theoretical_quantile,empirical_quantile"}}) {
        const auto path = std::filesystem::path(out) / (std::string(name) + fam + ".csv");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
        f << head << '\n';
        for (const auto& p : *points) f << format_double(p.x) << ',' << format_double(p.y) << '\n';
      }
    }
  }
  std::cout << "note: " << kKsCaveat << '\n';
  return all_ok ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme-value analysis of signalized-intersection queue lengths"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Settings given;
  std::string config_path;
  std::map<CLI::App*, std::set<std::string>> keys;

  auto* analyze = app.add_subcommand("analyze", "ingest a CSV, run the pipeline and write a report");
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate one signalized approach and export its trace");
  auto* fit = app.add_subcommand("fit", "fit and rank the catalog on one series");
  auto* gof = app.add_subcommand("gof", "P-P, Q-Q and KS diagnostics for one series");

  auto add = [&](CLI::App* cmd, const std::string& key, const std::string& help) {
    add_setting(cmd, given, key, help);
    keys[cmd].insert(key);
  };
  auto flag = [&](CLI::App* cmd, const std::string& key, const std::string& help) {
    add_switch(cmd, given, key, help);
    keys[cmd].insert(key);
  };

  for (auto* cmd : {analyze, fit, gof}) {
    cmd->add_option("--config", config_path, "key = value settings file");
    add(cmd, "input", "input CSV (timestamp,intersection,queue_length)");
    add(cmd, "seasonal_period", "seasonal period in samples (default 450)");
    add(cmd, "active_window", "active hours HH:MM-HH:MM (default 07:00-22:00)");
    add(cmd, "block_size", "block size for maxima (default 1)");
    add(cmd, "binning", "histogram binning: fd or a bin count");
    add(cmd, "catalog", "comma-separated candidate families");
    add(cmd, "gof_families", "families for diagnostics, or auto");
    add(cmd, "linearity_threshold", "R^2 threshold for a linear P-P/Q-Q (default 0.98)");
    add(cmd, "negatives", "negative values: reject or clamp");
    add(cmd, "gaps", "gaps: reject or fill");
    add(cmd, "max_fill", "longest gap to forward-fill, in samples");
    add(cmd, "bad_row_tolerance", "unparseable rows to skip before failing");
    add(cmd, "stuck_threshold", "repeated non-zero values before a stuck-sensor warning");
    add(cmd, "units", "unit label of queue_length (default ft)");
  }
  add(analyze, "out", "output directory");
  flag(analyze, "svg", "also write SVG plots");
  for (auto* cmd : {fit, gof}) {
    add(cmd, "label", "series to use when the input holds several");
    flag(cmd, "pipeline", "fit the pipeline's block maxima instead of the raw values");
  }
  add(gof, "out", "directory for pp_<family>.csv and qq_<family>.csv");

  simulate_cmd->add_option("--config", config_path, "key = value settings file");
  add(simulate_cmd, "arrival_rate", "Poisson arrival rate, vehicles/s (default 0.1)");
  add(simulate_cmd, "service_headway", "discharge headway during green, s (default 2)");
  add(simulate_cmd, "cycle_length", "signal cycle, s (default 120)");
  add(simulate_cmd, "green_fraction", "green share of the cycle (default 0.5)");
  add(simulate_cmd, "horizon", "simulated time, s (default 1e6)");
  add(simulate_cmd, "sample_interval", "queue sampling interval, whole seconds (default 120)");
  add(simulate_cmd, "seed", "random seed (default 42)");
  flag(simulate_cmd, "allow_oversaturated", "permit arrival rate at or above capacity");
  add(simulate_cmd, "label", "intersection label in the exported CSV (default sim)");
  add(simulate_cmd, "start", "timestamp of t = 0 (default 1970-01-01T00:00:00)");
  add(simulate_cmd, "units", "exported units: vehicles or feet");
  add(simulate_cmd, "vehicle_spacing_ft", "feet per queued vehicle (default 25)");
  add(simulate_cmd, "out", "output CSV, - for stdout");

  std::set<std::string> all_keys;
  for (const auto& [cmd, k] : keys) all_keys.insert(k.begin(), k.end());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const auto settings = merge_settings(config_path, given, keys[cmd], all_keys);
    if (cmd == analyze) return run_analyze(settings);
    if (cmd == simulate_cmd) return run_simulate(settings);
    if (cmd == fit) return run_fit(settings);
    return run_gof(settings);
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InsufficientDataError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const EmptyReportError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const EmptyRankingError& e) {
    std::cerr << "no family could be fitted: " << e.what() << '\n';
    return kExitPartial;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
