#include "qmax/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "qmax/errors.hpp"

namespace qmax {

namespace {

struct Row {
  Timestamp time;
  double value;
  std::size_t line;
};

class RowError : public std::runtime_error {
 public:
  RowError(std::string column, const std::string& what)
      : std::runtime_error(what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw RowError("intersection", "unterminated quoted field");
  return fields;
}

double parse_value(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw RowError("queue_length", "not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) throw RowError("queue_length", "non-finite value");
  return v;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

}  // namespace

const TimeSeries* CorridorDataset::find(std::string_view label) const {
  for (const auto& s : series) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

CorridorDataset ingest_csv(std::istream& in, const IngestOptions& options, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(std::string(source) + ": empty input, header missing");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw InputError(where(source, 1) + ": header must be exactly '" + std::string(kCsvHeader) +
                     "', got '" + line + "'");
  }

  CorridorDataset dataset;
  std::map<std::string, std::vector<Row>> rows;
  std::size_t line_no = 1;
  std::size_t bad_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto fields = split_fields(line);
      if (fields.size() != 3) {
        throw RowError("", "expected 3 fields, found " + std::to_string(fields.size()));
      }
      Timestamp ts;
      try {
        ts = parse_timestamp(fields[0]);
      } catch (const std::exception& e) {
        throw RowError("timestamp", e.what());
      }
      if (fields[1].empty()) throw RowError("intersection", "empty label");
      double value = parse_value(fields[2]);
      if (value < 0.0) {
        if (options.negatives == NegativePolicy::Reject) {
          throw InputError(where(source, line_no) + ", column queue_length: negative queue length " +
                           fields[2]);
        }
        value = 0.0;
      }
      rows[fields[1]].push_back({ts, value, line_no});
    } catch (const RowError& e) {
      const std::string msg = where(source, line_no) +
                              (e.column().empty() ? "" : ", column " + e.column()) + ": " + e.what();
      if (++bad_rows > options.bad_row_tolerance) throw InputError(msg);
      dataset.warnings.push_back("skipped " + msg);
    }
  }

  // Interval: smallest positive step across all series.
  long long interval = 0;
  for (auto& [label, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Row& a, const Row& b) { return a.time < b.time; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const auto step = (list[i].time - list[i - 1].time).count();
      if (step == 0) {
        throw InputError(where(source, list[i].line) + ": duplicate timestamp " +
                         format_timestamp(list[i].time) + " for intersection '" + label +
                         "' (first at line " + std::to_string(list[i - 1].line) + ")");
      }
      if (interval == 0 || step < interval) interval = step;
    }
  }
  if (interval == 0) interval = kDefaultInterval.count();

  for (auto& [label, list] : rows) {
    std::vector<Timestamp> times;
    std::vector<double> values;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0) {
        const auto step = (list[i].time - list[i - 1].time).count();
        if (step % interval != 0) {
          throw InputError(where(source, list[i].line) + ": non-uniform timestamps for '" + label +
                           "': step of " + std::to_string(step) + " s is not a multiple of " +
                           std::to_string(interval) + " s");
        }
        const auto missing = static_cast<std::size_t>(step / interval - 1);
        if (missing > 0) {
          if (options.gaps == GapPolicy::Reject || missing > options.max_fill) {
            throw InputError(where(source, list[i].line) + ": gap of " + std::to_string(missing) +
                             " missing samples for '" + label + "' before " +
                             format_timestamp(list[i].time));
          }
          for (std::size_t k = 1; k <= missing; ++k) {
            times.push_back(list[i - 1].time + std::chrono::seconds{interval * static_cast<long long>(k)});
            values.push_back(list[i - 1].value);
          }
          dataset.warnings.push_back("'" + label + "': forward-filled " + std::to_string(missing) +
                                     " samples before " + format_timestamp(list[i].time));
        }
      }
      times.push_back(list[i].time);
      values.push_back(list[i].value);
    }

    std::size_t run = 1;
    for (std::size_t i = 1; i <= values.size(); ++i) {
      if (i < values.size() && values[i] == values[i - 1]) {
        ++run;
        continue;
      }
      if (run > options.stuck_threshold && values[i - 1] != 0.0) {
        dataset.warnings.push_back("'" + label + "': value " + format_double(values[i - 1]) +
                                   " repeated " + std::to_string(run) + " times from " +
                                   format_timestamp(times[i - run]) + " (possible stuck sensor)");
      }
      run = 1;
    }

    TimeSeries series;
    series.label = label;
    series.interval = std::chrono::seconds{interval};
    series.times = std::move(times);
    series.values = std::move(values);
    dataset.metadata[label] = {"", options.units};
    dataset.series.push_back(std::move(series));
  }
  return dataset;
}

CorridorDataset ingest_csv_file(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return ingest_csv(in, options, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw DomainError("cannot format value");
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, std::span<const TimeSeries> series) {
  out << kCsvHeader << '\n';
  for (const auto& s : series) {
    if (s.times.size() != s.values.size()) throw DomainError("series '" + s.label + "' is malformed");
    const std::string label = csv_field(s.label);
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << format_timestamp(s.times[i]) << ',' << label << ',' << format_double(s.values[i]) << '\n';
    }
  }
  if (!out) throw IoError("write failed");
}

}  // namespace qmax
