#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmax/time_series.hpp"

namespace qmax {

inline constexpr std::string_view kCsvHeader = "timestamp,intersection,queue_length";

enum class NegativePolicy { Reject, ClampZero };
enum class GapPolicy { Reject, ForwardFill };

struct IngestOptions {
  NegativePolicy negatives = NegativePolicy::Reject;
  GapPolicy gaps = GapPolicy::Reject;
  std::size_t max_fill = 0;           // longest gap (missing samples) forward-filled
  std::size_t bad_row_tolerance = 0;  // unparseable rows skipped before failing
  std::size_t stuck_threshold = 30;   // identical non-zero values in a row before a warning
  std::string units = "ft";
};

struct SeriesMetadata {
  std::string direction;
  std::string units;
};

/// Series sorted by label, each sorted by time and sharing one interval.
struct CorridorDataset {
  std::vector<TimeSeries> series;
  std::map<std::string, SeriesMetadata> metadata;
  std::vector<std::string> warnings;

  const TimeSeries* find(std::string_view label) const;
};

/// Parses the `timestamp,intersection,queue_length` schema (header required
/// verbatim). The interval is the smallest step seen in any series; every step
/// must be a multiple of it.
///
/// Throws InputError naming the line and column for schema violations beyond
/// the tolerance, negative values under the reject policy, duplicate
/// (timestamp, intersection) pairs, irregular steps, gaps under the reject
/// policy or longer than max_fill, and mismatched intervals across series.
CorridorDataset ingest_csv(std::istream& in, const IngestOptions& options = {},
                           std::string_view source = "<input>");
CorridorDataset ingest_csv_file(const std::filesystem::path& path,
                                const IngestOptions& options = {});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_field(std::string_view text);

/// Writes series in the ingest schema, rows ordered by series then time.
void write_csv(std::ostream& out, std::span<const TimeSeries> series);

}  // namespace qmax
