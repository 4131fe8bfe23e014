#include "qmax/time_series.hpp"

#include <charconv>
#include <cstdio>

#include "qmax/errors.hpp"

namespace qmax {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  int value = 0;
  if (pos + len > text.size()) throw InputError("malformed timestamp '" + std::string(whole) + "'");
  const auto* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw InputError("malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

TimeSeries make_uniform_series(std::string label, Timestamp start, std::chrono::seconds interval,
                               std::vector<double> values) {
  if (interval.count() <= 0) throw DomainError("sampling interval must be positive");
  TimeSeries series;
  series.label = std::move(label);
  series.interval = interval;
  series.times.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    series.times.push_back(start + interval * static_cast<long long>(i));
  }
  series.values = std::move(values);
  return series;
}

TimeSeries with_values(const TimeSeries& like, std::vector<double> values) {
  if (values.size() != like.times.size()) throw DomainError("value count does not match timestamps");
  TimeSeries out;
  out.label = like.label;
  out.interval = like.interval;
  out.times = like.times;
  out.values = std::move(values);
  return out;
}

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS[Z]
  if (text.size() != 19 && !(text.size() == 20 && text.back() == 'Z')) {
    throw InputError("malformed timestamp '" + std::string(text) + "'");
  }
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      text[16] != ':') {
    throw InputError("malformed timestamp '" + std::string(text) + "'");
  }
  using namespace std::chrono;
  const int y = parse_field(text, 0, 4, text);
  const int mo = parse_field(text, 5, 2, text);
  const int d = parse_field(text, 8, 2, text);
  const int h = parse_field(text, 11, 2, text);
  const int mi = parse_field(text, 14, 2, text);
  const int s = parse_field(text, 17, 2, text);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
    throw InputError("invalid timestamp '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_start = floor<days>(ts);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{ts - day_start};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(hms.hours().count()),
                static_cast<long long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

TimeOfDay parse_time_of_day(std::string_view text) {
  if (text.size() != 5 && text.size() != 8) {
    throw InputError("time of day must be HH:MM or HH:MM:SS, got '" + std::string(text) + "'");
  }
  if (text[2] != ':' || (text.size() == 8 && text[5] != ':')) {
    throw InputError("time of day must be HH:MM or HH:MM:SS, got '" + std::string(text) + "'");
  }
  const int h = parse_field(text, 0, 2, text);
  const int m = parse_field(text, 3, 2, text);
  const int s = text.size() == 8 ? parse_field(text, 6, 2, text) : 0;
  const long long total = h * 3600LL + m * 60LL + s;
  if (m > 59 || s > 59 || total > 86400) {
    throw InputError("time of day out of range: '" + std::string(text) + "'");
  }
  return TimeOfDay{std::chrono::seconds{total}};
}

std::string format_time_of_day(TimeOfDay tod) {
  const long long t = tod.since_midnight.count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", t / 3600, (t / 60) % 60, t % 60);
  return buf;
}

}  // namespace qmax
