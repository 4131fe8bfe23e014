#include <gtest/gtest.h>

#include "qmax/errors.hpp"
#include "qmax/time_series.hpp"

using namespace qmax;
using namespace std::chrono;

TEST(Timestamp, ParsesAndFormats) {
  const auto t = parse_timestamp("2024-03-05T07:02:00");
  EXPECT_EQ(format_timestamp(t), "2024-03-05T07:02:00");
  EXPECT_EQ(parse_timestamp("2024-03-05 07:02:00"), t);
  EXPECT_EQ(parse_timestamp("2024-03-05T07:02:00Z"), t);
  EXPECT_EQ(parse_timestamp("2024-03-05T07:04:00") - t, seconds{120});
}

TEST(Timestamp, RejectsMalformed) {
  for (const char* bad : {"", "2024-03-05", "2024-13-05T00:00:00", "2024-03-05T25:00:00", "yesterday",
                          "2024-03-05T07:02:00+01"}) {
    EXPECT_THROW(parse_timestamp(bad), InputError) << bad;
  }
}

TEST(TimeOfDay, ParsesBothForms) {
  EXPECT_EQ(parse_time_of_day("07:00").since_midnight, hours{7});
  EXPECT_EQ(parse_time_of_day("22:00:30").since_midnight, hours{22} + seconds{30});
  EXPECT_EQ(parse_time_of_day("24:00").since_midnight, hours{24});
  EXPECT_EQ(format_time_of_day(parse_time_of_day("07:05")), "07:05:00");
  EXPECT_THROW(parse_time_of_day("7"), InputError);
  EXPECT_THROW(parse_time_of_day("25:00"), InputError);
}

TEST(TimeSeries, UniformConstruction) {
  const auto start = parse_timestamp("2024-01-01T00:00:00");
  const auto s = make_uniform_series("a", start, seconds{120}, {1, 2, 3});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.times[2] - s.times[0], seconds{240});
  EXPECT_EQ(s.start_time(), start);
  const auto w = with_values(s, {4, 5, 6});
  EXPECT_EQ(w.times, s.times);
  EXPECT_EQ(w.label, "a");
  EXPECT_ANY_THROW(with_values(s, {1.0}));
}
