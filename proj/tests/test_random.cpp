#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qmax/random.hpp"

using qmax::CounterStream;
using qmax::philox4x32;

// Known-answer vectors for Philox4x32-10 (Random123 / TensorFlow).
TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerCounterOne) {
  const auto out = philox4x32({1, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0xf8e4cca4u);
  EXPECT_EQ(out[1], 0x5cb200dbu);
  EXPECT_EQ(out[2], 0xb1a574ebu);
  EXPECT_EQ(out[3], 0x097eff67u);
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(CounterStream, SameSeedSameSequence) {
  CounterStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterStream, StreamsAndSeedsDiffer) {
  CounterStream a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(CounterStream, SeekReproducesDraw) {
  CounterStream a(7);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 17; ++i) draws.push_back(a.next_u64());
  CounterStream b(7);
  for (std::uint64_t p : {16u, 3u, 0u, 9u}) {
    b.seek(p);
    EXPECT_EQ(b.next_u64(), draws[p]);
    EXPECT_EQ(b.position(), p + 1);
  }
}

TEST(CounterStream, UniformInOpenInterval) {
  CounterStream s(1);
  double sum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(CounterStream, ExponentialAndNormalMoments) {
  CounterStream s(99);
  constexpr int n = 200000;
  double e = 0.0, m = 0.0, v = 0.0;
  for (int i = 0; i < n; ++i) e += s.next_exponential(0.25);
  for (int i = 0; i < n; ++i) {
    const double z = s.next_normal();
    m += z;
    v += z * z;
  }
  EXPECT_NEAR(e / n, 4.0, 0.05);
  EXPECT_NEAR(m / n, 0.0, 0.01);
  EXPECT_NEAR(v / n, 1.0, 0.015);
}

TEST(CounterStream, RejectsNonPositiveRate) {
  CounterStream s(1);
  EXPECT_THROW(s.next_exponential(0.0), std::invalid_argument);
  EXPECT_THROW(s.next_exponential(-1.0), std::invalid_argument);
}
