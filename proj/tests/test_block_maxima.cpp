#include <gtest/gtest.h>

#include <algorithm>

#include "qmax/block_maxima.hpp"
#include "qmax/errors.hpp"
#include "qmax/fitting.hpp"
#include "sampling.hpp"

using namespace qmax;

TEST(BlockMaxima, SmallExample) {
  const std::vector<double> v{1, 3, 2, 5, 4, 6};
  EXPECT_EQ(extract_block_maxima(v, 3).maxima, (std::vector<double>{3, 6}));
  EXPECT_EQ(extract_block_minima(v, 3).maxima, (std::vector<double>{1, 4}));
  EXPECT_EQ(extract_block_maxima(v, 1).maxima, v);
  EXPECT_EQ(extract_block_maxima(v, 4).maxima, (std::vector<double>{5}));
}

TEST(BlockMaxima, CarriesLabelAndBlockSize) {
  const auto s = make_uniform_series("east", parse_timestamp("2024-01-01T00:00:00"), std::chrono::seconds{120},
                                     {1, 2, 3, 4});
  const auto b = extract_block_maxima(s, 2);
  EXPECT_EQ(b.source_label, "east");
  EXPECT_EQ(b.block_size, 2u);
}

TEST(BlockMaxima, Errors) {
  const std::vector<double> v{1, 2};
  EXPECT_THROW(extract_block_maxima(v, 3), InsufficientDataError);
  EXPECT_THROW(extract_block_maxima(v, 0), DomainError);
}

TEST(BlockMaxima, ConstantSeries) {
  const std::vector<double> v(20, 4.0);
  for (double m : extract_block_minima(v, 6).maxima) EXPECT_EQ(m, 4.0);
}

TEST(BlockMaximaProperty, DualityDiscardAndDominance) {
  const auto v = qmax::testing::normal_samples(21, 1003);
  std::vector<double> neg(v.size());
  std::transform(v.begin(), v.end(), neg.begin(), [](double x) { return -x; });
  for (std::size_t b : {1u, 2u, 7u, 10u, 100u, 1003u}) {
    const auto mx = extract_block_maxima(v, b);
    const auto mn = extract_block_minima(v, b);
    const auto neg_mx = extract_block_maxima(neg, b);
    ASSERT_EQ(mx.maxima.size(), v.size() / b);
    for (std::size_t i = 0; i < mx.maxima.size(); ++i) {
      EXPECT_EQ(mn.maxima[i], -neg_mx.maxima[i]);
      EXPECT_GE(mx.maxima[i], mn.maxima[i]);
      for (std::size_t j = i * b; j < (i + 1) * b; ++j) EXPECT_GE(mx.maxima[i], v[j]);
    }
  }
}

TEST(BlockMaximaProperty, Concatenation) {
  const auto v = qmax::testing::uniform_samples(4, 997);
  for (auto [a, b] : {std::pair<std::size_t, std::size_t>{2, 3}, {5, 4}, {1, 9}, {10, 10}}) {
    const auto direct = extract_block_maxima(v, a * b);
    const auto nested = extract_block_maxima(extract_block_maxima(v, a).maxima, b);
    EXPECT_EQ(direct.maxima, nested.maxima) << a << "x" << b;
  }
}

TEST(BlockMaxima, UniformMaximaHaveBoundedTail) {
  const auto v = qmax::testing::uniform_samples(12, 10000);
  const auto m = extract_block_maxima(v, 100);
  const auto fit = fit_mle(m.maxima, Family::GenExtreme);
  ASSERT_TRUE(fit.ok) << fit.diagnostic;
  EXPECT_LT(fit.params[2], 0.0);
}
