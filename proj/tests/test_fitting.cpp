#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qmax/errors.hpp"
#include "qmax/fitting.hpp"
#include "sampling.hpp"

using namespace qmax;
using qmax::testing::gev_samples;
using qmax::testing::normal_samples;
using qmax::testing::uniform_samples;

namespace {

double mass(const Histogram& h) {
  double m = 0;
  for (std::size_t i = 0; i < h.bin_count(); ++i) m += h.densities[i] * h.width(i);
  return m;
}

// Independent type-7 percentile: (n - 1) q interpolation on a sorted copy.
double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

}  // namespace

TEST(Histogram, ConstantSamplesSingleBin) {
  const std::vector<double> v(1000, 3.25);
  const auto h = make_histogram(v);
  ASSERT_EQ(h.bin_count(), 1u);
  EXPECT_NEAR(h.densities[0] * h.width(0), 1.0, 1e-12);
}

TEST(Histogram, UniformTenBinsFlat) {
  const auto v = uniform_samples(2, 100000);
  const auto h = make_histogram(v, Binning::fixed(10));
  ASSERT_EQ(h.bin_count(), 10u);
  for (double d : h.densities) EXPECT_NEAR(d, 1.0, 0.05);
  EXPECT_NEAR(mass(h), 1.0, 1e-9);
}

TEST(Histogram, FreedmanDiaconisWidth) {
  const auto v = normal_samples(2024, 10000);
  const double iqr = percentile(v, 0.75) - percentile(v, 0.25);
  const double fd = 2 * iqr * std::cbrt(1.0 / 10000.0);
  // 2 * 1.349 * 10000^(-1/3) for a standard normal.
  EXPECT_NEAR(fd, 0.1252, 0.003);
  const auto h = make_histogram(v);
  // Equal bins spanning the range: the width is fd shrunk to a whole bin count.
  const double span = h.edges.back() - h.edges.front();
  EXPECT_EQ(h.bin_count(), static_cast<std::size_t>(std::ceil(span / fd)));
  EXPECT_LE(h.width(0), fd + 1e-12);
  EXPECT_GT(h.width(0), fd * (1 - 1.0 / h.bin_count()) - 1e-12);
  EXPECT_NEAR(mass(h), 1.0, 1e-9);
}

TEST(Histogram, IntegerLatticeBins) {
  // Even integers only: spacing 2, edges halfway between lattice points.
  std::vector<double> v;
  for (int rep = 0; rep < 50; ++rep)
    for (int k = 0; k <= 20; k += 2) v.push_back(k + (rep % 3 == 0 && k < 10 ? 2 : 0));
  const auto h = make_histogram(v);
  EXPECT_DOUBLE_EQ(h.edges.front(), -1.0);
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    const double w = h.width(i);
    EXPECT_NEAR(std::fmod(w, 2.0), 0.0, 1e-12);
  }
  EXPECT_NEAR(mass(h), 1.0, 1e-9);
}

TEST(Histogram, Preconditions) {
  EXPECT_THROW(make_histogram(std::vector<double>(9, 1.0)), InsufficientDataError);
  std::vector<double> v(20, 1.0);
  v[3] = std::nan("");
  EXPECT_THROW(make_histogram(v), DomainError);
}

TEST(Histogram, MassIsOneAcrossInputs) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto v = gev_samples(seed, 500 + 100 * seed, {0, 1, 0.3});
    EXPECT_NEAR(mass(make_histogram(v)), 1.0, 1e-9);
    EXPECT_NEAR(mass(make_histogram(v, Binning::fixed(7))), 1.0, 1e-9);
  }
}

TEST(Rss, ZeroForExactMatchAndOneTermSum) {
  const auto fit = FittedDistribution::fixed(Family::Uniform, {0.0, 2.0});
  Histogram h{{0.0, 1.0, 2.0}, {0.5, 0.5}};
  EXPECT_EQ(compute_rss(h, fit), 0.0);
  Histogram one{{0.0, 2.0}, {0.8}};
  EXPECT_NEAR(compute_rss(one, fit), (0.8 - 0.5) * (0.8 - 0.5), 1e-15);
}

TEST(Rss, CorrectFitBeatsUniform) {
  const auto v = gev_samples(3, 20000, {5, 2, 0});
  const auto h = make_histogram(v);
  const auto good = fit_mle(v, Family::GumbelR);
  const auto bad = fit_mle(v, Family::Uniform);
  ASSERT_TRUE(good.ok && bad.ok);
  EXPECT_LT(compute_rss(h, good), compute_rss(h, bad));
  EXPECT_GE(compute_rss(h, good), 0.0);
}

TEST(FitMle, RecoversGumbel) {
  const auto v = gev_samples(101, 50000, {5, 2, 0});
  const auto fit = fit_mle(v, Family::GumbelR);
  ASSERT_TRUE(fit.ok) << fit.diagnostic;
  EXPECT_GE(fit.params[0], 4.95);
  EXPECT_LE(fit.params[0], 5.05);
  EXPECT_GE(fit.params[1], 1.95);
  EXPECT_LE(fit.params[1], 2.05);
  EXPECT_EQ(fit.sample_count, 50000u);
  EXPECT_GT(fit.rss, 0.0);
}

TEST(FitMle, RecoversGevShape) {
  const auto v = gev_samples(102, 50000, {0, 1, 0.2});
  const auto fit = fit_mle(v, Family::GenExtreme);
  ASSERT_TRUE(fit.ok) << fit.diagnostic;
  EXPECT_GE(fit.params[2], 0.17);
  EXPECT_LE(fit.params[2], 0.23);
}

TEST(FitMle, ConstantSamplesFail) {
  const std::vector<double> v(200, 2.0);
  for (Family f : comparison_catalog()) {
    const auto fit = fit_mle(v, f);
    EXPECT_FALSE(fit.ok) << family_name(f);
    EXPECT_FALSE(fit.diagnostic.empty());
  }
}

TEST(FitMle, Preconditions) {
  EXPECT_THROW(fit_mle(std::vector<double>(29, 1.0), Family::Norm), InsufficientDataError);
  auto v = normal_samples(1, 100);
  v[10] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(fit_mle(v, Family::Norm), DomainError);
}

TEST(FitMle, ClosedFormExponentialAndUniform) {
  const auto v = uniform_samples(6, 1000, 2.0, 5.0);
  const auto u = fit_mle(v, Family::Uniform);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  EXPECT_EQ(u.params[0], *lo);
  EXPECT_NEAR(u.params[1], *hi - *lo, 1e-12);
  const auto e = fit_mle(v, Family::Expon);
  double mean = 0;
  for (double x : v) mean += x;
  mean /= v.size();
  EXPECT_EQ(e.params[0], *lo);
  EXPECT_NEAR(e.params[1], mean - *lo, 1e-12);
}

TEST(FitMleProperty, NeverWorseThanStart) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto v = gev_samples(seed + 40, 2000, {1, 2, 0.1});
    for (Family f : comparison_catalog()) {
      const auto fit = fit_mle(v, f);
      if (!fit.ok) continue;
      EXPECT_GE(fit.log_likelihood, fit.start_log_likelihood) << family_name(f);
      EXPECT_NO_THROW(validate_params(f, fit.params));
      EXPECT_NEAR(fit.log_likelihood, log_likelihood(f, fit.params, v), 1e-6 * std::abs(fit.log_likelihood));
    }
  }
}

TEST(FitMleProperty, GevScaleEquivariance) {
  const auto v = gev_samples(55, 50000, {0.5, 1.5, 0.15});
  const double a = 2.5, b = -3.0;
  std::vector<double> w(v.size());
  std::transform(v.begin(), v.end(), w.begin(), [&](double x) { return a * x + b; });
  const auto f1 = fit_mle(v, Family::GenExtreme);
  const auto f2 = fit_mle(w, Family::GenExtreme);
  ASSERT_TRUE(f1.ok && f2.ok);
  EXPECT_NEAR(f2.params[0], a * f1.params[0] + b, 1e-3);
  EXPECT_NEAR(f2.params[1], a * f1.params[1], 1e-3);
  EXPECT_NEAR(f2.params[2], f1.params[2], 1e-3);
}

TEST(Ranking, PermutationSortedAndGevFirst) {
  const auto v = gev_samples(9, 5000, {0, 1, 0.2});
  const auto t = rank_candidates(v, comparison_catalog(), {}, "x");
  EXPECT_EQ(t.label, "x");
  EXPECT_EQ(t.entries.size() + t.failures.size(), comparison_catalog().size());
  std::set<Family> seen;
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    seen.insert(t.entries[i].family);
    if (i > 0) {
      EXPECT_LE(t.entries[i - 1].rss, t.entries[i].rss);
      EXPECT_GE(t.entries[i].rank, t.entries[i - 1].rank);
    }
    EXPECT_EQ(t.entries[i].rss, t.fit_for(t.entries[i].family)->rss);
  }
  EXPECT_EQ(seen.size(), t.entries.size());
  EXPECT_EQ(t.entries.front().family, Family::GenExtreme);
  EXPECT_EQ(t.rank_of(Family::GenExtreme), 1u);
  EXPECT_EQ(t.rank_of(Family::GumbelR), 0u);
}

TEST(Ranking, TiesShareRankAndSortByName) {
  // Uniform and beta-shaped data fitted with two identical families: the
  // catalog duplicates give identical RSS.
  const auto v = uniform_samples(3, 500);
  const Family cat[] = {Family::Uniform, Family::Expon, Family::Uniform};
  const auto t = rank_candidates(v, cat);
  ASSERT_EQ(t.entries.size(), 3u);
  EXPECT_EQ(t.entries[0].rank, 1u);
  EXPECT_EQ(t.entries[1].rank, 1u);
  EXPECT_EQ(t.entries[2].rank, 2u);
  EXPECT_EQ(t.entries[2].family, Family::Expon);
}

TEST(Ranking, AllFailuresIsAnError) {
  const std::vector<double> v(100, 1.0);
  EXPECT_THROW(rank_candidates(v), EmptyRankingError);
}

TEST(Ranking, CellFormat) {
  EXPECT_EQ(format_ranking_cell("genextreme", 0.002835), "genextreme (0.002835)");
  EXPECT_EQ(format_ranking_cell("norm", 0.0028354), "norm (0.002835)");
}
