#pragma once

#include <span>
#include <string>
#include <vector>

#include "qmax/fitting.hpp"

namespace qmax {

inline constexpr double kDefaultLinearityThreshold = 0.98;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// (k/(n+1), F(x_(k))) for k = 1..n over the sorted samples.
/// Throws InsufficientDataError for fewer than 2 samples.
std::vector<Point> pp_points(std::span<const double> samples, const FittedDistribution& fitted);

/// (Q(k/(n+1)), x_(k)) for k = 1..n. Propagates the fit's quantile errors.
std::vector<Point> qq_points(std::span<const double> samples, const FittedDistribution& fitted);

/// R^2 of the OLS line of y on x, clamped to [0, 1]; 1 when the fit is exact.
/// Throws InsufficientDataError below 3 points and UndefinedScoreError when
/// all abscissae coincide.
double linearity_score(std::span<const Point> points);

/// 1 - SS(y - x) / SS(y - mean y): R^2 against the identity line, may be negative.
double diagonal_score(std::span<const Point> points);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample KS statistic sup |F_n - F| and its asymptotic p-value with the
/// Stephens small-sample factor (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
/// Throws InsufficientDataError below 10 samples.
KsResult ks_test(std::span<const double> samples, const FittedDistribution& fitted);

/// Same statistic against an arbitrary continuous CDF.
template <typename Cdf>
KsResult ks_test_cdf(std::span<const double> samples, Cdf&& cdf);

inline constexpr const char* kKsCaveat =
    "KS p-value uses the asymptotic Kolmogorov distribution; parameters "
    "estimated from the same data bias it upward";

struct GofReport {
  Family family = Family::GenExtreme;
  std::vector<Point> pp;
  std::vector<Point> qq;
  double pp_r2 = 0.0;
  double pp_diagonal_r2 = 0.0;
  double qq_r2 = 0.0;
  double ks_statistic = 0.0;
  double ks_p_value = 1.0;
  bool linear = false;  // both R^2 at or above the threshold
  std::string caveat = kKsCaveat;
};

GofReport make_gof_report(std::span<const double> samples, const FittedDistribution& fitted,
                          double threshold = kDefaultLinearityThreshold);

namespace detail {
KsResult ks_from_sorted_cdf(std::span<const double> cdf_at_sorted);
std::vector<double> sorted_copy(std::span<const double> samples);
}  // namespace detail

template <typename Cdf>
KsResult ks_test_cdf(std::span<const double> samples, Cdf&& cdf) {
  auto sorted = detail::sorted_copy(samples);
  for (double& v : sorted) v = cdf(v);
  return detail::ks_from_sorted_cdf(sorted);
}

}  // namespace qmax
