#include "qmax/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmax/errors.hpp"

namespace qmax {

namespace detail {

std::vector<double> sorted_copy(std::span<const double> samples) {
  if (samples.size() < 10) {
    throw InsufficientDataError("KS test needs at least 10 samples, got " +
                                std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DomainError("KS test: non-finite sample");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

KsResult ks_from_sorted_cdf(std::span<const double> cdf_at_sorted) {
  const auto n = static_cast<double>(cdf_at_sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf_at_sorted.size(); ++i) {
    const double f = cdf_at_sorted[i];
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  d = std::clamp(d, 0.0, 1.0);
  const double rn = std::sqrt(n);
  return {d, kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)};
}

}  // namespace detail

namespace {

std::vector<double> sorted_samples(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw InsufficientDataError("probability plot needs at least 2 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

double plotting_position(std::size_t k, std::size_t n) {
  return static_cast<double>(k) / static_cast<double>(n + 1);
}

}  // namespace

std::vector<Point> pp_points(std::span<const double> samples, const FittedDistribution& fitted) {
  const auto sorted = sorted_samples(samples);
  std::vector<Point> out;
  out.reserve(sorted.size());
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    out.push_back({plotting_position(k, sorted.size()), fitted.cdf(sorted[k - 1])});
  }
  return out;
}

std::vector<Point> qq_points(std::span<const double> samples, const FittedDistribution& fitted) {
  const auto sorted = sorted_samples(samples);
  std::vector<Point> out;
  out.reserve(sorted.size());
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    out.push_back({fitted.quantile(plotting_position(k, sorted.size())), sorted[k - 1]});
  }
  return out;
}

double linearity_score(std::span<const Point> points) {
  if (points.size() < 3) throw InsufficientDataError("linearity score needs at least 3 points");
  const auto n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw UndefinedScoreError("linearity score undefined: non-finite coordinate");
    }
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (!(sxx > 0.0) || !std::isfinite(sxx)) {
    throw UndefinedScoreError("linearity score undefined: all abscissae are equal");
  }
  if (syy == 0.0) return 1.0;  // horizontal line, fitted exactly
  return std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
}

double diagonal_score(std::span<const Point> points) {
  if (points.empty()) throw InsufficientDataError("diagonal score needs points");
  double my = 0.0;
  for (const auto& p : points) my += p.y;
  my /= static_cast<double>(points.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& p : points) {
    ss_res += (p.y - p.x) * (p.y - p.x);
    ss_tot += (p.y - my) * (p.y - my);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form converges fast for small lambda.
    constexpr double kPi = 3.14159265358979323846;
    const double t = kPi * kPi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 7; k += 2) sum += std::exp(-static_cast<double>(k * k) * t);
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const FittedDistribution& fitted) {
  return ks_test_cdf(samples, [&](double x) { return fitted.cdf(x); });
}

GofReport make_gof_report(std::span<const double> samples, const FittedDistribution& fitted,
                          double threshold) {
  GofReport report;
  report.family = fitted.family;
  report.pp = pp_points(samples, fitted);
  report.qq = qq_points(samples, fitted);
  report.pp_r2 = linearity_score(report.pp);
  report.pp_diagonal_r2 = diagonal_score(report.pp);
  report.qq_r2 = linearity_score(report.qq);
  const auto ks = ks_test(samples, fitted);
  report.ks_statistic = ks.statistic;
  report.ks_p_value = ks.p_value;
  report.linear = report.pp_r2 >= threshold && report.qq_r2 >= threshold;
  return report;
}

}  // namespace qmax
