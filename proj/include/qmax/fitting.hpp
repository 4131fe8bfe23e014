#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmax/catalog.hpp"
#include "qmax/nelder_mead.hpp"

namespace qmax {

inline constexpr std::size_t kMinFitSamples = 30;
inline constexpr std::size_t kMinHistogramSamples = 10;

/// Density-normalized histogram: sum(densities[i] * width_i) == 1.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> densities;

  std::size_t bin_count() const { return densities.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
};

/// Freedman-Diaconis bin width by default, or a fixed number of equal bins.
struct Binning {
  enum class Rule { FreedmanDiaconis, FixedCount };
  Rule rule = Rule::FreedmanDiaconis;
  std::size_t bin_count = 0;

  static Binning freedman_diaconis() { return {}; }
  static Binning fixed(std::size_t count) { return {Rule::FixedCount, count}; }
};

/// Percentile with linear interpolation between order statistics (q in [0,1]).
double quantile_of_sorted(std::span<const double> sorted, double q);

/// Freedman-Diaconis width 2 IQR n^(-1/3). When every sample is an integer the
/// width is rounded to a whole multiple of the lattice spacing (gcd of the
/// offsets from the minimum) and edges sit halfway between lattice points, so
/// each bin holds the same number of them.
///
/// Throws InsufficientDataError below kMinHistogramSamples and DomainError on
/// non-finite samples.
Histogram make_histogram(std::span<const double> samples, const Binning& binning = {});

struct FitOptions {
  Binning binning;
  NelderMeadOptions optimizer;
};

/// A fitted candidate. A failed fit keeps `ok == false` and a diagnostic; its
/// parameters are not usable.
struct FittedDistribution {
  Family family = Family::GenExtreme;
  ParamVector params;
  double log_likelihood = 0.0;
  double start_log_likelihood = 0.0;
  double rss = 0.0;
  std::size_t sample_count = 0;
  std::size_t iterations = 0;
  bool ok = false;
  std::string diagnostic;

  /// Wraps known parameters (validated) as a successful "fit" of zero samples.
  static FittedDistribution fixed(Family family, ParamVector params);

  double cdf(double x) const;
  double pdf(double x) const;
  double quantile(double p) const;
};

/// Maximum likelihood by Nelder-Mead from a moment-based start. The simplex
/// works on unconstrained coordinates (logs of positive parameters, offsets of
/// support endpoints from the sample extremes); support violations give -inf
/// log-likelihood. Exponential and uniform use their closed-form MLE.
///
/// Throws InsufficientDataError below kMinFitSamples and DomainError for
/// non-finite samples. Degenerate data, support violations and optimizer
/// non-convergence come back as `ok == false`.
FittedDistribution fit_mle(std::span<const double> samples, Family family,
                           const FitOptions& options = {});

/// Sum over bins of (density - fitted pdf at bin center)^2.
double compute_rss(const Histogram& hist, const FittedDistribution& fitted);

struct RankingEntry {
  std::size_t rank = 0;
  Family family = Family::GenExtreme;
  double rss = 0.0;
};

struct FitFailure {
  Family family;
  std::string diagnostic;
};

/// Candidates sorted ascending by RSS. Exactly tied RSS values share a rank
/// (dense ranking); ties are listed by family name.
struct RankingTable {
  std::string label;
  std::vector<RankingEntry> entries;
  std::vector<FitFailure> failures;
  std::vector<FittedDistribution> fits;  // one per catalog family, catalog order

  const FittedDistribution* fit_for(Family family) const;
  /// Rank of `family`, or 0 when it failed or was not in the catalog.
  std::size_t rank_of(Family family) const;
};

/// Fits every family in `catalog` and ranks them. Per-family fits run
/// concurrently when the hardware allows; the result does not depend on it.
///
/// Throws EmptyRankingError when every family fails.
RankingTable rank_candidates(std::span<const double> samples,
                             std::span<const Family> catalog = comparison_catalog(),
                             const FitOptions& options = {}, std::string label = {});

/// "name (0.002835)": family name with the RSS to six decimals.
std::string format_ranking_cell(std::string_view name, double rss);

}  // namespace qmax
