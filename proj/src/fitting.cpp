#include "qmax/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "qmax/errors.hpp"

namespace qmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr std::size_t kMaxBins = 100000;

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // population (MLE) standard deviation
  double min = 0.0;
  double max = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double median = 0.0;
  double mean_abs_dev = 0.0;  // around the median
};

SampleStats describe(std::span<const double> x) {
  SampleStats s;
  s.n = x.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.sd = std::sqrt(m2);
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.min = *lo;
  s.max = *hi;
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile_of_sorted(sorted, 0.5);
  double mad = 0.0;
  for (double v : x) mad += std::abs(v - s.median);
  s.mean_abs_dev = mad / n;
  return s;
}

// How the simplex coordinates map onto family parameters for one sample.
struct Parametrization {
  std::vector<double> start;
  std::vector<double> step;
  std::function<ParamVector(std::span<const double>)> to_params;
};

double mean_of(std::span<const double> x, const std::function<double(double)>& f) {
  double total = 0.0;
  for (double v : x) total += f(v);
  return total / static_cast<double>(x.size());
}

Parametrization parametrize(Family family, std::span<const double> x, const SampleStats& s) {
  const double sd = s.sd;
  switch (family) {
    case Family::GenExtreme: {
      const double sigma0 = sd * std::sqrt(6.0) / std::numbers::pi;
      const double mu0 = s.mean - kEulerGamma * sigma0;
      double xi0 = 0.1;
      // Fall back to the Gumbel start when xi = 0.1 leaves samples outside the support.
      if (1.0 + xi0 * (s.min - mu0) / sigma0 <= 0.0) xi0 = 0.0;
      return {{mu0, std::log(sigma0), xi0},
              {0.2 * sigma0, 0.2, 0.1},
              [](std::span<const double> t) { return ParamVector{t[0], std::exp(t[1]), t[2]}; }};
    }
    case Family::GumbelR: {
      const double sigma0 = sd * std::sqrt(6.0) / std::numbers::pi;
      return {{s.mean - kEulerGamma * sigma0, std::log(sigma0)},
              {0.2 * sigma0, 0.2},
              [](std::span<const double> t) { return ParamVector{t[0], std::exp(t[1])}; }};
    }
    case Family::Norm:
      return {{s.mean, std::log(sd)},
              {0.2 * sd, 0.2},
              [](std::span<const double> t) { return ParamVector{t[0], std::exp(t[1])}; }};
    case Family::Logistic: {
      const double scale0 = sd * std::sqrt(3.0) / std::numbers::pi;
      return {{s.mean, std::log(scale0)},
              {0.2 * sd, 0.2},
              [](std::span<const double> t) { return ParamVector{t[0], std::exp(t[1])}; }};
    }
    case Family::LogNorm: {
      // Threshold from the skewness (w = exp(s^2) solves skew = (w + 2) sqrt(w - 1)),
      // then s and scale are profiled out: the MLE given the threshold is the
      // mean / sd of log(x - loc).
      double gap0 = 3.0 * sd;
      if (s.skewness > 0.01) {
        const double g = s.skewness;
        const double r = std::cbrt(0.5 * (g * g + 2.0 + g * std::sqrt(g * g + 4.0)));
        const double w = r + 1.0 / r - 1.0;
        const double scale = sd / std::sqrt(w * (w - 1.0));
        const double loc = s.mean - scale * std::sqrt(w);
        if (loc < s.min) gap0 = s.min - loc;
      }
      const double xmin = s.min;
      return {{std::log(gap0)},
              {0.5},
              [x, xmin](std::span<const double> t) {
                const double loc = xmin - std::exp(t[0]);
                const double m = mean_of(x, [loc](double v) { return std::log(v - loc); });
                const double v2 = mean_of(x, [loc, m](double v) {
                  const double d = std::log(v - loc) - m;
                  return d * d;
                });
                return ParamVector{std::sqrt(v2), loc, std::exp(m)};
              }};
    }
    case Family::Gamma: {
      const double g = std::max(s.skewness, 0.1);
      const double a0 = 4.0 / (g * g);
      const double scale0 = sd * g / 2.0;
      double loc0 = s.mean - a0 * scale0;
      if (loc0 >= s.min) loc0 = s.min - 0.1 * sd;
      const double xmin = s.min;
      const double mean = s.mean;
      // Scale is profiled out: given (a, loc) the MLE is mean(x - loc) / a.
      return {{std::log(a0), std::log(s.min - loc0)},
              {0.3, 0.3},
              [xmin, mean](std::span<const double> t) {
                const double a = std::exp(t[0]);
                const double loc = xmin - std::exp(t[1]);
                return ParamVector{a, loc, (mean - loc) / a};
              }};
    }
    case Family::LogGamma: {
      // Moment match on the skewness psi''(c) / psi'(c)^1.5, which is negative
      // and increases towards 0 as c grows.
      double c0 = 100.0;
      if (s.skewness < -0.05) {
        auto skew_of = [](double c) {
          return boost::math::polygamma(2, c) / std::pow(boost::math::trigamma(c), 1.5);
        };
        double lo = 1e-3, hi = 1e6;
        if (skew_of(lo) < s.skewness) {
          for (int i = 0; i < 200; ++i) {
            const double mid = std::sqrt(lo * hi);
            if (skew_of(mid) < s.skewness) lo = mid; else hi = mid;
          }
          c0 = std::sqrt(lo * hi);
        } else {
          c0 = lo;
        }
      }
      // Coordinates (log c, mean, log sd): the normal limit c -> infinity is
      // then a flat direction instead of a curved valley in (loc, scale).
      return {{std::log(c0), s.mean, std::log(sd)},
              {0.3, 0.2 * sd, 0.2},
              [](std::span<const double> t) {
                const double c = t[0] > std::log(1e7) ? kInf : std::exp(t[0]);
                if (!std::isfinite(c)) return ParamVector{c, t[1], std::exp(t[2])};
                const double scale = std::exp(t[2]) / std::sqrt(boost::math::trigamma(c));
                return ParamVector{c, t[1] - scale * boost::math::digamma(c), scale};
              }};
    }
    case Family::Beta: {
      // Support endpoints as positive offsets outside the sample range; shapes
      // from the moments of the sample rescaled to that support.
      const double pad = (s.max - s.min) / static_cast<double>(s.n);
      const double loc0 = s.min - pad;
      const double width = s.max - s.min + 2.0 * pad;
      const double m = (s.mean - loc0) / width;
      const double v = (sd / width) * (sd / width);
      double common = m * (1.0 - m) / v - 1.0;
      if (!(common > 0.0)) common = 2.0;
      const double xmin = s.min, xmax = s.max;
      return {{std::log(m * common), std::log((1.0 - m) * common), std::log(pad), std::log(pad)},
              {0.3, 0.3, 1.0, 1.0},
              [xmin, xmax](std::span<const double> t) {
                const double loc = xmin - std::exp(t[2]);
                const double upper = xmax + std::exp(t[3]);
                return ParamVector{std::exp(t[0]), std::exp(t[1]), loc, upper - loc};
              }};
    }
    case Family::Pareto: {
      // Lower support endpoint pinned to the sample minimum (scale = min - loc);
      // the shape is profiled out as b = 1 / mean(log((x - loc) / scale)).
      const double xmin = s.min;
      return {{std::log(sd)},
              {0.5},
              [x, xmin](std::span<const double> t) {
                const double loc = xmin - std::exp(t[0]);
                const double scale = xmin - loc;
                const double mlog = mean_of(x, [loc, scale](double v) {
                  return std::log((v - loc) / scale);
                });
                const double b = mlog > 0.0 ? 1.0 / mlog : kInf;
                return ParamVector{b, loc, scale};
              }};
    }
    case Family::StudentT: {
      const double df0 = s.excess_kurtosis > 0.05 ? 4.0 + 6.0 / s.excess_kurtosis : 30.0;
      const double scale0 = sd * std::sqrt((df0 - 2.0) / df0);
      return {{std::log(df0), s.median, std::log(scale0)},
              {0.3, 0.2 * sd, 0.2},
              [](std::span<const double> t) {
                // Beyond 1e7 degrees of freedom the family is numerically normal.
                const double df = t[0] > std::log(1e7) ? kInf : std::exp(t[0]);
                return ParamVector{df, t[1], std::exp(t[2])};
              }};
    }
    case Family::DWeibull:
      return {{0.0, s.median, std::log(s.mean_abs_dev > 0.0 ? s.mean_abs_dev : sd)},
              {0.2, 0.2 * sd, 0.2},
              [](std::span<const double> t) {
                return ParamVector{std::exp(t[0]), t[1], std::exp(t[2])};
              }};
    case Family::Expon:
    case Family::Uniform:
      break;
  }
  throw DomainError("no iterative parametrization for " + std::string(family_name(family)));
}

FittedDistribution failure(Family family, std::size_t n, std::string why) {
  FittedDistribution f;
  f.family = family;
  f.sample_count = n;
  f.ok = false;
  f.diagnostic = std::move(why);
  f.log_likelihood = -kInf;
  f.start_log_likelihood = -kInf;
  f.rss = kInf;
  return f;
}

double safe_log_likelihood(Family family, std::span<const double> params,
                           std::span<const double> x) {
  try {
    const double ll = log_likelihood(family, params, x);
    return std::isnan(ll) ? -kInf : ll;
  } catch (const DomainError&) {
    return -kInf;
  }
}

FittedDistribution closed_form(Family family, std::span<const double> x, const SampleStats& s) {
  FittedDistribution f;
  f.family = family;
  f.sample_count = x.size();
  if (family == Family::Expon) {
    f.params = {s.min, s.mean - s.min};
  } else {
    f.params = {s.min, s.max - s.min};
  }
  f.log_likelihood = safe_log_likelihood(family, f.params, x);
  f.start_log_likelihood = f.log_likelihood;
  f.ok = std::isfinite(f.log_likelihood);
  if (!f.ok) f.diagnostic = "closed-form estimate has non-finite log-likelihood";
  return f;
}

}  // namespace

double quantile_of_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InsufficientDataError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Histogram make_histogram(std::span<const double> samples, const Binning& binning) {
  if (samples.size() < kMinHistogramSamples) {
    throw InsufficientDataError("histogram needs at least " + std::to_string(kMinHistogramSamples) +
                                " samples, got " + std::to_string(samples.size()));
  }
  bool integral = true;
  for (double v : samples) {
    if (!std::isfinite(v)) throw DomainError("histogram samples must be finite");
    if (v != std::nearbyint(v) || std::abs(v) > 0x1.0p52) integral = false;
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double n = static_cast<double>(sorted.size());

  Histogram h;
  std::vector<double> counts;
  if (hi == lo) {
    h.edges = {lo - 0.5, lo + 0.5};
    counts = {n};
  } else if (binning.rule == Binning::Rule::FixedCount) {
    if (binning.bin_count == 0) throw DomainError("fixed binning needs a positive bin count");
    const std::size_t bins = binning.bin_count;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
      h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    h.edges.back() = hi;
    counts.assign(bins, 0.0);
    for (double v : sorted) {
      auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      counts[std::min(idx, bins - 1)] += 1.0;
    }
  } else {
    const double iqr = quantile_of_sorted(sorted, 0.75) - quantile_of_sorted(sorted, 0.25);
    const double width = 2.0 * iqr * std::cbrt(1.0 / n);
    if (integral) {
      // Lattice spacing: gcd of the integer offsets from the minimum.
      std::int64_t lattice = 0;
      for (double v : sorted) lattice = std::gcd(lattice, static_cast<std::int64_t>(v - lo));
      const auto g = static_cast<double>(std::max<std::int64_t>(lattice, 1));
      const double step = std::max(1.0, std::round(width / g)) * g;
      const double start = lo - 0.5 * g;
      const auto bins = std::min<std::size_t>(
          kMaxBins, static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1);
      h.edges.resize(bins + 1);
      for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = start + step * static_cast<double>(i);
      counts.assign(bins, 0.0);
      for (double v : sorted) {
        auto idx = static_cast<std::size_t>(std::floor((v - start) / step));
        counts[std::min(idx, bins - 1)] += 1.0;
      }
    } else {
      std::size_t bins;
      if (width > 0.0) {
        bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
      } else {
        bins = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;  // Sturges
      }
      bins = std::clamp<std::size_t>(bins, 1, kMaxBins);
      return make_histogram(samples, Binning::fixed(bins));
    }
  }
  h.densities.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    h.densities[i] = counts[i] / (n * (h.edges[i + 1] - h.edges[i]));
  }
  return h;
}

FittedDistribution FittedDistribution::fixed(Family family, ParamVector params) {
  validate_params(family, params);
  FittedDistribution f;
  f.family = family;
  f.params = std::move(params);
  f.ok = true;
  return f;
}

double FittedDistribution::cdf(double x) const {
  if (!ok) throw DomainError("CDF of failed fit (" + diagnostic + ")");
  return catalog_cdf(x, family, params);
}

double FittedDistribution::pdf(double x) const {
  if (!ok) throw DomainError("density of failed fit (" + diagnostic + ")");
  return catalog_pdf(x, family, params);
}

double FittedDistribution::quantile(double p) const {
  if (!ok) throw DomainError("quantile of failed fit (" + diagnostic + ")");
  return catalog_quantile(p, family, params);
}

FittedDistribution fit_mle(std::span<const double> samples, Family family,
                           const FitOptions& options) {
  if (samples.size() < kMinFitSamples) {
    throw InsufficientDataError("fitting needs at least " + std::to_string(kMinFitSamples) +
                                " samples, got " + std::to_string(samples.size()));
  }
  for (double v : samples) {
    if (!std::isfinite(v)) throw DomainError("fit samples must be finite");
  }
  const std::size_t n = samples.size();
  const SampleStats stats = describe(samples);
  if (!(stats.max > stats.min)) {
    return failure(family, n, "degenerate sample: all values equal");
  }

  FittedDistribution fit;
  if (family == Family::Expon || family == Family::Uniform) {
    fit = closed_form(family, samples, stats);
  } else {
    const Parametrization param = parametrize(family, samples, stats);
    const double inv_n = 1.0 / static_cast<double>(n);
    auto objective = [&](std::span<const double> theta) {
      return -safe_log_likelihood(family, param.to_params(theta), samples) * inv_n;
    };
    NelderMeadOptions nm = options.optimizer;
    nm.initial_step = param.step;
    const double start_ll = safe_log_likelihood(family, param.to_params(param.start), samples);
    if (!std::isfinite(start_ll)) {
      return failure(family, n, "moment-based start lies outside the family's support");
    }
    const NelderMeadResult result = nelder_mead(objective, param.start, nm);
    fit.family = family;
    fit.sample_count = n;
    fit.iterations = result.iterations;
    fit.start_log_likelihood = start_ll;
    if (!result.converged) {
      auto f = failure(family, n,
                       "optimizer did not converge within " + std::to_string(nm.max_iterations) +
                           " iterations");
      f.iterations = result.iterations;
      f.start_log_likelihood = start_ll;
      return f;
    }
    fit.params = param.to_params(result.x);
    fit.log_likelihood = safe_log_likelihood(family, fit.params, samples);
    fit.ok = std::isfinite(fit.log_likelihood);
    if (!fit.ok) fit.diagnostic = "optimum has non-finite log-likelihood";
  }
  if (!fit.ok) {
    auto f = failure(family, n, fit.diagnostic);
    f.iterations = fit.iterations;
    return f;
  }
  try {
    validate_params(family, fit.params);
  } catch (const DomainError& e) {
    return failure(family, n, std::string("optimum outside parameter domain: ") + e.what());
  }
  fit.rss = compute_rss(make_histogram(samples, options.binning), fit);
  return fit;
}

double compute_rss(const Histogram& hist, const FittedDistribution& fitted) {
  double total = 0.0;
  for (std::size_t i = 0; i < hist.bin_count(); ++i) {
    const double d = hist.densities[i] - fitted.pdf(hist.center(i));
    total += d * d;
  }
  return total;
}

const FittedDistribution* RankingTable::fit_for(Family family) const {
  for (const auto& f : fits) {
    if (f.family == family) return &f;
  }
  return nullptr;
}

std::size_t RankingTable::rank_of(Family family) const {
  for (const auto& e : entries) {
    if (e.family == family) return e.rank;
  }
  return 0;
}

RankingTable rank_candidates(std::span<const double> samples, std::span<const Family> catalog,
                             const FitOptions& options, std::string label) {
  RankingTable table;
  table.label = std::move(label);
  table.fits.resize(catalog.size());

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers > 1 && catalog.size() > 1) {
    std::vector<std::future<FittedDistribution>> pending;
    pending.reserve(catalog.size());
    for (Family family : catalog) {
      pending.push_back(std::async(std::launch::async, [samples, family, &options] {
        return fit_mle(samples, family, options);
      }));
    }
    for (std::size_t i = 0; i < catalog.size(); ++i) table.fits[i] = pending[i].get();
  } else {
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      table.fits[i] = fit_mle(samples, catalog[i], options);
    }
  }

  std::vector<const FittedDistribution*> ok;
  for (const auto& f : table.fits) {
    if (f.ok && std::isfinite(f.rss)) {
      ok.push_back(&f);
    } else {
      table.failures.push_back({f.family, f.ok ? "non-finite RSS" : f.diagnostic});
    }
  }
  if (ok.empty()) {
    throw EmptyRankingError("every candidate family failed to fit" +
                            (table.label.empty() ? std::string{} : " for '" + table.label + "'"));
  }
  std::sort(ok.begin(), ok.end(), [](const FittedDistribution* a, const FittedDistribution* b) {
    if (a->rss != b->rss) return a->rss < b->rss;
    return family_name(a->family) < family_name(b->family);
  });
  std::size_t rank = 0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (const auto* f : ok) {
    if (!(f->rss == previous)) ++rank;
    previous = f->rss;
    table.entries.push_back({rank, f->family, f->rss});
  }
  return table;
}

std::string format_ranking_cell(std::string_view name, double rss) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.6f)", rss);
  return std::string(name) + buf;
}

}  // namespace qmax
