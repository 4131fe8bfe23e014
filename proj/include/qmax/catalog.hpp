#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmax {

/// Candidate families. Names and parameter order follow the scipy.stats
/// convention (shape parameters first, then loc, scale) so ranking tables read
/// the same way as the usual Python tooling.
enum class Family {
  GenExtreme,     // (mu, sigma, xi)   xi > 0 Frechet, xi < 0 reversed Weibull
  GumbelR,        // (loc, scale)
  Norm,           // (loc, scale)
  LogNorm,        // (s, loc, scale)   x > loc
  Logistic,       // (loc, scale)
  LogGamma,       // (c, loc, scale)   log of a gamma variate
  Gamma,          // (a, loc, scale)   x > loc
  Beta,           // (a, b, loc, scale) loc < x < loc + scale
  Expon,          // (loc, scale)      x >= loc
  Pareto,         // (b, loc, scale)   x >= loc + scale
  StudentT,       // (df, loc, scale)
  DWeibull,       // (c, loc, scale)   double Weibull
  Uniform,        // (loc, scale)      loc <= x <= loc + scale
};

using ParamVector = std::vector<double>;

struct FamilyInfo {
  Family family;
  std::string_view name;
  std::size_t arity;
  std::string_view param_names;  // comma separated, in parameter order
};

const FamilyInfo& family_info(Family family);
std::string_view family_name(Family family);
/// family_info(family).param_names split at the commas.
std::vector<std::string> param_names(Family family);
std::optional<Family> family_from_name(std::string_view name);

/// Every family known to the library.
std::span<const Family> all_families();

/// The default comparison set used for ranking: the GEV family plus the
/// eleven everyday families (normal, lognormal, logistic, log-gamma, gamma,
/// beta, exponential, Pareto, Student t, double Weibull, uniform).
std::span<const Family> comparison_catalog();

/// Throws DomainError if the parameter vector has the wrong arity, contains
/// non-finite values, or violates the family's domain.
void validate_params(Family family, std::span<const double> params);

/// Support [lower, upper] for valid parameters.
std::pair<double, double> catalog_support(Family family, std::span<const double> params);

double catalog_cdf(double x, Family family, std::span<const double> params);
double catalog_pdf(double x, Family family, std::span<const double> params);
double catalog_log_pdf(double x, Family family, std::span<const double> params);
double catalog_quantile(double p, Family family, std::span<const double> params);

/// Sum of log densities; validates once. Returns -infinity when any sample
/// falls outside the support.
double log_likelihood(Family family, std::span<const double> params,
                      std::span<const double> samples);

}  // namespace qmax
