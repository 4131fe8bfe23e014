#include "qmax/catalog.hpp"

#include <algorithm>
#include <array>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qmax/distributions.hpp"
#include "qmax/errors.hpp"

namespace qmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

constexpr std::array<FamilyInfo, 13> kFamilies{{
    {Family::GenExtreme, "genextreme", 3, "mu,sigma,xi"},
    {Family::GumbelR, "gumbel_r", 2, "loc,scale"},
    {Family::Norm, "norm", 2, "loc,scale"},
    {Family::LogNorm, "lognorm", 3, "s,loc,scale"},
    {Family::Logistic, "logistic", 2, "loc,scale"},
    {Family::LogGamma, "loggamma", 3, "c,loc,scale"},
    {Family::Gamma, "gamma", 3, "a,loc,scale"},
    {Family::Beta, "beta", 4, "a,b,loc,scale"},
    {Family::Expon, "expon", 2, "loc,scale"},
    {Family::Pareto, "pareto", 3, "b,loc,scale"},
    {Family::StudentT, "t", 3, "df,loc,scale"},
    {Family::DWeibull, "dweibull", 3, "c,loc,scale"},
    {Family::Uniform, "uniform", 2, "loc,scale"},
}};

constexpr std::array<Family, 13> kAllFamilies{
    Family::GenExtreme, Family::GumbelR, Family::Norm,    Family::LogNorm, Family::Logistic,
    Family::LogGamma,   Family::Gamma,   Family::Beta,    Family::Expon,   Family::Pareto,
    Family::StudentT,   Family::DWeibull, Family::Uniform};

constexpr std::array<Family, 12> kComparison{
    Family::GenExtreme, Family::Norm,   Family::LogNorm,  Family::Logistic,
    Family::LogGamma,   Family::Gamma,  Family::Beta,     Family::Expon,
    Family::Pareto,     Family::StudentT, Family::DWeibull, Family::Uniform};

// Shape parameters sit in front of loc and scale for every family except GEV,
// whose order is (mu, sigma, xi).
struct Unpacked {
  double shape1 = 0.0;
  double shape2 = 0.0;
  double loc = 0.0;
  double scale = 1.0;
};

Unpacked unpack(Family family, std::span<const double> p) {
  switch (family) {
    case Family::GenExtreme:
      return {p[2], 0.0, p[0], p[1]};
    case Family::GumbelR:
    case Family::Norm:
    case Family::Logistic:
    case Family::Expon:
    case Family::Uniform:
      return {0.0, 0.0, p[0], p[1]};
    case Family::Beta:
      return {p[0], p[1], p[2], p[3]};
    default:
      return {p[0], 0.0, p[1], p[2]};
  }
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// Standardized log density; -inf outside the standard support.
double std_log_pdf(Family family, const Unpacked& u, double z, double log_norm) {
  switch (family) {
    case Family::GenExtreme:
      return detail::gev_log_pdf_unchecked(z, 0.0, 1.0, u.shape1);
    case Family::GumbelR:
      return -z - std::exp(-z);
    case Family::Norm:
      return -0.5 * z * z - kLogSqrt2Pi;
    case Family::LogNorm: {
      if (!(z > 0.0)) return -kInf;
      const double lz = std::log(z);
      return -lz - log_norm - 0.5 * (lz / u.shape1) * (lz / u.shape1);
    }
    case Family::Logistic: {
      const double a = std::abs(z);
      return -a - 2.0 * std::log1p(std::exp(-a));
    }
    case Family::LogGamma:
      return u.shape1 * z - std::exp(z) - log_norm;
    case Family::Gamma:
      if (!(z > 0.0)) return -kInf;
      return (u.shape1 - 1.0) * std::log(z) - z - log_norm;
    case Family::Beta:
      if (!(z > 0.0 && z < 1.0)) return -kInf;
      return (u.shape1 - 1.0) * std::log(z) + (u.shape2 - 1.0) * std::log1p(-z) - log_norm;
    case Family::Expon:
      if (!(z >= 0.0)) return -kInf;
      return -z;
    case Family::Pareto:
      if (!(z >= 1.0)) return -kInf;
      return log_norm - (u.shape1 + 1.0) * std::log(z);
    case Family::StudentT:
      return log_norm - 0.5 * (u.shape1 + 1.0) * std::log1p(z * z / u.shape1);
    case Family::DWeibull: {
      const double a = std::abs(z);
      if (a == 0.0) return u.shape1 == 1.0 ? log_norm : (u.shape1 < 1.0 ? kInf : -kInf);
      return log_norm + (u.shape1 - 1.0) * std::log(a) - std::pow(a, u.shape1);
    }
    case Family::Uniform:
      if (!(z >= 0.0 && z <= 1.0)) return -kInf;
      return 0.0;
  }
  return -kInf;
}

// Family-specific normalizing constant of the standardized density.
double log_normalizer(Family family, const Unpacked& u) {
  switch (family) {
    case Family::LogNorm:
      return std::log(u.shape1) + kLogSqrt2Pi;
    case Family::LogGamma:
    case Family::Gamma:
      return boost::math::lgamma(u.shape1);
    case Family::Beta:
      return boost::math::lgamma(u.shape1) + boost::math::lgamma(u.shape2) -
             boost::math::lgamma(u.shape1 + u.shape2);
    case Family::Pareto:
      return std::log(u.shape1);
    case Family::StudentT:
      return boost::math::lgamma(0.5 * (u.shape1 + 1.0)) - boost::math::lgamma(0.5 * u.shape1) -
             0.5 * std::log(u.shape1 * std::numbers::pi);
    case Family::DWeibull:
      return std::log(0.5 * u.shape1);
    default:
      return 0.0;
  }
}

double std_cdf(Family family, const Unpacked& u, double z) {
  switch (family) {
    case Family::GenExtreme:
      return detail::gev_cdf_unchecked(z, 0.0, 1.0, u.shape1);
    case Family::GumbelR:
      return std::exp(-std::exp(-z));
    case Family::Norm:
      return std_normal_cdf(z);
    case Family::LogNorm:
      return z > 0.0 ? std_normal_cdf(std::log(z) / u.shape1) : 0.0;
    case Family::Logistic:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    case Family::LogGamma: {
      const double e = std::exp(z);
      if (e == 0.0) return 0.0;
      if (!std::isfinite(e)) return 1.0;
      return boost::math::gamma_p(u.shape1, e);
    }
    case Family::Gamma:
      return z > 0.0 ? boost::math::gamma_p(u.shape1, z) : 0.0;
    case Family::Beta:
      if (z <= 0.0) return 0.0;
      if (z >= 1.0) return 1.0;
      return boost::math::ibeta(u.shape1, u.shape2, z);
    case Family::Expon:
      return z > 0.0 ? -std::expm1(-z) : 0.0;
    case Family::Pareto:
      return z > 1.0 ? -std::expm1(-u.shape1 * std::log(z)) : 0.0;
    case Family::StudentT:
      if (!std::isfinite(z)) return z > 0.0 ? 1.0 : 0.0;
      return boost::math::cdf(boost::math::students_t_distribution<double>(u.shape1), z);
    case Family::DWeibull: {
      const double tail = 0.5 * std::exp(-std::pow(std::abs(z), u.shape1));
      return z >= 0.0 ? 1.0 - tail : tail;
    }
    case Family::Uniform:
      return std::clamp(z, 0.0, 1.0);
  }
  return 0.0;
}

double std_quantile(Family family, const Unpacked& u, double p) {
  switch (family) {
    case Family::GenExtreme:
      return gev_quantile(p, GevParams{0.0, 1.0, u.shape1});
    case Family::GumbelR:
      return -std::log(-std::log(p));
    case Family::Norm:
      return std_normal_quantile(p);
    case Family::LogNorm:
      return std::exp(u.shape1 * std_normal_quantile(p));
    case Family::Logistic:
      return std::log(p) - std::log1p(-p);
    case Family::LogGamma:
      return std::log(boost::math::gamma_p_inv(u.shape1, p));
    case Family::Gamma:
      return boost::math::gamma_p_inv(u.shape1, p);
    case Family::Beta:
      return boost::math::ibeta_inv(u.shape1, u.shape2, p);
    case Family::Expon:
      return -std::log1p(-p);
    case Family::Pareto:
      return std::exp(-std::log1p(-p) / u.shape1);
    case Family::StudentT:
      return boost::math::quantile(boost::math::students_t_distribution<double>(u.shape1), p);
    case Family::DWeibull:
      if (p >= 0.5) return std::pow(-std::log(2.0 * (1.0 - p)), 1.0 / u.shape1);
      return -std::pow(-std::log(2.0 * p), 1.0 / u.shape1);
    case Family::Uniform:
      return p;
  }
  return 0.0;
}

}  // namespace

const FamilyInfo& family_info(Family family) {
  for (const auto& info : kFamilies) {
    if (info.family == family) return info;
  }
  throw DomainError("unknown family");
}

std::vector<std::string> param_names(Family family) {
  std::vector<std::string> out;
  const std::string_view all = family_info(family).param_names;
  std::size_t pos = 0;
  while (pos <= all.size()) {
    const auto comma = std::min(all.find(',', pos), all.size());
    out.emplace_back(all.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

std::string_view family_name(Family family) { return family_info(family).name; }

std::optional<Family> family_from_name(std::string_view name) {
  for (const auto& info : kFamilies) {
    if (info.name == name) return info.family;
  }
  if (name == "gev") return Family::GenExtreme;
  if (name == "gumbel") return Family::GumbelR;
  return std::nullopt;
}

std::span<const Family> all_families() { return kAllFamilies; }

std::span<const Family> comparison_catalog() { return kComparison; }

void validate_params(Family family, std::span<const double> params) {
  const auto& info = family_info(family);
  if (params.size() != info.arity) {
    throw DomainError(std::string(info.name) + " expects " + std::to_string(info.arity) +
                      " parameters (" + std::string(info.param_names) + "), got " +
                      std::to_string(params.size()));
  }
  for (double v : params) {
    if (!std::isfinite(v)) throw DomainError(std::string(info.name) + " parameters must be finite");
  }
  const Unpacked u = unpack(family, params);
  if (!(u.scale > 0.0)) throw DomainError(std::string(info.name) + " scale must be positive");
  switch (family) {
    case Family::LogNorm:
    case Family::LogGamma:
    case Family::Gamma:
    case Family::Pareto:
    case Family::StudentT:
    case Family::DWeibull:
      if (!(u.shape1 > 0.0)) throw DomainError(std::string(info.name) + " shape must be positive");
      break;
    case Family::Beta:
      if (!(u.shape1 > 0.0 && u.shape2 > 0.0)) {
        throw DomainError("beta shapes must be positive");
      }
      break;
    default:
      break;
  }
}

std::pair<double, double> catalog_support(Family family, std::span<const double> params) {
  validate_params(family, params);
  const Unpacked u = unpack(family, params);
  switch (family) {
    case Family::GenExtreme:
      return gev_support(GevParams{u.loc, u.scale, u.shape1});
    case Family::LogNorm:
    case Family::Gamma:
    case Family::Expon:
      return {u.loc, kInf};
    case Family::Pareto:
      return {u.loc + u.scale, kInf};
    case Family::Beta:
    case Family::Uniform:
      return {u.loc, u.loc + u.scale};
    default:
      return {-kInf, kInf};
  }
}

double catalog_cdf(double x, Family family, std::span<const double> params) {
  validate_params(family, params);
  if (std::isnan(x)) throw DomainError("CDF evaluated at NaN");
  const Unpacked u = unpack(family, params);
  return std_cdf(family, u, (x - u.loc) / u.scale);
}

double catalog_log_pdf(double x, Family family, std::span<const double> params) {
  validate_params(family, params);
  if (std::isnan(x)) throw DomainError("density evaluated at NaN");
  const Unpacked u = unpack(family, params);
  return std_log_pdf(family, u, (x - u.loc) / u.scale, log_normalizer(family, u)) -
         std::log(u.scale);
}

double catalog_pdf(double x, Family family, std::span<const double> params) {
  return std::exp(catalog_log_pdf(x, family, params));
}

double catalog_quantile(double p, Family family, std::span<const double> params) {
  validate_params(family, params);
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile requires p in (0,1), got " + std::to_string(p));
  }
  const Unpacked u = unpack(family, params);
  return u.loc + u.scale * std_quantile(family, u, p);
}

double log_likelihood(Family family, std::span<const double> params,
                      std::span<const double> samples) {
  validate_params(family, params);
  const Unpacked u = unpack(family, params);
  const double log_norm = log_normalizer(family, u);
  const double inv_scale = 1.0 / u.scale;
  double total = 0.0;
  for (double x : samples) {
    const double lp = std_log_pdf(family, u, (x - u.loc) * inv_scale, log_norm);
    if (lp == -kInf) return -kInf;
    total += lp;
  }
  return total - static_cast<double>(samples.size()) * std::log(u.scale);
}

}  // namespace qmax
