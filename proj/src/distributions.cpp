#include "qmax/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmax/errors.hpp"

namespace qmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_gumbel(double xi) { return std::abs(xi) <= kXiEps; }

}  // namespace

std::string_view to_string(GevSubfamily sub) {
  switch (sub) {
    case GevSubfamily::Gumbel:
      return "gumbel";
    case GevSubfamily::Frechet:
      return "frechet";
    case GevSubfamily::WeibullMax:
      return "weibull_max";
  }
  return "unknown";
}

void validate(const GevParams& params) {
  if (!std::isfinite(params.mu) || !std::isfinite(params.sigma) || !std::isfinite(params.xi)) {
    throw DomainError("GEV parameters must be finite");
  }
  if (!(params.sigma > 0.0)) {
    throw DomainError("GEV scale must be positive, got " + std::to_string(params.sigma));
  }
}

std::pair<double, double> gev_support(const GevParams& params) {
  validate(params);
  if (is_gumbel(params.xi)) return {-kInf, kInf};
  const double endpoint = params.mu - params.sigma / params.xi;
  if (params.xi > 0.0) return {endpoint, kInf};
  return {-kInf, endpoint};
}

namespace detail {

double gev_cdf_unchecked(double x, double mu, double sigma, double xi) {
  const double z = (x - mu) / sigma;
  if (is_gumbel(xi)) return std::exp(-std::exp(-z));
  const double t = xi * z;
  if (!(t > -1.0)) return xi > 0.0 ? 0.0 : 1.0;
  // t^(-1/xi) through log1p keeps small |xi| accurate.
  return std::exp(-std::exp(-std::log1p(t) / xi));
}

double gev_log_pdf_unchecked(double x, double mu, double sigma, double xi) {
  const double z = (x - mu) / sigma;
  if (is_gumbel(xi)) return -std::log(sigma) - z - std::exp(-z);
  const double t = xi * z;
  if (!(t > -1.0)) return -kInf;
  const double log_t = std::log1p(t);
  return -std::log(sigma) - (1.0 + 1.0 / xi) * log_t - std::exp(-log_t / xi);
}

}  // namespace detail

double gev_cdf(double x, const GevParams& params) {
  validate(params);
  if (std::isnan(x)) throw DomainError("GEV CDF evaluated at NaN");
  return detail::gev_cdf_unchecked(x, params.mu, params.sigma, params.xi);
}

double gev_log_cdf(double x, const GevParams& params) {
  validate(params);
  const double z = (x - params.mu) / params.sigma;
  if (is_gumbel(params.xi)) return -std::exp(-z);
  const double t = params.xi * z;
  if (!(t > -1.0)) return params.xi > 0.0 ? -kInf : 0.0;
  return -std::exp(-std::log1p(t) / params.xi);
}

double gev_pdf(double x, const GevParams& params) { return std::exp(gev_log_pdf(x, params)); }

double gev_log_pdf(double x, const GevParams& params) {
  validate(params);
  if (std::isnan(x)) throw DomainError("GEV density evaluated at NaN");
  return detail::gev_log_pdf_unchecked(x, params.mu, params.sigma, params.xi);
}

double gev_quantile(double p, const GevParams& params) {
  validate(params);
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("GEV quantile requires p in (0,1), got " + std::to_string(p));
  }
  const double y = -std::log(p);  // > 0
  if (is_gumbel(params.xi)) return params.mu - params.sigma * std::log(y);
  return params.mu + params.sigma * std::expm1(-params.xi * std::log(y)) / params.xi;
}

GevSubfamily classify_family(const GevParams& params) {
  validate(params);
  if (is_gumbel(params.xi)) return GevSubfamily::Gumbel;
  return params.xi > 0.0 ? GevSubfamily::Frechet : GevSubfamily::WeibullMax;
}

}  // namespace qmax
