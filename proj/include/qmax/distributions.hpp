#pragma once

#include <string_view>
#include <utility>

namespace qmax {

// |xi| at or below this is evaluated through the Gumbel limit.
inline constexpr double kXiEps = 1e-8;

/// Location/scale/shape triple of the generalized extreme value family.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

enum class GevSubfamily { Gumbel, Frechet, WeibullMax };

std::string_view to_string(GevSubfamily sub);

/// Throws DomainError unless sigma > 0 and all fields are finite.
void validate(const GevParams& params);

/// Closed support [lower, upper] (infinite ends where unbounded).
std::pair<double, double> gev_support(const GevParams& params);

/// F(x) = exp{-[1 + xi (x - mu)/sigma]^(-1/xi)}, with the Gumbel limit for
/// |xi| <= kXiEps. Outside the support the result is exactly 0 or 1.
double gev_cdf(double x, const GevParams& params);
double gev_log_cdf(double x, const GevParams& params);

/// Density; zero outside the support.
double gev_pdf(double x, const GevParams& params);
/// Log density; -infinity outside the support.
double gev_log_pdf(double x, const GevParams& params);

/// Inverse CDF for p in (0,1). Throws DomainError otherwise.
double gev_quantile(double p, const GevParams& params);

GevSubfamily classify_family(const GevParams& params);

// Unchecked kernels used by likelihood loops after the parameters have been
// validated once.
namespace detail {
double gev_log_pdf_unchecked(double x, double mu, double sigma, double xi);
double gev_cdf_unchecked(double x, double mu, double sigma, double xi);
}  // namespace detail

}  // namespace qmax
