#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qmax/errors.hpp"
#include "qmax/nelder_mead.hpp"

using namespace qmax;

TEST(NelderMead, Quadratic) {
  const auto r = nelder_mead(
      [](std::span<const double> x) { return (x[0] - 3) * (x[0] - 3) + 2 * (x[1] + 1) * (x[1] + 1); },
      {0.0, 0.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 3.0, 1e-4);
  EXPECT_NEAR(r.x[1], -1.0, 1e-4);
  EXPECT_LT(r.value, 1e-8);
}

TEST(NelderMead, Rosenbrock) {
  NelderMeadOptions opts;
  opts.max_iterations = 10000;
  opts.f_tolerance = 1e-14;
  opts.x_tolerance = 1e-10;
  const auto r = nelder_mead(
      [](std::span<const double> x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
      },
      {-1.2, 1.0}, opts);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 2e-3);
}

TEST(NelderMead, InfeasibleRegionActsAsWall) {
  // Minimum of (x - 1)^2 restricted to x >= 2 sits on the wall.
  const auto r = nelder_mead(
      [](std::span<const double> x) {
        return x[0] < 2 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 1) * (x[0] - 1);
      },
      {5.0});
  EXPECT_GE(r.x[0], 2.0);
  EXPECT_NEAR(r.x[0], 2.0, 1e-3);
}

TEST(NelderMead, NeverReturnsWorseThanStart) {
  const auto f = [](std::span<const double> x) { return std::abs(x[0]) + std::abs(x[1] - 2); };
  const auto r = nelder_mead(f, {0.5, 0.5});
  const double start[] = {0.5, 0.5};
  EXPECT_LE(r.value, f(start));
}

TEST(NelderMead, RejectsBadInput) {
  EXPECT_THROW(nelder_mead([](std::span<const double>) { return 0.0; }, {}), DomainError);
  NelderMeadOptions opts;
  opts.initial_step = {1.0};
  EXPECT_THROW(nelder_mead([](std::span<const double>) { return 0.0; }, {0.0, 0.0}, opts), DomainError);
}
