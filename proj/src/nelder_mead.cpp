#include "qmax/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qmax/errors.hpp"

namespace qmax {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Vertex {
  std::vector<double> x;
  double f;
};

class Simplex {
 public:
  Simplex(const Objective& objective, std::size_t& evaluations)
      : objective_(objective), evaluations_(evaluations) {}

  double eval(const std::vector<double>& x) {
    ++evaluations_;
    const double f = objective_(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  }

  void build(const std::vector<double>& center, const std::vector<double>& steps) {
    vertices_.clear();
    vertices_.push_back({center, eval(center)});
    for (std::size_t i = 0; i < center.size(); ++i) {
      auto x = center;
      x[i] += steps[i];
      vertices_.push_back({x, eval(x)});
    }
    order();
  }

  void order() {
    std::stable_sort(vertices_.begin(), vertices_.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  }

  bool converged(double x_tol, double f_tol) const {
    const auto& best = vertices_.front();
    bool x_done = true;
    bool f_done = true;
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
      if (!(std::abs(vertices_[i].f - best.f) <= f_tol)) f_done = false;
      for (std::size_t j = 0; j < best.x.size(); ++j) {
        if (!(std::abs(vertices_[i].x[j] - best.x[j]) <= x_tol)) x_done = false;
      }
    }
    return std::isfinite(best.f) && (x_done || f_done);
  }

  void step() {
    const std::size_t n = vertices_.front().x.size();
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += vertices_[i].x[j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto& worst = vertices_.back();
    auto along = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + coef * (worst.x[j] - centroid[j]);
      return x;
    };

    auto reflected = along(-kReflect);
    const double fr = eval(reflected);
    const double f_best = vertices_.front().f;
    const double f_second_worst = vertices_[n - 1].f;

    if (fr < f_best) {
      auto expanded = along(-kReflect * kExpand);
      const double fe = eval(expanded);
      if (fe < fr) {
        worst = {std::move(expanded), fe};
      } else {
        worst = {std::move(reflected), fr};
      }
    } else if (fr < f_second_worst) {
      worst = {std::move(reflected), fr};
    } else {
      const bool outside = fr < worst.f;
      auto contracted = along(outside ? -kReflect * kContract : kContract);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : worst.f)) {
        worst = {std::move(contracted), fc};
      } else {
        const auto& best = vertices_.front().x;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            vertices_[i].x[j] = best[j] + kShrink * (vertices_[i].x[j] - best[j]);
          }
          vertices_[i].f = eval(vertices_[i].x);
        }
      }
    }
    order();
  }

  const Vertex& best() const { return vertices_.front(); }

 private:
  const Objective& objective_;
  std::size_t& evaluations_;
  std::vector<Vertex> vertices_;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             const NelderMeadOptions& options) {
  if (start.empty()) throw DomainError("Nelder-Mead needs at least one coordinate");
  std::vector<double> steps = options.initial_step;
  if (steps.empty()) {
    steps.resize(start.size());
    for (std::size_t i = 0; i < start.size(); ++i) {
      steps[i] = start[i] != 0.0 ? 0.05 * std::abs(start[i]) : 2.5e-4;
    }
  }
  if (steps.size() != start.size()) throw DomainError("initial_step size mismatch");

  NelderMeadResult result;
  Simplex simplex(objective, result.evaluations);
  simplex.build(start, steps);

  std::size_t restarts = 0;
  double last_converged = std::numeric_limits<double>::infinity();
  while (result.iterations < options.max_iterations) {
    if (simplex.converged(options.x_tolerance, options.f_tolerance)) {
      const double value = simplex.best().f;
      const bool improved = last_converged - value > options.f_tolerance;
      if (!improved || restarts >= options.max_restarts) {
        result.converged = true;
        break;
      }
      last_converged = value;
      ++restarts;
      const auto center = simplex.best().x;
      simplex.build(center, steps);
      continue;
    }
    simplex.step();
    ++result.iterations;
  }
  if (!result.converged && simplex.converged(options.x_tolerance, options.f_tolerance)) {
    result.converged = true;
  }
  result.x = simplex.best().x;
  result.value = simplex.best().f;
  return result;
}

}  // namespace qmax
