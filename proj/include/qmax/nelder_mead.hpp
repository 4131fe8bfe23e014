#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qmax {

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  double x_tolerance = 1e-8;
  double f_tolerance = 1e-10;
  // Per-coordinate initial simplex offsets. Empty: 5% of |x|, or 2.5e-4 at zero.
  std::vector<double> initial_step;
  // Fresh simplices built around the optimum after convergence; stops early
  // when a restart no longer improves the objective.
  std::size_t max_restarts = 2;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `objective` with the downhill simplex method. Non-finite
/// objective values are treated as +infinity, so an infeasible region acts as
/// a wall. Converged means either the simplex diameter (max-norm) or the
/// spread of objective values is within tolerance; a flat valley therefore
/// terminates, and the restarts catch a simplex that collapsed too early.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             const NelderMeadOptions& options = {});

}  // namespace qmax
