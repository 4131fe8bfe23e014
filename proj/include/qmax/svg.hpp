#pragma once

#include <span>
#include <string>
#include <vector>

#include "qmax/fitting.hpp"
#include "qmax/gof.hpp"

namespace qmax {

struct Curve {
  std::string name;
  std::vector<Point> points;
};

/// Self-contained SVG documents (no scripts, fonts or external references).
/// Output depends only on the arguments.
std::string render_histogram_svg(const Histogram& hist, std::span<const Curve> curves,
                                 const std::string& title);

/// Scatter plot with the y = x reference line when `diagonal` is set.
std::string render_scatter_svg(std::span<const Point> points, const std::string& title,
                               const std::string& x_label, const std::string& y_label,
                               bool diagonal);

}  // namespace qmax
