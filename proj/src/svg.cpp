#include "qmax/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qmax {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame make_frame(double x0, double x1, double y0, double y1) {
  auto widen = [](double& lo, double& hi) {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  };
  widen(x0, x1);
  widen(y0, y1);
  return {x0, x1, y0, y1};
}

std::string open_document(const Frame& f, const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" + escape(title) + "</text>\n";
  const double bx = kLeft, by = kHeight - kBottom;
  s += "<line x1=\"" + num(bx) + "\" y1=\"" + num(by) + "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" +
       num(by) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(bx) + "\" y1=\"" + num(by) + "\" x2=\"" + num(bx) + "\" y2=\"" + num(kTop) +
       "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(by + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label_num(xv) +
         "</text>\n";
    s += "<text x=\"" + num(bx - 6) + "\" y=\"" + num(f.py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label_num(yv) +
         "</text>\n";
  }
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(x_label) +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kHeight / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\" transform=\"rotate(-90 16 " + num(kHeight / 2) + ")\">" + escape(y_label) +
       "</text>\n";
  return s;
}

}  // namespace

std::string render_histogram_svg(const Histogram& hist, std::span<const Curve> curves,
                                 const std::string& title) {
  double ymax = 0.0;
  for (double d : hist.densities) ymax = std::max(ymax, d);
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (std::isfinite(p.y)) ymax = std::max(ymax, p.y);
    }
  }
  const Frame f = make_frame(hist.edges.front(), hist.edges.back(), 0.0, ymax * 1.05);
  std::string s = open_document(f, title, "value", "density");
  for (std::size_t i = 0; i < hist.bin_count(); ++i) {
    const double x = f.px(hist.edges[i]);
    const double w = f.px(hist.edges[i + 1]) - x;
    const double y = f.py(hist.densities[i]);
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
         num(f.py(0.0) - y) + "\" fill=\"#c6dbef\" stroke=\"#6baed6\" stroke-width=\"0.5\"/>\n";
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    std::string path;
    for (const auto& p : curves[c].points) {
      if (!std::isfinite(p.y)) continue;
      path += (path.empty() ? "M" : " L") + num(f.px(p.x)) + " " + num(f.py(std::min(p.y, f.y1)));
    }
    if (!path.empty()) {
      s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }
    s += "<text x=\"" + num(kWidth - kRight - 4) + "\" y=\"" + num(kTop + 14.0 * (c + 1)) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
         escape(curves[c].name) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string render_scatter_svg(std::span<const Point> points, const std::string& title,
                               const std::string& x_label, const std::string& y_label,
                               bool diagonal) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (!std::isfinite(x0)) x0 = x1 = y0 = y1 = 0.0;
  if (diagonal) {
    x0 = y0 = std::min(x0, y0);
    x1 = y1 = std::max(x1, y1);
  }
  const Frame f = make_frame(x0, x1, y0, y1);
  std::string s = open_document(f, title, x_label, y_label);
  if (diagonal) {
    s += "<line x1=\"" + num(f.px(f.x0)) + "\" y1=\"" + num(f.py(f.x0)) + "\" x2=\"" + num(f.px(f.x1)) +
         "\" y2=\"" + num(f.py(f.x1)) + "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  // Thin very large point sets; the CSV keeps every point.
  const std::size_t stride = std::max<std::size_t>(1, points.size() / 2000);
  for (std::size_t i = 0; i < points.size(); i += stride) {
    const auto& p = points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    s += "<circle cx=\"" + num(f.px(p.x)) + "\" cy=\"" + num(f.py(p.y)) +
         "\" r=\"2\" fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n";
  }
  return s + "</svg>\n";
}

}  // namespace qmax
