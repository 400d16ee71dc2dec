#pragma once
// Static SVG curve plots: one polyline per series on a fixed 800x600
// viewBox, with axes, tick labels, and a legend.  No scripting, no external
// resources.  The y axis is either linear or log10; on a log axis,
// non-positive values cannot be drawn and are dropped (the count of dropped
// points is reported to the caller, who decides how to announce it).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <rissm/csv.hpp>  // format_double

namespace rissm {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Tick label such as 1e-3 for log-axis decades.
inline std::string decade_label(int e) { return "1e" + std::to_string(e); }

}  // namespace detail

// Renders the plot; throws if any series has fewer than two drawable points
// or if an axis range is degenerate.  When log_y, points with y <= 0 are
// omitted and counted into *dropped_points (if given).
inline std::string render_plot_svg(const PlotSpec& spec,
                                   const std::vector<PlotSeries>& series,
                                   std::size_t* dropped_points = nullptr) {
  if (series.empty()) throw std::invalid_argument("no series to plot");

  // Transform and validate.
  std::vector<PlotSeries> drawn(series.size());
  std::size_t dropped = 0;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t i = 0; i < series.size(); ++i) {
    drawn[i].label = series[i].label;
    for (const auto& [x, y] : series[i].points) {
      if (spec.log_y && y <= 0.0) {
        ++dropped;
        continue;
      }
      const double ty = spec.log_y ? std::log10(y) : y;
      drawn[i].points.emplace_back(x, ty);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, ty);
      ymax = std::max(ymax, ty);
    }
    if (drawn[i].points.size() < 2)
      throw std::invalid_argument("series '" + series[i].label +
                                  "' has fewer than 2 plottable points");
  }
  if (dropped_points) *dropped_points = dropped;
  if (!(xmax > xmin) || !(ymax > ymin))
    throw std::invalid_argument("degenerate axis range");

  // Fixed 800x600 canvas; plot rectangle corners below.
  const double x0 = 80, x1 = 620, y0 = 50, y1 = 545;
  const auto sx = [&](double x) {
    return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0);
  };
  const auto sy = [&](double y) {
    return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const std::size_t n_colors = sizeof(palette) / sizeof(palette[0]);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "width=\"800\" height=\"600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"17\">" + detail::xml_escape(spec.title) + "</text>\n";

  // Tick positions.
  std::vector<std::pair<double, std::string>> xticks, yticks;
  const int nx = 6;
  for (int i = 0; i <= nx; ++i) {
    const double v = xmin + (xmax - xmin) * i / nx;
    xticks.emplace_back(v, format_double(std::round(v * 100.0) / 100.0));
  }
  if (spec.log_y) {
    const int e_lo = static_cast<int>(std::ceil(ymin - 1e-9));
    const int e_hi = static_cast<int>(std::floor(ymax + 1e-9));
    for (int e = e_lo; e <= e_hi; ++e)
      yticks.emplace_back(static_cast<double>(e), detail::decade_label(e));
    if (yticks.size() < 2) {
      yticks.clear();
      yticks.emplace_back(ymin, detail::decade_label(static_cast<int>(ymin)));
      yticks.emplace_back(ymax, detail::decade_label(static_cast<int>(ymax)));
    }
  } else {
    const int ny = 6;
    for (int i = 0; i <= ny; ++i) {
      const double v = ymin + (ymax - ymin) * i / ny;
      yticks.emplace_back(v, format_double(std::round(v * 1000.0) / 1000.0));
    }
  }

  // Grid, ticks, tick labels.
  for (const auto& [v, label] : xticks) {
    const double px = sx(v);
    svg += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" + detail::svg_num(y0) +
           "\" x2=\"" + detail::svg_num(px) + "\" y2=\"" + detail::svg_num(y1) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + detail::svg_num(px) + "\" y=\"" + detail::svg_num(y1 + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::xml_escape(label) + "</text>\n";
  }
  for (const auto& [v, label] : yticks) {
    const double py = sy(v);
    svg += "<line x1=\"" + detail::svg_num(x0) + "\" y1=\"" + detail::svg_num(py) +
           "\" x2=\"" + detail::svg_num(x1) + "\" y2=\"" + detail::svg_num(py) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + detail::svg_num(x0 - 8) + "\" y=\"" + detail::svg_num(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::xml_escape(label) + "</text>\n";
  }

  // Axes frame.
  svg += "<rect x=\"" + detail::svg_num(x0) + "\" y=\"" + detail::svg_num(y0) +
         "\" width=\"" + detail::svg_num(x1 - x0) + "\" height=\"" +
         detail::svg_num(y1 - y0) + "\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"1\"/>\n";

  // Axis labels.
  svg += "<text x=\"" + detail::svg_num((x0 + x1) / 2) + "\" y=\"" +
         detail::svg_num(600 - 12) + "\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" +
         detail::xml_escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + detail::svg_num((y0 + y1) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 20 " + detail::svg_num((y0 + y1) / 2) + ")\">" +
         detail::xml_escape(spec.y_label) + "</text>\n";

  // Series polylines.
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const char* color = palette[i % n_colors];
    std::string pts;
    for (const auto& [x, y] : drawn[i].points) {
      pts += detail::svg_num(sx(x));
      pts.push_back(',');
      pts += detail::svg_num(sy(y));
      pts.push_back(' ');
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
  }

  // Legend (right margin).
  const double lx = 635, ly = 60, dy = 22;
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const double py = ly + dy * static_cast<double>(i);
    const char* color = palette[i % n_colors];
    svg += "<line x1=\"" + detail::svg_num(lx) + "\" y1=\"" + detail::svg_num(py) +
           "\" x2=\"" + detail::svg_num(lx + 24) + "\" y2=\"" + detail::svg_num(py) +
           "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2.5\"/>\n";
    svg += "<text x=\"" + detail::svg_num(lx + 30) + "\" y=\"" +
           detail::svg_num(py + 4) + "\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + detail::xml_escape(drawn[i].label) + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace rissm
