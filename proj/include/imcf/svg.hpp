#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "imcf/monitors.hpp"

namespace imcf {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal static line chart, one polyline per series, linear axes.
inline std::string render_line_chart(const std::string& title,
                                     const std::vector<SvgSeries>& series, int width = 720,
                                     int height = 420) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  const double ml = 70, mr = 20, mt = 40, mb = 45;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const SvgSeries& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

  std::string out;
  out += "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(width) +
         "' height='" + std::to_string(height) + "'>\n";
  out += "<rect width='100%' height='100%' fill='white'/>\n";
  out += "<text x='" + std::to_string(width / 2) +
         "' y='22' text-anchor='middle' font-family='sans-serif' font-size='15'>" + title +
         "</text>\n";
  // axes
  out += "<line x1='" + format_double(ml) + "' y1='" + format_double(height - mb) + "' x2='" +
         format_double(width - mr) + "' y2='" + format_double(height - mb) +
         "' stroke='black'/>\n";
  out += "<line x1='" + format_double(ml) + "' y1='" + format_double(mt) + "' x2='" +
         format_double(ml) + "' y2='" + format_double(height - mb) + "' stroke='black'/>\n";
  char buf[64];
  auto label = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };
  out += "<text x='" + format_double(ml) + "' y='" + format_double(height - mb + 18) +
         "' font-family='sans-serif' font-size='11'>" + label(xmin) + "</text>\n";
  out += "<text x='" + format_double(width - mr) + "' y='" + format_double(height - mb + 18) +
         "' text-anchor='end' font-family='sans-serif' font-size='11'>t = " + label(xmax) +
         "</text>\n";
  out += "<text x='" + format_double(ml - 6) + "' y='" + format_double(height - mb) +
         "' text-anchor='end' font-family='sans-serif' font-size='11'>" + label(ymin + pad) +
         "</text>\n";
  out += "<text x='" + format_double(ml - 6) + "' y='" + format_double(mt + 10) +
         "' text-anchor='end' font-family='sans-serif' font-size='11'>" + label(ymax - pad) +
         "</text>\n";

  int color = 0;
  for (const SvgSeries& s : series) {
    const char* stroke = palette[color % 6];
    std::string pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      pts += format_double(px(s.x[i]));
      pts += ',';
      pts += format_double(py(s.y[i]));
      pts += ' ';
    }
    out += "<polyline fill='none' stroke='" + std::string(stroke) + "' stroke-width='1.5' points='" +
           pts + "'/>\n";
    out += "<text x='" + format_double(width - mr - 8) + "' y='" +
           format_double(mt + 16 + 16 * color) +
           "' text-anchor='end' font-family='sans-serif' font-size='12' fill='" + stroke + "'>" +
           s.label + "</text>\n";
    ++color;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace imcf
