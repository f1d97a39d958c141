#include "kpart/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace kpart {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

std::string ScatterPlot::render() const {
  constexpr double width = 640, height = 480;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    double fx = xmin + (xmax - xmin) * i / ticks;
    double fy = ymin + (ymax - ymin) * i / ticks;
    double gx = px(fx), gy = py(fy);
    out << "<line x1=\"" << num(gx) << "\" y1=\"" << top + plot_h << "\" x2=\"" << num(gx)
        << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(gx) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" << num(fx)
        << "</text>\n";
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << num(gy) << "\" x2=\"" << left
        << "\" y2=\"" << num(gy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << num(gy + 3)
        << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << num(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\">" << ylabel << "</text>\n";

  double legend_y = top + 12;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points)
      out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
          << "\" r=\"3\" fill=\"" << s.color << "\" fill-opacity=\"0.7\"/>\n";
    if (series.size() > 1) {
      out << "<circle cx=\"" << left + plot_w - 90 << "\" cy=\"" << num(legend_y - 4)
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
      out << "<text x=\"" << left + plot_w - 82 << "\" y=\"" << num(legend_y)
          << "\" font-size=\"10\" font-family=\"sans-serif\">" << s.name << "</text>\n";
      legend_y += 14;
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace kpart
