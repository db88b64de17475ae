#include "casimir/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace casimir {

namespace {

constexpr double kW = 720.0, kH = 480.0;
constexpr double kL = 80.0, kR = 24.0, kT = 40.0, kB = 56.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_x,
                    bool log_y) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0.0) &&
           (!log_y || y > 0.0);
  };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin < xmax)) { xmin -= 1.0; xmax = xmin + 2.0; }
  if (!(ymin < ymax)) { ymin -= 1.0; ymax = ymin + 2.0; }

  auto tx = [&](double x) {
    const double a = log_x ? std::log10(x) : x;
    const double lo = log_x ? std::log10(xmin) : xmin;
    const double hi = log_x ? std::log10(xmax) : xmax;
    return kL + (a - lo) / (hi - lo) * (kW - kL - kR);
  };
  auto ty = [&](double y) {
    const double a = log_y ? std::log10(y) : y;
    const double lo = log_y ? std::log10(ymin) : ymin;
    const double hi = log_y ? std::log10(ymax) : ymax;
    return kH - kB - (a - lo) / (hi - lo) * (kH - kT - kB);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << title
      << "</text>\n";

  // Axes box and tick labels at the corners of the data range.
  out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\""
      << kW - kL - kR << "\" height=\"" << kH - kT - kB
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = static_cast<double>(i) / nticks;
    const double xv = log_x ? std::pow(10.0, std::log10(xmin) +
                                                 fx * (std::log10(xmax) -
                                                       std::log10(xmin)))
                            : xmin + fx * (xmax - xmin);
    const double yv = log_y ? std::pow(10.0, std::log10(ymin) +
                                                 fx * (std::log10(ymax) -
                                                       std::log10(ymin)))
                            : ymin + fx * (ymax - ymin);
    out << "<text x=\"" << tx(xv) << "\" y=\"" << kH - kB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << num(xv) << "</text>\n";
    out << "<text x=\"" << kL - 6 << "\" y=\"" << ty(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << num(yv) << "</text>\n";
    out << "<line x1=\"" << tx(xv) << "\" y1=\"" << kH - kB << "\" x2=\""
        << tx(xv) << "\" y2=\"" << kH - kB + 4 << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kL - 4 << "\" y1=\"" << ty(yv) << "\" x2=\""
        << kL << "\" y2=\"" << ty(yv) << "\" stroke=\"black\"/>\n";
  }
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " << kH / 2 << ")\">"
      << y_label << "</text>\n";

  double legend_y = kT + 16.0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      out << num(tx(s.x[i])) << ',' << num(ty(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    if (!s.label.empty()) {
      out << "<line x1=\"" << kW - kR - 150 << "\" y1=\"" << legend_y
          << "\" x2=\"" << kW - kR - 126 << "\" y2=\"" << legend_y
          << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n"
          << "<text x=\"" << kW - kR - 120 << "\" y=\"" << legend_y + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
          << "</text>\n";
      legend_y += 18.0;
    }
  }
  out << "</svg>\n";
}

}  // namespace casimir
