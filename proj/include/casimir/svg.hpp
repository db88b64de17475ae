#pragma once

#include <string>
#include <vector>

namespace casimir {

struct SvgSeries {
  std::string label;
  std::string color;               // CSS color
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained line plot (no external renderer). Log-scaled axes drop
// non-positive values.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_x,
                    bool log_y);

}  // namespace casimir
