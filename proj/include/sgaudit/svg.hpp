#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sgaudit {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> pts;
  bool dashed = false;
  bool markers = false;
};

// Standalone log-log SVG plot; points with a non-positive coordinate are
// skipped.  Colors come from a fixed palette in series order.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<PlotSeries>& series);

// Linear-axes variant (boundary curves and similar).
void write_xy_svg(const std::string& path, const std::string& title,
                  const std::string& xlabel, const std::string& ylabel,
                  const std::vector<PlotSeries>& series);

}  // namespace sgaudit
