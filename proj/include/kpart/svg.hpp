#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kpart {

// Minimal deterministic scatter-plot writer; no display server involved.
struct ScatterPlot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  struct Series {
    std::string name;
    std::string color;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> series;

  std::string render() const;
};

}  // namespace kpart
