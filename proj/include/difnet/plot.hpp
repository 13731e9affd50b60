#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace difnet {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Reads a metrics CSV (accuracy vs epoch, one series per accuracy column) or a
// sweep CSV (accuracy vs depth, one series per model). The kind is chosen from
// the header; anything else throws ParseError.
Chart chart_from_csv(std::istream& in);

// Standalone SVG line chart with axes, ticks and a legend.
void write_svg(std::ostream& out, const Chart& chart);

}  // namespace difnet
