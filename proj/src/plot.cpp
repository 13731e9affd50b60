#include "difnet/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "difnet/error.hpp"

namespace difnet {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

double number(const std::string& s, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Chart chart_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: empty input");
  const auto header = split_csv(line);

  Chart chart;
  std::size_t lineno = 1;
  if (header == std::vector<std::string>{"epoch", "train_loss", "train_acc", "val_acc", "test_acc"}) {
    chart = {"Accuracy by epoch", "epoch", "accuracy", {{"train_acc", {}}, {"val_acc", {}}, {"test_acc", {}}}};
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto cells = split_csv(line);
      if (cells.size() != 5) throw ParseError("csv line " + std::to_string(lineno) + ": expected 5 fields");
      const double epoch = number(cells[0], lineno);
      for (std::size_t s = 0; s < 3; ++s) chart.series[s].points.emplace_back(epoch, number(cells[2 + s], lineno));
    }
    return chart;
  }
  if (header == std::vector<std::string>{"model", "depth", "accuracy", "seconds"}) {
    chart = {"Accuracy by depth", "depth", "accuracy", {}};
    std::map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto cells = split_csv(line);
      if (cells.size() != 4) throw ParseError("csv line " + std::to_string(lineno) + ": expected 4 fields");
      auto [it, fresh] = index.emplace(cells[0], chart.series.size());
      if (fresh) chart.series.push_back({cells[0], {}});
      chart.series[it->second].points.emplace_back(number(cells[1], lineno), number(cells[2], lineno));
    }
    return chart;
  }
  throw ParseError("csv: unrecognised header '" + line + "'");
}

void write_svg(std::ostream& out, const Chart& chart) {
  constexpr double width = 640, height = 420, left = 64, right = 150, top = 40, bottom = 56;
  constexpr std::array<const char*, 6> colours{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = 0.0, y_max = 1.0;  // accuracies
  for (const auto& s : chart.series)
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!std::isfinite(x_min)) x_min = 0.0, x_max = 1.0;
  if (x_max == x_min) x_max = x_min + 1.0;

  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(chart.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"#333\" fill=\"none\"><line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h << "\"/><line x1=\"" << left << "\" y1=\"" << top
      << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/></g>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 5.0;
    const double yv = y_min + (y_max - y_min) * t / 5.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << fmt(xv)
        << "</text>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
        << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << py(yv) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(yv)
        << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14 << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n"
      << "<text transform=\"translate(18 " << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(chart.y_label) << "</text>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const auto& series = chart.series[s];
    const char* colour = colours[s % colours.size()];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series.points) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    if (series.points.size() <= 20) {
      for (auto [x, y] : series.points)
        out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = top + 16 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 36 << "\" y2=\""
        << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\">" << escape(series.name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace difnet
