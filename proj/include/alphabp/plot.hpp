#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "alphabp/common.hpp"

namespace alphabp {

// 12 significant digits; the fixed float convention for CSV and SVG output.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

// Parses our CSV dialect: '#' comment lines, a header row, comma separation,
// no quoting.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (table.header.empty())
      table.header = split_csv_line(line);
    else
      table.rows.push_back(split_csv_line(line));
  }
  return table;
}

struct PlotSeries {
  std::string key;
  std::vector<std::pair<double, double>> points;
};

// Maps a recognized CSV schema onto plot series. Recognized headers:
//   x,y
//   gamma,alpha,sigma,lambda_mean,lambda_min,lambda_max  (one series per gamma/alpha)
//   iter,err_min,err_mean,err_max                        (three series)
//   snr_db,algorithm,alpha,trials,symbol_errors,ser      (one series per algorithm)
inline std::vector<PlotSeries> plot_series_from_csv(const CsvTable& table) {
  auto header_is = [&](std::initializer_list<const char*> cols) {
    if (table.header.size() != cols.size()) return false;
    std::size_t i = 0;
    for (const char* c : cols)
      if (table.header[i++] != c) return false;
    return true;
  };
  std::vector<PlotSeries> series;
  auto find_or_add = [&](const std::string& key) -> PlotSeries& {
    for (auto& s : series)
      if (s.key == key) return s;
    series.push_back(PlotSeries{key, {}});
    return series.back();
  };

  if (header_is({"x", "y"})) {
    auto& s = find_or_add("y");
    for (const auto& row : table.rows)
      s.points.emplace_back(std::stod(row[0]), std::stod(row[1]));
    return series;
  }
  if (header_is({"gamma", "alpha", "sigma", "lambda_mean", "lambda_min", "lambda_max"})) {
    for (const auto& row : table.rows) {
      auto& s = find_or_add("gamma=" + row[0] + ",alpha=" + row[1]);
      s.points.emplace_back(std::stod(row[2]), std::stod(row[3]));
    }
    return series;
  }
  if (header_is({"iter", "err_min", "err_mean", "err_max"})) {
    for (const auto& row : table.rows) {
      double it = std::stod(row[0]);
      find_or_add("err_min").points.emplace_back(it, std::stod(row[1]));
      find_or_add("err_mean").points.emplace_back(it, std::stod(row[2]));
      find_or_add("err_max").points.emplace_back(it, std::stod(row[3]));
    }
    return series;
  }
  if (header_is({"snr_db", "algorithm", "alpha", "trials", "symbol_errors", "ser"})) {
    for (const auto& row : table.rows) {
      auto& s = find_or_add(row[1]);
      s.points.emplace_back(std::stod(row[0]), std::stod(row[5]));
    }
    return series;
  }
  throw StructuralError(
      "plot: unrecognized CSV schema; expected one of: x,y | "
      "gamma,alpha,sigma,lambda_mean,lambda_min,lambda_max | "
      "iter,err_min,err_mean,err_max | snr_db,algorithm,alpha,trials,symbol_errors,ser");
}

// Minimal deterministic line chart: fixed canvas, axes, one polyline per
// series, a text legend. No timestamps or styling.
inline std::string render_line_svg(const std::vector<PlotSeries>& series, bool logy) {
  constexpr double width = 640.0, height = 480.0;
  constexpr double ml = 60.0, mr = 20.0, mt = 20.0, mb = 40.0;
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  auto ty = [&](double y) { return logy ? std::log10(std::max(y, 1e-300)) : y; };
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      double yy = ty(y);
      if (first) {
        xmin = xmax = x;
        ymin = ymax = yy;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, yy);
        ymax = std::max(ymax, yy);
      }
    }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) {
    return height - mb - (ty(y) - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << format_double(ml) << "\" y1=\"" << format_double(height - mb)
      << "\" x2=\"" << format_double(width - mr) << "\" y2=\"" << format_double(height - mb)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << format_double(ml) << "\" y1=\"" << format_double(mt) << "\" x2=\""
      << format_double(ml) << "\" y2=\"" << format_double(height - mb)
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << format_double(ml) << "\" y=\"" << format_double(height - mb + 16)
      << "\" font-size=\"10\">" << format_double(xmin) << "</text>\n";
  svg << "<text x=\"" << format_double(width - mr - 30) << "\" y=\""
      << format_double(height - mb + 16) << "\" font-size=\"10\">" << format_double(xmax)
      << "</text>\n";
  svg << "<text x=\"4\" y=\"" << format_double(height - mb) << "\" font-size=\"10\">"
      << format_double(ymin) << (logy ? " (log10)" : "") << "</text>\n";
  svg << "<text x=\"4\" y=\"" << format_double(mt + 8) << "\" font-size=\"10\">"
      << format_double(ymax) << (logy ? " (log10)" : "") << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    bool first_pt = true;
    for (auto [x, y] : series[i].points) {
      if (!first_pt) svg << " ";
      svg << format_double(px(x)) << "," << format_double(py(y));
      first_pt = false;
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << format_double(width - mr - 150) << "\" y=\""
        << format_double(mt + 14.0 * (i + 1)) << "\" font-size=\"11\" fill=\"" << color << "\">"
        << series[i].key << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace alphabp
