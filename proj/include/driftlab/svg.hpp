// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Minimal self-contained SVG charts: grouped bars and bar+line combos.
// Every bar carries a data-value attribute with the exact source string,
// so chart regressions can be checked textually against the CSV.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab/common.hpp"

namespace driftlab::svg {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> values;           // one per category; NaN = missing
  std::vector<std::string> raw_values;  // exact strings for data-value
};

namespace detail {

inline std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double width = 920, height = 420;
  double left = 60, right = 70, top = 40, bottom = 70;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

inline void open_svg(std::ostringstream& out, const Frame& fr,
                     const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fr.width
      << "\" height=\"" << fr.height << "\" viewBox=\"0 0 " << fr.width << " "
      << fr.height << "\" font-family=\"sans-serif\">\n";
  out << "<text x=\"" << fr.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(title) << "</text>\n";
}

inline void axes(std::ostringstream& out, const Frame& fr, double y_max,
                 const std::string& y_label, int ticks = 5) {
  out << "<line x1=\"" << fr.left << "\" y1=\"" << fr.top << "\" x2=\""
      << fr.left << "\" y2=\"" << fr.top + fr.plot_h() << "\" stroke=\"#333\"/>\n";
  out << "<line x1=\"" << fr.left << "\" y1=\"" << fr.top + fr.plot_h()
      << "\" x2=\"" << fr.left + fr.plot_w() << "\" y2=\"" << fr.top + fr.plot_h()
      << "\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= ticks; ++i) {
    double v = y_max * i / ticks;
    double y = fr.top + fr.plot_h() * (1.0 - static_cast<double>(i) / ticks);
    out << "<line x1=\"" << fr.left - 4 << "\" y1=\"" << f2(y) << "\" x2=\""
        << fr.left + fr.plot_w() << "\" y2=\"" << f2(y)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fr.left - 8 << "\" y=\"" << f2(y + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << f2(v) << "</text>\n";
  }
  out << "<text x=\"14\" y=\"" << fr.top + fr.plot_h() / 2
      << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fr.top + fr.plot_h() / 2 << ")\">" << escape(y_label) << "</text>\n";
}

inline void category_labels(std::ostringstream& out, const Frame& fr,
                            const std::vector<std::string>& cats) {
  if (cats.empty()) return;
  double step = fr.plot_w() / static_cast<double>(cats.size());
  for (std::size_t i = 0; i < cats.size(); ++i) {
    double x = fr.left + step * (static_cast<double>(i) + 0.5);
    out << "<text x=\"" << f2(x) << "\" y=\"" << fr.top + fr.plot_h() + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(cats[i])
        << "</text>\n";
  }
}

inline void legend(std::ostringstream& out, const Frame& fr,
                   const std::vector<Series>& series) {
  double x = fr.left;
  for (const auto& s : series) {
    out << "<rect x=\"" << f2(x) << "\" y=\"28\" width=\"10\" height=\"10\" "
        << "fill=\"" << s.color << "\"/>\n";
    out << "<text x=\"" << f2(x + 14) << "\" y=\"37\" font-size=\"11\">"
        << escape(s.name) << "</text>\n";
    x += 20 + 7.0 * static_cast<double>(s.name.size()) + 16;
  }
}

}  // namespace detail

// Grouped bar chart; one bar group per category, one bar per series.
inline std::string grouped_bar_chart(const std::string& title,
                                     const std::vector<std::string>& categories,
                                     const std::vector<Series>& series,
                                     const std::string& y_label) {
  detail::Frame fr;
  double y_max = 1.0;
  for (const auto& s : series)
    for (double v : s.values)
      if (v == v && v > y_max) y_max = v;
  y_max *= 1.08;

  std::ostringstream out;
  detail::open_svg(out, fr, title);
  detail::axes(out, fr, y_max, y_label);
  detail::category_labels(out, fr, categories);
  detail::legend(out, fr, series);
  if (!categories.empty() && !series.empty()) {
    double group_w = fr.plot_w() / static_cast<double>(categories.size());
    double bar_w = group_w * 0.8 / static_cast<double>(series.size());
    for (std::size_t si = 0; si < series.size(); ++si) {
      const Series& s = series[si];
      for (std::size_t ci = 0; ci < categories.size() && ci < s.values.size(); ++ci) {
        double v = s.values[ci];
        if (v != v) continue;  // NaN = missing
        double h = fr.plot_h() * (v / y_max);
        double x = fr.left + group_w * static_cast<double>(ci) + group_w * 0.1 +
                   bar_w * static_cast<double>(si);
        double y = fr.top + fr.plot_h() - h;
        std::string raw = ci < s.raw_values.size() && !s.raw_values[ci].empty()
                              ? s.raw_values[ci]
                              : detail::f2(v);
        out << "<rect class=\"bar\" x=\"" << detail::f2(x) << "\" y=\""
            << detail::f2(y) << "\" width=\"" << detail::f2(bar_w)
            << "\" height=\"" << detail::f2(h) << "\" fill=\"" << s.color
            << "\" data-series=\"" << detail::escape(s.name)
            << "\" data-category=\"" << detail::escape(categories[ci])
            << "\" data-value=\"" << detail::escape(raw) << "\">"
            << "<title>" << detail::escape(categories[ci]) << " "
            << detail::escape(s.name) << " " << detail::escape(raw)
            << "</title></rect>\n";
      }
    }
  }
  out << "</svg>\n";
  return out.str();
}

// Bars on the left axis plus line series on an independent right axis.
inline std::string bars_and_lines_chart(const std::string& title,
                                        const std::vector<std::string>& categories,
                                        const Series& bars,
                                        const std::vector<Series>& lines,
                                        const std::string& y_left_label,
                                        const std::string& y_right_label,
                                        double right_max = 1.0) {
  detail::Frame fr;
  double y_max = 1.0;
  for (double v : bars.values)
    if (v == v && v > y_max) y_max = v;
  y_max *= 1.08;

  std::ostringstream out;
  detail::open_svg(out, fr, title);
  detail::axes(out, fr, y_max, y_left_label);
  detail::category_labels(out, fr, categories);
  std::vector<Series> legend_series = lines;
  legend_series.insert(legend_series.begin(), bars);
  detail::legend(out, fr, legend_series);

  double group_w = categories.empty()
                       ? 0.0
                       : fr.plot_w() / static_cast<double>(categories.size());
  for (std::size_t ci = 0; ci < categories.size() && ci < bars.values.size(); ++ci) {
    double v = bars.values[ci];
    if (v != v) continue;
    double h = fr.plot_h() * (v / y_max);
    double x = fr.left + group_w * static_cast<double>(ci) + group_w * 0.25;
    double y = fr.top + fr.plot_h() - h;
    std::string raw = ci < bars.raw_values.size() && !bars.raw_values[ci].empty()
                          ? bars.raw_values[ci]
                          : detail::f2(v);
    out << "<rect class=\"bar\" x=\"" << detail::f2(x) << "\" y=\""
        << detail::f2(y) << "\" width=\"" << detail::f2(group_w * 0.5)
        << "\" height=\"" << detail::f2(h) << "\" fill=\"" << bars.color
        << "\" data-series=\"" << detail::escape(bars.name)
        << "\" data-category=\"" << detail::escape(categories[ci])
        << "\" data-value=\"" << detail::escape(raw) << "\"/>\n";
  }

  // right axis
  double rx = fr.left + fr.plot_w();
  out << "<line x1=\"" << rx << "\" y1=\"" << fr.top << "\" x2=\"" << rx
      << "\" y2=\"" << fr.top + fr.plot_h() << "\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double v = right_max * i / 5;
    double y = fr.top + fr.plot_h() * (1.0 - static_cast<double>(i) / 5);
    out << "<text x=\"" << rx + 8 << "\" y=\"" << detail::f2(y + 4)
        << "\" font-size=\"10\">" << detail::f2(v) << "</text>\n";
  }
  out << "<text x=\"" << fr.width - 12 << "\" y=\"" << fr.top + fr.plot_h() / 2
      << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(90 "
      << fr.width - 12 << " " << fr.top + fr.plot_h() / 2 << ")\">"
      << detail::escape(y_right_label) << "</text>\n";

  for (const auto& line : lines) {
    std::ostringstream pts;
    bool any = false;
    for (std::size_t ci = 0; ci < categories.size() && ci < line.values.size(); ++ci) {
      double v = line.values[ci];
      if (v != v) continue;
      double x = fr.left + group_w * (static_cast<double>(ci) + 0.5);
      double y = fr.top + fr.plot_h() * (1.0 - v / right_max);
      pts << detail::f2(x) << ',' << detail::f2(y) << ' ';
      any = true;
    }
    if (!any) continue;
    out << "<polyline class=\"line\" fill=\"none\" stroke=\"" << line.color
        << "\" stroke-width=\"2\" data-series=\"" << detail::escape(line.name)
        << "\" points=\"" << pts.str() << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline void write_file(const std::string& content, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write chart: " + path);
  out << content;
  if (!out) throw IoError("chart write failed: " + path);
}

}  // namespace driftlab::svg
