// Copyright 2026 The qdds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal self-contained SVG line charts for convergence traces and filter
// responses. Output depends only on the data, never on the clock or locale.

#ifndef QDDS_SVG_PLOT_HPP
#define QDDS_SVG_PLOT_HPP

#include <qdds/engine.hpp>
#include <qdds/errors.hpp>
#include <qdds/fir.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace qdds {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartStyle {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  /// Dashed vertical markers, in data coordinates.
  std::vector<double> x_markers;
};

namespace svg {

inline constexpr double kWidth = 720.0;
inline constexpr double kHeight = 440.0;
inline constexpr double kLeft = 80.0;
inline constexpr double kRight = 20.0;
inline constexpr double kTop = 40.0;
inline constexpr double kBottom = 60.0;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
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

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                  "#bcbd22", "#17becf"};
  return palette[i % 10];
}

}  // namespace svg

/// Renders \a series as polylines. With log_y, non-positive values are
/// clamped to the smallest positive value present.
inline std::string render_line_chart(std::span<const Series> series,
                                     const ChartStyle& style) {
  if (series.empty()) throw ContractViolation("plot needs at least one series");
  using namespace svg;

  double min_positive = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (double v : s.y) {
      if (v > 0.0 && std::isfinite(v)) min_positive = std::min(min_positive, v);
    }
  }
  const bool log_y = style.log_y && std::isfinite(min_positive);
  auto ty = [&](double v) {
    if (!log_y) return v;
    return std::log10(v > 0.0 ? v : min_positive);
  };

  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) { x0 = 0.0; x1 = 1.0; y0 = 0.0; y1 = 1.0; }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    const double pad = std::max(1.0, std::abs(y0) * 0.1);
    y0 -= pad;
    y1 += pad;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + escape(style.title) + "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // Five ticks per axis.
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    out += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(kHeight - kBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(fx) + "</text>\n";
    const std::string ylab = log_y ? "1e" + num(fy) : num(fy);
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + ylab + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" + escape(style.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + num(kTop + ph / 2) + ")\">" +
         escape(style.y_label + (log_y ? " (log10)" : "")) + "</text>\n";

  for (double m : style.x_markers) {
    if (m < x0 || m > x1) continue;
    out += "<line class=\"marker\" x1=\"" + num(px(m)) + "\" y1=\"" +
           num(kTop) + "\" x2=\"" + num(px(m)) + "\" y2=\"" +
           num(kTop + ph) + "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    out += "<polyline data-label=\"" + escape(s.label) +
           "\" fill=\"none\" stroke-width=\"1.5\" stroke=\"" + color(si) +
           "\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      if (!first) out += ' ';
      out += num(px(s.x[i])) + "," + num(py(ty(s.y[i])));
      first = false;
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// One series per trace, best cost against iteration.
inline std::vector<Series> convergence_series(
    std::span<const std::vector<TracePoint>> traces) {
  std::vector<Series> out;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    Series s;
    s.label = "trial " + std::to_string(t);
    for (const auto& p : traces[t]) {
      s.x.push_back(static_cast<double>(p.iter));
      s.y.push_back(p.best_cost);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline void emit_plot(std::span<const std::vector<TracePoint>> traces,
                      const std::string& path, const std::string& title,
                      bool log_y) {
  if (traces.empty()) throw ContractViolation("emit_plot: no traces");
  const auto series = convergence_series(traces);
  ChartStyle style{title, "iteration", "best cost", log_y, {}};
  write_text_file(path, render_line_chart(series, style));
}

/// 20 log10 |H| against w / pi on [0, 1], floored at \a floor_db.
inline Series response_series(std::span<const double> h,
                               std::size_t points = 1024,
                               double floor_db = -120.0) {
  Series s;
  s.label = "|H| dB";
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    const double w = i + 1 == points ? std::numbers::pi : f * std::numbers::pi;
    const double m = fir_response_magnitude(h, w);
    const double db = m > 0.0 ? 20.0 * std::log10(m) : floor_db;
    s.x.push_back(f);
    s.y.push_back(std::max(db, floor_db));
  }
  return s;
}

inline void emit_response_plot(std::span<const double> h,
                               const FilterSpec& spec,
                               const std::string& path,
                               const std::string& title) {
  const Series s = response_series(h);
  ChartStyle style{title, "normalized frequency (w / pi)", "magnitude (dB)",
                   false,
                   {spec.omega_p / std::numbers::pi,
                    spec.omega_s / std::numbers::pi}};
  write_text_file(path, render_line_chart(std::span<const Series>(&s, 1), style));
}

}  // namespace qdds

#endif  // QDDS_SVG_PLOT_HPP
