// Copyright 2026 The alqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Self-contained SVG line charts with standard-deviation bands.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace alqc::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // half-width around y; may be empty
};

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

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % 10];
}

}  // namespace detail

/// Renders step curves (last value carried forward) in a fixed 800x500 frame.
inline std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                              const std::string& y_label, double y_min = 0.0, double y_max = 1.0) {
  const double W = 800, H = 500, left = 70, right = 200, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  double x_max = 1.0;
  for (const auto& s : series)
    for (double v : s.x) x_max = std::max(x_max, v);
  auto sx = [&](double v) { return left + pw * v / x_max; };
  auto sy = [&](double v) { return top + ph * (1.0 - (std::clamp(v, y_min, y_max) - y_min) / (y_max - y_min)); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  o += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" + escape(title) + "</text>\n";

  // Axes and ticks.
  o += "<g stroke=\"black\" stroke-width=\"1\">\n";
  o += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(top + ph) + "\" x2=\"" + detail::num(left + pw) +
       "\" y2=\"" + detail::num(top + ph) + "\"/>\n";
  o += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(top) + "\" x2=\"" + detail::num(left) + "\" y2=\"" +
       detail::num(top + ph) + "\"/>\n";
  o += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_max * i / 5.0, yv = y_min + (y_max - y_min) * i / 5.0;
    o += "<text x=\"" + detail::num(sx(xv)) + "\" y=\"" + detail::num(top + ph + 16) + "\" text-anchor=\"middle\">" +
         detail::tick_label(std::round(xv)) + "</text>\n";
    o += "<text x=\"" + detail::num(left - 6) + "\" y=\"" + detail::num(sy(yv) + 4) + "\" text-anchor=\"end\">" +
         detail::tick_label(std::round(yv * 100) / 100) + "</text>\n";
  }
  o += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"" + detail::num(H - 20) + "\" text-anchor=\"middle\">" +
       escape(x_label) + "</text>\n";
  o += "<text x=\"18\" y=\"" + detail::num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       detail::num(top + ph / 2) + ")\">" + escape(y_label) + "</text>\n";
  o += "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    if (s.x.empty()) continue;
    const char* color = detail::palette(k);
    // Step path: horizontal to the next x, then vertical.
    auto step_points = [&](auto value_at) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i > 0) pts += detail::num(sx(s.x[i])) + "," + detail::num(sy(value_at(i - 1))) + " ";
        pts += detail::num(sx(s.x[i])) + "," + detail::num(sy(value_at(i))) + " ";
      }
      return pts;
    };
    if (s.band.size() == s.y.size()) {
      std::string upper = step_points([&](std::size_t i) { return s.y[i] + s.band[i]; });
      std::string lower;
      for (std::size_t i = s.x.size(); i-- > 0;) {
        lower += detail::num(sx(s.x[i])) + "," + detail::num(sy(s.y[i] - s.band[i])) + " ";
        if (i > 0) lower += detail::num(sx(s.x[i])) + "," + detail::num(sy(s.y[i - 1] - s.band[i - 1])) + " ";
      }
      o += "<polygon points=\"" + upper + lower + "\" fill=\"" + color + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    o += "<polyline points=\"" + step_points([&](std::size_t i) { return s.y[i]; }) + "\" fill=\"none\" stroke=\"" +
         color + "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 14 + 16.0 * static_cast<double>(k);
    o += "<line x1=\"" + detail::num(W - right + 10) + "\" y1=\"" + detail::num(ly) + "\" x2=\"" +
         detail::num(W - right + 30) + "\" y2=\"" + detail::num(ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + detail::num(W - right + 35) + "\" y=\"" + detail::num(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace alqc::svg
