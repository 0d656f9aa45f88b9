// Copyright 2026 The feedsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "feedsim/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace feedsim {

namespace {

constexpr double kWidth = 640.0;
constexpr double kPanelHeight = 180.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 36.0;
constexpr double kPanelGap = 28.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
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

void panel(std::ostream& out, std::span<const TrajectoryPoint> points, int axis, double top,
           double t_max) {
  static constexpr const char* kNames[] = {"x", "y", "z"};
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c"};

  double lo = points.front().ee[axis];
  double hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.ee[axis]);
    hi = std::max(hi, p.ee[axis]);
  }
  // Pad flat or nearly flat series so they render mid-panel.
  const double pad = std::max(0.05 * (hi - lo), 0.5);
  lo -= pad;
  hi += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double sx = t_max > 0.0 ? plot_w / t_max : 0.0;
  const double sy = kPanelHeight / (hi - lo);
  auto px = [&](double t) { return kMarginLeft + t * sx; };
  auto py = [&](double v) { return top + kPanelHeight - (v - lo) * sy; };

  out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(kPanelHeight) << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"8\" y=\"" << num(top + kPanelHeight / 2) << "\" font-size=\"12\">"
      << kNames[axis] << " (in)</text>\n";
  out << "<text x=\"" << num(kMarginLeft - 4) << "\" y=\"" << num(top + 10)
      << "\" font-size=\"10\" text-anchor=\"end\">" << num(hi) << "</text>\n";
  out << "<text x=\"" << num(kMarginLeft - 4) << "\" y=\"" << num(top + kPanelHeight)
      << "\" font-size=\"10\" text-anchor=\"end\">" << num(lo) << "</text>\n";

  out << "<polyline fill=\"none\" stroke=\"" << kColors[axis] << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out << ' ';
    out << num(px(points[i].t)) << ',' << num(py(points[i].ee[axis]));
  }
  out << "\"/>\n";
}

}  // namespace

void write_displacement_svg(std::ostream& out, std::span<const TrajectoryPoint> points,
                            std::string_view title) {
  if (points.empty()) throw std::invalid_argument("nothing to plot");
  const double t_max = points.back().t;
  const double height = kMarginTop + 3 * kPanelHeight + 2 * kPanelGap + 40.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(height) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
      << escape(title) << "</text>\n";
  for (int axis = 0; axis < 3; ++axis) {
    panel(out, points, axis, kMarginTop + axis * (kPanelHeight + kPanelGap), t_max);
  }
  const double axis_y = kMarginTop + 3 * kPanelHeight + 2 * kPanelGap;
  out << "<text x=\"" << num(kMarginLeft) << "\" y=\"" << num(axis_y + 16)
      << "\" font-size=\"10\">0</text>\n";
  out << "<text x=\"" << num(kWidth - kMarginRight) << "\" y=\"" << num(axis_y + 16)
      << "\" font-size=\"10\" text-anchor=\"end\">" << num(t_max) << "</text>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(axis_y + 30)
      << "\" font-size=\"12\" text-anchor=\"middle\">time (s)</text>\n";
  out << "</svg>\n";
}

}  // namespace feedsim
