// Copyright 2026 The uavbench Authors
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

#pragma once

// Grouped bar charts (one group per model, one bar per mode, a whisker of
// one standard deviation) written as plain SVG.

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "uavbench/core/text.hpp"
#include "uavbench/metrics/metrics.hpp"

namespace uavbench::cli {

namespace detail {

inline std::string num(double v) { return text::format_double(std::round(v * 100.0) / 100.0); }

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

inline constexpr const char* kModeColours[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2"};

}  // namespace detail

/// Chart of `metric` over every (model, mode) row present.  Models and modes
/// keep their first-seen order in `rows`.
inline void write_bar_chart_svg(std::ostream& os, std::span<const metrics::AggregateRow> rows, const std::string& metric) {
  std::vector<std::string> models, modes;
  std::map<std::pair<std::string, std::string>, const metrics::AggregateRow*> cell;
  for (const auto& r : rows) {
    if (r.metric != metric) continue;
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
    if (std::find(modes.begin(), modes.end(), r.mode) == modes.end()) modes.push_back(r.mode);
    cell[{r.model, r.mode}] = &r;
  }
  const double lo = metric == "mcc" ? -1.0 : 0.0, hi = 1.0;
  const double left = 60, top = 40, plot_h = 300, bar_w = 14, gap = 18;
  const double group_w = static_cast<double>(std::max<std::size_t>(modes.size(), 1)) * bar_w + gap;
  const double plot_w = std::max(200.0, static_cast<double>(models.size()) * group_w);
  const double width = left + plot_w + 20, height = top + plot_h + 130;
  auto y_of = [&](double v) { return top + plot_h * (hi - std::clamp(v, lo, hi)) / (hi - lo); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(width) << "\" height=\"" << detail::num(height)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << detail::num(left) << "\" y=\"20\" font-size=\"14\">" << detail::escape(metric)
     << " (mean and std over seeds)</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = y_of(v);
    os << "<line x1=\"" << detail::num(left) << "\" y1=\"" << detail::num(y) << "\" x2=\"" << detail::num(left + plot_w)
       << "\" y2=\"" << detail::num(y) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << detail::num(left - 6) << "\" y=\"" << detail::num(y + 4) << "\" text-anchor=\"end\">"
       << detail::num(v) << "</text>\n";
  }
  const double base = y_of(std::max(lo, 0.0));
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double gx = left + gap / 2 + static_cast<double>(i) * group_w;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const auto it = cell.find({models[i], modes[j]});
      if (it == cell.end() || std::isnan(it->second->mean)) continue;
      const auto& r = *it->second;
      const double x = gx + static_cast<double>(j) * bar_w;
      const double y = y_of(r.mean);
      os << "<rect class=\"bar\" x=\"" << detail::num(x) << "\" y=\"" << detail::num(std::min(y, base)) << "\" width=\""
         << detail::num(bar_w - 2) << "\" height=\"" << detail::num(std::abs(base - y)) << "\" fill=\""
         << detail::kModeColours[j % 5] << "\"><title>" << detail::escape(r.model + " / " + r.mode) << ": "
         << text::format_double(r.mean) << "</title></rect>\n";
      if (!std::isnan(r.std)) {
        const double cx = x + (bar_w - 2) / 2;
        os << "<line x1=\"" << detail::num(cx) << "\" y1=\"" << detail::num(y_of(r.mean + r.std)) << "\" x2=\""
           << detail::num(cx) << "\" y2=\"" << detail::num(y_of(r.mean - r.std)) << "\" stroke=\"black\"/>\n";
      }
    }
    const double lx = gx + static_cast<double>(modes.size()) * bar_w / 2;
    const double ly = top + plot_h + 10;
    os << "<text x=\"" << detail::num(lx) << "\" y=\"" << detail::num(ly) << "\" text-anchor=\"end\" transform=\"rotate(-45 "
       << detail::num(lx) << ' ' << detail::num(ly) << ")\">" << detail::escape(models[i]) << "</text>\n";
  }
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double x = left + static_cast<double>(j) * 80;
    const double y = height - 14;
    os << "<rect x=\"" << detail::num(x) << "\" y=\"" << detail::num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << detail::kModeColours[j % 5] << "\"/>\n";
    os << "<text x=\"" << detail::num(x + 14) << "\" y=\"" << detail::num(y) << "\">" << detail::escape(modes[j]) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace uavbench::cli
