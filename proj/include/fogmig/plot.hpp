// Copyright 2026 The fogmig Authors
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

/// \file fogmig/plot.hpp
/// \brief Minimal SVG line charts for sweep results.

#ifndef FOGMIG_PLOT_HPP
#define FOGMIG_PLOT_HPP

#include <fogmig/core.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fogmig::plot {

struct Series
{
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Chart
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

namespace detail {

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace detail

/// Writes \p chart as a standalone SVG document. The y axis switches to a
/// log scale when positive values span more than two decades.
inline void write_svg(std::ostream& os, const Chart& chart)
{
    constexpr double width = 720;
    constexpr double height = 440;
    constexpr double left = 80;
    constexpr double right = 180;
    constexpr double top = 40;
    constexpr double bottom = 60;
    static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : chart.series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmin <= xmax)) {
        xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    }
    const bool log_y = ymin > 0 && ymax / ymin > 100;
    auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
    double y0 = log_y ? std::floor(ty(ymin)) : std::min(0.0, ymin);
    double y1 = log_y ? std::ceil(ty(ymax)) : ymax;
    if (y1 <= y0) {
        y1 = y0 + 1;
    }
    if (xmax <= xmin) {
        xmax = xmin + 1;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - (ty(y) - y0) / (y1 - y0) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::escape(chart.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double xv = xmin + (xmax - xmin) * i / ticks;
        os << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
           << detail::num(xv) << "</text>\n";
        const double yt = y0 + (y1 - y0) * i / ticks;
        const double yv = log_y ? std::pow(10.0, yt) : yt;
        const double yp = top + ph - static_cast<double>(i) / ticks * ph;
        os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << yp << "\" y2=\"" << yp
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\">" << detail::num(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
       << detail::escape(chart.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << detail::escape(chart.y_label) << (log_y ? " (log)" : "") << "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const char* color = palette[i % palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : s.points) {
            if (log_y && y <= 0) {
                continue;
            }
            os << px(x) << ',' << py(y) << ' ';
        }
        os << "\"/>\n";
        for (auto [x, y] : s.points) {
            if (log_y && y <= 0) {
                continue;
            }
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = top + 16 + 18.0 * static_cast<double>(i);
        os << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 32 << "\" y1=\"" << ly << "\" y2=\""
           << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4 << "\">" << detail::escape(s.name)
           << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace fogmig::plot

#endif // FOGMIG_PLOT_HPP
