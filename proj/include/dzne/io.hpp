// Copyright 2026 The dzne Authors.
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

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dzne/qsim.hpp"
#include "dzne/trajectory.hpp"

namespace dzne::io {

/// 17 significant digits, the trajectory file precision.
inline std::string fixed17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Shortest representation that parses back to the same double.
inline std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf, end};
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// CSV: header `step,x,y,z`, one row per trajectory point.

inline std::string trajectory_csv(const Trajectory& t) {
    std::string out = "step,x,y,z\n";
    for (std::size_t j = 0; j < t.size(); ++j) {
        out += std::to_string(j);
        for (int a = 0; a < 3; ++a) {
            out += ',';
            out += fixed17(t[j][a]);
        }
        out += '\n';
    }
    return out;
}

inline Trajectory parse_trajectory_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "step,x,y,z") throw std::runtime_error("bad trajectory header");
    Trajectory t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw std::runtime_error("bad trajectory row: " + line);
        if (std::stoul(cells[0]) != t.size()) throw std::runtime_error("trajectory steps out of order");
        t.push_back({std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])});
    }
    return t;
}

// SVG: orthographic x-z and y-z projections inside the Bloch disc.

struct SvgSeries {
    std::string label;
    Trajectory points;
};

inline std::string projections_svg(const std::vector<SvgSeries>& series) {
    constexpr double panel = 320.0, radius = 140.0, top = 30.0;
    static constexpr const char* palette[] = {"#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    const double legend = 18.0 * static_cast<double>(series.size());
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(2 * panel) + "\" height=\"" +
                    num(panel + top + legend) + "\">\n";
    const char* titles[2] = {"x-z", "y-z"};
    for (int p = 0; p < 2; ++p) {
        const double cx = panel * p + panel / 2, cy = top + panel / 2;
        s += "<text x=\"" + num(cx) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + titles[p] + "</text>\n";
        s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(radius) +
             "\" fill=\"none\" stroke=\"#999999\"/>\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" +
                 std::string(palette[i % std::size(palette)]) + "\" points=\"";
            for (const BlochVector& v : series[i].points) {
                const double h = p == 0 ? v.x : v.y;
                s += num(cx + radius * h) + "," + num(cy - radius * v.z) + " ";
            }
            s += "\"/>\n";
        }
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = top + panel + 14.0 + 18.0 * static_cast<double>(i);
        s += "<text x=\"10\" y=\"" + num(y) + "\" font-size=\"12\" fill=\"" +
             std::string(palette[i % std::size(palette)]) + "\">" + series[i].label + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace dzne::io
