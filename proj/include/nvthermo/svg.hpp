// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file svg.hpp
 * @brief Minimal standalone SVG line/marker plots with linear axes.
 */

#pragma once

#include <string>
#include <vector>

namespace nvthermo {

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
    std::vector<double> yError;  // optional, same length as y
    bool line = true;
    bool markers = false;
    std::string color = "#1f77b4";
};

struct Plot {
    std::string title, xLabel, yLabel;
    std::vector<PlotSeries> series;
    int width = 640, height = 420;
};

/// Renders @p plot as an SVG document. Throws ValidationError on empty or
/// mismatched series and on non-finite data.
std::string render_svg(const Plot& plot);

void write_svg(const std::string& path, const Plot& plot);

std::string xml_escape(const std::string& text);

/// Tick positions on a 1-2-5 progression covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace nvthermo
